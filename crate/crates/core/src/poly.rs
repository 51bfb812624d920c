//! Polynomials with complex coefficients and arc grids.

use std::sync::Arc;

use num_traits::Zero;

use crate::scalar::{cis, Cx, Real};

/// `Σ c_k u^k`, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoly<T> {
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> ComplexPoly<T> {
    pub fn new(coeffs: Vec<Cx<T>>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Self { coeffs }
    }

    pub fn constant(c: Cx<T>) -> Self {
        Self::new(vec![c])
    }

    /// `u^n`.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![Cx::<T>::zero(); n + 1];
        coeffs[n] = Cx::new(T::one(), T::zero());
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    /// Number of stored coefficients minus one (an upper bound on the degree).
    pub fn len_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Cx<T> {
        self.coeffs[self.coeffs.len() - 1]
    }

    #[inline]
    pub fn eval(&self, u: Cx<T>) -> Cx<T> {
        self.coeffs.iter().rev().fold(Cx::<T>::zero(), |acc, &c| acc * u + c)
    }

    /// Value at `e^{iθ}`.
    pub fn eval_angle(&self, theta: T) -> Cx<T> {
        self.eval(cis(theta))
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `P*(u) = uⁿ·conj(P(1/ū))` for `n ≥` the stored degree.
    pub fn star(&self, n: usize) -> Self {
        assert!(n >= self.len_degree(), "star degree below the stored degree");
        let mut out = vec![Cx::<T>::zero(); n + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[n - k] = c.conj();
        }
        Self::new(out)
    }

    /// Maximum of `|P|` over the points `e^{iθ}` of a grid.
    pub fn sup_on_angles(&self, angles: &[T]) -> T {
        angles
            .iter()
            .map(|&t| self.eval_angle(t).norm())
            .fold(T::zero(), T::max)
    }

    /// Least-squares degree-`n` fit from equispaced samples `f(r·e^{2πij/N})`,
    /// `N > n`. On such a grid the normal equations are diagonal.
    pub fn fit_on_circle(samples: &[Cx<T>], radius: T, n: usize) -> Self {
        let big_n = samples.len();
        assert!(big_n > n, "need more samples than coefficients");
        let nn = T::from_usize_lossy(big_n);
        let mut coeffs = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = Cx::<T>::zero();
            for (j, &s) in samples.iter().enumerate() {
                let angle = -T::TAU() * T::from_usize_lossy((j * k) % big_n) / nn;
                acc = acc + s * cis(angle);
            }
            coeffs.push(acc / (nn * radius.powi(k as i32)));
        }
        Self::new(coeffs)
    }
}

/// Polynomial basis `q_0, …, q_n` orthonormal for the discrete inner
/// product on an arc grid, generated by the Arnoldi recurrence
/// `h_{k+1,k} q_{k+1}(u) = u·q_k(u) - Σ_{j≤k} h_{j,k} q_j(u)`.
///
/// Monomials restricted to an arc are nearly dependent; coefficients in this
/// basis stay of order one for polynomials bounded on the arc.
#[derive(Clone, Debug, PartialEq)]
pub struct ArcBasis<T> {
    n: usize,
    /// Hessenberg entries, column `k` holds `h_{0..=k+1, k}`.
    h: Vec<Vec<Cx<T>>>,
}

impl<T: Real> ArcBasis<T> {
    /// Orthonormalizes on `samples` arc points clustered at the endpoints.
    pub fn new(alpha: T, n: usize, samples: usize) -> Self {
        let angles = chebyshev_angles(alpha, samples.max(2 * (n + 1)));
        let pts: Vec<Cx<T>> = angles.iter().map(|&t| cis(t)).collect();
        let big_n = pts.len();
        let nn = T::from_usize_lossy(big_n);
        let mut q: Vec<Vec<Cx<T>>> = vec![vec![Cx::new(T::one(), T::zero()); big_n]];
        let mut h = Vec::with_capacity(n);
        for k in 0..n {
            let mut v: Vec<Cx<T>> = pts.iter().zip(&q[k]).map(|(&z, &x)| z * x).collect();
            let mut col = vec![Cx::<T>::zero(); k + 2];
            for _ in 0..2 {
                for j in 0..=k {
                    let dot = q[j]
                        .iter()
                        .zip(&v)
                        .fold(Cx::<T>::zero(), |s, (a, &b)| s + a.conj() * b)
                        / nn;
                    col[j] = col[j] + dot;
                    for (vi, &qi) in v.iter_mut().zip(&q[j]) {
                        *vi = *vi - dot * qi;
                    }
                }
            }
            let norm = (v.iter().fold(T::zero(), |s, x| s + x.norm_sqr()) / nn).sqrt();
            col[k + 1] = Cx::new(norm, T::zero());
            q.push(v.into_iter().map(|x| x / norm).collect());
            h.push(col);
        }
        Self { n, h }
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// `q_0(u), …, q_n(u)`.
    pub fn eval_all(&self, u: Cx<T>, out: &mut [Cx<T>]) {
        out[0] = Cx::new(T::one(), T::zero());
        for k in 0..self.n {
            let col = &self.h[k];
            let mut v = u * out[k];
            for j in 0..=k {
                v = v - col[j] * out[j];
            }
            out[k + 1] = v / col[k + 1];
        }
    }

    /// Basis values and their derivatives.
    pub fn eval_all_with_derivative(&self, u: Cx<T>, out: &mut [Cx<T>], dout: &mut [Cx<T>]) {
        out[0] = Cx::new(T::one(), T::zero());
        dout[0] = Cx::<T>::zero();
        for k in 0..self.n {
            let col = &self.h[k];
            let mut v = u * out[k];
            let mut dv = out[k] + u * dout[k];
            for j in 0..=k {
                v = v - col[j] * out[j];
                dv = dv - col[j] * dout[j];
            }
            out[k + 1] = v / col[k + 1];
            dout[k + 1] = dv / col[k + 1];
        }
    }

    /// Basis values with first and second derivatives.
    pub fn eval_all_d2(&self, u: Cx<T>, out: &mut [Cx<T>], d1: &mut [Cx<T>], d2: &mut [Cx<T>]) {
        let two = T::lit(2.0);
        out[0] = Cx::new(T::one(), T::zero());
        d1[0] = Cx::<T>::zero();
        d2[0] = Cx::<T>::zero();
        for k in 0..self.n {
            let col = &self.h[k];
            let mut v = u * out[k];
            let mut dv = out[k] + u * d1[k];
            let mut ddv = d1[k] * two + u * d2[k];
            for j in 0..=k {
                v = v - col[j] * out[j];
                dv = dv - col[j] * d1[j];
                ddv = ddv - col[j] * d2[j];
            }
            out[k + 1] = v / col[k + 1];
            d1[k + 1] = dv / col[k + 1];
            d2[k + 1] = ddv / col[k + 1];
        }
    }

    /// `Σ d_k q_k(u)`.
    pub fn eval(&self, d: &[Cx<T>], u: Cx<T>) -> Cx<T> {
        let mut q = vec![Cx::<T>::zero(); self.n + 1];
        self.eval_all(u, &mut q);
        q.iter().zip(d).fold(Cx::<T>::zero(), |s, (&a, &b)| s + a * b)
    }

    /// Leading monomial coefficient of each `q_k`.
    pub fn leading(&self) -> Vec<Cx<T>> {
        let mut out = vec![Cx::new(T::one(), T::zero())];
        for k in 0..self.n {
            let prev = out[k];
            out.push(prev / self.h[k][k + 1]);
        }
        out
    }

    /// Monomial coefficients of `Σ d_k q_k`. Exact in exact arithmetic; the
    /// conversion itself is ill-conditioned for large `n`.
    pub fn to_monomial(&self, d: &[Cx<T>]) -> ComplexPoly<T> {
        let n = self.n;
        let mut qs: Vec<Vec<Cx<T>>> = vec![vec![Cx::new(T::one(), T::zero())]];
        for k in 0..n {
            let col = &self.h[k];
            let mut next = vec![Cx::<T>::zero(); k + 2];
            for (i, &c) in qs[k].iter().enumerate() {
                next[i + 1] = next[i + 1] + c;
            }
            for j in 0..=k {
                for (i, &c) in qs[j].iter().enumerate() {
                    next[i] = next[i] - col[j] * c;
                }
            }
            let scale = col[k + 1];
            qs.push(next.into_iter().map(|c| c / scale).collect());
        }
        let mut out = vec![Cx::<T>::zero(); n + 1];
        for (q, &dk) in qs.iter().zip(d) {
            for (o, &c) in out.iter_mut().zip(q) {
                *o = *o + dk * c;
            }
        }
        ComplexPoly::new(out)
    }
}

/// Polynomial stored by its coefficients in an [`ArcBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct ArcPoly<T> {
    basis: Arc<ArcBasis<T>>,
    coeffs: Vec<Cx<T>>,
}

impl<T: Real> ArcPoly<T> {
    pub fn new(basis: Arc<ArcBasis<T>>, coeffs: Vec<Cx<T>>) -> Self {
        assert_eq!(coeffs.len(), basis.degree() + 1, "coefficient count");
        Self { basis, coeffs }
    }

    pub fn basis(&self) -> &Arc<ArcBasis<T>> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Cx<T>] {
        &self.coeffs
    }

    pub fn eval(&self, u: Cx<T>) -> Cx<T> {
        self.basis.eval(&self.coeffs, u)
    }

    pub fn eval_angle(&self, theta: T) -> Cx<T> {
        self.eval(cis(theta))
    }

    pub fn eval_with_derivative(&self, u: Cx<T>) -> (Cx<T>, Cx<T>) {
        let len = self.coeffs.len();
        let mut q = vec![Cx::<T>::zero(); len];
        let mut dq = vec![Cx::<T>::zero(); len];
        self.basis.eval_all_with_derivative(u, &mut q, &mut dq);
        let mut val = Cx::<T>::zero();
        let mut der = Cx::<T>::zero();
        for k in 0..len {
            val = val + self.coeffs[k] * q[k];
            der = der + self.coeffs[k] * dq[k];
        }
        (val, der)
    }

    pub fn leading(&self) -> Cx<T> {
        let lead = self.basis.leading();
        self.coeffs[self.coeffs.len() - 1] * lead[lead.len() - 1]
    }

    pub fn scale(&self, s: Cx<T>) -> Self {
        Self { basis: self.basis.clone(), coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn to_monomial(&self) -> ComplexPoly<T> {
        self.basis.to_monomial(&self.coeffs)
    }
}

/// Angles `α·cos((2j-1)π/(2m))`, `j = 1..m`, plus the endpoints `±α`.
/// The points cluster at the arc endpoints.
pub fn chebyshev_angles<T: Real>(alpha: T, m: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(m + 2);
    out.push(-alpha);
    let mm = T::from_usize_lossy(2 * m);
    for j in (1..=m).rev() {
        let t = T::from_usize_lossy(2 * j - 1) * T::PI() / mm;
        out.push(alpha * t.cos());
    }
    out.push(alpha);
    out
}

/// `m + 1` equispaced angles on `[-α, α]`.
pub fn uniform_angles<T: Real>(alpha: T, m: usize) -> Vec<T> {
    let mm = T::from_usize_lossy(m);
    (0..=m)
        .map(|j| -alpha + T::lit(2.0) * alpha * T::from_usize_lossy(j) / mm)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn horner() {
        let p = ComplexPoly::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(-1.0, 1.0)]);
        let u = c(0.3, -0.7);
        let direct = c(1.0, 0.0) + c(0.0, 2.0) * u + c(-1.0, 1.0) * u * u;
        assert!((p.eval(u) - direct).norm() < 1e-15);
    }

    #[test]
    fn star_of_one_is_u() {
        let p = ComplexPoly::constant(c(1.0, 0.0));
        assert_eq!(p.star(1).coeffs(), &[c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn star_matches_definition() {
        let p = ComplexPoly::new(vec![c(1.0, 0.5), c(-0.2, 2.0), c(0.7, -1.1)]);
        let s = p.star(4);
        let u = c(0.4, 1.3);
        let direct = u.powu(4) * p.eval(c(1.0, 0.0) / u.conj()).conj();
        assert!((s.eval(u) - direct).norm() < 1e-12);
    }

    #[test]
    fn fit_recovers_polynomial() {
        let p = ComplexPoly::new(vec![c(1.0, 0.5), c(-0.2, 2.0), c(0.7, -1.1), c(0.0, 0.3)]);
        let r = 3.0;
        let samples: Vec<_> = (0..16)
            .map(|j| p.eval(cis(std::f64::consts::TAU * j as f64 / 16.0) * r))
            .collect();
        let q = ComplexPoly::fit_on_circle(&samples, r, 3);
        for (a, b) in p.coeffs().iter().zip(q.coeffs()) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn arc_basis_is_orthonormal_and_converts() {
        let alpha = 1.2;
        let n = 12;
        let basis = ArcBasis::new(alpha, n, 200);
        let angles = chebyshev_angles(alpha, 200);
        let mut q = vec![c(0.0, 0.0); n + 1];
        let mut gram = vec![c(0.0, 0.0); (n + 1) * (n + 1)];
        for &t in &angles {
            basis.eval_all(cis(t), &mut q);
            for i in 0..=n {
                for j in 0..=n {
                    gram[i * (n + 1) + j] += q[i].conj() * q[j] / angles.len() as f64;
                }
            }
        }
        for i in 0..=n {
            for j in 0..=n {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * (n + 1) + j] - expect).norm() < 1e-12);
            }
        }
        let d: Vec<_> = (0..=n).map(|k| c(1.0 / (k + 1) as f64, 0.3 * k as f64)).collect();
        let mono = basis.to_monomial(&d);
        let u = c(0.4, -0.9);
        assert!((mono.eval(u) - basis.eval(&d, u)).norm() < 1e-9 * basis.eval(&d, u).norm());
        let lead = basis.leading();
        assert!((mono.leading() - d[n] * lead[n]).norm() < 1e-9 * mono.leading().norm());
        let mut dq = vec![c(0.0, 0.0); n + 1];
        let h = 1e-6;
        let mut qp = vec![c(0.0, 0.0); n + 1];
        let mut qm = vec![c(0.0, 0.0); n + 1];
        basis.eval_all_with_derivative(u, &mut q, &mut dq);
        basis.eval_all(u + h, &mut qp);
        basis.eval_all(u - h, &mut qm);
        for k in 0..=n {
            let fd = (qp[k] - qm[k]) / (2.0 * h);
            assert!((fd - dq[k]).norm() < 1e-5 * (1.0 + dq[k].norm()));
        }
    }

    #[test]
    fn grids() {
        let g = chebyshev_angles(1.0f64, 8);
        assert_eq!(g.len(), 10);
        assert_eq!(g[0], -1.0);
        assert_eq!(g[9], 1.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let u = uniform_angles(1.0f64, 4);
        assert_eq!(u, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }
}
