//! Direct numerical solution of the extremal problem
//!
//! ```text
//! maximize |P(u₀)|  over deg P ≤ n,  sup_{A_α} |P| ≤ 1,
//! ```
//!
//! (the leading coefficient when `u₀ = ∞`). The modulus constraint is
//! replaced by the supporting half-planes `Re(e^{iφ}P(e^{iθ})) ≤ 1` over a
//! θ-grid clustered at the arc endpoints and a uniform φ-grid. The dual of
//! that linear program has only `2(n+1)` rows, so it is solved by the
//! column-generating simplex in [`crate::lp`]. Each round then locates the
//! true maxima of `|P|` on the arc and adds exact tangent cuts there, and a
//! Newton step on the optimality system polishes the result once the
//! extremal set is resolved.
//!
//! Unknowns are coefficients in an arc-orthonormal basis ([`ArcBasis`]);
//! in monomials the constraint matrix is too ill-conditioned past `n ≈ 15`.
//!
//! Every round brackets the optimum: the LP value is an upper bound, and
//! `|P(u₀)| / sup|P|` for the LP polynomial is attained by a feasible one.

use std::sync::Arc;

use num_traits::Zero;

use crate::conformal::{ArcGeometry, Chart, ChartPoint};
use crate::error::{Error, Result};
use crate::lp::{Basic, ColumnSource, LpOptions, RevisedSimplex};
use crate::poly::{chebyshev_angles, ArcBasis, ArcPoly, ComplexPoly};
use crate::scalar::{cis, Cx, Real};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtremalProblem<T> {
    pub geom: ArcGeometry<T>,
    pub n: usize,
    pub u0: ChartPoint<T>,
    /// Number of θ-grid points `M`.
    pub arc_grid_size: usize,
    /// Number of supporting phases `K`.
    pub phase_grid_size: usize,
    /// Relative gap between the certified lower and upper bounds.
    pub tol: T,
    pub max_rounds: usize,
}

impl<T: Real> ExtremalProblem<T> {
    pub fn new(geom: ArcGeometry<T>, n: usize, u0: ChartPoint<T>) -> Self {
        Self {
            geom,
            n,
            u0,
            arc_grid_size: Self::default_grid(n),
            phase_grid_size: 64,
            tol: T::lit(1e-6),
            max_rounds: 8,
        }
    }

    pub fn default_grid(n: usize) -> usize {
        (8 * (n + 1)).max(64)
    }

    pub fn validate(&self) -> Result<()> {
        self.geom.check_u(&self.u0)?;
        if self.arc_grid_size < 8 * (self.n + 1) {
            return Err(Error::Domain(format!(
                "arc grid size {} below 8(n+1) = {}",
                self.arc_grid_size,
                8 * (self.n + 1)
            )));
        }
        if self.phase_grid_size < 32 {
            return Err(Error::Domain("phase grid size must be at least 32".into()));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::Domain("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalSolution<T> {
    /// Normalized extremal polynomial, `sup_{A_α}|P| = 1`, in monomials.
    pub poly: ComplexPoly<T>,
    /// The same polynomial in the arc basis; use this for evaluation.
    pub stable: ArcPoly<T>,
    /// `|P(u₀)|` (leading coefficient for `u₀ = ∞`), attained by `poly`.
    pub value: T,
    /// LP upper bound on the optimum.
    pub upper_bound: T,
    /// `sup |P|` on a validation grid ten times finer than the LP grid.
    pub norm_cert: T,
    /// Rotation `e^{iφ}` applied so that `b(u₀,∞)ⁿ·P(u₀) > 0`.
    pub phase: T,
    pub rounds: usize,
    pub converged: bool,
    /// Arc angles carrying the dual measure.
    pub support: Vec<T>,
}

/// Column handle: the half-plane `Re(e^{iφ}P(e^{iθ})) ≤ 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Cut<T> {
    theta: T,
    phi: T,
}

struct ArcColumns<T> {
    basis: Arc<ArcBasis<T>>,
    angles: Vec<T>,
    /// `q_k(e^{iθ_j})`, row-major by grid point.
    table: Vec<Cx<T>>,
    phases: usize,
    cuts: Vec<Cut<T>>,
}

impl<T: Real> ArcColumns<T> {
    fn new(basis: Arc<ArcBasis<T>>, angles: Vec<T>, phases: usize) -> Self {
        let width = basis.degree() + 1;
        let mut table = vec![Cx::<T>::zero(); angles.len() * width];
        for (j, &t) in angles.iter().enumerate() {
            basis.eval_all(cis(t), &mut table[j * width..(j + 1) * width]);
        }
        Self { basis, angles, table, phases, cuts: Vec::new() }
    }
}

fn coeffs_from_duals<T: Real>(pi: &[T]) -> Vec<Cx<T>> {
    pi.chunks_exact(2).map(|c| Cx::new(c[0], c[1])).collect()
}

impl<T: Real> ColumnSource<T> for ArcColumns<T> {
    type Col = Cut<T>;

    fn rows(&self) -> usize {
        2 * (self.basis.degree() + 1)
    }

    fn column(&self, col: Cut<T>, out: &mut [T]) {
        let width = self.basis.degree() + 1;
        let mut q = vec![Cx::<T>::zero(); width];
        self.basis.eval_all(cis(col.theta), &mut q);
        let rot = cis(col.phi);
        for k in 0..width {
            let v = rot * q[k];
            out[2 * k] = v.re;
            out[2 * k + 1] = -v.im;
        }
    }

    fn cost(&self, _col: Cut<T>) -> T {
        T::one()
    }

    fn price(&self, duals: &[T], cost_weight: T) -> Option<(Cut<T>, T)> {
        let coeffs = coeffs_from_duals(duals);
        let step = T::TAU() / T::from_usize_lossy(self.phases);
        let mut best: Option<(Cut<T>, T)> = None;
        let width = self.basis.degree() + 1;
        for (j, &theta) in self.angles.iter().enumerate() {
            let row = &self.table[j * width..(j + 1) * width];
            let v = row.iter().zip(&coeffs).fold(Cx::<T>::zero(), |s, (&a, &c)| s + a * c);
            let k = (-v.arg() / step).round();
            let phi = k * step;
            let val = (cis(phi) * v).re;
            if best.map_or(true, |(_, b)| val > b) {
                best = Some((Cut { theta, phi }, val));
            }
        }
        let p = ArcPoly::new(self.basis.clone(), coeffs);
        for &cut in &self.cuts {
            let val = (cis(cut.phi) * p.eval_angle(cut.theta)).re;
            if best.map_or(true, |(_, b)| val > b) {
                best = Some((cut, val));
            }
        }
        best.map(|(c, v)| (c, cost_weight - v))
    }
}

/// Refined local maxima of `|P(e^{iθ})|` on `[-α, α]`, with their values.
pub(crate) fn arc_maxima<T: Real>(p: &ArcPoly<T>, angles: &[T]) -> Vec<(T, T)> {
    let vals: Vec<T> = angles.iter().map(|&t| p.eval_angle(t).norm_sqr()).collect();
    let last = angles.len() - 1;
    let mut out = Vec::new();
    if vals[0] >= vals[1] {
        out.push((angles[0], vals[0].sqrt()));
    }
    for i in 1..last {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            let (t, v) = golden_max(|t| p.eval_angle(t).norm_sqr(), angles[i - 1], angles[i + 1]);
            let (t, v) = if v >= vals[i] { (t, v) } else { (angles[i], vals[i]) };
            out.push((t, v.sqrt()));
        }
    }
    if vals[last] >= vals[last - 1] {
        out.push((angles[last], vals[last].sqrt()));
    }
    out
}

pub(crate) fn golden_max<T: Real>(f: impl Fn(T) -> T, mut a: T, mut b: T) -> (T, T) {
    let r = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let tol = T::epsilon().sqrt() * (T::one() + a.abs().max(b.abs()));
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc > fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Fine grid used for sup evaluation: clustered points plus the LP grid.
fn fine_angles<T: Real>(alpha: T, m: usize) -> Vec<T> {
    let mut v = chebyshev_angles(alpha, 10 * m);
    v.extend(crate::poly::uniform_angles(alpha, 10 * m));
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    v.dedup();
    v
}

struct Target<T> {
    point: Option<Cx<T>>,
    /// Objective row `f` and the factor it was divided by.
    rhs: Vec<T>,
    scale: T,
}

impl<T: Real> Target<T> {
    fn new(basis: Arc<ArcBasis<T>>, point: Option<Cx<T>>) -> Self {
        let width = basis.degree() + 1;
        let mut q = vec![Cx::<T>::zero(); width];
        match point {
            None => q[width - 1] = basis.leading()[width - 1],
            Some(u) => basis.eval_all(u, &mut q),
        }
        let scale = q.iter().fold(T::zero(), |s, v| s.max(v.norm()));
        let mut rhs = vec![T::zero(); 2 * width];
        for k in 0..width {
            rhs[2 * k] = q[k].re / scale;
            rhs[2 * k + 1] = -q[k].im / scale;
        }
        Self { point, rhs, scale }
    }

    fn eval(&self, p: &ArcPoly<T>) -> Cx<T> {
        match self.point {
            None => p.leading(),
            Some(u) => p.eval(u),
        }
    }
}

pub fn solve_extremal<T: Real>(prob: &ExtremalProblem<T>) -> Result<ExtremalSolution<T>> {
    prob.validate()?;
    let n = prob.n;
    let alpha = prob.geom.alpha();
    let u0 = prob.u0.expect(Chart::U)?;
    let basis = Arc::new(ArcBasis::new(alpha, n, prob.arc_grid_size));
    let target = Target::new(basis.clone(), u0);
    let mut src = ArcColumns::new(
        basis.clone(),
        chebyshev_angles(alpha, prob.arc_grid_size),
        prob.phase_grid_size,
    );
    let fine = fine_angles(alpha, prob.arc_grid_size);
    let mut lp = RevisedSimplex::new(target.rhs.clone());
    let opts = LpOptions::default();

    let mut best: Option<(ArcPoly<T>, T)> = None;
    let mut upper = T::infinity();
    let mut support = Vec::new();
    let mut rounds = 0;
    let mut converged = false;
    while rounds <= prob.max_rounds {
        rounds += 1;
        let outcome = lp.solve(&src, &opts)?;
        upper = upper.min(outcome.objective * target.scale);
        let raw = ArcPoly::new(basis.clone(), coeffs_from_duals(&lp.duals(&src)));
        let maxima = arc_maxima(&raw, &fine);
        let sup = maxima.iter().fold(T::zero(), |s, &(_, v)| s.max(v));
        if !(sup > T::zero()) {
            return Err(Error::Lp("LP returned the zero polynomial".into()));
        }
        let p = raw.scale(Cx::new(T::one() / sup, T::zero()));
        let lower = target.eval(&p).norm();
        let weights: Vec<(T, T)> = lp
            .basis()
            .filter_map(|(b, y)| match b {
                Basic::Column(c) if y > T::zero() => Some((c.theta, y)),
                _ => None,
            })
            .collect();
        if best.as_ref().map_or(true, |(_, v)| lower > *v) {
            best = Some((p.clone(), lower));
            support = weights.iter().map(|w| w.0).collect();
        }
        let gap = |upper: T, best: &Option<(ArcPoly<T>, T)>| {
            let b = best.as_ref().map_or(T::zero(), |b| b.1);
            upper - b <= prob.tol * b
        };
        if gap(upper, &best) {
            converged = true;
            break;
        }
        if let Some(pol) = polish(&p, &weights, &maxima, &target, &fine) {
            upper = upper.min(pol.upper);
            if pol.lower > best.as_ref().map_or(T::zero(), |b| b.1) {
                best = Some((pol.poly, pol.lower));
                support = pol.support;
            }
            if gap(upper, &best) {
                converged = true;
                break;
            }
        }
        for &(theta, v) in &maxima {
            if v > T::one() {
                let phi = -raw.eval_angle(theta).arg();
                src.cuts.push(Cut { theta, phi });
            }
        }
    }
    let (stable, value) = best.expect("at least one round");

    // rotate so that b(u₀,∞)ⁿ·P(u₀) > 0 (leading coefficient > 0 at ∞)
    let at_target = target.eval(&stable);
    let weight = match u0 {
        None => Cx::new(T::one(), T::zero()),
        Some(u) => prob.geom.b_infinity(u).powi(n as i32),
    };
    let phase = -(weight * at_target).arg();
    let stable = stable.scale(cis(phase));
    let norm_cert = fine_angles(alpha, 10 * prob.arc_grid_size)
        .iter()
        .map(|&t| stable.eval_angle(t).norm())
        .fold(T::zero(), T::max);
    Ok(ExtremalSolution {
        poly: stable.to_monomial(),
        stable,
        value,
        upper_bound: upper.max(value),
        norm_cert,
        phase,
        rounds,
        converged,
        support,
    })
}

impl<T: Real> ExtremalSolution<T> {
    /// `P(u)` evaluated through the arc basis.
    pub fn eval(&self, u: Cx<T>) -> Cx<T> {
        self.stable.eval(u)
    }
}

struct Polished<T> {
    poly: ArcPoly<T>,
    lower: T,
    upper: T,
    support: Vec<T>,
}

/// Newton's method on the optimality system once the LP has located the
/// extremal set: `|P| = 1` and stationary at each support angle, and the
/// support weights reproduce the objective. Endpoint maxima keep their angle.
fn polish<T: Real>(
    p: &ArcPoly<T>,
    weights: &[(T, T)],
    maxima: &[(T, T)],
    target: &Target<T>,
    fine: &[T],
) -> Option<Polished<T>> {
    if maxima.is_empty() {
        return None;
    }
    let rhs = &target.rhs;
    let mut mass = vec![T::zero(); maxima.len()];
    for &(theta, y) in weights {
        let nearest = maxima
            .iter()
            .enumerate()
            .min_by(|a, b| {
                let da = (a.1 .0 - theta).abs();
                let db = (b.1 .0 - theta).abs();
                da.partial_cmp(&db).expect("finite angles")
            })
            .map(|(i, _)| i)?;
        mass[nearest] += y;
    }
    let lo = fine[0];
    let hi = fine[fine.len() - 1];
    let points: Vec<(T, T, bool)> = maxima
        .iter()
        .zip(&mass)
        .filter(|(_, &y)| y > T::zero())
        .map(|(&(t, _), &y)| (t, y, t == lo || t == hi))
        .collect();
    let basis = p.basis().clone();
    let nc = p.coeffs().len();
    let nfree = points.iter().filter(|q| !q.2).count();
    let dim = 2 * nc + nfree + points.len();
    let mut x = Vec::with_capacity(dim);
    for c in p.coeffs() {
        x.push(c.re);
        x.push(c.im);
    }
    x.extend(points.iter().filter(|q| !q.2).map(|q| q.0));
    x.extend(points.iter().map(|q| q.1));

    let angles_of = |x: &[T]| -> Vec<T> {
        let mut free_idx = 2 * nc;
        points
            .iter()
            .map(|q| {
                if q.2 {
                    q.0
                } else {
                    free_idx += 1;
                    x[free_idx - 1]
                }
            })
            .collect()
    };
    let poly_of = |x: &[T]| {
        ArcPoly::new(basis.clone(), x[..2 * nc].chunks_exact(2).map(|c| Cx::new(c[0], c[1])).collect())
    };
    // residual and Jacobian of the optimality system
    let system = |x: &[T], f: &mut [T], jac: &mut [T]| {
        let coeffs: Vec<Cx<T>> = x[..2 * nc].chunks_exact(2).map(|c| Cx::new(c[0], c[1])).collect();
        f.iter_mut().for_each(|v| *v = T::zero());
        jac.iter_mut().for_each(|v| *v = T::zero());
        f[..2 * nc].iter_mut().zip(rhs).for_each(|(o, &r)| *o = -r);
        let iu = Cx::new(T::zero(), T::one());
        let two = T::lit(2.0);
        let mut q = vec![Cx::<T>::zero(); nc];
        let mut dq = vec![Cx::<T>::zero(); nc];
        let mut ddq = vec![Cx::<T>::zero(); nc];
        let mut slope_row = 2 * nc + points.len();
        let mut theta_col = 2 * nc;
        for (i, (pt, theta)) in points.iter().zip(angles_of(x)).enumerate() {
            let y_col = 2 * nc + nfree + i;
            let y = x[y_col];
            let e = cis(theta);
            basis.eval_all_d2(e, &mut q, &mut dq, &mut ddq);
            let (mut v, mut d, mut dd) = (Cx::<T>::zero(), Cx::<T>::zero(), Cx::<T>::zero());
            for k in 0..nc {
                v = v + coeffs[k] * q[k];
                d = d + coeffs[k] * dq[k];
                dd = dd + coeffs[k] * ddq[k];
            }
            // dV/dθ and d²V/dθ²
            let g = iu * e * d;
            let dg = -(e * d) - e * e * dd;
            let row = 2 * nc + i;
            f[row] = v.norm_sqr() - T::one();
            for k in 0..nc {
                jac[row * dim + 2 * k] = two * (v.conj() * q[k]).re;
                jac[row * dim + 2 * k + 1] = two * (v.conj() * iu * q[k]).re;
            }
            if !pt.2 {
                jac[row * dim + theta_col] = two * (v.conj() * g).re;
                let srow = slope_row;
                f[srow] = (v.conj() * g).re;
                for k in 0..nc {
                    let dgk = iu * e * dq[k];
                    jac[srow * dim + 2 * k] = (q[k].conj() * g + v.conj() * dgk).re;
                    jac[srow * dim + 2 * k + 1] = ((iu * q[k]).conj() * g + v.conj() * iu * dgk).re;
                }
                jac[srow * dim + theta_col] = (g.conj() * g + v.conj() * dg).re;
                slope_row += 1;
            }
            for k in 0..nc {
                let a = v.conj() * q[k];
                f[2 * k] += y * a.re;
                f[2 * k + 1] -= y * a.im;
                jac[2 * k * dim + y_col] = a.re;
                jac[(2 * k + 1) * dim + y_col] = -a.im;
                for jj in 0..nc {
                    let da = q[jj].conj() * q[k] * y;
                    let db = -(iu * da);
                    jac[2 * k * dim + 2 * jj] += da.re;
                    jac[(2 * k + 1) * dim + 2 * jj] -= da.im;
                    jac[2 * k * dim + 2 * jj + 1] += db.re;
                    jac[(2 * k + 1) * dim + 2 * jj + 1] -= db.im;
                }
                if !pt.2 {
                    let dt = (g.conj() * q[k] + v.conj() * iu * e * dq[k]) * y;
                    jac[2 * k * dim + theta_col] += dt.re;
                    jac[(2 * k + 1) * dim + theta_col] -= dt.im;
                }
            }
            if !pt.2 {
                theta_col += 1;
            }
        }
    };

    let mut f = vec![T::zero(); dim];
    let mut jac = vec![T::zero(); dim * dim];
    let mut ok = false;
    for _ in 0..30 {
        system(&x, &mut f, &mut jac);
        let fnorm = f.iter().fold(T::zero(), |s, &v| s.max(v.abs()));
        if fnorm <= T::epsilon() * T::lit(100.0) {
            ok = true;
            break;
        }
        let lu = crate::linalg::Lu::new(&jac, dim).ok()?;
        let mut step: Vec<T> = f.iter().map(|&v| -v).collect();
        lu.solve(&mut step);
        x.iter_mut().zip(&step).for_each(|(a, &b)| *a += b);
        if !x.iter().all(|v| v.is_finite()) {
            return None;
        }
        let snorm = step.iter().fold(T::zero(), |s, &v| s.max(v.abs()));
        let xnorm = x.iter().fold(T::one(), |s, &v| s.max(v.abs()));
        if snorm <= T::epsilon() * T::lit(100.0) * xnorm {
            system(&x, &mut f, &mut jac);
            ok = f.iter().fold(T::zero(), |s, &v| s.max(v.abs())) <= T::epsilon().sqrt();
            break;
        }
    }
    if !ok {
        return None;
    }
    let ys = &x[2 * nc + nfree..];
    if ys.iter().any(|&y| !(y > T::zero())) {
        return None;
    }
    let angles = angles_of(&x);
    if angles.iter().any(|&t| t < lo || t > hi) {
        return None;
    }
    let raw = poly_of(&x);
    let sup = arc_maxima(&raw, fine).iter().fold(T::zero(), |s, &(_, v)| s.max(v));
    let poly = raw.scale(Cx::new(T::one() / sup, T::zero()));
    let lower = target.eval(&poly).norm();

    // dual bound from the support with exactly normalized columns
    let mut resid: Vec<T> = rhs.iter().map(|&v| -v).collect();
    let mut q = vec![Cx::<T>::zero(); nc];
    for (&theta, &y) in angles.iter().zip(ys) {
        basis.eval_all(cis(theta), &mut q);
        let val = q.iter().zip(poly.coeffs()).fold(Cx::<T>::zero(), |s, (&a, &c)| s + a * c);
        let w = val.conj() / val.norm();
        for k in 0..nc {
            let a = w * q[k];
            resid[2 * k] += y * a.re;
            resid[2 * k + 1] -= y * a.im;
        }
    }
    // feasible polynomials have |d_k| ≤ 1 in the orthonormal basis
    let slack = resid.iter().fold(T::zero(), |s, &v| s + v.abs());
    let upper = (ys.iter().fold(T::zero(), |s, &y| s + y) + slack) * target.scale;
    if upper < lower * (T::one() - T::epsilon().sqrt()) {
        return None;
    }
    Some(Polished { poly, lower, upper: upper.max(lower), support: angles })
}

/// `P*(u) = uⁿ·conj(P(1/ū))`.
pub fn star<T: Real>(p: &ComplexPoly<T>, n: usize) -> ComplexPoly<T> {
    p.star(n)
}

/// `‖T_n‖_{A_α} = 1/L_n(0)`.
pub fn chebyshev_norm<T: Real>(n: usize, geom: &ArcGeometry<T>) -> Result<T> {
    if n == 0 {
        return Err(Error::Domain("chebyshev_norm needs n >= 1".into()));
    }
    let prob = ExtremalProblem::new(*geom, n, ChartPoint::u(Cx::zero()));
    Ok(T::one() / solve_extremal(&prob)?.value)
}

/// `L_n(u) = sup{|P(u)| : deg P ≤ n, ‖P‖_{A_α} ≤ 1}`.
pub fn envelope_at<T: Real>(u: &ChartPoint<T>, n: usize, geom: &ArcGeometry<T>) -> Result<T> {
    Ok(solve_extremal(&ExtremalProblem::new(*geom, n, *u))?.value)
}

/// Number of separated groups of arc points where `|P| > 1 - slack`.
pub fn near_extremal_clusters<T: Real>(sol: &ExtremalSolution<T>, alpha: T, slack: T, m: usize) -> usize {
    let angles = fine_angles(alpha, m);
    let mut clusters = 0;
    let mut inside = false;
    for &t in &angles {
        let hit = sol.stable.eval_angle(t).norm() > T::one() - slack;
        if hit && !inside {
            clusters += 1;
        }
        inside = hit;
    }
    clusters
}
