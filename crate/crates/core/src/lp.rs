//! Revised simplex for `min Σ c_j y_j  s.t.  A y = f, y ≥ 0` with implicitly
//! generated columns.
//!
//! Columns are never stored: a [`ColumnSource`] prices them against the
//! current duals and materializes the ones that enter the basis. The basis
//! inverse is kept explicitly (the row count is small) and rebuilt from an
//! LU factorization at a fixed cadence.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::scalar::Real;

pub trait ColumnSource<T: Real> {
    /// Self-describing column handle; must stay valid across calls.
    type Col: Copy + Debug;

    fn rows(&self) -> usize;

    fn column(&self, col: Self::Col, out: &mut [T]);

    fn cost(&self, col: Self::Col) -> T;

    /// Column minimizing `cost_weight·c_j - π·a_j`, with that reduced cost.
    fn price(&self, duals: &[T], cost_weight: T) -> Option<(Self::Col, T)>;
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basic<C> {
    /// Artificial column `sign·e_row`.
    Artificial { row: usize, positive: bool },
    Column(C),
}

#[derive(Clone, Copy, Debug)]
pub struct LpOptions<T> {
    pub max_iterations: usize,
    /// Reduced-cost threshold for optimality (costs are of order one).
    pub optimality_tol: T,
    pub pivot_tol: T,
    /// Harris ratio-test slack and phase-one infeasibility threshold.
    pub feasibility_tol: T,
    pub refactor_every: usize,
}

impl<T: Real> Default for LpOptions<T> {
    fn default() -> Self {
        Self {
            max_iterations: 20_000,
            optimality_tol: T::epsilon() * T::lit(1e3),
            pivot_tol: T::epsilon() * T::lit(1e5),
            feasibility_tol: T::epsilon() * T::lit(1e5),
            refactor_every: 64,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LpOutcome<T> {
    pub objective: T,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct RevisedSimplex<T, C> {
    m: usize,
    rhs: Vec<T>,
    basis: Vec<Basic<C>>,
    binv: Vec<T>,
    x: Vec<T>,
    phase_two: bool,
    since_refactor: usize,
    iterations: usize,
}

impl<T: Real, C: Copy + Debug> RevisedSimplex<T, C> {
    /// Starts from the all-artificial basis.
    pub fn new(rhs: Vec<T>) -> Self {
        let m = rhs.len();
        let mut binv = vec![T::zero(); m * m];
        let mut basis = Vec::with_capacity(m);
        let mut x = Vec::with_capacity(m);
        for (i, &b) in rhs.iter().enumerate() {
            let positive = b >= T::zero();
            basis.push(Basic::Artificial { row: i, positive });
            binv[i * m + i] = if positive { T::one() } else { -T::one() };
            x.push(b.abs());
        }
        Self { m, rhs, basis, binv, x, phase_two: false, since_refactor: 0, iterations: 0 }
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Basic variables and their values.
    pub fn basis(&self) -> impl Iterator<Item = (Basic<C>, T)> + '_ {
        self.basis.iter().copied().zip(self.x.iter().copied())
    }

    fn basic_cost<S: ColumnSource<T, Col = C>>(&self, src: &S, b: &Basic<C>) -> T {
        match (b, self.phase_two) {
            (Basic::Artificial { .. }, false) => T::one(),
            (Basic::Artificial { .. }, true) => T::zero(),
            (Basic::Column(_), false) => T::zero(),
            (Basic::Column(c), true) => src.cost(*c),
        }
    }

    fn duals_for<S: ColumnSource<T, Col = C>>(&self, src: &S) -> Vec<T> {
        let m = self.m;
        let mut pi = vec![T::zero(); m];
        for (i, b) in self.basis.iter().enumerate() {
            let c = self.basic_cost(src, b);
            if c != T::zero() {
                let row = &self.binv[i * m..(i + 1) * m];
                for (p, &r) in pi.iter_mut().zip(row) {
                    *p += c * r;
                }
            }
        }
        pi
    }

    /// Dual vector `π = c_Bᵀ B⁻¹` of the phase-two problem.
    pub fn duals<S: ColumnSource<T, Col = C>>(&self, src: &S) -> Vec<T> {
        assert!(self.phase_two, "duals requested before phase two");
        self.duals_for(src)
    }

    fn objective<S: ColumnSource<T, Col = C>>(&self, src: &S) -> T {
        self.basis
            .iter()
            .zip(&self.x)
            .fold(T::zero(), |s, (b, &v)| s + self.basic_cost(src, b) * v)
    }

    fn refactor<S: ColumnSource<T, Col = C>>(&mut self, src: &S) -> Result<()> {
        let m = self.m;
        let mut bmat = vec![T::zero(); m * m];
        let mut col = vec![T::zero(); m];
        for (j, b) in self.basis.iter().enumerate() {
            match *b {
                Basic::Artificial { row, positive } => {
                    bmat[row * m + j] = if positive { T::one() } else { -T::one() };
                }
                Basic::Column(c) => {
                    src.column(c, &mut col);
                    for i in 0..m {
                        bmat[i * m + j] = col[i];
                    }
                }
            }
        }
        let lu = Lu::new(&bmat, m)?;
        self.binv = lu.inverse();
        let mut x = self.rhs.clone();
        lu.solve(&mut x);
        let tol = T::lit(10.0) * T::epsilon() * self.rhs.iter().fold(T::one(), |a, &b| a.max(b.abs()));
        for v in x.iter_mut() {
            if *v < T::zero() && *v > -tol {
                *v = T::zero();
            }
        }
        self.x = x;
        self.since_refactor = 0;
        Ok(())
    }

    /// Runs phase one (if needed) and phase two to optimality. May be called
    /// again after the source has gained columns; the basis is reused.
    pub fn solve<S: ColumnSource<T, Col = C>>(
        &mut self,
        src: &S,
        opts: &LpOptions<T>,
    ) -> Result<LpOutcome<T>> {
        assert_eq!(src.rows(), self.m, "row count mismatch");
        let start = self.iterations;
        if !self.phase_two {
            self.run_phase(src, opts, start)?;
            let infeasibility = self.objective(src);
            let scale = self.rhs.iter().fold(T::one(), |a, &b| a.max(b.abs()));
            if infeasibility > opts.feasibility_tol * scale * T::lit(100.0) {
                return Err(Error::Lp(format!(
                    "infeasible (phase-one objective {infeasibility:e})"
                )));
            }
            self.phase_two = true;
        }
        self.run_phase(src, opts, start)?;
        // report the objective of a freshly factored basis, not the updated one
        self.refactor(src)?;
        Ok(LpOutcome { objective: self.objective(src), iterations: self.iterations - start })
    }

    fn run_phase<S: ColumnSource<T, Col = C>>(
        &mut self,
        src: &S,
        opts: &LpOptions<T>,
        start: usize,
    ) -> Result<()> {
        let m = self.m;
        let weight = if self.phase_two { T::one() } else { T::zero() };
        let mut a = vec![T::zero(); m];
        let mut d = vec![T::zero(); m];
        loop {
            if self.iterations - start >= opts.max_iterations {
                return Err(Error::NoConvergence(format!(
                    "simplex iteration limit {} reached",
                    opts.max_iterations
                )));
            }
            if self.since_refactor >= opts.refactor_every {
                self.refactor(src)?;
            }
            let pi = self.duals_for(src);
            let Some((col, reduced)) = src.price(&pi, weight) else {
                return Ok(());
            };
            if reduced >= -opts.optimality_tol {
                return Ok(());
            }
            // basic columns price to zero in exact arithmetic; their residual
            // measures how far the duals can be trusted
            if reduced >= -opts.optimality_tol.sqrt() {
                let noise = self.basic_noise(src, &pi, weight, &mut a);
                if reduced >= -T::lit(10.0) * noise {
                    return Ok(());
                }
            }
            src.column(col, &mut a);
            for i in 0..m {
                let row = &self.binv[i * m..(i + 1) * m];
                d[i] = row.iter().zip(&a).fold(T::zero(), |s, (&r, &v)| s + r * v);
            }
            let leave = self.ratio_test(&d, opts)?;
            self.pivot(leave, &d, Basic::Column(col));
            self.iterations += 1;
        }
    }

    fn basic_noise<S: ColumnSource<T, Col = C>>(
        &self,
        src: &S,
        pi: &[T],
        weight: T,
        buf: &mut [T],
    ) -> T {
        let mut noise = T::zero();
        for b in &self.basis {
            if let Basic::Column(c) = *b {
                src.column(c, buf);
                let dot = buf.iter().zip(pi).fold(T::zero(), |s, (&x, &p)| s + x * p);
                noise = noise.max((weight * src.cost(c) - dot).abs());
            }
        }
        noise
    }

    fn ratio_test(&self, d: &[T], opts: &LpOptions<T>) -> Result<usize> {
        let dmax = d.iter().fold(T::zero(), |s, &v| s.max(v.abs()));
        let piv = opts.pivot_tol * dmax.max(T::one());
        if self.phase_two {
            // basic artificials sit at zero and must leave before they can grow
            let mut best: Option<(usize, T)> = None;
            for (i, b) in self.basis.iter().enumerate() {
                if matches!(b, Basic::Artificial { .. }) && d[i].abs() > piv {
                    if best.map_or(true, |(_, v)| d[i].abs() > v) {
                        best = Some((i, d[i].abs()));
                    }
                }
            }
            if let Some((i, _)) = best {
                return Ok(i);
            }
        }
        let mut bound = T::infinity();
        for i in 0..self.m {
            if d[i] > piv {
                let r = (self.x[i] + opts.feasibility_tol) / d[i];
                if r < bound {
                    bound = r;
                }
            }
        }
        if !bound.is_finite() {
            return Err(Error::Lp("unbounded direction".into()));
        }
        let mut choice = None;
        let mut best = T::zero();
        for i in 0..self.m {
            if d[i] > piv && self.x[i] / d[i] <= bound && d[i] > best {
                best = d[i];
                choice = Some(i);
            }
        }
        choice.ok_or_else(|| Error::Lp("ratio test found no pivot".into()))
    }

    fn pivot(&mut self, r: usize, d: &[T], entering: Basic<C>) {
        let m = self.m;
        let step = (self.x[r] / d[r]).max(T::zero());
        for i in 0..m {
            if i != r {
                self.x[i] -= step * d[i];
                if self.x[i] < T::zero() {
                    self.x[i] = T::zero();
                }
            }
        }
        self.x[r] = step;
        let inv = T::one() / d[r];
        for j in 0..m {
            self.binv[r * m + j] *= inv;
        }
        let (before, rest) = self.binv.split_at_mut(r * m);
        let (pivot_row, after) = rest.split_at_mut(m);
        for (i, row) in before.chunks_exact_mut(m).enumerate() {
            let f = d[i];
            if f != T::zero() {
                for (x, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= f * p;
                }
            }
        }
        for (k, row) in after.chunks_exact_mut(m).enumerate() {
            let f = d[r + 1 + k];
            if f != T::zero() {
                for (x, &p) in row.iter_mut().zip(pivot_row.iter()) {
                    *x -= f * p;
                }
            }
        }
        self.basis[r] = entering;
        self.since_refactor += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Explicit column list.
    struct Dense {
        rows: usize,
        cols: Vec<(Vec<f64>, f64)>,
    }

    impl ColumnSource<f64> for Dense {
        type Col = usize;
        fn rows(&self) -> usize {
            self.rows
        }
        fn column(&self, col: usize, out: &mut [f64]) {
            out.copy_from_slice(&self.cols[col].0);
        }
        fn cost(&self, col: usize) -> f64 {
            self.cols[col].1
        }
        fn price(&self, duals: &[f64], w: f64) -> Option<(usize, f64)> {
            self.cols
                .iter()
                .enumerate()
                .map(|(j, (a, c))| (j, w * c - a.iter().zip(duals).map(|(x, y)| x * y).sum::<f64>()))
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        }
    }

    #[test]
    fn small_transport_like_problem() {
        // min y0 + 2y1 + 3y2 + y3, y0 + y1 + y2 = 2, y1 - y3 = -1 ... with y ≥ 0
        let src = Dense {
            rows: 2,
            cols: vec![
                (vec![1.0, 0.0], 1.0),
                (vec![1.0, 1.0], 2.0),
                (vec![1.0, 0.0], 3.0),
                (vec![0.0, -1.0], 1.0),
            ],
        };
        let mut lp = RevisedSimplex::new(vec![2.0, -1.0]);
        let out = lp.solve(&src, &LpOptions::default()).unwrap();
        assert!((out.objective - 3.0).abs() < 1e-12, "{out:?}");
        let pi = lp.duals(&src);
        // complementary slackness: basic reduced costs vanish
        for (b, v) in lp.basis() {
            if let Basic::Column(j) = b {
                if v > 1e-12 {
                    let (a, c) = &src.cols[j];
                    let r = c - a[0] * pi[0] - a[1] * pi[1];
                    assert!(r.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn infeasible_is_reported() {
        let src = Dense { rows: 1, cols: vec![(vec![1.0], 1.0)] };
        let mut lp = RevisedSimplex::new(vec![-1.0]);
        assert!(matches!(lp.solve(&src, &LpOptions::default()), Err(Error::Lp(_))));
    }

    #[test]
    fn warm_restart_after_new_columns() {
        let mut src = Dense {
            rows: 2,
            cols: vec![(vec![1.0, 0.0], 1.0), (vec![0.0, 1.0], 1.0)],
        };
        let mut lp = RevisedSimplex::new(vec![1.0, 1.0]);
        let first = lp.solve(&src, &LpOptions::default()).unwrap();
        assert!((first.objective - 2.0).abs() < 1e-12);
        src.cols.push((vec![1.0, 1.0], 1.5));
        let second = lp.solve(&src, &LpOptions::default()).unwrap();
        assert!((second.objective - 1.5).abs() < 1e-12);
    }
}
