//! Finite-degree extremal polynomials from harmonic measure on a slit.
//!
//! For the weight `E_n(z) = Π (z - z̄_l)` the extremal problem on
//! `A₀ = R \ (-1, 1)` with evaluation point `z₀` is solved by removing a
//! symmetric slit `I_n = [-x_n, x_n]` from `Ω₀ = C \ A₀`, chosen so that the
//! poles `z̄_l` together with `z̄₀` see `I_n` with total harmonic measure one.
//!
//! All potentials are computed in the half-plane chart `w`, where `I_n`
//! becomes the segment `{i·e^{-σ} : |σ| ≤ L}` with `L = artanh x_n` and the
//! Green's function of `Ω₀` between two slit points is
//! `-log|tanh((σ - σ')/2)|`. Balayage densities are expanded as
//! `ψ(τ)/sqrt(1 - τ²)`, `σ = Lτ`, with `ψ` a Chebyshev series found by
//! collocation. The logarithmic part of the kernel is integrated exactly
//! through the Joukowski map, so potentials stay accurate up to the slit.

use num_traits::{One, Zero};

use crate::conformal::{green_halfplane, on_slits, w_of_z, ArcGeometry};
use crate::error::{Error, Result};
use crate::linalg::Lu;
use crate::poly::{chebyshev_angles, uniform_angles, ComplexPoly};
use crate::scalar::{cis, cx, imag_unit, real, Cx, Real};

/// Discretization of the balayage integral equation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlitOptions {
    /// Highest Chebyshev index `m` of the density.
    pub degree: usize,
    /// Gauss–Chebyshev nodes for the smooth part of the kernel.
    pub quadrature: usize,
    /// Double `m` until the Chebyshev tail of every density is at rounding
    /// level, up to `max_degree`. Poles close to a wide slit need this.
    pub adaptive: bool,
    pub max_degree: usize,
}

impl SlitOptions {
    pub fn new(degree: usize) -> Self {
        Self { degree, quadrature: 8 * degree.max(4), adaptive: true, max_degree: 512 }
    }

    /// Exactly `degree`, without refinement.
    pub fn fixed(degree: usize) -> Self {
        Self { adaptive: false, ..Self::new(degree) }
    }

    /// `m = 32`, or `m = 64` above degree 24.
    pub fn for_degree(n: usize) -> Self {
        Self::new(if n > 24 { 64 } else { 32 })
    }

    pub fn doubled(self) -> Self {
        Self {
            degree: 2 * self.degree,
            quadrature: 2 * self.quadrature,
            max_degree: self.max_degree.max(2 * self.degree),
            ..self
        }
    }
}

impl Default for SlitOptions {
    fn default() -> Self {
        Self::new(32)
    }
}

/// `φ(x) = (e^x - 1)/x`, stable near zero.
fn expm1_ratio<T: Real>(x: Cx<T>) -> Cx<T> {
    if x.norm() < T::lit(1e-3) {
        let one = Cx::<T>::one();
        one + x * (one / T::lit(2.0) + x * (one / T::lit(6.0) + x / T::lit(24.0)))
    } else {
        (x.exp() - Cx::<T>::one()) / x
    }
}

/// `R(d) = -log(tanh(|d|/2)/|d|)`, the smooth part of the slit kernel.
fn smooth_kernel<T: Real>(d: T) -> T {
    let d = d.abs();
    if d < T::lit(1e-4) {
        T::LN_2() + d * d / T::lit(12.0)
    } else {
        -((d / T::lit(2.0)).tanh() / d).ln()
    }
}

/// `σ(w) = -log(-i·w)`, so that `w = i·e^{-σ}`.
fn sigma_of_w<T: Real>(w: Cx<T>) -> Cx<T> {
    -(-(imag_unit::<T>() * w)).ln()
}

/// Exterior Joukowski inverse: `ζ = (v + 1/v)/2` with `|v| ≥ 1`.
fn joukowski_exterior<T: Real>(zeta: Cx<T>) -> Cx<T> {
    let one = Cx::<T>::one();
    let v = zeta + (zeta - one).sqrt() * (zeta + one).sqrt();
    if v.norm_sqr() < T::one() {
        one / v
    } else {
        v
    }
}

/// Collocation operator for a fixed slit; independent of the pole.
struct Collocation<T> {
    half_log: T,
    degree: usize,
    /// Angles `θ_q` of the quadrature nodes `τ_q = cos θ_q`.
    node_angles: Vec<T>,
    lu: Lu<T>,
    condition: T,
}

impl<T: Real> Collocation<T> {
    fn new(half_log: T, opts: &SlitOptions) -> Result<Self> {
        let m = opts.degree;
        let dim = m + 1;
        let nq = opts.quadrature;
        let pi = T::PI();
        let node_angles: Vec<T> = (1..=nq)
            .map(|q| T::from_usize_lossy(2 * q - 1) * pi / T::from_usize_lossy(2 * nq))
            .collect();
        let weight = pi / T::from_usize_lossy(nq);
        // T_k(τ_q), row-major in q
        let table: Vec<T> = node_angles
            .iter()
            .flat_map(|&t| (0..dim).map(move |k| (T::from_usize_lossy(k) * t).cos()))
            .collect();
        let mut a = vec![T::zero(); dim * dim];
        for j in 0..dim {
            let xj_angle = T::from_usize_lossy(2 * j + 1) * pi / T::from_usize_lossy(2 * dim);
            let xj = xj_angle.cos();
            let row = &mut a[j * dim..(j + 1) * dim];
            row[0] = pi * (T::LN_2() - half_log.ln());
            for (k, r) in row.iter_mut().enumerate().skip(1) {
                let kk = T::from_usize_lossy(k);
                *r = pi / kk * (kk * xj_angle).cos();
            }
            for (q, &tq) in node_angles.iter().enumerate() {
                let rq = weight * smooth_kernel(half_log * (xj - tq.cos()));
                for (r, &tk) in row.iter_mut().zip(&table[q * dim..(q + 1) * dim]) {
                    *r += rq * tk;
                }
            }
        }
        let lu = Lu::new(&a, dim)?;
        let condition = lu.condition();
        if !(condition * T::epsilon() < T::lit(1e-3)) {
            return Err(Error::IllConditioned(condition.to_f64_lossy()));
        }
        Ok(Self { half_log, degree: m, node_angles, lu, condition })
    }

    fn collocation_points(&self) -> impl Iterator<Item = T> + '_ {
        let dim = self.degree + 1;
        (0..dim).map(move |j| {
            (T::from_usize_lossy(2 * j + 1) * T::PI() / T::from_usize_lossy(2 * dim)).cos()
        })
    }

    fn solve(&self, pole: Cx<T>) -> Balayage<T> {
        let eta = w_of_z(pole);
        let mut coeffs: Vec<T> = self
            .collocation_points()
            .map(|x| green_halfplane(cx(T::zero(), (-self.half_log * x).exp()), eta))
            .collect();
        self.lu.solve(&mut coeffs);
        let weight = T::PI() / T::from_usize_lossy(self.node_angles.len());
        let nodes = self
            .node_angles
            .iter()
            .map(|&t| {
                let psi = coeffs
                    .iter()
                    .enumerate()
                    .fold(T::zero(), |s, (k, &c)| s + c * (T::from_usize_lossy(k) * t).cos());
                (self.half_log * t.cos(), weight * psi)
            })
            .collect();
        Balayage {
            pole,
            eta,
            half_log: self.half_log,
            mass: T::PI() * coeffs[0],
            coeffs,
            nodes,
            condition: self.condition,
        }
    }
}

/// Balayage of every pole on the slit of half-log-width `half_log`, with
/// the degree refined as requested by `opts`.
fn solve_poles<T: Real>(half_log: T, poles: &[Cx<T>], opts: &SlitOptions) -> Result<Vec<Balayage<T>>> {
    let mut o = *opts;
    loop {
        let bal: Vec<Balayage<T>> = {
            let colloc = Collocation::new(half_log, &o)?;
            poles.iter().map(|&p| colloc.solve(p)).collect()
        };
        if !o.adaptive || o.degree >= o.max_degree || bal.iter().all(Balayage::resolved) {
            return Ok(bal);
        }
        o = o.doubled();
    }
}

/// Harmonic measure of the slit seen from a pole, `ν = ω(pole, ·; Ω_n)`.
#[derive(Clone, Debug)]
pub struct Balayage<T> {
    pole: Cx<T>,
    eta: Cx<T>,
    half_log: T,
    coeffs: Vec<T>,
    mass: T,
    /// Quadrature nodes `(σ_q, weight_q·ψ(τ_q))`.
    nodes: Vec<(T, T)>,
    condition: T,
}

impl<T: Real> Balayage<T> {
    pub fn pole(&self) -> Cx<T> {
        self.pole
    }

    /// Total mass `ω(pole, I_n; Ω_n)`.
    pub fn mass(&self) -> T {
        self.mass
    }

    /// Chebyshev coefficients of `ψ`.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Condition estimate of the collocation matrix.
    pub fn condition(&self) -> T {
        self.condition
    }

    /// Highest Chebyshev index actually used.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// True when the last quarter of the coefficients is at the noise level
    /// of the collocation solve.
    fn resolved(&self) -> bool {
        let m = self.coeffs.len();
        let top = self.coeffs.iter().fold(T::zero(), |a, c| a.max(c.abs()));
        let tail = self.coeffs[3 * m / 4..].iter().fold(T::zero(), |a, c| a.max(c.abs()));
        tail <= T::lit(64.0).max(self.condition) * T::epsilon() * top
    }

    /// `ψ(τ)` for `τ ∈ [-1, 1]`; the density in `τ` is `ψ(τ)/sqrt(1 - τ²)`.
    pub fn density(&self, tau: T) -> T {
        let t = tau.max(-T::one()).min(T::one()).acos();
        self.coeffs
            .iter()
            .enumerate()
            .fold(T::zero(), |s, (k, &c)| s + c * (T::from_usize_lossy(k) * t).cos())
    }

    /// Integral of `t ↦ g_{Ω₀}(z, t)` against the measure; `z` given in the
    /// `w` chart.
    pub fn integrate_green(&self, w: Cx<T>) -> T {
        -self.integrate_log_blaschke(w).re
    }

    /// Integral of `t ↦ log b_{Ω₀}(z, t)` against the measure, in the `w`
    /// chart. The branch has a cut on the part of the imaginary axis above
    /// the slit, across which it jumps by `2πi` times the mass.
    pub fn integrate_log_blaschke(&self, w: Cx<T>) -> Cx<T> {
        let pi = T::PI();
        let mut sigma = sigma_of_w(w);
        // σ carries an absolute rounding error of a few ulps, which the square
        // root in the Joukowski inverse would amplify to √ε at the tips
        let snap = T::lit(8.0) * T::epsilon() * (T::one() + self.half_log);
        for tip in [self.half_log, -self.half_log] {
            if (sigma - tip).norm() <= snap {
                sigma = cx(tip, T::zero());
            }
        }
        let v = joukowski_exterior(sigma / self.half_log);
        let vinv = Cx::<T>::one() / v;
        let c0 = self.coeffs[0];
        let mut acc = real::<T>(c0 * pi) * ((v / T::lit(2.0)).ln() + self.half_log.ln())
            - cx(T::zero(), pi * self.mass);
        let mut p = Cx::<T>::one();
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            p = p * vinv;
            acc = acc - p * (c * pi / T::from_usize_lossy(k));
        }
        for &(s, wq) in &self.nodes {
            let x = real::<T>(s) - sigma;
            acc = acc + (expm1_ratio(x).ln() - (Cx::<T>::one() + x.exp()).ln()) * wq;
        }
        acc
    }
}

/// Solves the balayage equation for one pole and slit half-width `x`.
pub fn balayage_onto_slit<T: Real>(pole: Cx<T>, x: T, opts: &SlitOptions) -> Result<Balayage<T>> {
    if !(x > T::zero() && x < T::one()) {
        return Err(Error::Domain(format!("slit half-width {x} outside (0, 1)")));
    }
    check_pole(pole)?;
    Ok(solve_poles(x.atanh(), &[pole], opts)?.remove(0))
}

fn check_pole<T: Real>(pole: Cx<T>) -> Result<()> {
    if !pole.re.is_finite() || !pole.im.is_finite() || on_slits(pole) {
        return Err(Error::Domain(format!(
            "pole {} is not a point of Ω₀",
            crate::scalar::format_complex(pole)
        )));
    }
    Ok(())
}

/// Mass of the slit seen from `pole` when the slit fills `(-1, 1)`.
///
/// In the `w` chart the slit becomes the positive imaginary axis and the
/// harmonic measure is linear in the argument of `w(pole)`.
pub fn limiting_mass<T: Real>(pole: Cx<T>) -> T {
    let beta = w_of_z(pole).arg();
    let half = T::FRAC_PI_2();
    if beta > half {
        (T::PI() - beta) / half
    } else {
        beta / half
    }
}

fn mass_defect<T: Real>(
    half_log: T,
    poles: &[(Cx<T>, usize)],
    opts: &SlitOptions,
) -> Result<(T, Vec<Balayage<T>>)> {
    let points: Vec<Cx<T>> = poles.iter().map(|&(p, _)| p).collect();
    let bal = solve_poles(half_log, &points, opts)?;
    let total = bal
        .iter()
        .zip(poles)
        .fold(T::zero(), |s, (b, &(_, k))| s + b.mass * T::from_usize_lossy(k));
    Ok((total - T::one(), bal))
}

/// Bounds on `log L`, `L = artanh x`.
const LOG_L_MIN: f64 = -690.0;
const LOG_L_MAX: f64 = 3.0;

/// Root in `log L` of the mass condition by bisection with Illinois steps.
fn solve_half_log<T: Real>(
    n: usize,
    poles: &[(Cx<T>, usize)],
    opts: &SlitOptions,
) -> Result<(T, Vec<Balayage<T>>)> {
    let limit = poles
        .iter()
        .fold(T::zero(), |s, &(p, k)| s + limiting_mass(p) * T::from_usize_lossy(k));
    if limit <= T::one() + T::epsilon().sqrt() {
        return Err(Error::TrivialRegime { n, limit_mass: limit.to_f64_lossy() });
    }
    let f = |t: T| mass_defect(t.exp(), poles, opts).map(|r| r.0);
    let (mut a, mut b) = (T::lit(LOG_L_MIN), T::lit(LOG_L_MAX));
    let (mut fa, mut fb) = (f(a)?, f(b)?);
    if !(fa < T::zero() && fb > T::zero()) {
        return Err(Error::NoConvergence(format!(
            "mass condition not bracketed: defects {fa:e} at L = e^{a}, {fb:e} at L = e^{b}"
        )));
    }
    let mut side = 0i8;
    let tol = T::epsilon() * T::lit(4.0);
    for it in 0..400 {
        let c = if it % 4 == 3 {
            (a + b) / T::lit(2.0)
        } else {
            (a * fb - b * fa) / (fb - fa)
        };
        let c = if c > a && c < b { c } else { (a + b) / T::lit(2.0) };
        let fc = f(c)?;
        if fc == T::zero() {
            a = c;
            b = c;
            break;
        }
        if (fc < T::zero()) == (fa < T::zero()) {
            a = c;
            fa = fc;
            if side == -1 {
                fb /= T::lit(2.0);
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa /= T::lit(2.0);
            }
            side = 1;
        }
        if (b - a).abs() <= tol * (T::one() + a.abs().max(b.abs())) {
            break;
        }
    }
    let root = if fa.abs() < fb.abs() { a } else { b };
    let half_log = root.exp();
    let (_, bal) = mass_defect(half_log, poles, opts)?;
    Ok((half_log, bal))
}

/// Half-width `x_n` of the slit for degree `n` and the given pole multiset.
pub fn solve_xn<T: Real>(n: usize, poles: &[(Cx<T>, usize)], opts: &SlitOptions) -> Result<T> {
    for &(p, _) in poles {
        check_pole(p)?;
    }
    Ok(solve_half_log(n, poles, opts)?.0.tanh())
}

/// Default pole multiset: `z̄₀` with multiplicity `n + 1`.
pub fn default_poles<T: Real>(geom: &ArcGeometry<T>, n: usize) -> Vec<(Cx<T>, usize)> {
    vec![(geom.z_inf(), n + 1)]
}

/// The slit domain `Ω_n` with the balayage of every pole.
#[derive(Clone, Debug)]
pub struct SlitSystem<T> {
    n: usize,
    geom: ArcGeometry<T>,
    zeros: Vec<Cx<T>>,
    poles: Vec<(Cx<T>, usize)>,
    half_log: T,
    x_n: T,
    balayage: Vec<Balayage<T>>,
    opts: SlitOptions,
}

impl<T: Real> SlitSystem<T> {
    /// `E_n(z) = (z - z̄₀)ⁿ`.
    pub fn new(geom: ArcGeometry<T>, n: usize) -> Result<Self> {
        Self::with_options(geom, vec![geom.z_inf(); n], SlitOptions::for_degree(n))
    }

    /// `E_n(z) = Π (z - ζ_l)` for zeros `ζ_l` in the closed lower
    /// half-plane (off the slits).
    pub fn with_zeros(geom: ArcGeometry<T>, zeros: Vec<Cx<T>>) -> Result<Self> {
        let opts = SlitOptions::for_degree(zeros.len());
        Self::with_options(geom, zeros, opts)
    }

    pub fn with_options(geom: ArcGeometry<T>, zeros: Vec<Cx<T>>, opts: SlitOptions) -> Result<Self> {
        let n = zeros.len();
        for &z in &zeros {
            check_pole(z)?;
            if z.im > T::zero() {
                return Err(Error::Domain("zeros of E_n must lie in the closed lower half-plane".into()));
            }
        }
        let mut poles: Vec<(Cx<T>, usize)> = Vec::new();
        for z in zeros.iter().copied().chain(std::iter::once(geom.z_inf())) {
            match poles.iter_mut().find(|(p, _)| *p == z) {
                Some(entry) => entry.1 += 1,
                None => poles.push((z, 1)),
            }
        }
        let (half_log, balayage) = solve_half_log(n, &poles, &opts)?;
        Ok(Self { n, geom, zeros, poles, half_log, x_n: half_log.tanh(), balayage, opts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn geom(&self) -> &ArcGeometry<T> {
        &self.geom
    }

    pub fn x_n(&self) -> T {
        self.x_n
    }

    /// `L = artanh x_n`; the slit is `{i·e^{-σ} : |σ| ≤ L}` in the `w` chart.
    pub fn half_log(&self) -> T {
        self.half_log
    }

    pub fn zeros(&self) -> &[Cx<T>] {
        &self.zeros
    }

    pub fn poles(&self) -> &[(Cx<T>, usize)] {
        &self.poles
    }

    pub fn balayage(&self) -> &[Balayage<T>] {
        &self.balayage
    }

    pub fn options(&self) -> SlitOptions {
        self.opts
    }

    /// `Σ mult·ω(pole, I_n; Ω_n)`; one after the width solve.
    pub fn total_mass(&self) -> T {
        self.balayage
            .iter()
            .zip(&self.poles)
            .fold(T::zero(), |s, (b, &(_, k))| s + b.mass * T::from_usize_lossy(k))
    }

    /// True when `z` is on `A₀` or on the slit `I_n`.
    pub fn on_boundary(&self, z: Cx<T>) -> bool {
        let tol = crate::conformal::chart_tol::<T>();
        on_slits(z) || (z.im.abs() <= tol && z.re.abs() <= self.x_n)
    }

    fn check_point(&self, z: Cx<T>) -> Result<()> {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::Domain("point at infinity".into()));
        }
        if self.on_boundary(z) {
            return Err(Error::OnBoundary(format!(
                "z = {} lies on the boundary of Ω_n",
                crate::scalar::format_complex(z)
            )));
        }
        Ok(())
    }

    /// Balayage of `z1`, reusing a stored pole when possible.
    pub fn balayage_of(&self, z1: Cx<T>) -> Result<Balayage<T>> {
        if let Some(i) = self.poles.iter().position(|&(p, _)| p == z1) {
            return Ok(self.balayage[i].clone());
        }
        check_pole(z1)?;
        Ok(solve_poles(self.half_log, &[z1], &self.opts)?.remove(0))
    }

    /// `g_{Ω_n}(z, z1) = g_{Ω₀}(z, z1) - ∫ g_{Ω₀}(z, t) dν_{z1}(t)`.
    ///
    /// `z` may lie on the slit, where the value vanishes.
    pub fn green(&self, z: Cx<T>, z1: Cx<T>) -> Result<T> {
        if on_slits(z) {
            return Ok(T::zero());
        }
        if z == z1 {
            return Err(Error::SingularLocus("logarithmic pole z = z1".into()));
        }
        let bal = self.balayage_of(z1)?;
        Ok(self.green_with(z, &bal))
    }

    fn green_with(&self, z: Cx<T>, bal: &Balayage<T>) -> T {
        let w = w_of_z(z);
        green_halfplane(w, bal.eta) - bal.integrate_green(w)
    }

    /// `log b_{Ω_n}(z, z1) = log b_{Ω₀}(z, z1) - ∫ log b_{Ω₀}(z, t) dν_{z1}(t)`.
    fn log_b_with(&self, w: Cx<T>, bal: &Balayage<T>) -> Cx<T> {
        ((w - bal.eta) / (w - bal.eta.conj())).ln() - bal.integrate_log_blaschke(w)
    }

    /// `b_{Ω_n}(z, z1)`, with the phase of the principal-branch
    /// representation described on [`Balayage::integrate_log_blaschke`].
    pub fn complex_green(&self, z: Cx<T>, z1: Cx<T>) -> Result<Cx<T>> {
        self.check_point(z)?;
        let bal = self.balayage_of(z1)?;
        Ok(self.log_b_with(w_of_z(z), &bal).exp())
    }

    /// `log ℐ(z) = Σ mult·log b_{Ω_n}(z, pole)` at a `w`-chart point.
    fn log_product(&self, w: Cx<T>) -> Cx<T> {
        self.balayage
            .iter()
            .zip(&self.poles)
            .fold(Cx::<T>::zero(), |s, (b, &(_, k))| s + self.log_b_with(w, b) * T::from_usize_lossy(k))
    }

    /// Unnormalized `s_n` in the `w` chart; cut along the slit only.
    fn s_raw(&self, w: Cx<T>) -> Cx<T> {
        let a = (-self.half_log).exp();
        let b = self.half_log.exp();
        let mid = cx(T::zero(), (a + b) / T::lit(2.0));
        let d = cx(T::zero(), (b - a) / T::lit(2.0));
        let one = Cx::<T>::one();
        let q = |c: Cx<T>| c * (one - d * d / (c * c)).sqrt();
        q(w - mid) * q(w + mid) / w
    }

    /// `s_n` in the `w` chart, normalized by `s_n(z₀) = 1`.
    fn s_w(&self, w: Cx<T>) -> Cx<T> {
        self.s_raw(w) / self.s_raw(self.geom.w0())
    }

    /// `s_n(z) = sqrt((z₀² - 1)/(z₀² - x_n²)·(z² - x_n²)/(z² - 1))` on `Ω_n`
    /// with `s_n(z₀) = 1`.
    pub fn s_n(&self, z: Cx<T>) -> Result<Cx<T>> {
        self.check_point(z)?;
        let x = self.x_n;
        let tol = crate::conformal::chart_tol::<T>();
        if (z * z - real(x * x)).norm() <= tol {
            return Err(Error::SingularLocus("branch point ±x_n".into()));
        }
        Ok(self.s_w(w_of_z(z)))
    }

    /// The rational function whose square root is `s_n`.
    pub fn s_n_squared(&self, z: Cx<T>) -> Cx<T> {
        let one = Cx::<T>::one();
        let z0 = self.geom.z0();
        let x2 = real::<T>(self.x_n * self.x_n);
        (z0 * z0 - one) / (z0 * z0 - x2) * (z * z - x2) / (z * z - one)
    }

    fn e_n(&self, z: Cx<T>) -> Cx<T> {
        self.zeros.iter().fold(Cx::<T>::one(), |s, &r| s * (z - r))
    }

    fn e_n_reflected(&self, z: Cx<T>) -> Cx<T> {
        self.zeros.iter().fold(Cx::<T>::one(), |s, &r| s * (z - r.conj()))
    }

    /// The two terms `(X, Y)` of the extremal polynomial before the phase
    /// of `ℐ` is fixed: `Q = X/c + c·Y` for a unimodular `c`.
    fn terms(&self, w: Cx<T>) -> (Cx<T>, Cx<T>) {
        let z = crate::conformal::z_of_w(w);
        let z0 = self.geom.z0();
        let one = Cx::<T>::one();
        let s = self.s_w(w);
        let log_i = self.log_product(w);
        let x = self.e_n(z) * (one + s) / (s * T::lit(2.0)) * (-log_i).exp();
        let y = self.e_n_reflected(z) * (one - s) / (s * T::lit(2.0)) * (z - z0) / (z - z0.conj())
            * log_i.exp();
        (x, y)
    }

    /// Assembles and certifies `Q_{n,z₀}`.
    pub fn build_qn(&self) -> Result<QnResult<T>> {
        build_qn(self)
    }

    /// `|E_n(z₀)|·exp(Σ g_{Ω_n}(z̄_l, z₀))`.
    pub fn product_formula(&self) -> T {
        let z0 = self.geom.z0();
        let sum = self
            .balayage
            .iter()
            .zip(&self.poles)
            .fold(T::zero(), |s, (b, &(_, k))| s + self.green_with(z0, b) * T::from_usize_lossy(k));
        self.e_n(z0).norm() * sum.exp()
    }
}

/// `g_{Ω_n}(z, z1)`.
pub fn green_omega_n<T: Real>(z: Cx<T>, z1: Cx<T>, slits: &SlitSystem<T>) -> Result<T> {
    slits.green(z, z1)
}

/// `b_{Ω_n}(z, z1)`.
pub fn complex_green_omega_n<T: Real>(z: Cx<T>, z1: Cx<T>, slits: &SlitSystem<T>) -> Result<Cx<T>> {
    slits.complex_green(z, z1)
}

/// `s_n(z)`.
pub fn s_n_eval<T: Real>(z: Cx<T>, slits: &SlitSystem<T>) -> Result<Cx<T>> {
    slits.s_n(z)
}

/// The extremal polynomial of the weighted problem on `A₀`.
#[derive(Clone, Debug)]
pub struct QnResult<T> {
    /// `Q_{n,z₀}` in the `z` chart.
    pub coeffs: ComplexPoly<T>,
    /// `P_{n,0}(u) = Q(z(u))/E_n(z(u))`, present for the default weight.
    pub pullback: Option<ComplexPoly<T>>,
    /// `|Q(z₀)|`.
    pub attained: T,
    /// `|E_n(z₀)|·exp(Σ g_{Ω_n}(z̄_l, z₀))`.
    pub product_formula: T,
    /// `|Q(z₀)/E_n(z₀)|`, the value of the problem in the `u` chart.
    pub weighted_value: T,
    /// Maximum of `|Q/E_n|` over a fine grid on `A₀`, from the closed form.
    pub sup_check: T,
    /// Local maxima `(θ, |Q/E_n|)` along `A₀`, parametrized by `z(e^{iθ})`.
    pub active: Vec<(T, T)>,
    /// Relative residual of the polynomial fit at held-out points.
    pub fit_residual: T,
    /// `|c|² - 1` for the continuity constant across `A₀`.
    pub phase_defect: T,
}

impl<T: Real> QnResult<T> {
    pub fn degree(&self) -> usize {
        self.coeffs.len_degree()
    }
}

/// Evaluates the analytic expression for `Q_{n,z₀}` in the `w` chart.
///
/// The constant `c` is fixed by continuity of `Q` across `A₀` at the point
/// `w = ±0.7`, the two sides of `z = 149/51`.
struct QnExpression<'a, T> {
    slits: &'a SlitSystem<T>,
    c: Cx<T>,
}

impl<'a, T: Real> QnExpression<'a, T> {
    fn new(slits: &'a SlitSystem<T>) -> Result<(Self, T)> {
        let v = real::<T>(T::lit(0.7));
        let (xp, yp) = slits.terms(v);
        let (xm, ym) = slits.terms(-v);
        let c2 = (xm - xp) / (yp - ym);
        if !(c2.re.is_finite() && c2.im.is_finite()) || c2.norm() == T::zero() {
            return Err(Error::Certification("continuity constant is degenerate".into()));
        }
        let defect = c2.norm() - T::one();
        Ok((Self { slits, c: c2.sqrt() }, defect))
    }

    fn eval_w(&self, w: Cx<T>) -> Cx<T> {
        let (x, y) = self.slits.terms(w);
        x / self.c + self.c * y
    }

    fn eval(&self, z: Cx<T>) -> Cx<T> {
        self.eval_w(w_of_z(z))
    }
}

/// Evaluates the analytic expression for `Q_{n,z₀}` at `z`, before phase
/// normalization. Used to test single-valuedness on both sides of cuts.
pub fn qn_expression<T: Real>(slits: &SlitSystem<T>, z: Cx<T>) -> Result<Cx<T>> {
    slits.check_point(z)?;
    let (expr, _) = QnExpression::new(slits)?;
    Ok(expr.eval(z))
}

const FIT_RADIUS: f64 = 3.0;
const PULLBACK_RADIUS: f64 = 1.1;

/// Assembles `Q_{n,z₀}`, fits it on `|z| = 3` from `8(n+1)` samples and
/// validates the fit on `4(n+1)` held-out points.
pub fn build_qn<T: Real>(slits: &SlitSystem<T>) -> Result<QnResult<T>> {
    let n = slits.n;
    let geom = slits.geom;
    let (expr, phase_defect) = QnExpression::new(slits)?;
    if phase_defect.abs() > T::lit(1e-6) {
        return Err(Error::Certification(format!(
            "continuity constant off the unit circle by {phase_defect:e}"
        )));
    }
    let radius = T::lit(FIT_RADIUS);
    let big_n = 8 * (n + 1);
    let nn = T::from_usize_lossy(big_n);
    // rotate by half a step so no sample falls on the real axis
    let shift = T::PI() / nn;
    let samples: Vec<Cx<T>> = (0..big_n)
        .map(|j| {
            let t = T::TAU() * T::from_usize_lossy(j) / nn + shift;
            expr.eval(cis(t) * radius)
        })
        .collect();
    let rotated = ComplexPoly::fit_on_circle(&samples, radius, n);
    let coeffs: Vec<Cx<T>> = rotated
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, &a)| a * cis(-shift * T::from_usize_lossy(k)))
        .collect();
    let mut poly = ComplexPoly::new(coeffs);

    let held = 4 * (n + 1);
    let mut err = T::zero();
    let mut scale = T::zero();
    for j in 0..held {
        let t = T::TAU() * (T::from_usize_lossy(j) + T::lit(0.37)) / T::from_usize_lossy(held);
        let z = cis(t) * radius;
        let exact = expr.eval(z);
        err = err.max((poly.eval(z) - exact).norm());
        scale = scale.max(exact.norm());
    }
    let fit_residual = err / scale;
    if !(fit_residual <= T::lit(1e-7)) {
        return Err(Error::Certification(format!(
            "Q_n is not a polynomial of degree {n} to tolerance: held-out residual {fit_residual:e}"
        )));
    }

    // b(u₀,∞)ⁿ·Q(z₀)/E_n(z₀) > 0
    let z0 = geom.z0();
    let e0 = slits.e_n(z0);
    let raw = poly.eval(z0) / e0 * geom.b_infinity(Cx::<T>::zero()).powu(n as u32);
    let rot = raw.conj() / raw.norm();
    poly = poly.scale(rot);

    let default_weight = slits.zeros.iter().all(|&r| r == geom.z_inf());
    let pullback = if default_weight {
        Some(pullback_fit(&expr, slits, rot)?)
    } else {
        None
    };

    let weighted = |z: Cx<T>| poly.eval(z) / slits.e_n(z);
    // the analytic expression is accurate on A₀ at every degree, unlike the
    // monomial coefficients once |Q/E_n| spans many orders of magnitude
    let modulus = |t: T| {
        let z = geom.z_of_u(cis(t));
        (expr.eval(z) * rot / slits.e_n(z)).norm()
    };
    let active = a0_local_maxima(modulus, geom.alpha(), 256);
    let sup_check = active.iter().fold(T::zero(), |m, &(_, v)| m.max(v));

    let attained = poly.eval(z0).norm();
    Ok(QnResult {
        pullback,
        attained,
        product_formula: slits.product_formula(),
        weighted_value: weighted(z0).norm(),
        sup_check,
        active,
        fit_residual,
        phase_defect,
        coeffs: poly,
    })
}

/// Arc angles parametrizing `A₀` through `z = z(e^{iθ})`, `θ ≠ 0`.
pub fn a0_angles<T: Real>(alpha: T, m: usize) -> Vec<T> {
    let mut out: Vec<T> = chebyshev_angles(alpha, m);
    out.extend(uniform_angles(alpha, m));
    out.retain(|t| *t != T::zero());
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    out.dedup();
    out
}

/// Refined local maxima of `f` over `(-α, α)`.
///
/// The grid includes points within `1e-10·α` of the endpoints, where the
/// maps are singular but `f` extends continuously.
pub fn a0_local_maxima<T: Real>(f: impl Fn(T) -> T, alpha: T, m: usize) -> Vec<(T, T)> {
    let edge = alpha * (T::one() - T::lit(1e-10));
    let mut grid: Vec<T> = a0_angles(alpha, m).into_iter().filter(|t| t.abs() < edge).collect();
    grid.insert(0, -edge);
    grid.push(edge);
    let vals: Vec<T> = grid.iter().map(|&t| f(t)).collect();
    let last = grid.len() - 1;
    let mut out = Vec::new();
    for i in 0..=last {
        let left = if i == 0 { T::neg_infinity() } else { vals[i - 1] };
        let right = if i == last { T::neg_infinity() } else { vals[i + 1] };
        if vals[i] >= left && vals[i] >= right {
            let a = grid[i.saturating_sub(1)];
            let b = grid[(i + 1).min(last)];
            let (t, v) = crate::extremal::golden_max(&f, a, b);
            out.push(if v > vals[i] { (t, v) } else { (grid[i], vals[i]) });
        }
    }
    out
}

/// `|Q/E_n|` at `z = z(e^{iθ})` on `A₀`; the point `θ = 0` is `z = ∞`.
pub fn a0_modulus<T: Real>(q: &ComplexPoly<T>, slits: &SlitSystem<T>, geom: &ArcGeometry<T>, theta: T) -> T {
    if theta == T::zero() {
        return if q.len_degree() == slits.n { q.leading().norm() } else { T::zero() };
    }
    let z = geom.z_of_u(cis(theta));
    (q.eval(z) / slits.e_n(z)).norm()
}

/// `P(u) = Q(z(u))/E_n(z(u))`, a polynomial in `u` for `E_n = (z - z̄₀)ⁿ`.
///
/// The fit uses the circle `|u| = 1.1`, whose image avoids the real `z`
/// axis and with it the slit and the branch points of `s_n`.
fn pullback_fit<T: Real>(expr: &QnExpression<'_, T>, slits: &SlitSystem<T>, rot: Cx<T>) -> Result<ComplexPoly<T>> {
    let n = slits.n;
    let geom = slits.geom;
    let big_n = 8 * (n + 1);
    let nn = T::from_usize_lossy(big_n);
    let shift = T::PI() / nn;
    let radius = T::lit(PULLBACK_RADIUS);
    let at = |t: T| {
        let z = geom.z_of_u(cis(t) * radius);
        expr.eval(z) / slits.e_n(z) * rot
    };
    let samples: Vec<Cx<T>> = (0..big_n)
        .map(|j| at(T::TAU() * T::from_usize_lossy(j) / nn + shift))
        .collect();
    let fitted = ComplexPoly::fit_on_circle(&samples, radius, n);
    let poly = ComplexPoly::new(
        fitted
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, &a)| a * cis(-shift * T::from_usize_lossy(k)))
            .collect(),
    );
    let held = 4 * (n + 1);
    let mut err = T::zero();
    let mut scale = T::zero();
    for j in 0..held {
        let t = T::TAU() * (T::from_usize_lossy(j) + T::lit(0.37)) / T::from_usize_lossy(held);
        let exact = at(t);
        err = err.max((poly.eval(cis(t) * radius) - exact).norm());
        scale = scale.max(exact.norm());
    }
    if !(err <= T::lit(1e-7) * scale) {
        return Err(Error::Certification(format!(
            "pullback is not a polynomial of degree {n}: held-out residual {:e}",
            err / scale
        )));
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn geom() -> ArcGeometry<f64> {
        ArcGeometry::new(FRAC_PI_2).unwrap()
    }

    #[test]
    fn smooth_kernel_is_continuous_at_zero() {
        let d = 1e-4_f64;
        let direct = -((d / 2.0).tanh() / d).ln();
        let series = 2f64.ln() + d * d / 12.0;
        assert!((direct - series).abs() < 1e-15);
        assert!((smooth_kernel(d) - direct).abs() < 1e-15);
        assert!((smooth_kernel(0.0_f64) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn limiting_mass_at_the_default_pole() {
        let g = geom();
        let m = limiting_mass(g.z_inf());
        assert!((m - (PI - g.alpha()) / PI).abs() < 1e-14);
    }

    #[test]
    fn integrated_log_matches_real_part_on_the_slit() {
        let g = geom();
        let bal = balayage_onto_slit(g.z_inf(), 0.3, &SlitOptions::default()).unwrap();
        // potential of ν equals g_{Ω₀}(·, pole) on the slit
        for &x in &[-0.29, -0.1, 0.0, 0.17, 0.2999] {
            let w = w_of_z(Cx::new(x, 1e-300));
            let lhs = bal.integrate_green(w);
            let rhs = green_halfplane(w, bal.eta);
            assert!((lhs - rhs).abs() < 1e-10, "{x}: {lhs} {rhs}");
        }
    }

    #[test]
    fn trivial_regime_is_reported() {
        let g = geom();
        let err = SlitSystem::new(g, 1).unwrap_err();
        assert!(matches!(err, Error::TrivialRegime { n: 1, .. }));
    }

    #[test]
    fn expm1_ratio_branches_agree() {
        let x = Cx::new(0.999e-3, 0.0);
        let y = Cx::new(1.001e-3, 0.0);
        assert!((expm1_ratio(x) - expm1_ratio(y)).norm() < 1e-5);
    }
}
