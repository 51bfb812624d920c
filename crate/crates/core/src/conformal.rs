//! Conformal charts for the complement of a circular arc.
//!
//! Four coordinate planes are in play:
//!
//! * `U`: the original plane, domain `Ω_α = Ĉ \ A_α` with
//!   `A_α = {e^{iθ} : |θ| ≤ α}`;
//! * `Z`: `Ω₀ = (C \ R) ∪ (-1, 1)`, reached by `u(z) = (z - z₀)/(z - z̄₀)`,
//!   `z₀ = i·tan(α/2)`;
//! * `W`: the upper half-plane, `w(z) = sqrt((z - 1)/(z + 1))` with `w(0) = i`;
//! * `Λ`: the sector `|arg λ| ≤ π/4`, `λ² = -i·w`.
//!
//! Green's functions of every domain are transported from the half-plane.
//! The branch of `w` is the principal square root of `-(z-1)/(z+1)` rotated
//! by `i`; its cut is exactly the slit set `A₀ = R \ (-1, 1)`.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cis, cx, imag_unit, real, Cx, Real};

/// Coordinate plane a [`ChartPoint`] lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    U,
    Z,
    W,
    Lambda,
}

impl Chart {
    pub fn name(self) -> &'static str {
        match self {
            Chart::U => "u",
            Chart::Z => "z",
            Chart::W => "w",
            Chart::Lambda => "lambda",
        }
    }
}

/// A complex value tagged with its chart. `None` is the point at infinity,
/// which only exists in the `U` and `Z` charts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChartPoint<T> {
    chart: Chart,
    value: Option<Cx<T>>,
}

impl<T: Real> ChartPoint<T> {
    pub fn u(value: Cx<T>) -> Self {
        Self { chart: Chart::U, value: Some(value) }
    }

    pub fn u_infinity() -> Self {
        Self { chart: Chart::U, value: None }
    }

    pub fn z(value: Cx<T>) -> Self {
        Self { chart: Chart::Z, value: Some(value) }
    }

    pub fn z_infinity() -> Self {
        Self { chart: Chart::Z, value: None }
    }

    /// A point of the closed upper half-plane.
    pub fn w(value: Cx<T>) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Domain("w-chart points must be finite".into()));
        }
        if value.im < -chart_tol::<T>() * (T::one() + value.norm()) {
            return Err(Error::Domain(format!(
                "w = {} is not in the closed upper half-plane",
                crate::scalar::format_complex(value)
            )));
        }
        Ok(Self { chart: Chart::W, value: Some(value) })
    }

    /// A point of the closed sector `|arg λ| ≤ π/4`.
    pub fn lambda(value: Cx<T>) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Domain("lambda-chart points must be finite".into()));
        }
        let limit = T::FRAC_PI_4() + chart_tol::<T>();
        if value.re < T::zero() || value.arg().abs() > limit {
            return Err(Error::Domain(format!(
                "lambda = {} is outside the sector |arg| <= pi/4",
                crate::scalar::format_complex(value)
            )));
        }
        Ok(Self { chart: Chart::Lambda, value: Some(value) })
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    /// The finite value, or `None` for the point at infinity.
    pub fn value(&self) -> Option<Cx<T>> {
        self.value
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_none()
    }

    /// Checks the chart tag and hands back the value.
    pub fn expect(&self, chart: Chart) -> Result<Option<Cx<T>>> {
        if self.chart != chart {
            return Err(Error::WrongChart { expected: chart.name(), got: self.chart.name() });
        }
        Ok(self.value)
    }

    fn expect_finite(&self, chart: Chart) -> Result<Cx<T>> {
        self.expect(chart)?
            .ok_or_else(|| Error::Domain(format!("point at infinity in the {} chart", chart.name())))
    }
}

/// Relative tolerance for boundary and membership decisions.
pub(crate) fn chart_tol<T: Real>() -> T {
    T::epsilon() * T::lit(1e4)
}

/// Arc half-angle with the derived chart constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcGeometry<T> {
    alpha: T,
    z0: Cx<T>,
    z_inf: Cx<T>,
    w0: Cx<T>,
    cap: T,
    e_alpha: Cx<T>,
    /// `w(z̄₀)`, the image of `u = ∞` in the half-plane.
    w_inf: Cx<T>,
    /// Unimodular factor making `u·b(u, ∞) → cap > 0`.
    b_inf_phase: Cx<T>,
}

impl<T: Real> ArcGeometry<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha < T::PI()) {
            return Err(Error::Domain(format!(
                "arc half-angle must satisfy 0 < alpha < pi, got {alpha}"
            )));
        }
        let half = alpha / T::lit(2.0);
        let z0 = cx(T::zero(), half.tan());
        let z_inf = z0.conj();
        let w0 = cis((T::PI() - alpha) / T::lit(2.0));
        let w_inf = w_of_z(z_inf);
        // lim u·b_raw(u, ∞): u(z - z̄₀) → -(z₀ - z̄₀) and b_raw ≈ w'(z̄₀)(z - z̄₀)/(η - η̄)
        let dw = Cx::<T>::one() / (w_inf * (z_inf + T::one()) * (z_inf + T::one()));
        let limit = -(z0 - z_inf) * dw / (w_inf - w_inf.conj());
        let cap = limit.norm();
        Ok(Self {
            alpha,
            z0,
            z_inf,
            w0,
            cap,
            e_alpha: cis(alpha),
            w_inf,
            b_inf_phase: limit.conj() / cap,
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    /// `z₀ = i·tan(α/2)`, the image of `u = 0`.
    pub fn z0(&self) -> Cx<T> {
        self.z0
    }

    /// `z_∞ = z̄₀`, the image of `u = ∞`.
    pub fn z_inf(&self) -> Cx<T> {
        self.z_inf
    }

    /// `w₀ = w(z₀) = e^{i(π-α)/2}`.
    pub fn w0(&self) -> Cx<T> {
        self.w0
    }

    /// Logarithmic capacity of the arc.
    pub fn cap(&self) -> T {
        self.cap
    }

    pub fn tan_quarter(&self) -> T {
        (self.alpha / T::lit(4.0)).tan()
    }

    pub fn cot_quarter(&self) -> T {
        T::one() / self.tan_quarter()
    }

    /// True when `u` lies on the closed arc `A_α` (within a relative tolerance).
    pub fn on_arc(&self, u: Cx<T>) -> bool {
        let tol = chart_tol::<T>();
        (u.norm() - T::one()).abs() <= tol && u.arg().abs() <= self.alpha + tol
    }

    /// Rejects points on the closed arc.
    pub fn check_u(&self, u: &ChartPoint<T>) -> Result<Option<Cx<T>>> {
        let value = u.expect(Chart::U)?;
        if let Some(v) = value {
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(Error::Domain("non-finite u".into()));
            }
            if self.on_arc(v) {
                return Err(Error::OnBoundary(format!(
                    "u = {} lies on the arc",
                    crate::scalar::format_complex(v)
                )));
            }
        }
        Ok(value)
    }

    /// `z(u) = (z₀ - u·z̄₀)/(1 - u)` for finite `u ≠ 1`.
    #[inline]
    pub fn z_of_u(&self, u: Cx<T>) -> Cx<T> {
        (self.z0 - u * self.z_inf) / (Cx::<T>::one() - u)
    }

    /// `u(z) = (z - z₀)/(z - z̄₀)` for finite `z ≠ z̄₀`.
    #[inline]
    pub fn u_of_z(&self, z: Cx<T>) -> Cx<T> {
        (z - self.z0) / (z - self.z_inf)
    }

    /// `λ(u)` for finite `u`, root chosen in the sector.
    #[inline]
    pub fn lambda_of_u(&self, u: Cx<T>) -> Cx<T> {
        let ratio = (u * self.e_alpha - T::one()) / (u - self.e_alpha);
        quarter_root(ratio)
    }

    /// `λ(∞) = e^{iα/4}`.
    pub fn lambda_at_infinity(&self) -> Cx<T> {
        quarter_root(self.e_alpha)
    }

    pub fn z_from_u(&self, u: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        Ok(match u.expect(Chart::U)? {
            None => ChartPoint::z(self.z_inf),
            Some(v) if v == Cx::<T>::one() => ChartPoint::z_infinity(),
            Some(v) => ChartPoint::z(self.z_of_u(v)),
        })
    }

    pub fn u_from_z(&self, z: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        Ok(match z.expect(Chart::Z)? {
            None => ChartPoint::u(Cx::<T>::one()),
            Some(v) if v == self.z_inf => ChartPoint::u_infinity(),
            Some(v) => ChartPoint::u(self.u_of_z(v)),
        })
    }

    pub fn lambda_from_u(&self, u: &ChartPoint<T>) -> Result<ChartPoint<T>> {
        let lam = match u.expect(Chart::U)? {
            None => self.lambda_at_infinity(),
            Some(v) => {
                let tol = chart_tol::<T>();
                if (v - self.e_alpha).norm() <= tol || (v - self.e_alpha.conj()).norm() <= tol {
                    return Err(Error::OnBoundary("u is an arc endpoint".into()));
                }
                self.lambda_of_u(v)
            }
        };
        ChartPoint::lambda(lam)
    }

    /// Half-plane image of a `u` point, with `u = 1` (`z = ∞`) sent to `w = 1`.
    fn w_of_u_point(&self, u: Option<Cx<T>>) -> Cx<T> {
        match u {
            None => self.w_inf,
            Some(v) if v == Cx::<T>::one() => Cx::<T>::one(),
            Some(v) => w_of_z(self.z_of_u(v)),
        }
    }

    /// `g_{Ω_α}(u, ∞)` for finite `u`.
    pub fn green_infinity(&self, u: Cx<T>) -> T {
        green_halfplane(self.w_of_u_point(Some(u)), self.w_inf)
    }

    /// `b_{Ω_α}(u, ∞)`, normalized so that `u·b(u, ∞) → cap`.
    pub fn b_infinity(&self, u: Cx<T>) -> Cx<T> {
        if u == Cx::<T>::one() {
            let w = Cx::<T>::one();
            return self.b_inf_phase * (w - self.w_inf) / (w - self.w_inf.conj());
        }
        let z = self.z_of_u(u);
        let w = w_of_z(z);
        // w - η = (w² - η²)/(w + η) with z - z̄₀ = (z₀ - z̄₀)/(1 - u), free of cancellation near u = ∞
        let two = T::lit(2.0);
        let num = (self.z0 - self.z_inf) * two
            / ((Cx::<T>::one() - u) * (z + T::one()) * (self.z_inf + T::one()) * (w + self.w_inf));
        self.b_inf_phase * num / (w - self.w_inf.conj())
    }

    /// `g_{Ω_α}(u, u1)`; `+∞` when the points coincide.
    pub fn green_omega_alpha(&self, u: &ChartPoint<T>, u1: &ChartPoint<T>) -> Result<T> {
        let a = u.expect(Chart::U)?;
        let b = u1.expect(Chart::U)?;
        if a == b {
            return Ok(T::infinity());
        }
        Ok(green_halfplane(self.w_of_u_point(a), self.w_of_u_point(b)))
    }

    /// `b_{Ω_α}(u, u1)`. For `u1 = ∞` the phase is normalized at infinity;
    /// otherwise it is the half-plane Blaschke factor transported by the charts.
    pub fn b_omega_alpha(&self, u: &ChartPoint<T>, u1: &ChartPoint<T>) -> Result<Cx<T>> {
        let a = u.expect(Chart::U)?;
        let b = u1.expect(Chart::U)?;
        match (a, b) {
            (None, None) => Ok(Cx::<T>::zero()),
            (Some(v), None) => Ok(self.b_infinity(v)),
            _ => {
                let w = self.w_of_u_point(a);
                let w1 = self.w_of_u_point(b);
                Ok((w - w1) / (w - w1.conj()))
            }
        }
    }
}

/// Fourth root with argument `arg(r)/4`, `arg ∈ (-π, π]`.
#[inline]
fn quarter_root<T: Real>(r: Cx<T>) -> Cx<T> {
    let modulus = r.norm().sqrt().sqrt();
    let theta = r.im.atan2(r.re) / T::lit(4.0);
    Complex::from_polar(modulus, theta)
}

/// `w(z) = i·sqrt(-(z - 1)/(z + 1))` for finite `z ≠ -1`.
///
/// On the slits `A₀` this returns the one-sided value `w ≥ 0` or `w ≤ 0`
/// according to the sign of `Im z` (zero counts as the lower side for
/// `z > 1`); interior evaluation should go through [`w_from_z`].
#[inline]
pub fn w_of_z<T: Real>(z: Cx<T>) -> Cx<T> {
    imag_unit::<T>() * (-(z - T::one()) / (z + T::one())).sqrt()
}

/// Inverse of [`w_of_z`]: `z = (1 + w²)/(1 - w²)`.
#[inline]
pub fn z_of_w<T: Real>(w: Cx<T>) -> Cx<T> {
    let w2 = w * w;
    (Cx::<T>::one() + w2) / (Cx::<T>::one() - w2)
}

/// True when `z` lies on `A₀ = R \ (-1, 1)`.
pub fn on_slits<T: Real>(z: Cx<T>) -> bool {
    let tol = chart_tol::<T>();
    z.im.abs() <= tol * (T::one() + z.norm()) && z.re.abs() >= T::one() - tol
}

pub fn w_from_z<T: Real>(z: &ChartPoint<T>) -> Result<ChartPoint<T>> {
    let v = z.expect_finite(Chart::Z)?;
    if on_slits(v) {
        return Err(Error::OnBoundary(format!(
            "z = {} lies on the slits R \\ (-1, 1)",
            crate::scalar::format_complex(v)
        )));
    }
    ChartPoint::w(w_of_z(v))
}

/// `b_{C₊}(w, w1) = (w - w1)/(w - w̄1)`.
pub fn blaschke_halfplane<T: Real>(w: Cx<T>, w1: Cx<T>) -> Result<Cx<T>> {
    let den = w - w1.conj();
    if den.norm() <= T::min_positive_value() {
        return Err(Error::SingularLocus("w coincides with the reflected pole".into()));
    }
    Ok((w - w1) / den)
}

/// `g_{C₊}(w, w1) = -log|b_{C₊}(w, w1)|`.
#[inline]
pub fn green_halfplane<T: Real>(w: Cx<T>, w1: Cx<T>) -> T {
    ((w - w1.conj()).norm() / (w - w1).norm()).ln()
}

/// `g_{Ω₀}(z, z1)` by transport through the half-plane chart.
pub fn green_omega0<T: Real>(z: Cx<T>, z1: Cx<T>) -> T {
    if z == z1 {
        return T::infinity();
    }
    green_halfplane(w_of_z(z), w_of_z(z1))
}

/// `b_{Ω₀}(z, z1)`, up to the unimodular constant fixed by the chart.
pub fn b_omega0<T: Real>(z: Cx<T>, z1: Cx<T>) -> Cx<T> {
    let w = w_of_z(z);
    let w1 = w_of_z(z1);
    (w - w1) / (w - w1.conj())
}

/// Circle through `z` and `z̄` with respect to which `Ω₀` is symmetric.
///
/// Such circles are centered on the real axis with `r² = c² - 1`; the
/// reflection `x ↦ c + r²/(x - c)` swaps `±1`. When `Re z = 0` the circle
/// degenerates to the imaginary axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryCircle<T> {
    pub center: T,
    pub radius: T,
    /// Intersection with `(-1, 1)`.
    pub x0: T,
    pub degenerate: bool,
}

impl<T: Real> SymmetryCircle<T> {
    /// Reflection (anti-conformal inversion) through the circle.
    pub fn reflect(&self, z: Cx<T>) -> Cx<T> {
        if self.degenerate {
            -z.conj()
        } else {
            real(self.center) + real(self.radius * self.radius) / (z.conj() - self.center)
        }
    }

    pub fn contains(&self, z: Cx<T>, tol: T) -> bool {
        if self.degenerate {
            z.re.abs() <= tol
        } else {
            ((z - self.center).norm() - self.radius).abs() <= tol * (T::one() + self.radius)
        }
    }
}

pub fn symmetry_circle<T: Real>(z_u0: Cx<T>) -> Result<SymmetryCircle<T>> {
    if on_slits(z_u0) {
        return Err(Error::OnBoundary("symmetry circle of a slit point".into()));
    }
    let scale = T::one() + z_u0.norm();
    if z_u0.re.abs() <= chart_tol::<T>() * scale {
        return Ok(SymmetryCircle {
            center: T::infinity(),
            radius: T::infinity(),
            x0: T::zero(),
            degenerate: true,
        });
    }
    let center = (z_u0.norm_sqr() + T::one()) / (T::lit(2.0) * z_u0.re);
    if center.abs() <= T::one() {
        return Err(Error::Certification(format!(
            "symmetry circle center {center} inside [-1, 1]"
        )));
    }
    let radius = (center * center - T::one()).sqrt();
    let x0 = center - center.signum() * radius;
    Ok(SymmetryCircle { center, radius, x0, degenerate: false })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn geom(alpha: f64) -> ArcGeometry<f64> {
        ArcGeometry::new(alpha).unwrap()
    }

    #[test]
    fn rejects_bad_angles() {
        assert!(ArcGeometry::new(0.0).is_err());
        assert!(ArcGeometry::new(PI).is_err());
        assert!(ArcGeometry::new(-1.0).is_err());
        assert!(ArcGeometry::new(f64::NAN).is_err());
    }

    #[test]
    fn chart_constants() {
        let g = geom(1.2);
        assert_eq!(g.z0().re, 0.0);
        assert!(g.z0().im > 0.0);
        assert_relative_eq!(g.w0().norm(), 1.0, epsilon = 1e-15);
        assert!(g.w0().im > 0.0);
        assert_relative_eq!(g.cap(), (0.6f64).sin(), epsilon = 1e-14);
    }

    #[test]
    fn u_of_z_special_points() {
        let g = geom(1.1);
        assert!(g.u_of_z(g.z0()).norm() < 1e-15);
        let em = g.u_of_z(Complex::new(-1.0, 0.0));
        assert!((em - cis(1.1)).norm() < 1e-14);
        let ep = g.u_of_z(Complex::new(1.0, 0.0));
        assert!((ep - cis(-1.1)).norm() < 1e-14);
        let at_inf = g.u_from_z(&ChartPoint::z(g.z_inf())).unwrap();
        assert!(at_inf.is_infinite());
        let back = g.z_from_u(&ChartPoint::u_infinity()).unwrap();
        assert_eq!(back.value(), Some(g.z_inf()));
    }

    #[test]
    fn wrong_chart_is_rejected() {
        let g = geom(1.0);
        let z = ChartPoint::z(Complex::new(0.1, 0.2));
        assert!(matches!(g.z_from_u(&z), Err(Error::WrongChart { .. })));
        assert!(matches!(g.lambda_from_u(&z), Err(Error::WrongChart { .. })));
        let u = ChartPoint::u(Complex::new(0.1, 0.2));
        assert!(matches!(w_from_z(&u), Err(Error::WrongChart { .. })));
    }

    #[test]
    fn w_chart_values() {
        let g = geom(0.9);
        let w = w_from_z(&ChartPoint::z(Complex::new(0.0, 0.0))).unwrap();
        assert!((w.value().unwrap() - Complex::i()).norm() < 1e-15);
        let w0 = w_of_z(g.z0());
        assert!((w0 - g.w0()).norm() < 1e-14);
        for k in 3..9 {
            let y = 10f64.powi(k);
            let w = w_of_z(Complex::new(0.0, y));
            assert!(w.im > 0.0);
            assert!((w - 1.0).norm() < 4.0 / y);
        }
        assert!(matches!(
            w_from_z(&ChartPoint::z(Complex::new(2.0, 0.0))),
            Err(Error::OnBoundary(_))
        ));
    }

    #[test]
    fn lambda_special_values() {
        let alpha = 1.3;
        let g = geom(alpha);
        let l0 = g.lambda_of_u(Complex::new(0.0, 0.0));
        assert!((l0 - cis(-alpha / 4.0)).norm() < 1e-15);
        let linf = g.lambda_from_u(&ChartPoint::u_infinity()).unwrap();
        assert!((linf.value().unwrap() - cis(alpha / 4.0)).norm() < 1e-15);
        for k in 0..20 {
            let theta = alpha + (PI - alpha) * (k as f64 + 0.5) / 20.0;
            for sign in [1.0, -1.0] {
                let lam = g.lambda_of_u(cis(sign * theta));
                assert!(lam.re > 0.0);
                assert!(lam.im.abs() < 1e-12, "{lam}");
            }
        }
        assert!(g.lambda_from_u(&ChartPoint::u(cis(alpha))).is_err());
    }

    #[test]
    fn lambda_agrees_with_half_plane_chart() {
        let g = geom(2.0);
        for &(re, im) in &[(0.3, 0.1), (-0.5, 0.7), (2.0, -1.0), (-3.0, 0.2), (0.1, -0.1)] {
            let u = Complex::new(re, im);
            let lam = g.lambda_of_u(u);
            let w = w_of_z(g.z_of_u(u));
            assert!((lam * lam - (-Complex::<f64>::i() * w)).norm() < 1e-13);
        }
    }

    #[test]
    fn blaschke_half_plane() {
        let w1 = Complex::new(0.3, 0.8);
        assert_eq!(blaschke_halfplane(w1, w1).unwrap(), Complex::new(0.0, 0.0));
        let b = blaschke_halfplane(Complex::new(1.7, 0.0), w1).unwrap();
        assert_relative_eq!(b.norm(), 1.0, epsilon = 1e-15);
        assert!(blaschke_halfplane(w1.conj(), w1).is_err());
        let g = geom(FRAC_PI_2);
        let b = blaschke_halfplane(g.w0(), Complex::i()).unwrap();
        assert_relative_eq!(b.norm(), 0.41421356237309503, epsilon = 1e-14);
    }

    #[test]
    fn green_omega0_values() {
        for alpha in [0.4, 1.0, FRAC_PI_2, 2.5] {
            let g = geom(alpha);
            let val = green_omega0(g.z0(), g.z_inf());
            assert_relative_eq!(val, -(alpha / 2.0).sin().ln(), epsilon = 1e-13);
            assert_relative_eq!(val, -g.cap().ln(), epsilon = 1e-13);
            let b = b_omega0(g.z0(), Complex::new(0.0, 0.0));
            assert_relative_eq!(b.norm(), (alpha / 4.0).tan(), epsilon = 1e-13);
        }
        // vanishes toward the slits
        let z1 = Complex::new(0.2, 0.5);
        assert!(green_omega0(Complex::new(1.5, 1e-9), z1) < 1e-8);
        assert!(green_omega0(Complex::new(0.5, 0.0), z1) > 0.0);
    }

    #[test]
    fn green_omega_alpha_values() {
        let g = geom(FRAC_PI_2);
        let zero = ChartPoint::u(Complex::new(0.0, 0.0));
        let inf = ChartPoint::u_infinity();
        let val = g.green_omega_alpha(&zero, &inf).unwrap();
        assert_relative_eq!(val, -(FRAC_PI_2 / 2.0).sin().ln(), epsilon = 1e-13);
        assert_eq!(g.green_omega_alpha(&inf, &inf).unwrap(), f64::INFINITY);
        let u = Complex::new(0.4, 0.3);
        let b = g.b_infinity(u);
        let bc = g.b_infinity(u.conj());
        assert!((bc - b.conj()).norm() < 1e-14);
    }

    #[test]
    fn capacity_is_the_limit_of_u_b() {
        for alpha in [0.3, 1.0, FRAC_PI_2, 2.9] {
            let g = geom(alpha);
            let mut prev = None;
            for k in 3..=8 {
                let u = Complex::new(10f64.powi(k), 0.0) * cis(0.7);
                let val = u * g.b_infinity(u);
                assert!(val.im.abs() < 10f64.powi(1 - k) * val.re);
                if let Some(p) = prev {
                    let p: f64 = p;
                    assert!((val.norm() - p).abs() < 10f64.powi(1 - k));
                }
                prev = Some(val.norm());
            }
            assert_relative_eq!(prev.unwrap(), g.cap(), epsilon = 1e-7);
            assert_relative_eq!(g.cap(), (alpha / 2.0).sin(), epsilon = 1e-14);
        }
    }

    #[test]
    fn symmetry_circle_examples() {
        let c = symmetry_circle(Complex::new(0.0, 0.7)).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.x0, 0.0);
        let c = symmetry_circle(Complex::new(0.5, 0.5)).unwrap();
        assert_relative_eq!(c.center, 1.5, epsilon = 1e-15);
        assert_relative_eq!(c.radius, 1.25f64.sqrt(), epsilon = 1e-15);
        assert_relative_eq!(c.x0, 0.3819660112501051, epsilon = 1e-14);
        let m = c.reflect(Complex::new(-1.0, 0.0));
        assert!((m - Complex::new(1.0, 0.0)).norm() < 1e-14);
        let fixed = c.reflect(Complex::new(c.x0, 0.0));
        assert!((fixed - c.x0).norm() < 1e-14);
        assert!(c.contains(Complex::new(0.5, 0.5), 1e-14));
    }

    #[test]
    fn symmetry_circle_matches_half_plane_picture() {
        let z = Complex::new(-0.3, 0.45);
        let c = symmetry_circle(z).unwrap();
        let wz = w_of_z(z);
        let wx = w_of_z(Complex::new(c.x0, 0.0));
        assert!((wx - Complex::new(0.0, wz.norm())).norm() < 1e-13);
        assert!((w_of_z(z.conj()) + wz.conj()).norm() < 1e-13);
    }

    #[test]
    fn f32_closed_forms() {
        let g = ArcGeometry::<f32>::new(1.0).unwrap();
        assert!((g.cap() - 0.5f32.sin()).abs() < 1e-6);
        let val = green_omega0(g.z0(), g.z_inf());
        assert!((val + g.cap().ln()).abs() < 1e-5);
    }
}
