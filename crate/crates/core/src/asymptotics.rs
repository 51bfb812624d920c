//! Closed-form limits as `n → ∞`.
//!
//! With `b(u) = b_{Ω_α}(u, ∞)` and `P_{n,u₀}` the extremal polynomial for the
//! envelope at `u₀`, the products `b(u)ⁿ·P_{n,u₀}(u)` converge to explicit
//! functions of `λ(u)`. The same function is available in three charts:
//!
//! * [`limit_p_u0`]: the `λ` form,
//! * [`limit_general_u0_zchart`]: the slit-plane form built from the
//!   symmetry circle through `z(u₀)`,
//! * [`limit_wchart`]: the half-plane form.
//!
//! All three are normalized so the value at `u₀` is real and positive.
//! [`kernel_k`] is the reproducing kernel of the sector, whose diagonal is the
//! limit of `e^{-n·g(u,∞)}·L_n(u)`.

use num_traits::One;

use crate::conformal::{symmetry_circle, w_of_z, ArcGeometry, ChartPoint};
use crate::error::{Error, Result};
use crate::scalar::{cx, real, Cx, Real};

/// Distance to a removable or polar locus below which evaluators refuse.
fn locus_tol<T: Real>() -> T {
    T::lit(1e-8).max(T::epsilon().sqrt())
}

fn singular(what: &str) -> Error {
    Error::SingularLocus(what.to_string())
}

fn lambda_at<T: Real>(geom: &ArcGeometry<T>, u: &ChartPoint<T>) -> Result<Cx<T>> {
    geom.check_u(u)?;
    geom.lambda_from_u(u)?
        .value()
        .ok_or_else(|| Error::Domain("λ chart has no point at infinity".into()))
}

/// `z(u)`, with `u = ∞` sent to `z̄₀`.
fn z_at<T: Real>(geom: &ArcGeometry<T>, u: &ChartPoint<T>) -> Result<Cx<T>> {
    match geom.check_u(u)? {
        None => Ok(geom.z_inf()),
        Some(v) => Ok(geom.z_of_u(v)),
    }
}

fn unit_phase<T: Real>(raw: Cx<T>) -> Result<Cx<T>> {
    let r = raw.norm();
    if !(r > T::zero() && r.is_finite()) {
        return Err(singular("limit function vanishes or blows up at its own u₀"));
    }
    Ok(raw.conj() / r)
}

/// Which closed form a [`LimitFunction`] evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitForm {
    Lambda,
    SlitPlane,
    HalfPlane,
}

/// `lim b(u,∞)ⁿ·P_{n,u₀}(u)` with the free unimodular constant fixed by
/// positivity at `u₀`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitFunction<T> {
    geom: ArcGeometry<T>,
    u0: ChartPoint<T>,
    form: LimitForm,
    lambda0: Cx<T>,
    z_u0: Cx<T>,
    x0: T,
    phase: Cx<T>,
}

impl<T: Real> LimitFunction<T> {
    /// Any `u₀ ∈ Ω_α`, including `∞`. Points outside the unit disc are
    /// covered by `λ(u*) = conj λ(u)`, which carries the symmetry relation
    /// `b(u,∞)ⁿP_{n,u₀}(u) = conj(b(u*,∞)ⁿP_{n,u₀*}(u*))` into the formula.
    pub fn new(geom: ArcGeometry<T>, u0: ChartPoint<T>) -> Result<Self> {
        Self::with_form(geom, u0, LimitForm::Lambda)
    }

    pub fn with_form(geom: ArcGeometry<T>, u0: ChartPoint<T>, form: LimitForm) -> Result<Self> {
        let lambda0 = lambda_at(&geom, &u0)?;
        let z_u0 = z_at(&geom, &u0)?;
        let x0 = match form {
            LimitForm::SlitPlane => symmetry_circle(z_u0)?.x0,
            _ => T::zero(),
        };
        let mut f = LimitFunction {
            geom,
            u0,
            form,
            lambda0,
            z_u0,
            x0,
            phase: Cx::<T>::one(),
        };
        f.phase = unit_phase(f.eval_raw(&u0)?)?;
        Ok(f)
    }

    pub fn geometry(&self) -> &ArcGeometry<T> {
        &self.geom
    }

    pub fn u0(&self) -> ChartPoint<T> {
        self.u0
    }

    pub fn form(&self) -> LimitForm {
        self.form
    }

    /// `λ₀ = λ(u₀)`.
    pub fn lambda0(&self) -> Cx<T> {
        self.lambda0
    }

    /// The unimodular factor `e^{iφ}` applied to the raw closed form.
    pub fn phase(&self) -> Cx<T> {
        self.phase
    }

    /// Value at `u₀`; equals the kernel diagonal `k(u₀, u₀)`.
    pub fn value_at_u0(&self) -> Result<T> {
        Ok(self.eval(&self.u0)?.re)
    }

    pub fn eval(&self, u: &ChartPoint<T>) -> Result<Cx<T>> {
        Ok(self.phase * self.eval_raw(u)?)
    }

    /// The displayed closed form before the phase is fixed.
    pub fn eval_raw(&self, u: &ChartPoint<T>) -> Result<Cx<T>> {
        match self.form {
            LimitForm::Lambda => lambda_form(lambda_at(&self.geom, u)?, self.lambda0),
            LimitForm::SlitPlane => slit_form(z_at(&self.geom, u)?, self.z_u0, self.x0),
            LimitForm::HalfPlane => {
                half_plane_form(w_of_z(z_at(&self.geom, u)?), w_of_z(self.z_u0))
            }
        }
    }
}

/// `½(1 + h(λ,λ₀)/h(λ₀,λ₀))·(λ²-|λ₀|²)/(λ²+|λ₀|²)·(λ²+λ₀²)/(λ²-λ̄₀²)`,
/// `h(λ,λ₀) = λ²/((λ²-|λ₀|²)(λ²+|λ₀|²))`.
fn lambda_form<T: Real>(lam: Cx<T>, lam0: Cx<T>) -> Result<Cx<T>> {
    let tol = locus_tol::<T>();
    let l = lam * lam;
    let l0 = lam0 * lam0;
    let m = real(lam0.norm_sqr());
    if (l - m).norm() <= tol {
        return Err(singular("λ² = |λ₀|²"));
    }
    if (l + m).norm() <= tol {
        return Err(singular("λ² = -|λ₀|²"));
    }
    if (l - l0.conj()).norm() <= tol {
        return Err(singular("λ² = conj(λ₀)²"));
    }
    let h = |x: Cx<T>| x / ((x - m) * (x + m));
    let half = T::lit(0.5);
    Ok((Cx::<T>::one() + h(l) / h(l0)) * half * (l - m) / (l + m) * (l + l0) / (l - l0.conj()))
}

/// `½(1 + v(w,w₀)/v(w₀,w₀))·(w - i|w₀|)/(w + i|w₀|)·(w + w₀)/(w + w̄₀)`,
/// `v(w,w₀) = w/((w + i|w₀|)(w - i|w₀|))`.
fn half_plane_form<T: Real>(w: Cx<T>, w0: Cx<T>) -> Result<Cx<T>> {
    let tol = locus_tol::<T>();
    let a = cx(T::zero(), w0.norm());
    if (w - a).norm() <= tol || (w + a).norm() <= tol {
        return Err(singular("w = ±i|w₀|"));
    }
    if (w + w0.conj()).norm() <= tol {
        return Err(singular("w = -conj(w₀)"));
    }
    let v = |x: Cx<T>| x / ((x + a) * (x - a));
    let half = T::lit(0.5);
    Ok((Cx::<T>::one() + v(w) / v(w0)) * half * (w - a) / (w + a) * (w + w0) / (w + w0.conj()))
}

/// `s(z, z_u) = K·(z - x₀)/(w(z)·(z + 1))` with `K` fixed by `s(z_u, z_u) = 1`.
///
/// `w(z)·(z + 1)` is the branch of `sqrt(z² - 1)` analytic off the slits, so
/// `s² = (z_u² - 1)/(z_u - x₀)² · (z - x₀)²/(z² - 1)` and `s` is single valued.
pub fn s_general<T: Real>(z: Cx<T>, z_u: Cx<T>, x0: T) -> Result<Cx<T>> {
    let tol = locus_tol::<T>();
    let one = Cx::<T>::one();
    if (z - one).norm() <= tol || (z + one).norm() <= tol {
        return Err(singular("z = ±1"));
    }
    let k = w_of_z(z_u) * (z_u + one) / (z_u - x0);
    Ok(k * (z - x0) / (w_of_z(z) * (z + one)))
}

/// `s(z)` normalized by `s(z₀) = 1`, `s² = (z₀² - 1)/z₀² · z²/(z² - 1)`.
pub fn s_z<T: Real>(z: Cx<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    s_general(z, geom.z0(), T::zero())
}

/// `(1 + s)/(2s)·b₀(z, x₀)/b₀(z, z̄_u)` on the slit plane.
///
/// `1 + s` and `b₀(z, z̄_u)` both vanish at `z = z̄_u`. Near there the
/// quotient is evaluated in the factored form
/// `1 - s² = C(z - z_u)(z - z̄_u)/((z_u - x₀)²(z² - 1))`, `C = 1 + x₀² - 2x₀z_u`,
/// together with `w - η = 2(z - z̄_u)/((z + 1)(z̄_u + 1)(w + η))`.
fn slit_form<T: Real>(z: Cx<T>, z_u: Cx<T>, x0: T) -> Result<Cx<T>> {
    let tol = locus_tol::<T>();
    let one = Cx::<T>::one();
    let xc = real(x0);
    if (z - xc).norm() <= tol {
        return Err(singular("z = x₀"));
    }
    let s = s_general(z, z_u, x0)?;
    let w = w_of_z(z);
    let wx = w_of_z(xc);
    let b_x0 = (w - wx) / (w - wx.conj());
    let eta = w_of_z(z_u.conj());
    let two = T::lit(2.0);
    if (one + s).norm() >= (one - s).norm() {
        return Ok((one + s) / (s * two) * b_x0 * (w - eta.conj()) / (w - eta));
    }
    let c = one + xc * xc - xc * z_u * two;
    let d = z_u - xc;
    let num = c * (z - z_u) * (z_u.conj() + one) * (w + eta) * (w - eta.conj()) * b_x0;
    Ok(num / (s * (one - s) * d * d * (z - one) * T::lit(4.0)))
}

/// Raw `(1 + s(z))/(2s(z))·b₀(z, 0)/b₀(z, z̄₀)`.
fn widom_szego_z<T: Real>(z: Cx<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    if z.norm() <= locus_tol::<T>() {
        return Err(singular("z = 0"));
    }
    slit_form(z, geom.z0(), T::zero())
}

/// `λ` form of `lim b(u,∞)ⁿ·P_{n,u₀}(u)`, positive at `u₀`.
pub fn limit_p_u0<T: Real>(u: &ChartPoint<T>, u0: &ChartPoint<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    LimitFunction::new(*geom, *u0)?.eval(u)
}

/// `lim b(u,∞)ⁿ·P_{n,∞}(u)` through the slit-plane formula for the origin:
/// the value at `u` is `conj Z(z(u*))` with `Z(z) = (1+s)/(2s)·b₀(z,0)/b₀(z,z̄₀)`
/// and `z(u*) = conj z(u)`. Normalized positive at `u = ∞`, where its
/// modulus is `tan(α/4)/cap`.
pub fn limit_p_infty<T: Real>(u: &ChartPoint<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    let raw = |p: &ChartPoint<T>| -> Result<Cx<T>> {
        Ok(widom_szego_z(z_at(geom, p)?.conj(), geom)?.conj())
    };
    let phase = unit_phase(raw(&ChartPoint::u_infinity())?)?;
    Ok(phase * raw(u)?)
}

/// `Z(z(u))`, the slit-plane limit `lim b(u,∞)ⁿ·P_{n,0}(u)` before normalization.
pub fn widom_szego_origin<T: Real>(u: &ChartPoint<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    widom_szego_z(z_at(geom, u)?, geom)
}

/// Slit-plane form `(1 + s(z,z_{u₀}))/(2s)·b₀(z,x₀)/b₀(z,z̄_{u₀})`, where
/// `x₀` is where the symmetry circle through `z(u₀)` meets `(-1, 1)`.
pub fn limit_general_u0_zchart<T: Real>(
    u: &ChartPoint<T>,
    u0: &ChartPoint<T>,
    geom: &ArcGeometry<T>,
) -> Result<Cx<T>> {
    LimitFunction::with_form(*geom, *u0, LimitForm::SlitPlane)?.eval(u)
}

/// Half-plane form of the same limit, `w₀ = w(z(u₀))`.
pub fn limit_wchart<T: Real>(u: &ChartPoint<T>, u0: &ChartPoint<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    LimitFunction::with_form(*geom, *u0, LimitForm::HalfPlane)?.eval(u)
}

/// `k(u, u₀) = 2λλ̄₀/(λ + λ̄₀)²`.
pub fn kernel_k<T: Real>(u: &ChartPoint<T>, u0: &ChartPoint<T>, geom: &ArcGeometry<T>) -> Result<Cx<T>> {
    let lam = lambda_at(geom, u)?;
    let lam0 = lambda_at(geom, u0)?;
    let den = lam + lam0.conj();
    if den.norm() <= locus_tol::<T>() {
        return Err(singular("λ + conj(λ₀) = 0"));
    }
    Ok(lam * lam0.conj() * T::lit(2.0) / (den * den))
}

/// `L(u) = lim e^{-n·g(u,∞)}·L_n(u) = k(u, u)`.
pub fn limit_envelope<T: Real>(u: &ChartPoint<T>, geom: &ArcGeometry<T>) -> Result<T> {
    let lam = lambda_at(geom, u)?;
    let c = lam.re / lam.norm();
    Ok(T::one() / (T::lit(2.0) * c * c))
}

/// Asymptote of `L_n(u)` and its two ingredients.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnvelopeLimit<T> {
    pub green: T,
    pub kernel_diag: T,
    /// `n·g + log k`.
    pub log_value: T,
    /// `e^{n·g}·k`.
    pub value: T,
}

/// `L_n(u) ∼ e^{n·g(u,∞)}·k(u, u)` for finite `u`.
pub fn envelope_limit<T: Real>(u: &ChartPoint<T>, n: usize, geom: &ArcGeometry<T>) -> Result<EnvelopeLimit<T>> {
    let v = geom
        .check_u(u)?
        .ok_or_else(|| Error::Domain("envelope asymptote needs finite u".into()))?;
    let green = geom.green_infinity(v);
    let kernel_diag = limit_envelope(u, geom)?;
    let log_value = T::from_usize_lossy(n) * green + kernel_diag.ln();
    Ok(EnvelopeLimit {
        green,
        kernel_diag,
        log_value,
        value: log_value.exp(),
    })
}

/// `‖T_n‖ ∼ cot(α/4)·cap^{n+1}`.
pub fn thiran_detaille_norm<T: Real>(n: usize, geom: &ArcGeometry<T>) -> T {
    geom.cot_quarter() * geom.cap().powi(n as i32 + 1)
}
