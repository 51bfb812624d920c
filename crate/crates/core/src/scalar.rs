//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All math is written against [`Real`] so the closed-form pieces run in
//! `f32` as well as `f64`. The iterative solvers are only tuned for `f64`;
//! their tolerances scale with [`Float::epsilon`] but `f32` gives little
//! headroom on the harder problems.

use std::fmt;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point type usable by the crate (`f32`, `f64`).
pub trait Real:
    'static
    + Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Send
    + Sync
    + fmt::Debug
    + fmt::Display
    + fmt::LowerExp
{
    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

#[inline]
pub(crate) fn cx<T: Real>(re: T, im: T) -> Cx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Cx<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn imag_unit<T: Real>() -> Cx<T> {
    Complex::new(T::zero(), T::one())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> Cx<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Formats a complex number as `a+bi` with 17 significant digits.
pub fn format_complex<T: Real>(z: Cx<T>) -> String {
    let re = z.re.to_f64_lossy();
    let im = z.im.to_f64_lossy();
    let sign = if im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}i", re, sign, im.abs())
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i`, `-i` (and `inf` → `None`).
///
/// Mantissas may carry exponents (`1.5e-3+2e1i`).
pub fn parse_complex(text: &str) -> Result<Option<Complex<f64>>, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let lower = s.to_ascii_lowercase();
    if lower == "inf" || lower == "infinity" || lower == "∞" {
        return Ok(None);
    }
    let bad = || format!("malformed complex literal '{text}'");
    if let Some(body) = lower.strip_suffix('i') {
        // find the split between real and imaginary parts: last +/- not
        // at position 0 and not following an exponent marker
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && bytes[idx - 1] != b'e' {
                split = Some(idx);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            re_part.parse::<f64>().map_err(|_| bad())?
        };
        if !re.is_finite() || !im.is_finite() {
            return Err(bad());
        }
        Ok(Some(Complex::new(re, im)))
    } else {
        let re = lower.parse::<f64>().map_err(|_| bad())?;
        if !re.is_finite() {
            return Err(bad());
        }
        Ok(Some(Complex::new(re, 0.0)))
    }
}
