#![allow(dead_code)]

use std::f64::consts::{FRAC_PI_2, PI};

use arc_widom::conformal::{ArcGeometry, ChartPoint};
use num_complex::Complex;
use proptest::prelude::*;

pub fn quarter() -> ArcGeometry<f64> {
    ArcGeometry::new(FRAC_PI_2).unwrap()
}

pub fn u(re: f64, im: f64) -> ChartPoint<f64> {
    ChartPoint::u(Complex::new(re, im))
}

pub fn polar(r: f64, theta: f64) -> ChartPoint<f64> {
    ChartPoint::u(Complex::from_polar(r, theta))
}

/// Points of `Ω_α` at least `gap` away from the unit circle in modulus.
pub fn omega_point(gap: f64) -> impl Strategy<Value = Complex<f64>> {
    let inside = (0.0..1.0 - gap, -PI..PI);
    let outside = (1.0 + gap..4.0, -PI..PI);
    prop_oneof![inside, outside].prop_map(|(r, t)| Complex::from_polar(r, t))
}

pub fn disc_point(gap: f64) -> impl Strategy<Value = Complex<f64>> {
    (0.0..1.0 - gap, -PI..PI).prop_map(|(r, t)| Complex::from_polar(r, t))
}

pub fn alpha() -> impl Strategy<Value = f64> {
    0.1..3.0f64
}
