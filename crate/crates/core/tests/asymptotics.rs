mod common;

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use arc_widom::asymptotics::*;
use arc_widom::conformal::{ArcGeometry, ChartPoint};
use arc_widom::Error;
use common::*;
use num_complex::Complex;
use proptest::prelude::*;

fn skip_locus<T>(r: arc_widom::Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(Error::SingularLocus(_)) => None,
        Err(e) => panic!("unexpected error {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn diagonal_equals_kernel(a in alpha(), z in disc_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        let p = ChartPoint::u(z);
        let f = LimitFunction::new(g, p).unwrap();
        let k = kernel_k(&p, &p, &g).unwrap();
        prop_assert!(k.im.abs() < 1e-14);
        prop_assert!((f.value_at_u0().unwrap() - k.re).abs() < 1e-12 * k.re);
        prop_assert!(f.eval(&p).unwrap().im.abs() < 1e-12);
    }

    #[test]
    fn three_charts_agree(a in alpha(), z0 in disc_point(1e-3), z in omega_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        let (p0, p) = (ChartPoint::u(z0), ChartPoint::u(z));
        let lam = skip_locus(limit_p_u0(&p, &p0, &g));
        let slit = skip_locus(limit_general_u0_zchart(&p, &p0, &g));
        let half = skip_locus(limit_wchart(&p, &p0, &g));
        if let (Some(lam), Some(slit), Some(half)) = (lam, slit, half) {
            prop_assert!((lam.norm() - slit.norm()).abs() < 1e-10);
            prop_assert!((lam.norm() - half.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn origin_transport_matches_infinity_form(a in alpha(), z in omega_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        let star = ChartPoint::u(Complex::new(1.0, 0.0) / z.conj());
        let at_origin = skip_locus(limit_p_u0(&ChartPoint::u(z), &u(0.0, 0.0), &g));
        let inf = skip_locus(limit_p_infty(&star, &g));
        if let (Some(x), Some(y)) = (at_origin, inf) {
            prop_assert!((x.norm() - y.norm()).abs() < 1e-10);
        }
    }

    #[test]
    fn lambda_form_at_infinity_is_the_infinity_limit(a in alpha(), z in omega_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        let p = ChartPoint::u(z);
        let x = skip_locus(limit_p_u0(&p, &ChartPoint::u_infinity(), &g));
        let y = skip_locus(limit_p_infty(&p, &g));
        if let (Some(x), Some(y)) = (x, y) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn kernel_is_hermitian(a in alpha(), z in omega_point(1e-3), z0 in omega_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        let (p, p0) = (ChartPoint::u(z), ChartPoint::u(z0));
        let k = kernel_k(&p, &p0, &g).unwrap();
        let kt = kernel_k(&p0, &p, &g).unwrap();
        prop_assert!((k - kt.conj()).norm() <= 1e-15 * (1.0 + k.norm()));
    }

    #[test]
    fn envelope_limit_is_reflection_invariant(a in alpha(), z in disc_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        let star = ChartPoint::u(Complex::new(1.0, 0.0) / z.conj());
        let inner = limit_envelope(&ChartPoint::u(z), &g).unwrap();
        let outer = limit_envelope(&star, &g).unwrap();
        prop_assert!((inner - outer).abs() < 1e-12);
        prop_assert!((0.5 - 1e-15..=1.0).contains(&inner));
    }

    #[test]
    fn limit_modulus_is_bounded_by_one(a in alpha(), z0 in omega_point(1e-3), z in omega_point(1e-3)) {
        let g = ArcGeometry::new(a).unwrap();
        if let Some(v) = skip_locus(limit_p_u0(&ChartPoint::u(z), &ChartPoint::u(z0), &g)) {
            prop_assert!(v.norm() <= 1.0 + 1e-12);
        }
    }
}

#[test]
fn trig_identity_over_alpha_grid() {
    for i in 1..200 {
        let a = PI * i as f64 / 200.0;
        let g = ArcGeometry::new(a).unwrap();
        let lhs = g.tan_quarter() / g.cap();
        let rhs = 1.0 / (2.0 * (a / 4.0).cos().powi(2));
        assert!((lhs - rhs).abs() < 1e-12, "α = {a}");
        let diag = limit_envelope(&u(0.0, 0.0), &g).unwrap();
        assert!((diag - rhs).abs() < 1e-12, "α = {a}");
    }
}

#[test]
fn complementary_arc_has_half_diagonal() {
    let g = quarter();
    for j in 0..20 {
        let theta = FRAC_PI_2 + (PI - FRAC_PI_2) * (j as f64 + 0.5) / 20.0;
        for t in [theta, -theta] {
            let p = polar(1.0, t);
            assert!((limit_envelope(&p, &g).unwrap() - 0.5).abs() < 1e-12);
            assert!((kernel_k(&p, &p, &g).unwrap() - 0.5).norm() < 1e-12);
        }
    }
}

#[test]
fn infinity_value_matches_norm_constant() {
    let g = quarter();
    let v = limit_p_infty(&ChartPoint::u_infinity(), &g).unwrap();
    assert!((v.re - (2.0 - SQRT_2)).abs() < 1e-14);
    assert!(v.im.abs() < 1e-15);
    let raw = widom_szego_origin(&u(0.0, 0.0), &g).unwrap();
    assert!((raw.norm() - g.tan_quarter() / g.cap()).abs() < 1e-14);
}

#[test]
fn s_is_normalized_and_squares_correctly() {
    let g = quarter();
    let z0 = g.z0();
    assert!((s_z(z0, &g).unwrap() - 1.0).norm() < 1e-15);
    for z in [Complex::new(0.3, 0.4), Complex::new(-2.0, -1.0), Complex::new(0.0, -3.0)] {
        let s = s_z(z, &g).unwrap();
        let expect = (z0 * z0 - 1.0) / (z0 * z0) * z * z / (z * z - 1.0);
        assert!((s * s - expect).norm() < 1e-14 * expect.norm());
    }
}

#[test]
fn removable_point_is_finite_and_continuous() {
    let g = quarter();
    let at = limit_p_infty(&u(0.0, 0.0), &g).unwrap();
    for d in [1e-4, 1e-6] {
        let near = limit_p_infty(&u(d, -d), &g).unwrap();
        assert!((at - near).norm() < 10.0 * d);
    }
}

#[test]
fn singular_loci_are_rejected() {
    let g = quarter();
    let z_minus = Complex::new(-1.0, 0.0);
    let u_minus = g.u_of_z(Complex::new(0.0, 1e-10));
    assert!(matches!(widom_szego_origin(&ChartPoint::u(u_minus), &g), Err(Error::SingularLocus(_))));
    assert!(matches!(s_z(z_minus, &g), Err(Error::SingularLocus(_))));
    // λ(0) = conj λ(∞), the removable locus λ² = conj(λ₀)² of the λ form
    assert!(matches!(
        limit_p_u0(&u(0.0, 0.0), &ChartPoint::u_infinity(), &g),
        Err(Error::SingularLocus(_))
    ));
    assert!(matches!(limit_p_u0(&polar(1.0, 0.2), &u(0.0, 0.0), &g), Err(Error::OnBoundary(_))));
}

#[test]
fn kernel_diagonal_tends_to_one_at_the_arc() {
    let g = quarter();
    for theta in [0.0, 0.7, 1.4, -1.2] {
        for side in [1.0, -1.0] {
            let p = polar(1.0 + side * 1e-6, theta);
            let e = envelope_limit(&p, 7, &g).unwrap();
            assert!((e.kernel_diag - 1.0).abs() < 1e-3);
            assert!(e.green < 1e-2);
            assert!((e.value - 1.0).abs() < 2e-2);
        }
    }
}

#[test]
fn limit_modulus_on_the_arc_is_not_one() {
    // |F| stays below one up to the arc: on λ² = it it equals
    // ½·|it + λ₀²|²/|it + |λ₀|²|², which is not unimodular
    let g = quarter();
    let f = LimitFunction::new(g, u(0.0, 0.0)).unwrap();
    let near = Complex::from_polar(1.0 - 1e-9, 1.0);
    let v = f.eval(&ChartPoint::u(near)).unwrap().norm();
    let lam = g.lambda_of_u(near);
    let l0 = f.lambda0() * f.lambda0();
    let l = lam * lam;
    let expect = 0.5 * ((l + l0).norm() / (l + l0.norm()).norm()).powi(2);
    assert!((v - expect).abs() < 1e-12);
    assert!(l.re.abs() < 1e-6);
    assert!(v < 0.9);
}

#[test]
fn thiran_detaille_examples() {
    let g = quarter();
    assert!((thiran_detaille_norm(10, &g) - 0.0533470869120796).abs() < 1e-15);
    let near_full = ArcGeometry::new(PI - 1e-9).unwrap();
    assert!((thiran_detaille_norm(3, &near_full) - 1.0).abs() < 1e-8);
}

#[test]
fn envelope_limit_rejects_infinity() {
    assert!(matches!(envelope_limit(&ChartPoint::u_infinity(), 3, &quarter()), Err(Error::Domain(_))));
}

#[test]
fn single_precision_evaluators() {
    let g = ArcGeometry::<f32>::new(std::f32::consts::FRAC_PI_2).unwrap();
    let p = ChartPoint::u(Complex::new(0.0f32, 0.0));
    let d = limit_envelope(&p, &g).unwrap();
    assert!((d - (2.0 - std::f32::consts::SQRT_2)).abs() < 1e-6);
    let f = LimitFunction::new(g, ChartPoint::u(Complex::new(0.3f32, 0.1))).unwrap();
    assert!(f.eval(&ChartPoint::u(Complex::new(-0.2f32, 0.5))).unwrap().norm() <= 1.0);
}
