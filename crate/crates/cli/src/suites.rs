//! Verification suites. Each row carries `computed`, `asymptote` (or the
//! reference value), `ratio = computed/asymptote` and an `error` column that
//! the verdict is judged on.

use std::f64::consts::{PI, TAU};

use arc_widom::asymptotics::{limit_envelope, limit_p_infty, thiran_detaille_norm};
use arc_widom::extremal::star;
use arc_widom::slit::SlitSystem;
use arc_widom::{format_complex, ArcGeometry64, ChartPoint64, Error};
use num_complex::Complex64;

use crate::report::{format_number, Cell, Report, Verdict};
use crate::{try_par_map, CliError, RunConfig, Suite};

const ORIGIN: Complex64 = Complex64::new(0.0, 0.0);

pub fn verify(suite: Suite, cfg: &RunConfig) -> Result<Report, CliError> {
    let mut report = match suite {
        Suite::ThiranDetaille => thiran_detaille(cfg),
        Suite::SzegoWidom => szego_widom(cfg),
        Suite::Kernel => kernel(cfg),
        Suite::FiniteN => finite_n(cfg),
        Suite::Involution => involution(cfg),
        Suite::Subharmonicity => subharmonicity(cfg),
    }?;
    report.command = format!("verify {}", suite.name());
    report.param("alpha", format_number(cfg.geom.alpha()));
    report.param("tol", format_number(cfg.tol));
    Ok(report)
}

fn degree_limit(cfg: &RunConfig, default: usize) -> Result<usize, CliError> {
    let n = cfg.nmax.or(cfg.n).unwrap_or(default);
    cfg.check_grid(n)?;
    Ok(n)
}

fn row(n: usize, u0: Option<Complex64>, computed: f64, asymptote: f64, error: f64) -> Vec<Cell> {
    let mut cells: Vec<Cell> = vec![n.into()];
    if let Some(u) = u0 {
        cells.push(Cell::Text(format_complex(u)));
    }
    cells.extend([computed.into(), asymptote.into(), (computed / asymptote).into(), error.into()]);
    cells
}

const PLAIN: [&str; 5] = ["n", "computed", "asymptote", "ratio", "error"];
const WITH_U0: [&str; 6] = ["n", "u0", "computed", "asymptote", "ratio", "error"];

fn finite_points(cfg: &RunConfig, default: &[Complex64]) -> Result<Vec<Complex64>, CliError> {
    let pts = cfg.u0_or(&default.iter().map(|&z| Some(z)).collect::<Vec<_>>());
    pts.into_iter()
        .map(|p| {
            let z = p.ok_or_else(|| CliError::Input("this suite needs finite --u0 points".into()))?;
            cfg.geom.check_u(&ChartPoint64::u(z))?;
            Ok(z)
        })
        .collect()
}

/// `‖T_n‖` against `cot(α/4)·cap^{n+1}`.
fn thiran_detaille(cfg: &RunConfig) -> Result<Report, CliError> {
    let nmax = degree_limit(cfg, 30)?;
    let ns: Vec<usize> = (nmax.min(4).max(1)..=nmax).collect();
    let solver = cfg.solver();
    let g = cfg.geom;
    let mut r = Report::new("", &PLAIN);
    r.rows = try_par_map(&ns, |&n| {
        let norm = 1.0 / solver.solve(n, Some(ORIGIN))?.value;
        let asym = thiran_detaille_norm(n, &g);
        Ok(row(n, None, norm, asym, (norm / asym - 1.0).abs()))
    })?;
    let last = r.numbers("error").last().copied().unwrap_or(f64::INFINITY);
    r.verdict = Some(Verdict {
        pass: last < 0.05,
        tolerance: 0.05,
        detail: format!("|ratio - 1| at n = {nmax}: {}", format_number(last)),
    });
    Ok(r)
}

fn szego_widom_points() -> Vec<Complex64> {
    let mut pts = Vec::new();
    for (r, m) in [(0.3, 12), (0.5, 13), (2.0, 12), (3.0, 13)] {
        for j in 0..m {
            pts.push(Complex64::from_polar(r, TAU * (j as f64 + 0.25) / m as f64));
        }
    }
    pts
}

/// `|b(u,∞)|ⁿ·|P_{n,0}(u)|` against the limit at `1/ū`, worst point per `n`.
fn szego_widom(cfg: &RunConfig) -> Result<Report, CliError> {
    let nmax = degree_limit(cfg, 30)?;
    let mut ns: Vec<usize> = (5..=nmax).step_by(5).collect();
    if ns.is_empty() {
        ns.push(nmax);
    }
    let g = cfg.geom;
    let pts = szego_widom_points();
    let limits = pts
        .iter()
        .map(|&u| Ok(limit_p_infty(&ChartPoint64::u(1.0 / u.conj()), &g)?.norm()))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let solver = cfg.solver();
    let mut r = Report::new("", &PLAIN);
    r.rows = try_par_map(&ns, |&n| {
        let sol = solver.solve(n, Some(ORIGIN))?;
        let mut worst = (0.0, 1.0, -1.0);
        for (&u, &lim) in pts.iter().zip(&limits) {
            let v = g.b_infinity(u).norm().powi(n as i32) * sol.eval(u).norm();
            let e = (v - lim).abs();
            if e > worst.2 {
                worst = (v, lim, e);
            }
        }
        Ok(row(n, None, worst.0, worst.1, worst.2))
    })?;
    let errs = r.numbers("error");
    let floor = 1e-12;
    let decreasing = errs.windows(2).all(|w| w[1] < w[0] || w[1] <= floor);
    let last = errs.last().copied().unwrap_or(f64::INFINITY);
    r.verdict = Some(Verdict {
        pass: decreasing && last < 0.05,
        tolerance: 0.05,
        detail: format!("max error decreasing: {decreasing}, at n = {}: {}", ns[ns.len() - 1], format_number(last)),
    });
    Ok(r)
}

/// `e^{-n·g(u₀,∞)}·L_n(u₀)` against the kernel diagonal.
fn kernel(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = degree_limit(cfg, 30)?;
    let defaults = [ORIGIN, Complex64::new(0.3, 0.0), Complex64::new(0.0, 0.5), Complex64::new(-0.4, 0.2)];
    let pts = finite_points(cfg, &defaults)?;
    let g = cfg.geom;
    let solver = cfg.solver();
    let mut r = Report::new("", &WITH_U0);
    r.rows = try_par_map(&pts, |&u| {
        let l = solver.solve(n, Some(u))?.value;
        let computed = (-(n as f64) * g.green_infinity(u)).exp() * l;
        let target = limit_envelope(&ChartPoint64::u(u), &g)?;
        Ok(row(n, Some(u), computed, target, (computed / target - 1.0).abs()))
    })?;
    let worst = r.numbers("error").into_iter().fold(0.0, f64::max);
    r.verdict = Some(Verdict {
        pass: worst < 0.03,
        tolerance: 0.03,
        detail: format!("worst relative error {}", format_number(worst)),
    });
    Ok(r)
}

/// Solver value against the slit construction, including the pullback gap.
fn finite_n(cfg: &RunConfig) -> Result<Report, CliError> {
    let nmax = degree_limit(cfg, 10)?;
    let ns: Vec<usize> = (1..=nmax).collect();
    let g = cfg.geom;
    let solver = cfg.solver();
    let rows = try_par_map(&ns, |&n| {
        let s = match SlitSystem::new(g, n) {
            Ok(s) => s,
            Err(Error::TrivialRegime { .. }) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        let q = s.build_qn()?;
        let sol = solver.solve(n, Some(ORIGIN))?;
        let formula = q.product_formula * q.weighted_value / q.attained;
        let pullback = q
            .pullback
            .as_ref()
            .ok_or_else(|| CliError::Numeric(Error::Certification("no pullback".into())))?;
        let mut gap = (sol.value - formula).abs();
        for i in 0..=10 {
            for j in 0..32 {
                let u = Complex64::from_polar(i as f64 / 10.0, TAU * j as f64 / 32.0);
                gap = gap.max((pullback.eval(u).norm() - sol.eval(u).norm()).abs());
            }
        }
        gap = gap.max(q.sup_check - 1.0);
        Ok(Some(row(n, None, sol.value, formula, gap)))
    })?;
    let mut r = Report::new("", &PLAIN);
    r.rows = rows.into_iter().flatten().collect();
    r.param("trivial", (ns.len() - r.rows.len()).to_string());
    let worst = r.numbers("error").into_iter().fold(0.0, f64::max);
    r.verdict = Some(Verdict {
        pass: !r.rows.is_empty() && worst <= 1e-4,
        tolerance: 1e-4,
        detail: format!("worst formula/solver gap {}", format_number(worst)),
    });
    Ok(r)
}

/// `‖P*‖` against `‖P‖` on a grid closed under `θ ↦ -θ`, plus `(P*)* = P`.
fn involution(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(12);
    cfg.check_grid(n)?;
    let pts = cfg.u0_or(&[Some(ORIGIN), Some(Complex64::new(0.3, 0.1)), None]);
    for &u in &pts {
        cfg.geom.check_u(&u.map_or_else(ChartPoint64::u_infinity, ChartPoint64::u))?;
    }
    let alpha = cfg.geom.alpha();
    let mut angles: Vec<f64> = (0..=1000).map(|j| alpha * j as f64 / 1000.0).collect();
    angles.extend(angles.clone().iter().map(|t| -t));
    let solver = cfg.solver();
    let mut r = Report::new("", &WITH_U0);
    let mut exact = true;
    let results = try_par_map(&pts, |&u| {
        let p = solver.solve(n, u)?.poly();
        let s = star(&p, n);
        let back = star(&s, n);
        let np = p.sup_on_angles(&angles);
        let ns = s.sup_on_angles(&angles);
        Ok((u, np, ns, back.coeffs() == p.coeffs()))
    })?;
    for (u, np, ns, same) in results {
        exact &= same;
        let label = u.map_or_else(|| "inf".to_string(), format_complex);
        r.rows.push(vec![n.into(), Cell::Text(label), ns.into(), np.into(), (ns / np).into(), (ns - np).abs().into()]);
    }
    let worst = r.numbers("error").into_iter().fold(0.0, f64::max);
    r.verdict = Some(Verdict {
        pass: exact && worst <= 1e-12,
        tolerance: 1e-12,
        detail: format!("star twice is the identity: {exact}, worst norm gap {}", format_number(worst)),
    });
    Ok(r)
}

fn arc_distance(u: Complex64, alpha: f64) -> f64 {
    if u.arg().abs() <= alpha {
        (u.norm() - 1.0).abs()
    } else {
        let e = Complex64::from_polar(1.0, alpha);
        (u - e).norm().min((u - e.conj()).norm())
    }
}

fn default_centers() -> Vec<Complex64> {
    let radii = [0.2, 0.45, 0.7, 1.4, 2.0, 2.8];
    (0..12)
        .map(|j| Complex64::from_polar(radii[j % 6], 2.399963229728653 * j as f64))
        .collect()
}

/// Circle means of `log(|b(u,∞)|ⁿ·L_n(u))` against the center value.
fn subharmonicity(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.n.unwrap_or(5);
    cfg.check_grid(n)?;
    let centers = finite_points(cfg, &default_centers())?;
    let g: ArcGeometry64 = cfg.geom;
    let samples = 64;
    let work: Vec<Complex64> = centers
        .iter()
        .flat_map(|&c| {
            let rad = 0.1 * arc_distance(c, g.alpha());
            std::iter::once(c).chain((0..samples).map(move |k| c + Complex64::from_polar(rad, 2.0 * PI * k as f64 / samples as f64)))
        })
        .collect();
    let solver = cfg.solver();
    let logs = try_par_map(&work, |&u| {
        let l = solver.solve(n, Some(u))?.value;
        Ok(n as f64 * g.b_infinity(u).norm().ln() + l.ln())
    })?;
    let mut r = Report::new("", &WITH_U0);
    for (c, chunk) in centers.iter().zip(logs.chunks(samples + 1)) {
        let center = chunk[0];
        let mean = chunk[1..].iter().sum::<f64>() / samples as f64;
        r.push(row(n, Some(*c), mean, center, (center - mean).max(0.0)));
    }
    let worst = r.numbers("error").into_iter().fold(0.0, f64::max);
    r.verdict = Some(Verdict {
        pass: worst <= 1e-3,
        tolerance: 1e-3,
        detail: format!("largest center excess over the circle mean {}", format_number(worst)),
    });
    Ok(r)
}
