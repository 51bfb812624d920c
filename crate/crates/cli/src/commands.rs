use arc_widom::asymptotics::{envelope_limit, limit_envelope, thiran_detaille_norm, LimitFunction};
use arc_widom::{format_complex, ChartPoint64, Error};
use num_complex::Complex64;

use crate::report::{format_number, Cell, Report};
use crate::{par_map, try_par_map, CliError, RunConfig};

fn label(u: Option<Complex64>) -> String {
    u.map_or_else(|| "inf".into(), format_complex)
}

fn point(u: Option<Complex64>) -> ChartPoint64 {
    u.map_or_else(ChartPoint64::u_infinity, ChartPoint64::u)
}

fn base_params(report: &mut Report, cfg: &RunConfig) {
    report.param("alpha", format_number(cfg.geom.alpha()));
}

pub fn capacity(cfg: &RunConfig) -> Result<Report, CliError> {
    let g = &cfg.geom;
    let mut r = Report::new(
        "capacity",
        &["alpha", "cap", "cot_quarter", "tan_quarter", "re_z0", "im_z0", "re_w0", "im_w0"],
    );
    base_params(&mut r, cfg);
    let (z0, w0) = (g.z0(), g.w0());
    r.push(vec![
        g.alpha().into(),
        g.cap().into(),
        g.cot_quarter().into(),
        g.tan_quarter().into(),
        z0.re.into(),
        z0.im.into(),
        w0.re.into(),
        w0.im.into(),
    ]);
    Ok(r)
}

pub fn solve(cfg: &RunConfig) -> Result<Report, CliError> {
    let n = cfg.require_n()?;
    cfg.check_grid(n)?;
    let points = cfg.u0_or(&[Some(Complex64::new(0.0, 0.0))]);
    for &u in &points {
        cfg.geom.check_u(&point(u))?;
    }
    let solver = cfg.solver();
    let sols = try_par_map(&points, |&u| solver.solve(n, u))?;
    let mut r = Report::new(
        "solve",
        &["u0", "n", "k", "re_coeff", "im_coeff", "value", "upper_bound", "norm_cert", "phase", "converged"],
    );
    base_params(&mut r, cfg);
    r.param("tol", format_number(cfg.tol));
    for (u, s) in points.iter().zip(&sols) {
        for (k, &[re, im]) in s.monomial.iter().enumerate() {
            r.push(vec![
                Cell::Text(label(*u)),
                n.into(),
                k.into(),
                re.into(),
                im.into(),
                s.value.into(),
                s.upper_bound.into(),
                s.norm_cert.into(),
                s.phase.into(),
                (s.converged as usize).into(),
            ]);
        }
    }
    Ok(r)
}

/// Origin, `rings` circles inside the disc and their reflections outside.
fn default_grid(rings: usize, rays: usize) -> Vec<Complex64> {
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=rings {
        let r = i as f64 / (rings + 1) as f64;
        for rad in [r, 1.0 / r] {
            for j in 0..rays {
                let theta = std::f64::consts::TAU * (j as f64 + 0.5) / rays as f64;
                pts.push(Complex64::from_polar(rad, theta));
            }
        }
    }
    pts
}

pub fn limit(cfg: &RunConfig, points: &[Option<Complex64>], rings: usize, rays: usize) -> Result<Report, CliError> {
    let u0 = cfg.u0.first().copied().unwrap_or(Some(Complex64::new(0.0, 0.0)));
    let f = LimitFunction::new(cfg.geom, point(u0))?;
    let grid: Vec<Complex64> = if points.is_empty() {
        default_grid(rings, rays)
    } else {
        points
            .iter()
            .map(|p| p.ok_or_else(|| CliError::Input("limit grid points must be finite".into())))
            .collect::<Result<_, _>>()?
    };
    let g = cfg.geom;
    let rows = par_map(&grid, |&u| -> Result<Option<Vec<Cell>>, CliError> {
        let p = ChartPoint64::u(u);
        let value = match f.eval(&p) {
            Ok(v) => v,
            Err(Error::OnBoundary(_) | Error::SingularLocus(_)) => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        Ok(Some(vec![
            u.re.into(),
            u.im.into(),
            value.re.into(),
            value.im.into(),
            value.norm().into(),
            g.green_infinity(u).into(),
            limit_envelope(&p, &g)?.into(),
        ]))
    });
    let mut r = Report::new("limit", &["re_u", "im_u", "re_F", "im_F", "abs_F", "g", "k_diag"]);
    base_params(&mut r, cfg);
    r.param("u0", label(u0));
    let mut skipped = 0;
    for row in rows {
        match row? {
            Some(cells) => r.push(cells),
            None => skipped += 1,
        }
    }
    r.param("skipped", skipped.to_string());
    Ok(r)
}

pub fn envelope(cfg: &RunConfig) -> Result<Report, CliError> {
    let degrees: Vec<usize> = match (cfg.n, cfg.nmax) {
        (_, Some(m)) => (1..=m).collect(),
        (Some(n), None) => vec![n],
        (None, None) => return Err(CliError::Input("--n or --nmax is required".into())),
    };
    cfg.check_grid(*degrees.last().unwrap_or(&0))?;
    let points = cfg.u0_or(&[Some(Complex64::new(0.0, 0.0))]);
    for &u in &points {
        cfg.geom.check_u(&point(u))?;
    }
    let work: Vec<(Option<Complex64>, usize)> =
        points.iter().flat_map(|&u| degrees.iter().map(move |&n| (u, n))).collect();
    let solver = cfg.solver();
    let g = cfg.geom;
    let rows = try_par_map(&work, |&(u, n)| {
        let value = solver.solve(n, u)?.value;
        let asymptote = match u {
            Some(z) => envelope_limit(&ChartPoint64::u(z), n, &g)?.value,
            None => 1.0 / thiran_detaille_norm(n, &g),
        };
        let ratio = value / asymptote;
        Ok(vec![
            Cell::Text(label(u)),
            n.into(),
            value.into(),
            asymptote.into(),
            ratio.into(),
            (ratio - 1.0).abs().into(),
        ])
    })?;
    let mut r = Report::new("envelope", &["u0", "n", "computed", "asymptote", "ratio", "error"]);
    base_params(&mut r, cfg);
    r.param("tol", format_number(cfg.tol));
    r.rows = rows;
    Ok(r)
}
