//! Solver results on disk, one JSON file per solve under a content hash.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use arc_widom::extremal::{solve_extremal, ExtremalProblem};
use arc_widom::poly::{ArcBasis, ArcPoly, ComplexPoly};
use arc_widom::{format_complex, ArcGeometry64, ChartPoint64};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// Everything that determines a solve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveKey {
    pub alpha: f64,
    pub n: usize,
    /// `None` is `u₀ = ∞`.
    pub u0: Option<[f64; 2]>,
    pub grid_m: usize,
    pub grid_k: usize,
    pub tol: f64,
    pub max_rounds: usize,
}

impl SolveKey {
    /// Canonical text: exact bit patterns, so equal keys hash equally.
    fn canonical(&self) -> String {
        let u0 = match self.u0 {
            Some([re, im]) => format!("{:016x}:{:016x}", re.to_bits(), im.to_bits()),
            None => "inf".into(),
        };
        format!(
            "arc-widom v1|alpha={:016x}|n={}|u0={u0}|m={}|k={}|tol={:016x}|rounds={}",
            self.alpha.to_bits(),
            self.n,
            self.grid_m,
            self.grid_k,
            self.tol.to_bits(),
            self.max_rounds
        )
    }

    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn u0_point(&self) -> Option<Complex64> {
        self.u0.map(|[re, im]| Complex64::new(re, im))
    }

    pub fn u0_label(&self) -> String {
        self.u0_point().map_or_else(|| "inf".into(), format_complex)
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Solved {
    pub key: SolveKey,
    /// Coefficients in the arc basis rebuilt from `(α, n, M)`.
    pub arc_coeffs: Vec<[f64; 2]>,
    pub monomial: Vec<[f64; 2]>,
    pub value: f64,
    pub upper_bound: f64,
    pub norm_cert: f64,
    pub phase: f64,
    pub rounds: usize,
    pub converged: bool,
    pub support: Vec<f64>,
    #[serde(skip)]
    stable: OnceLock<ArcPoly<f64>>,
}

fn pairs(c: &[Complex64]) -> Vec<[f64; 2]> {
    c.iter().map(|z| [z.re, z.im]).collect()
}

fn complexes(p: &[[f64; 2]]) -> Vec<Complex64> {
    p.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

impl Solved {
    /// `P` in the arc basis, the stable way to evaluate.
    pub fn stable(&self) -> &ArcPoly<f64> {
        self.stable.get_or_init(|| {
            let basis = ArcBasis::new(self.key.alpha, self.key.n, self.key.grid_m);
            ArcPoly::new(Arc::new(basis), complexes(&self.arc_coeffs))
        })
    }

    pub fn eval(&self, u: Complex64) -> Complex64 {
        self.stable().eval(u)
    }

    pub fn poly(&self) -> ComplexPoly<f64> {
        ComplexPoly::new(complexes(&self.monomial))
    }
}

static TEMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Writes `contents` to `path` through a temporary sibling and a rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = dir.join(format!(
        ".{name}.{}.{}.tmp",
        std::process::id(),
        TEMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })?;
    Ok(())
}

/// Extremal solver with an optional on-disk cache.
#[derive(Clone, Debug)]
pub struct Solver {
    pub geom: ArcGeometry64,
    pub grid_m: Option<usize>,
    pub grid_k: usize,
    pub tol: f64,
    pub cache_dir: Option<PathBuf>,
}

impl Solver {
    pub fn key(&self, n: usize, u0: Option<Complex64>) -> SolveKey {
        SolveKey {
            alpha: self.geom.alpha(),
            n,
            u0: u0.map(|z| [z.re, z.im]),
            grid_m: self.grid_m.unwrap_or_else(|| ExtremalProblem::<f64>::default_grid(n)),
            grid_k: self.grid_k,
            tol: self.tol,
            max_rounds: 8,
        }
    }

    fn path(&self, key: &SolveKey) -> Option<PathBuf> {
        self.cache_dir.as_ref().map(|d| d.join(format!("{}.json", key.digest())))
    }

    pub fn solve(&self, n: usize, u0: Option<Complex64>) -> Result<Solved, CliError> {
        let key = self.key(n, u0);
        let path = self.path(&key);
        if let Some(p) = &path {
            if let Ok(text) = fs::read_to_string(p) {
                // a stale or corrupt entry is recomputed and overwritten
                if let Ok(hit) = serde_json::from_str::<Solved>(&text) {
                    if hit.key == key {
                        return Ok(hit);
                    }
                }
            }
        }
        let point = match u0 {
            Some(z) => ChartPoint64::u(z),
            None => ChartPoint64::u_infinity(),
        };
        let mut prob = ExtremalProblem::new(self.geom, n, point);
        prob.arc_grid_size = key.grid_m;
        prob.phase_grid_size = key.grid_k;
        prob.tol = key.tol;
        prob.max_rounds = key.max_rounds;
        let sol = solve_extremal(&prob)?;
        let solved = Solved {
            key,
            arc_coeffs: pairs(sol.stable.coeffs()),
            monomial: pairs(sol.poly.coeffs()),
            value: sol.value,
            upper_bound: sol.upper_bound,
            norm_cert: sol.norm_cert,
            phase: sol.phase,
            rounds: sol.rounds,
            converged: sol.converged,
            support: sol.support,
            stable: OnceLock::new(),
        };
        if let Some(p) = &path {
            write_atomic(p, &serde_json::to_string(&solved)?)?;
        }
        Ok(solved)
    }
}
