use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use arc_widom_cli::report::Report;

const BIN: &str = env!("CARGO_BIN_EXE_arc-widom");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("ARCWIDOM_CACHE").output().unwrap()
}

fn report(args: &[&str]) -> Report {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    Report::from_csv(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn first(r: &Report, col: &str) -> f64 {
    r.numbers(col)[0]
}

#[test]
fn capacity_values() {
    let r = report(&["capacity", "--alpha", "1.5707963267948966"]);
    assert!((first(&r, "cap") - 0.7071067811865476).abs() < 1e-15);
    assert!((first(&r, "cot_quarter") - (1.0 + 2f64.sqrt())).abs() < 1e-14);
    let wide = report(&["capacity", "--alpha", "3.10"]);
    assert!(first(&wide, "cap") > 0.999);
}

#[test]
fn bad_input_exits_with_two() {
    assert_eq!(code(&["capacity", "--alpha", "3.141592653589793"]), 2);
    assert_eq!(code(&["capacity", "--alpha", "0"]), 2);
    assert_eq!(code(&["capacity", "--alpha", "pi"]), 2);
    assert_eq!(code(&["solve", "--n", "3", "--u0", "1+2j"]), 2);
    assert_eq!(code(&["solve", "--n", "3", "--u0", "0.5403023058681398+0.8414709848078965i"]), 2);
    assert_eq!(code(&["solve", "--n", "65"]), 2);
    assert_eq!(code(&["solve"]), 2);
    assert_eq!(code(&["solve", "--n", "10", "--grid-m", "40"]), 2);
    assert_eq!(code(&["solve", "--n", "3", "--grid-k", "8"]), 2);
    assert_eq!(code(&["verify", "kernel", "--u0", "inf"]), 2);
    assert_eq!(code(&["verify", "nonsense"]), 2);
}

#[test]
fn solve_examples() {
    let r = report(&["solve", "--n", "0", "--u0", "0"]);
    assert_eq!(r.rows.len(), 1);
    assert_eq!(first(&r, "value"), 1.0);

    let r = report(&["solve", "--n", "10", "--u0", "inf,0"]);
    let k = r.column("k").unwrap();
    let values: Vec<f64> = r
        .rows
        .iter()
        .filter(|row| row[k].num() == Some(0.0))
        .map(|row| row[r.column("value").unwrap()].num().unwrap())
        .collect();
    assert_eq!(values.len(), 2);
    assert!((1.0 / values[0] - 1.0 / values[1]).abs() < 1e-6 / values[1]);

    let r = report(&["solve", "--n", "10", "--u0", "0.3+0.1i"]);
    assert!(first(&r, "value") >= 1.0);
    assert!(r.numbers("norm_cert").iter().all(|&c| c <= 1.0 + 1e-6));
}

#[test]
fn verification_suites_pass() {
    for args in [
        &["verify", "thiran-detaille", "--alpha", "1.5708", "--nmax", "30"][..],
        &["verify", "involution", "--n", "12"],
        &["verify", "finite-n", "--alpha", "1.5708", "--nmax", "10"],
        &["verify", "kernel"],
        &["verify", "szego-widom"],
        &["verify", "subharmonicity", "--n", "4"],
    ] {
        let r = report(args);
        assert!(r.passed(), "{args:?}: {:?}", r.verdict);
        assert!(!r.rows.is_empty());
    }
    let td = report(&["verify", "thiran-detaille", "--nmax", "30"]);
    let ratios = td.numbers("ratio");
    assert!((ratios[ratios.len() - 1] - 1.0).abs() < 0.05);
    let fin = report(&["verify", "finite-n", "--nmax", "10"]);
    assert!(fin.numbers("error").iter().all(|&e| e <= 1e-4));
}

#[test]
fn failing_verification_exits_with_one() {
    // degree 2 is far from the asymptotic regime
    assert_eq!(code(&["verify", "kernel", "--nmax", "2"]), 1);
    assert_eq!(code(&["verify", "thiran-detaille", "--nmax", "1"]), 1);
}

#[test]
fn ratio_column_matches_its_entries() {
    let r = report(&["envelope", "--nmax", "6", "--u0", "0,0.2-0.3i,inf"]);
    let (c, a, q) = (r.numbers("computed"), r.numbers("asymptote"), r.numbers("ratio"));
    assert_eq!(c.len(), 18);
    for i in 0..c.len() {
        assert_eq!(q[i].to_bits(), (c[i] / a[i]).to_bits());
    }
}

#[test]
fn limit_grid_properties() {
    let u0 = "0.2+0.1i";
    let pts = "0.2+0.1i,-0.9,0.9i,0.999999,1.000001,0.3+0.5i,3-2i";
    let r = report(&["limit", "--u0", u0, "--points", pts]);
    let abs_f = r.numbers("abs_F");
    let k = r.numbers("k_diag");
    // at u₀ itself the limit function is the kernel diagonal
    assert!((r.numbers("re_F")[0] - k[0]).abs() < 1e-12);
    assert!(r.numbers("im_F")[0].abs() < 1e-12);
    // -0.9 lies on the complementary arc side: λ real forces k = 1/2 on the arc
    let on_comp = report(&["limit", "--points", "-1,-0.7071067811865476+0.7071067811865476i"]);
    assert!(on_comp.numbers("k_diag").iter().all(|&v| (v - 0.5).abs() < 1e-12));
    // next to the arc the diagonal tends to one while |F| stays below one
    assert!((k[3] - 1.0).abs() < 1e-5 && (k[4] - 1.0).abs() < 1e-5);
    assert!(abs_f.iter().all(|&v| v <= 1.0 + 1e-12));
    assert!(abs_f[3] < 0.95);
}

#[test]
fn default_limit_grid() {
    let r = report(&["limit", "--rings", "3", "--rays", "8"]);
    assert_eq!(r.rows.len(), 1 + 2 * 3 * 8);
    assert_eq!(r.params["skipped"], "0");
}

#[test]
fn json_and_csv_describe_the_same_report() {
    let args = ["envelope", "--nmax", "4", "--u0", "0.1-0.2i,inf"];
    let csv = report(&args);
    let mut with_json = args.to_vec();
    with_json.extend(["--format", "json"]);
    let out = run(&with_json);
    let json = Report::from_json(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert_eq!(csv, json);
}

#[test]
fn runs_are_deterministic() {
    let args = ["verify", "involution", "--n", "6"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

fn entries(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    v.sort();
    v
}

#[test]
fn cache_reproduces_reports_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let base = ["envelope", "--nmax", "5", "--u0", "0.3+0.2i,inf"];
    let plain = run(&base).stdout;
    let mut cached = base.to_vec();
    cached.extend(["--cache-dir", cache]);
    let first = run(&cached).stdout;
    let names = entries(dir.path());
    assert_eq!(names.len(), 10);
    assert!(names.iter().all(|n| n.len() == 69 && n.ends_with(".json")));
    let second = run(&cached).stdout;
    assert_eq!(first, plain);
    assert_eq!(second, plain);
    assert_eq!(entries(dir.path()), names);

    // a corrupt entry is recomputed
    fs::write(dir.path().join(&names[0]), "{").unwrap();
    assert_eq!(run(&cached).stdout, plain);
    assert!(fs::read_to_string(dir.path().join(&names[0])).unwrap().len() > 10);
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(BIN)
        .args(["solve", "--n", "3"])
        .env("ARCWIDOM_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(entries(dir.path()).len(), 1);
}

#[test]
fn out_flag_writes_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sub").join("cap.json");
    let out = run(&["capacity", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let r = Report::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.command, "capacity");
    assert_eq!(entries(&path.parent().unwrap()), vec!["cap.json".to_string()]);
}
