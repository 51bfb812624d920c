use arc_widom_cli::report::{format_number, Cell, Report, Verdict};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        (-1e6..1e6f64),
        (0u32..1000).prop_map(f64::from),
        Just(-0.0),
    ]
}

proptest! {
    #[test]
    fn numbers_survive_text(x in finite()) {
        let back: f64 = format_number(x).parse().unwrap();
        prop_assert_eq!(back.to_bits(), x.to_bits());
    }

    #[test]
    fn reports_survive_both_formats(
        rows in prop::collection::vec((finite(), finite(), "[a-z0-9+.-]{1,12}"), 0..8),
        pass in any::<bool>(),
        tol in finite(),
    ) {
        let mut r = Report::new("verify demo", &["n", "u0", "computed"]);
        r.param("alpha", format_number(1.25));
        for (a, b, s) in rows {
            r.push(vec![Cell::Num(a), Cell::Text(s), Cell::Num(b)]);
        }
        r.verdict = Some(Verdict { pass, tolerance: tol, detail: "demo run".into() });
        prop_assert_eq!(&Report::from_csv(&r.to_csv().unwrap()).unwrap(), &r);
        prop_assert_eq!(&Report::from_json(&r.to_json().unwrap()).unwrap(), &r);
    }
}

#[test]
fn csv_layout() {
    let mut r = Report::new("capacity", &["alpha", "cap"]);
    r.param("alpha", "1");
    r.push(vec![Cell::Num(1.0), Cell::Num(0.5)]);
    let text = r.to_csv().unwrap();
    assert_eq!(text, "# arc-widom v1\n# command: capacity\n# alpha: 1\nalpha,cap\n1,5.0000000000000000e-1\n");
}

#[test]
fn missing_header_is_rejected() {
    assert!(Report::from_csv("alpha,cap\n1,2\n").is_err());
    assert!(Report::from_csv("# arc-widom v2\nalpha\n1\n").is_err());
}
