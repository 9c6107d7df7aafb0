use std::process::Command;

use sphtri::cli::run;

fn call(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(
        std::iter::once("sphtri").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn values(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn perimeter_density_at_pi() {
    let (code, out, _) = call(&["density", "--kind", "perimeter", "--at", "3.14159265358979"]);
    assert_eq!(code, 0);
    let v = values(&out);
    assert_eq!(v.len(), 1);
    assert!((v[0] - 0.13258252).abs() < 1e-8, "{out}");
}

#[test]
fn reversed_range_is_a_usage_error() {
    let (code, out, err) = call(&["density", "--kind", "area", "--from", "7", "--to", "1", "--steps", "10"]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("range"), "{err}");
}

#[test]
fn identities_suite_passes() {
    let (code, out, _) = call(&["verify", "--suite", "identities", "--n", "10000", "--seed", "42"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.lines().count(), 8);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn eq78_alias_runs_the_elliptic_identities() {
    let (code, out, _) = call(&["verify", "--suite", "eq78"]);
    assert_eq!(code, 0);
    assert!(out.lines().all(|l| l.contains("elliptic-identities/")));
}

#[test]
fn cdf_grid_is_monotone_and_ends_at_one() {
    let (code, out, _) = call(&["cdf", "--kind", "perimeter", "--steps", "9"]);
    assert_eq!(code, 0);
    let v = values(&out);
    assert!(v.windows(2).all(|w| w[0] <= w[1]));
    assert!((v[8] - 1.0).abs() < 1e-9);
}

#[test]
fn conditional_in_degrees_matches_radians() {
    let a = call(&[
        "conditional",
        "--kind",
        "area-median",
        "--kappa",
        "90",
        "--degrees",
        "--steps",
        "5",
    ]);
    let b = call(&[
        "conditional",
        "--kind",
        "area-median",
        "--kappa",
        &std::f64::consts::FRAC_PI_2.to_string(),
        "--steps",
        "5",
    ]);
    assert_eq!(a.0, 0);
    assert_eq!(a.1, b.1);
}

#[test]
fn output_files_are_byte_identical() {
    let dir = std::env::temp_dir().join(format!("sphtri-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let runs = [
        vec![
            "sample",
            "--kind",
            "primal-given-side",
            "--kappa",
            "1.2",
            "--n",
            "50000",
            "--seed",
            "9",
        ],
        vec!["density", "--kind", "perimeter", "--steps", "33"],
        vec!["sample", "--kind", "dual", "--n", "20000", "--raw"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let mut texts = Vec::new();
        for rep in 0..2 {
            let path = dir.join(format!("{i}-{rep}.csv"));
            let mut full = args.clone();
            let p = path.to_str().unwrap().to_owned();
            full.extend(["--out", &p]);
            assert_eq!(call(&full).0, 0);
            texts.push(std::fs::read(&path).unwrap());
        }
        assert_eq!(texts[0], texts[1], "{args:?}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_sphtri");
    let ok = Command::new(bin)
        .args(["density", "--kind", "area", "--at", "1"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bad = Command::new(bin)
        .args(["cdf", "--kind", "area", "--steps", "1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(!bad.stderr.is_empty());
}

#[test]
fn failed_check_exits_with_two() {
    // two draws per batch cannot reproduce every conditional fraction
    let (code, out, _) = call(&["verify", "--suite", "mc-vs-analytic", "--n", "2", "--seed", "2"]);
    assert_eq!(code, 2);
    assert!(out.lines().any(|l| l.starts_with("FAIL ")));
    assert!(out.lines().all(|l| l.starts_with("PASS ") || l.starts_with("FAIL ")));
}
