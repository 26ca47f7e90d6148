use bicyclic::Poly2;
use bicyclic_cli::run;
use std::path::{Path, PathBuf};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn bicyclic(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["bicyclic".to_string(), "--out".into(), out.display().to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn read_json(path: PathBuf) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn classify_reports_the_threshold_in_the_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let f0 = data("f0.json");
    assert_eq!(bicyclic(dir.path(), &["classify", "--factors", &f0, "--alpha", "0.75"]), 11);
    let v = read_json(dir.path().join("verdict.json"));
    assert_eq!(v["threshold"], "CyclicIffAlphaLeqHalf");
    assert_eq!(v["evidence"][0]["certificate"]["energy"]["verdict"], "ConvergentTrend");
    assert!(dir.path().join("factors.csv").exists() && dir.path().join("profile.csv").exists());

    let two = dir.path().join("two.json");
    std::fs::write(&two, Poly2::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]).to_json_string()).unwrap();
    assert_eq!(bicyclic(dir.path(), &["classify", "--factors", two.to_str().unwrap()]), 12);
}

#[test]
fn detgen_reproduces_the_two_by_two_family() {
    let dir = tempfile::tempdir().unwrap();
    let u = data("u_a05.json");
    assert_eq!(bicyclic(dir.path(), &["detgen", "--size", "1", "1", "--unitary", &u]), 0);
    let f = Poly2::from_json_str(&std::fs::read_to_string(dir.path().join("polynomial.json")).unwrap()).unwrap();
    let want = Poly2::from_real_terms(&[(0, 0, 1.0), (1, 0, -0.5), (0, 1, -0.5), (1, 1, 1.0)]);
    assert!(f.max_coeff_diff(&want) < 1e-12);
    assert_eq!(bicyclic(dir.path(), &["detgen", "--size", "2", "1", "--unitary", &u]), 1);
}

#[test]
fn detgen_random_is_seeded() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(bicyclic(a.path(), &["--seed", "7", "detgen", "--size", "2", "2"]), 0);
    assert_eq!(bicyclic(b.path(), &["--seed", "7", "detgen", "--size", "2", "2"]), 0);
    let read = |d: &Path| std::fs::read(d.join("polynomial.json")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn fourier_uniform_line_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bicyclic(dir.path(), &["fourier", "--poly", &data("f0.json"), "--uniform-line", "--K", "64"]), 0);
    let mut rdr = csv::Reader::from_path(dir.path().join("fourier.csv")).unwrap();
    let mut count = 0;
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let k: i64 = rec[0].parse().unwrap();
        let l: i64 = rec[1].parse().unwrap();
        let re: f64 = rec[2].parse().unwrap();
        let im: f64 = rec[3].parse().unwrap();
        let want = if k == l {
            if k % 2 == 0 {
                1.0
            } else {
                -1.0
            }
        } else {
            0.0
        };
        assert!((re - want).abs() < 1e-12 && im.abs() < 1e-12, "({k},{l})");
        count += 1;
    }
    assert_eq!(count, 129 * 129);
    assert!(dir.path().join("shells.csv").exists());
}

#[test]
fn other_subcommands_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path();
    let f0 = data("f0.json");
    assert_eq!(bicyclic(out, &["approximant", "--poly", &f0, "--alpha", "0.25", "1", "--caps", "0", "4"]), 0);
    assert!(out.join("approximant.json").exists() && out.join("profile.csv").exists());
    assert_eq!(bicyclic(out, &["torus-zeros", "--poly", &f0]), 0);
    assert_eq!(read_json(out.join("torus_zeros.json"))["torus"]["kind"], "Curve");
    assert!(out.join("curve.csv").exists());
    assert_eq!(bicyclic(out, &["curve-type", "--poly", &f0, "--t", "1.0"]), 0);
    assert_eq!(read_json(out.join("curve_type.json"))["tau"], "Infinite");
    assert_eq!(bicyclic(out, &["curve-type", "--poly", &f0, "--t", "0", "--retype", "0.3,0.4"]), 0);
    assert_eq!(read_json(out.join("curve_type.json"))["tau"]["Finite"], 2);
    assert_eq!(bicyclic(out, &["energy", "--poly", &f0, "--uniform-line", "--K", "64", "--alpha", "0.4", "0.75"]), 0);
    let e = read_json(out.join("energy.json"));
    assert_eq!(e[0]["verdict"], "DivergentTrend");
    assert_eq!(e[1]["verdict"], "ConvergentTrend");
    assert_eq!(bicyclic(out, &["certificate", "--poly", &f0, "--alpha", "0.75"]), 0);
    assert!(out.join("certificate.csv").exists());

    let two = out.join("two.json");
    std::fs::write(&two, Poly2::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]).to_json_string()).unwrap();
    assert_eq!(bicyclic(out, &["cofactor", "--poly", two.to_str().unwrap(), "--N", "4", "--grid", "256"]), 0);
    let c = read_json(out.join("cofactor.json"));
    assert_eq!(c[0]["weighted_sums"][1]["verdict"], "ConvergentTrend");
}

#[test]
fn failures_and_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(bicyclic(dir.path(), &["no-such-command"]), 2);
    assert_eq!(bicyclic(dir.path(), &["classify"]), 2);
    assert_eq!(bicyclic(dir.path(), &["--help"]), 0);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"bidegree\": [0, 0]}").unwrap();
    assert_eq!(bicyclic(dir.path(), &["torus-zeros", "--poly", bad.to_str().unwrap()]), 1);
    assert!(dir.path().join("error.json").exists());

    // certificate on a polynomial with finitely many torus zeros
    let two = dir.path().join("two.json");
    std::fs::write(&two, Poly2::from_real_terms(&[(0, 0, 2.0), (1, 0, -1.0), (0, 1, -1.0)]).to_json_string()).unwrap();
    assert_eq!(bicyclic(dir.path(), &["certificate", "--poly", two.to_str().unwrap(), "--alpha", "0.75"]), 1);
    assert_eq!(read_json(dir.path().join("error.json"))["error"], "NotACurve");
}
