use std::path::PathBuf;

use pwl_lattice_cli::run;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pwl-lattice").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn tmp(name: &str) -> String {
    let dir = std::env::temp_dir().join(format!("pwl-lattice-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).display().to_string()
}

#[test]
fn eval_lattice_fixture() {
    assert_eq!(cli(&["eval", &fixture("lattice_B.json"), "--point", "3/2"]), (0, "1\n".into(), String::new()));
    assert_eq!(cli(&["eval", &fixture("lattice_B.json"), "--point", "-1"]).1, "0\n");
    assert_eq!(cli(&["eval", &fixture("pwl_B.json"), "--point", "1/2"]).1, "1/2\n");
}

#[test]
fn verify_reports_failing_cell() {
    let (code, out, err) = cli(&["verify", &fixture("pwl_A.json"), &fixture("lattice_bad.json")]);
    assert_eq!(code, 1);
    assert!(out.contains("cell 1 [+]: FAIL"), "{out}");
    assert!(err.contains("VERIFICATION_FAILED"));
    assert_eq!(cli(&["verify", &fixture("pwl_A.json"), &fixture("lattice_A.json")]).0, 0);
}

#[test]
fn dist_and_geodesic() {
    let (code, out, _) = cli(&["dist", &fixture("pwl_B.json"), "--cells", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "2\nh0: x1 = 0\nh1: x1 = 1\n");
    assert!(cli(&["geodesic", &fixture("pwl_B.json"), "--cells", "0,2"]).1.starts_with("0 1 2\n"));
    let (code, _, err) = cli(&["dist", &fixture("pwl_B.json"), "--cells", "0,9"]);
    assert_eq!(code, 3);
    assert!(err.contains("UNKNOWN_CELL"));
}

#[test]
fn build_then_verify_passes_on_every_fixture() {
    for name in ["pwl_A.json", "pwl_B.json", "pwl_D.json"] {
        let out = tmp(&format!("lattice_{name}"));
        assert_eq!(cli(&["build", &fixture(name), "-o", &out]).0, 0);
        let (code, report, _) = cli(&["verify", &fixture(name), &out]);
        assert_eq!(code, 0, "{report}");
    }
}

#[test]
fn build_outputs_expected_terms() {
    let (_, out, _) = cli(&["build", &fixture("pwl_B.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["terms"], serde_json::json!([[0, 2], [1, 2]]));
    let (_, out, _) = cli(&["build", &fixture("pwl_B.json"), "--no-simplify"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["terms"], serde_json::json!([[0, 2], [1, 2], [1, 2]]));
}

#[test]
fn exit_codes() {
    let (code, _, err) = cli(&["build", &fixture("pwl_gap.json")]);
    assert_eq!(code, 3);
    assert!(err.contains("CONTINUITY_BREAK"));
    let bad = tmp("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    assert_eq!(cli(&["build", &bad]).0, 2);
    assert_eq!(cli(&["eval", &fixture("pwl_A.json"), "--point", "1/0"]).0, 2);
    assert_eq!(cli(&["eval", &fixture("pwl_A.json"), "--point", "2"]).0, 3);
    assert_eq!(cli(&["build", &fixture("lattice_B.json")]).0, 2);
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["extend-space", &fixture("pwl_B.json"), "--target", &fixture("domain_1.json")]).0, 3);
}

#[test]
fn conversions_and_extensions() {
    let out = tmp("b_pwl.json");
    assert_eq!(cli(&["lattice2pwl", &fixture("lattice_B.json"), "--domain", &fixture("box_2.json"), "-o", &out]).0, 0);
    assert_eq!(cli(&["eval", &out, "--point", "-3/2"]).1, "0\n");

    let out = tmp("radial.json");
    assert_eq!(cli(&["extend-radial", &fixture("boundary_square.json"), "-o", &out]).0, 0);
    assert_eq!(cli(&["eval", &out, "--point", "1/2,-3/4"]).1, "3/4\n");

    let out = tmp("abs5.json");
    assert_eq!(cli(&["extend-space", &fixture("pwl_A.json"), "--target", &fixture("box_5.json"), "-o", &out]).0, 0);
    assert_eq!(cli(&["eval", &out, "--point", "5"]).1, "5\n");

    let out = tmp("relu.json");
    assert_eq!(cli(&["import-relu", &fixture("relu_abs.json"), "--box", &fixture("box_2.json"), "-o", &out]).0, 0);
    assert_eq!(cli(&["eval", &out, "--point", "-7/4"]).1, "7/4\n");
}

#[test]
fn cells_dump() {
    let (code, out, _) = cli(&["cells", &fixture("pwl_B.json")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["kind"], "complex");
    let signs: Vec<&str> = v["cells"].as_array().unwrap().iter().map(|c| c["signs"].as_str().unwrap()).collect();
    assert_eq!(signs, ["--", "+-", "++"]);
    assert_eq!(v["cells"][2]["order"], serde_json::json!([0, 2, 1]));
    assert_eq!(v["hyperplanes"][0]["generators"], serde_json::json!([[0, 1]]));
}

#[test]
fn plot_samples() {
    let (code, out, _) = cli(&["plot", &fixture("pwl_B.json"), "--axis", "0", "--steps", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out, "x1\tvalue\n-2\t0\n-1\t0\n0\t0\n1\t1\n2\t1\n");
    let (_, out, _) = cli(&["plot", &fixture("pwl_D.json"), "--axis", "1", "--slice", "1/2,0", "--steps", "2"]);
    assert_eq!(out, "x2\tvalue\n-1\t1/2\n0\t1/2\n1\t1\n");
    let (_, out, _) =
        cli(&["plot", &fixture("lattice_A.json"), "--axis", "0", "--from", "-3", "--to", "3", "--steps", "2"]);
    assert_eq!(out, "x1\tvalue\n-3\t3\n0\t0\n3\t3\n");
}
