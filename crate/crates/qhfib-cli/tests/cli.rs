use std::path::PathBuf;

use qhfib::expr::parse_class;
use qhfib::fixture::load_path;
use qhfib::rational::parse_q;
use std::process::{Command, Output};

fn fixture(stem: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{stem}.json"))
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhfib")).args(args).env_remove("QHFIB_CUTOFF").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

#[test]
fn example_loop_values() {
    for (stem, sigma, rho, iu) in [
        ("ruled_rotation_k1", "S- + (7/12)F", "T-@e^{(7/12)F}", "(-2/3)T"),
        ("ruled_rotation_k2", "S- + (5/9)F", "T-@e^{(5/9)F}", "(-4/9)T"),
        ("ruled_rotation_k1_2", "S- + (11/18)F", "T-@e^{(11/18)F}", "(-8/9)T"),
    ] {
        let f = fixture(stem);
        assert_eq!(ok(&["rho", "--fixture", &f]), format!("sigma_phi = {sigma}\nrho = {rho}\n"));
        let inv = ok(&["invariants", "--fixture", &f]);
        assert!(inv.starts_with(&format!("Ic = 1 mod 2\nIu = {iu}\n")), "{inv}");
        assert!(inv.contains("I_0 = 0\n"), "{inv}");
    }
}

#[test]
fn fiber_products() {
    let f = fixture("ruled_fiber");
    assert_eq!(ok(&["product", "--fixture", &f, "--a", "T-", "--b", "T-"]), "-pt + 1@e^{-F}\n");
    assert_eq!(ok(&["product", "--fixture", &f, "--a", "pt", "--b", "T-"]), "F@e^{-F}\n");
    assert_eq!(ok(&["product", "--fixture", &f, "--a", "F", "--b", "T-"]), "pt\n");
    let total = fixture("ruled_rotation_k1");
    assert_eq!(ok(&["product", "--fixture", &total, "--a", "T-", "--b", "T-"]), "-pt + 1@e^{-F}\n");
    assert_eq!(ok(&["product", "--fixture", &total, "--a", "1", "--b", "pt"]), "pt\n");
}

#[test]
fn psi_at_sigma_phi_is_rho_times() {
    let f = fixture("ruled_rotation_k1");
    assert_eq!(ok(&["psi", "--fixture", &f, "--a", "pt", "--sigma-phi"]), "F@e^{(-5/12)F}\n");
    assert_eq!(ok(&["psi", "--fixture", &f, "--a", "1", "--sigma-phi"]), "T-@e^{(7/12)F}\n");
}

#[test]
fn split_outcomes() {
    let o = run(&["split", "--fixture", &fixture("ruled_rotation_k1")]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.starts_with("splits = false\n"), "{text}");
    assert!(text.contains("vertical-vanishing: nonzero 3-point entry in class F"), "{text}");
    let text = ok(&["split", "--fixture", &fixture("product_torus")]);
    assert!(text.starts_with("splits = true\nhypothesis = vertical-vanishing\nmu = 1\nA = 0\n"), "{text}");
}

#[test]
fn nonsqueezing() {
    assert_eq!(ok(&["nonsqueeze", "--fixture", &fixture("product_sphere"), "--kappa", "2"]), "capacity <= 2\n");
    let o = run(&["nonsqueeze", "--fixture", &fixture("ruled_rotation_k1"), "--kappa", "1"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_every_shipped_fixture() {
    for stem in [
        "sphere", "torus", "ruled_fiber", "ruled_rotation_k1", "ruled_rotation_k2", "ruled_rotation_k1_2", "sphere_rotation",
        "product_sphere", "product_torus",
    ] {
        let out = ok(&["verify", "--fixture", &fixture(stem)]);
        assert!(out.contains(" 0 fail,"), "{stem}: {out}");
    }
    let o = run(&["verify", "--fixture", &fixture("sphere"), "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compose_with_inverse_is_identity() {
    let out = ok(&["compose", "--fixture", &fixture("sphere_rotation"), "--mirror"]);
    assert!(out.starts_with("Psi(1) = 1\nPsi(pt) = pt\nrho = 1\n"), "{out}");
}

#[test]
fn usage_errors_exit_with_two() {
    let f = fixture("ruled_fiber");
    for args in [
        vec!["product", "--fixture", f.as_str(), "--a", "Q", "--b", "T-"],
        vec!["product", "--fixture", "/nonexistent.json", "--a", "pt", "--b", "pt"],
        vec!["--cutoff", "1/0", "product", "--fixture", f.as_str(), "--a", "pt", "--b", "pt"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_output_is_deterministic() {
    let f = fixture("ruled_rotation_k1");
    let a = ok(&["--json", "rho", "--fixture", &f]);
    assert_eq!(a, ok(&["--json", "rho", "--fixture", &f]));
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["rho"], "T-@e^{(7/12)F}");
    assert_eq!(v["sigma_phi"], "S- + (7/12)F");
    let fx = load_path(std::path::Path::new(&f)).unwrap();
    let fib = fx.fibration().unwrap();
    let data = fib.section_data().unwrap();
    let rho = parse_class(v["rho"].as_str().unwrap(), &fib.fiber, &fib.fiber.h2).unwrap();
    assert_eq!(rho, data.rho(&parse_q(v["cutoff"].as_str().unwrap()).unwrap()).unwrap());
    let o = run(&["--json", "product", "--fixture", &fixture("ruled_fiber"), "--a", "Q", "--b", "pt"]);
    let e: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(e["error"].as_str().unwrap().contains("basis label"));
}

#[test]
fn product_bundle_round_trips() {
    let dir = std::env::temp_dir().join(format!("qhfib-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("bundle.json");
    let out_s = out.to_string_lossy().into_owned();
    ok(&["product-bundle", "--fixture", &fixture("sphere"), "--out", &out_s]);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), std::fs::read_to_string(fixture("product_sphere")).unwrap());
    let v = ok(&["verify", "--fixture", &out_s]);
    assert!(v.contains(" 0 fail,"), "{v}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn cutoff_from_environment() {
    let f = fixture("sphere");
    let with = |c: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_qhfib"))
            .args(["product", "--fixture", &f, "--a", "pt", "--b", "pt"])
            .env("QHFIB_CUTOFF", c)
            .output()
            .unwrap();
        stdout(&o)
    };
    assert_eq!(with("1/2"), "0\n");
    assert_eq!(with("1"), "1@e^{-A}\n");
    assert_eq!(ok(&["--cutoff", "1", "product", "--fixture", &f, "--a", "pt", "--b", "pt"]), "1@e^{-A}\n");
}
