use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sokr::io::{read_matrix_market, write_matrix_market, write_vector};
use sokr::Matrix;

fn sokr(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sokr"))
        .current_dir(dir)
        .env_remove("RUST_LOG")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .unwrap_or_else(|| panic!("{key} missing in\n{text}"))
        .to_string()
}

const SYSTEM: [&str; 10] = [
    "--matrix.M",
    "tmp/chain_M.mtx",
    "--matrix.D",
    "tmp/chain_D.mtx",
    "--matrix.K",
    "tmp/chain_K.mtx",
    "--vector.f",
    "tmp/chain_f.mtx",
    "--vector.c",
    "tmp/chain_c.mtx",
];

fn synth_chain(dir: &Path, n: &str) {
    let o = sokr(dir, &["synth", "--n", n, "--out.prefix", "tmp/chain"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn synth_then_reduce_writes_k_by_k_operators() {
    let dir = tempfile::tempdir().unwrap();
    synth_chain(dir.path(), "50");
    let mut args = vec!["reduce", "--k", "10", "--shift.re", "1", "--out.prefix", "tmp/red"];
    args.extend(SYSTEM);
    let o = sokr(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for name in ["Mk", "Dk", "Kk"] {
        let m = read_matrix_market::<f64>(dir.path().join(format!("tmp/red_{name}.mtx"))).unwrap();
        assert_eq!(m.shape(), (10, 10), "{name}");
    }
    let fk = read_matrix_market::<f64>(dir.path().join("tmp/red_fk.mtx")).unwrap();
    assert_eq!(fk.shape(), (10, 1));
}

#[test]
fn oracle_on_seed_fixed_instance() {
    let dir = tempfile::tempdir().unwrap();
    for variant in ["itoar-mgs", "toar"] {
        let o = sokr(dir.path(), &["oracle", "--n", "30", "--k", "8", "--seed", "2024", "--variant", variant]);
        assert_eq!(o.status.code(), Some(0));
        let text = stdout(&o);
        let d: f64 = value(&text, "h_max_abs_discrepancy").parse().unwrap();
        let angle: f64 = value(&text, "principal_angle").parse().unwrap();
        assert!(d <= 1e-10, "{variant}: {d}");
        assert!(angle <= 1e-8, "{variant}: {angle}");
    }
}

fn write_swap_chain(dir: &Path) {
    let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
    write_matrix_market(dir.join("A.mtx"), &a).unwrap();
    write_matrix_market(dir.join("B.mtx"), &Matrix::<f64>::zeros(2, 2)).unwrap();
    write_vector(dir.join("r0.mtx"), &[1.0, 0.0]).unwrap();
}

#[test]
fn proc1_falls_back_on_swap_chain() {
    let dir = tempfile::tempdir().unwrap();
    write_swap_chain(dir.path());
    let o = sokr(
        dir.path(),
        &[
            "build", "--matrix.A", "A.mtx", "--matrix.B", "B.mtx", "--vector.r0", "r0.mtx", "--k", "2", "--variant",
            "itoar-proc1",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(value(&text, "status"), "completed");
    assert_eq!(value(&text, "fallback.step1"), "SmallDiagonal column 0");
    assert!(String::from_utf8_lossy(&o.stderr).contains("SmallDiagonal"));
    assert!(dir.path().join("sokr_factorization.txt").exists());
    assert!(dir.path().join("sokr_structure.txt").exists());
}

#[test]
fn breakdown_is_reported_as_success() {
    let dir = tempfile::tempdir().unwrap();
    write_matrix_market(dir.path().join("A.mtx"), &Matrix::<f64>::identity(3)).unwrap();
    write_matrix_market(dir.path().join("B.mtx"), &Matrix::<f64>::zeros(3, 3)).unwrap();
    write_vector(dir.path().join("r0.mtx"), &[1.0, 0.0, 0.0]).unwrap();
    let o = sokr(
        dir.path(),
        &["build", "--matrix.A", "A.mtx", "--matrix.B", "B.mtx", "--vector.r0", "r0.mtx", "--k", "5"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "status"), "deflated-to-invariance");
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sokr(dir.path(), &["build", "--bogus", "1"]).status.code(), Some(1));
    assert_eq!(sokr(dir.path(), &["frobnicate"]).status.code(), Some(1));
    assert_eq!(sokr(dir.path(), &["oracle", "--variant", "lanczos"]).status.code(), Some(1));
    assert_eq!(sokr(dir.path(), &["reduce"]).status.code(), Some(1));
    assert_eq!(sokr(dir.path(), &["--help"]).status.code(), Some(0));

    // Unknown config keys are rejected before anything is computed or written.
    fs::write(dir.path().join("run.cfg"), "n = 30\nk = 4\nout.prefx = x\n").unwrap();
    let o = sokr(dir.path(), &["synth", "--config", "run.cfg"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out.prefx"));
    assert!(!dir.path().join("sokr_M.mtx").exists());
}

#[test]
fn singular_shift_exits_two() {
    // Undamped 2-node chain with unit springs: K has eigenvalue 1, so s0 = i hits it.
    let dir = tempfile::tempdir().unwrap();
    let o = sokr(
        dir.path(),
        &["synth", "--n", "2", "--synth.beta", "0", "--synth.kappa", "1", "--out.prefix", "tmp/chain"],
    );
    assert_eq!(o.status.code(), Some(0));
    let k = read_matrix_market::<f64>(dir.path().join("tmp/chain_K.mtx")).unwrap();
    assert_eq!(k, Matrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]));
    let mut args = vec!["reduce", "--shift.im", "1", "--k", "2"];
    args.extend(SYSTEM);
    let o = sokr(dir.path(), &args);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    synth_chain(dir.path(), "60");
    let run = |prefix: &str| {
        let mut args = vec![
            "sweep", "--k", "12", "--shift.re", "0.5", "--shift.im", "0.25", "--sweep.points", "40", "--sweep.fmax", "2",
            "--out.prefix", prefix,
        ];
        args.extend(SYSTEM);
        assert_eq!(sokr(dir.path(), &args).status.code(), Some(0));
        args[0] = "build";
        assert_eq!(sokr(dir.path(), &args).status.code(), Some(0));
        (
            fs::read(dir.path().join(format!("{prefix}_sweep.csv"))).unwrap(),
            fs::read(dir.path().join(format!("{prefix}_factorization.txt"))).unwrap(),
        )
    };
    let first = run("one");
    let second = run("two");
    assert_eq!(first, second);
    let csv = String::from_utf8(first.0).unwrap();
    assert!(csv.starts_with("freq,h_abs,hk_abs,rel_err\n"));
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn diagnose_emits_backward_error_fields() {
    let dir = tempfile::tempdir().unwrap();
    let o = sokr(dir.path(), &["oracle", "--n", "20", "--k", "6"]);
    assert_eq!(o.status.code(), Some(0));
    write_swap_chain(dir.path());
    let o = sokr(
        dir.path(),
        &["diagnose", "--matrix.A", "A.mtx", "--matrix.B", "B.mtx", "--vector.r0", "r0.mtx", "--k", "2"],
    );
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for key in ["arnoldi_residual", "delta_ab_ratio", "zeta1", "zeta2", "cond_Q", "theorem_bound", "hypothesis_ok"] {
        value(&text, key);
    }
    assert_eq!(fs::read_to_string(dir.path().join("sokr_diagnostics.txt")).unwrap().lines().count() + 1, text.lines().count());
}
