//! `sokr` command line: builds second-order Krylov bases, diagnoses them,
//! and reduces second-order systems. See `sokr --help`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Arg, ArgMatches, Command};
use sokr::diagnostics::{brute_force_sequence, diagnose, linearized_arnoldi, residual_check, structure_report};
use sokr::factorization::Fallback;
use sokr::io::config::KEYS;
use sokr::io::{
    format_factorization, format_sweep_csv, read_matrix_market, read_vector, write_matrix_market, write_vector,
    Lcg, RunConfig,
};
use sokr::linalg::principal_angle;
use sokr::mor::{self, SecondOrderSystem};
use sokr::{build_basis, CompactArnoldiFactorization, Complex64, Error, Matrix, OperatorPair, Scalar};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse { .. } | Error::InvalidInput(_) | Error::Io(_) => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(Failure::Usage(msg.into()))
}

fn command() -> Command {
    let key_args: Vec<Arg> = KEYS
        .iter()
        .map(|(key, default, help)| {
            let help = if default.is_empty() {
                help.to_string()
            } else {
                format!("{help} [default: {default}]")
            };
            Arg::new(*key).long(*key).value_name("VALUE").help(help)
        })
        .collect();
    let config = Arg::new("config")
        .long("config")
        .value_name("FILE")
        .help("key = value file; flags given on the command line take precedence");
    let sub = |name: &'static str, about: &'static str| {
        Command::new(name).about(about).arg(config.clone()).args(key_args.clone())
    };
    Command::new("sokr")
        .about("Second-order Krylov bases (TOAR / I-TOAR) and second-order model reduction")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(sub("synth", "write the synthetic mass-spring chain as Matrix Market files"))
        .subcommand(sub("build", "build a basis, write the factorization and its structure report"))
        .subcommand(sub("diagnose", "full diagnostics including the backward error (dense operators)"))
        .subcommand(sub("reduce", "shift, build, project; write the reduced operators"))
        .subcommand(sub("sweep", "frequency sweep of the full and reduced models as CSV"))
        .subcommand(sub("oracle", "compare against linearized Arnoldi and the brute-force Krylov span"))
}

/// Parses `args` (program name first), runs the subcommand, and returns the
/// exit code: 0 success, 1 usage error, 2 numerical failure.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let mut out = std::io::stdout().lock();
    let result = config_from(sub).and_then(|cfg| dispatch(name, &cfg, &mut out));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Numerical(m)) => {
            eprintln!("numerical failure: {m}");
            EXIT_NUMERICAL
        }
    }
}

fn config_from(m: &ArgMatches) -> CliResult<RunConfig> {
    let mut cfg = match m.get_one::<String>("config") {
        Some(path) => RunConfig::from_file(path)?,
        None => RunConfig::default(),
    };
    for (key, _, _) in KEYS {
        if let Some(v) = m.get_one::<String>(key) {
            cfg.set(key, v)?;
        }
    }
    Ok(cfg)
}

fn dispatch(name: &str, cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    match name {
        "synth" => synth(cfg, out),
        "build" | "diagnose" => match load_problem(cfg)? {
            Problem::Direct { a, b, r_m1, r_0 } => {
                let ops = OperatorPair::from_dense(a.clone(), b.clone())?;
                build_and_report(cfg, name, &ops, &r_m1, &r_0, Some((&a, &b)), out)
            }
            Problem::System(sys) => {
                if cfg.is_complex() {
                    system_build::<Complex64>(cfg, name, &sys, cfg.shift(), out)
                } else {
                    system_build::<f64>(cfg, name, &sys, cfg.shift_re, out)
                }
            }
        },
        "reduce" | "sweep" => {
            let sys = match load_problem(cfg)? {
                Problem::System(sys) => sys,
                Problem::Direct { .. } => return usage(format!("{name} needs matrix.M, matrix.D, matrix.K, vector.f, vector.c")),
            };
            if cfg.vector_c.is_none() {
                return usage(format!("{name} needs vector.c"));
            }
            if cfg.is_complex() {
                reduce_and_sweep::<Complex64>(cfg, name, &sys, cfg.shift(), out)
            } else {
                reduce_and_sweep::<f64>(cfg, name, &sys, cfg.shift_re, out)
            }
        }
        "oracle" => oracle(cfg, out),
        _ => unreachable!("clap rejects unknown subcommands"),
    }
}

enum Problem {
    Direct {
        a: Matrix<f64>,
        b: Matrix<f64>,
        r_m1: Vec<f64>,
        r_0: Vec<f64>,
    },
    System(SecondOrderSystem),
}

fn load_problem(cfg: &RunConfig) -> CliResult<Problem> {
    if let Some(a) = &cfg.matrix_a {
        let (Some(b), Some(r0)) = (&cfg.matrix_b, &cfg.vector_r0) else {
            return usage("matrix.A needs matrix.B and vector.r0");
        };
        let a = read_matrix_market::<f64>(a)?;
        let b = read_matrix_market::<f64>(b)?;
        let r_0 = read_vector::<f64>(r0)?;
        let r_m1 = match &cfg.vector_rm1 {
            Some(p) => read_vector::<f64>(p)?,
            None => vec![0.0; r_0.len()],
        };
        return Ok(Problem::Direct { a, b, r_m1, r_0 });
    }
    let (Some(m), Some(d), Some(k), Some(f)) = (&cfg.matrix_m, &cfg.matrix_d, &cfg.matrix_k, &cfg.vector_f) else {
        return usage("give either matrix.A, matrix.B, vector.r0 or matrix.M, matrix.D, matrix.K, vector.f");
    };
    let f = read_vector::<f64>(f)?;
    let c = match &cfg.vector_c {
        Some(p) => read_vector::<f64>(p)?,
        None => vec![0.0; f.len()],
    };
    let sys = SecondOrderSystem::new(
        read_matrix_market(m)?,
        read_matrix_market(d)?,
        read_matrix_market(k)?,
        f,
        c,
    )?;
    Ok(Problem::System(sys))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    ensure_parent(path)?;
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn ensure_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => {
            fs::create_dir_all(dir).map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))
        }
        _ => Ok(()),
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::Usage(format!("stdout: {e}")))
}

fn synth(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let sys = mor::synth_system(cfg.n, cfg.synth_alpha, cfg.synth_beta, cfg.synth_kappa)?;
    let mut lines = String::new();
    for (name, m) in [("M", &sys.m), ("D", &sys.d), ("K", &sys.k)] {
        let path = cfg.output_path(&format!("{name}.mtx"));
        ensure_parent(&path)?;
        write_matrix_market(&path, m)?;
        lines.push_str(&format!("matrix.{name} = {}\n", path.display()));
    }
    for (name, v) in [("f", &sys.f), ("c", &sys.c)] {
        let path = cfg.output_path(&format!("{name}.mtx"));
        write_vector(&path, v)?;
        lines.push_str(&format!("vector.{name} = {}\n", path.display()));
    }
    emit(out, &lines)
}

fn system_build<T: Scalar>(
    cfg: &RunConfig,
    name: &str,
    sys: &SecondOrderSystem,
    s0: T,
    out: &mut dyn Write,
) -> CliResult<()> {
    let prob = mor::shifted_operators(sys, s0)?;
    let dense = if name == "diagnose" { Some(prob.dense()?) } else { None };
    build_and_report(
        cfg,
        name,
        &prob.ops,
        &prob.r_m1,
        &prob.r_0,
        dense.as_ref().map(|(a, b)| (a, b)),
        out,
    )
}

fn fallback_lines<T: Scalar>(fact: &CompactArnoldiFactorization<T>) -> String {
    let mut s = String::new();
    for (j, rec) in fact.step_log().unwrap_or(&[]).iter().enumerate() {
        match rec.fallback {
            Some(Fallback::SmallDiagonal { index }) => {
                s.push_str(&format!("fallback.step{} = SmallDiagonal column {index}\n", j + 1))
            }
            Some(Fallback::StructureViolated { defect }) => {
                s.push_str(&format!("fallback.step{} = StructureViolated defect {defect:.3e}\n", j + 1))
            }
            None => {}
        }
    }
    s
}

fn build_and_report<T: Scalar>(
    cfg: &RunConfig,
    name: &str,
    ops: &OperatorPair<T>,
    r_m1: &[T],
    r_0: &[T],
    dense: Option<(&Matrix<T>, &Matrix<T>)>,
    out: &mut dyn Write,
) -> CliResult<()> {
    let fact = build_basis(cfg.method, ops, r_m1, r_0, cfg.k, &cfg.arnoldi_options())?;
    let mut summary = format!(
        "method = {}\nstatus = {}\nk = {}\neta = {}\ndeflations = {}\n",
        fact.method(),
        fact.status(),
        fact.k(),
        fact.eta(),
        fact.deflations()
    );
    summary.push_str(&fallback_lines(&fact));
    let fpath = cfg.output_path("factorization.txt");
    write_file(&fpath, &format_factorization(&fact))?;
    summary.push_str(&format!("factorization = {}\n", fpath.display()));
    if name == "build" {
        let spath = cfg.output_path("structure.txt");
        write_file(&spath, &structure_report(&fact).to_kv())?;
        summary.push_str(&format!("structure = {}\n", spath.display()));
        return emit(out, &summary);
    }
    let dense = dense.expect("diagnose always has dense operators");
    let report = diagnose(&fact, Some(dense), cfg.alpha_split)?;
    let text = report.to_kv();
    let dpath = cfg.output_path("diagnostics.txt");
    write_file(&dpath, &text)?;
    emit(out, &format!("{}{text}diagnostics = {}\n", fallback_lines(&fact), dpath.display()))
}

fn reduce_and_sweep<T: Scalar>(
    cfg: &RunConfig,
    name: &str,
    sys: &SecondOrderSystem,
    s0: T,
    out: &mut dyn Write,
) -> CliResult<()> {
    let prob = mor::shifted_operators(sys, s0)?;
    let fact = build_basis(cfg.method, &prob.ops, &prob.r_m1, &prob.r_0, cfg.k, &cfg.arnoldi_options())?;
    let model = mor::reduce(sys, fact.q())?;
    let mut summary = format!(
        "method = {}\nstatus = {}\nreduced_dim = {}\n",
        fact.method(),
        fact.status(),
        model.dim()
    );
    summary.push_str(&fallback_lines(&fact));
    if name == "reduce" {
        let mut paths: Vec<(String, PathBuf)> = Vec::new();
        for (label, m) in [("Mk", &model.mk), ("Dk", &model.dk), ("Kk", &model.kk)] {
            let p = cfg.output_path(&format!("{label}.mtx"));
            ensure_parent(&p)?;
            write_matrix_market(&p, m)?;
            paths.push((label.to_string(), p));
        }
        for (label, v) in [("fk", &model.fk), ("ck", &model.ck)] {
            let p = cfg.output_path(&format!("{label}.mtx"));
            write_vector(&p, v)?;
            paths.push((label.to_string(), p));
        }
        for (label, p) in paths {
            summary.push_str(&format!("{label} = {}\n", p.display()));
        }
        return emit(out, &summary);
    }
    if cfg.sweep_points == 0 {
        return usage("sweep.points must be at least 1");
    }
    let table = mor::sweep(sys, &model, &cfg.frequencies(), cfg.sweep_scale)?;
    let path = cfg.output_path("sweep.csv");
    write_file(&path, &format_sweep_csv(&table))?;
    let poles = table.rows.iter().filter(|r| r.pole).count();
    summary.push_str(&format!(
        "points = {}\npole_rows = {poles}\nmedian_rel_err = {:.16e}\nsweep = {}\n",
        table.rows.len(),
        table.median_rel_err(),
        path.display()
    ));
    emit(out, &summary)
}

fn oracle(cfg: &RunConfig, out: &mut dyn Write) -> CliResult<()> {
    let (a, b, r_m1, r_0, source) = match load_problem(cfg) {
        Ok(Problem::Direct { a, b, r_m1, r_0 }) => (a, b, r_m1, r_0, "files".to_string()),
        Ok(Problem::System(_)) => return usage("oracle takes matrix.A, matrix.B, vector.r0 or a generated instance"),
        Err(_) if cfg.matrix_a.is_none() && cfg.matrix_m.is_none() => {
            let mut rng = Lcg::new(cfg.seed);
            let a = rng.matrix(cfg.n, cfg.n);
            let b = rng.matrix(cfg.n, cfg.n);
            let r_m1 = rng.vector(cfg.n);
            let r_0 = rng.vector(cfg.n);
            (a, b, r_m1, r_0, format!("lcg seed {}", cfg.seed))
        }
        Err(e) => return Err(e),
    };
    let ops = OperatorPair::from_dense(a.clone(), b.clone())?;
    let fact = build_basis(cfg.method, &ops, &r_m1, &r_0, cfg.k, &cfg.arnoldi_options())?;
    let lin = linearized_arnoldi(&a, &b, &r_m1, &r_0, cfg.k.saturating_sub(1))?;
    let h = fact.h();
    let (h_abs, h_rel) = if lin.h.shape() == h.shape() {
        let d = h.sub(&lin.h).max_abs();
        let nf = h.frobenius_norm();
        (d, if nf > 0.0 { d / nf } else { d })
    } else {
        (f64::INFINITY, f64::INFINITY)
    };
    let brute = brute_force_sequence(&ops, &r_m1, &r_0, fact.k())?;
    let angle = principal_angle(fact.q(), &brute)?;
    let text = format!(
        "instance = {source}\nn = {}\nmethod = {}\nstatus = {}\nk = {}\neta = {}\nh_shape_itoar = {}x{}\nh_shape_linearized = {}x{}\nh_max_abs_discrepancy = {h_abs:.16e}\nh_rel_discrepancy = {h_rel:.16e}\nprincipal_angle = {angle:.16e}\narnoldi_residual = {:.16e}\n",
        a.rows(),
        fact.method(),
        fact.status(),
        fact.k(),
        fact.eta(),
        h.rows(),
        h.cols(),
        lin.h.rows(),
        lin.h.cols(),
        residual_check(&fact, &a, &b),
    );
    emit(out, &text)
}
