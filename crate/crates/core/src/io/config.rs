//! Run configuration: a flat table of documented keys.
//!
//! Values come from `key = value` files and/or `--key value` flags. Every
//! optional key has a default listed in [`KEYS`]; unknown keys are errors.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::factorization::{ArnoldiOptions, Method};
use crate::mor::FreqScale;
use crate::scalar::Complex64;

/// `(key, default, help)`. An empty default means "unset".
pub const KEYS: &[(&str, &str, &str)] = &[
    ("matrix.M", "", "mass matrix (Matrix Market)"),
    ("matrix.D", "", "damping matrix (Matrix Market)"),
    ("matrix.K", "", "stiffness matrix (Matrix Market)"),
    ("matrix.A", "", "first operator of the recurrence r_j = A r_{j-1} + B r_{j-2}"),
    ("matrix.B", "", "second operator of the recurrence"),
    ("vector.f", "", "input vector (n x 1 Matrix Market array)"),
    ("vector.c", "", "output vector"),
    ("vector.r0", "", "starting vector r_0 (A/B mode)"),
    ("vector.rm1", "", "starting vector r_{-1} (A/B mode; zero when unset)"),
    ("shift.re", "0", "real part of the expansion point s0"),
    ("shift.im", "0", "imaginary part of s0; nonzero switches to complex arithmetic"),
    ("k", "10", "number of basis vectors"),
    ("variant", "itoar-mgs", "itoar-mgs | itoar-proc1 | itoar-proc2 | toar"),
    ("ortho.first", "on", "reorthogonalize at the first level (on | off)"),
    ("ortho.second", "on", "reorthogonalize at the second level (on | off)"),
    ("deflation_tol", "1.1102230246251565e-14", "relative deflation threshold"),
    ("breakdown_tol", "1.1102230246251565e-14", "relative breakdown threshold"),
    ("sweep.fmin", "0", "first sweep frequency"),
    ("sweep.fmax", "4", "last sweep frequency"),
    ("sweep.points", "200", "number of sweep points"),
    ("sweep.scale", "hertz", "hertz (s = 2 pi i f) | angular (s = i f)"),
    ("seed", "2024", "seed for generated instances"),
    ("out.prefix", "sokr", "prefix for output files"),
    ("n", "400", "dimension of generated instances"),
    ("synth.alpha", "0", "mass-proportional damping of the synthetic chain"),
    ("synth.beta", "1e-7", "stiffness-proportional damping of the synthetic chain"),
    ("synth.kappa", "300", "spring constant of the synthetic chain"),
    ("diag.alpha_split", "0.5", "share of the residual assigned to the A perturbation"),
    ("itoar.literal", "off", "use the literal structured second level (on | off)"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub matrix_m: Option<PathBuf>,
    pub matrix_d: Option<PathBuf>,
    pub matrix_k: Option<PathBuf>,
    pub matrix_a: Option<PathBuf>,
    pub matrix_b: Option<PathBuf>,
    pub vector_f: Option<PathBuf>,
    pub vector_c: Option<PathBuf>,
    pub vector_r0: Option<PathBuf>,
    pub vector_rm1: Option<PathBuf>,
    pub shift_re: f64,
    pub shift_im: f64,
    pub k: usize,
    pub method: Method,
    pub ortho_first: bool,
    pub ortho_second: bool,
    pub deflation_tol: f64,
    pub breakdown_tol: f64,
    pub sweep_fmin: f64,
    pub sweep_fmax: f64,
    pub sweep_points: usize,
    pub sweep_scale: FreqScale,
    pub seed: u64,
    pub out_prefix: String,
    pub n: usize,
    pub synth_alpha: f64,
    pub synth_beta: f64,
    pub synth_kappa: f64,
    pub alpha_split: f64,
    pub literal: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        let mut cfg = RunConfig {
            matrix_m: None,
            matrix_d: None,
            matrix_k: None,
            matrix_a: None,
            matrix_b: None,
            vector_f: None,
            vector_c: None,
            vector_r0: None,
            vector_rm1: None,
            shift_re: 0.0,
            shift_im: 0.0,
            k: 0,
            method: Method::Itoar(Default::default()),
            ortho_first: true,
            ortho_second: true,
            deflation_tol: 0.0,
            breakdown_tol: 0.0,
            sweep_fmin: 0.0,
            sweep_fmax: 0.0,
            sweep_points: 0,
            sweep_scale: FreqScale::default(),
            seed: 0,
            out_prefix: String::new(),
            n: 0,
            synth_alpha: 0.0,
            synth_beta: 0.0,
            synth_kappa: 0.0,
            alpha_split: 0.0,
            literal: false,
        };
        for (key, default, _) in KEYS {
            if !default.is_empty() {
                cfg.set(key, default).expect("documented defaults parse");
            }
        }
        cfg
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{v}'")))
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    let x: f64 = parse_num(key, v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Config(format!("{key}: value must be finite")))
    }
}

fn parse_switch(key: &str, v: &str) -> Result<bool> {
    match v {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected 'on' or 'off', got '{v}'"))),
    }
}

impl RunConfig {
    pub fn is_known_key(key: &str) -> bool {
        KEYS.iter().any(|(k, _, _)| *k == key)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        let path = || Some(PathBuf::from(v));
        match key {
            "matrix.M" => self.matrix_m = path(),
            "matrix.D" => self.matrix_d = path(),
            "matrix.K" => self.matrix_k = path(),
            "matrix.A" => self.matrix_a = path(),
            "matrix.B" => self.matrix_b = path(),
            "vector.f" => self.vector_f = path(),
            "vector.c" => self.vector_c = path(),
            "vector.r0" => self.vector_r0 = path(),
            "vector.rm1" => self.vector_rm1 = path(),
            "shift.re" => self.shift_re = parse_f64(key, v)?,
            "shift.im" => self.shift_im = parse_f64(key, v)?,
            "k" => {
                self.k = parse_num(key, v)?;
                if self.k == 0 {
                    return Err(Error::Config("k must be at least 1".into()));
                }
            }
            "variant" => {
                self.method = Method::parse(v).ok_or_else(|| Error::Config(format!("variant: unknown '{v}'")))?
            }
            "ortho.first" => self.ortho_first = parse_switch(key, v)?,
            "ortho.second" => self.ortho_second = parse_switch(key, v)?,
            "deflation_tol" => self.deflation_tol = parse_f64(key, v)?,
            "breakdown_tol" => self.breakdown_tol = parse_f64(key, v)?,
            "sweep.fmin" => self.sweep_fmin = parse_f64(key, v)?,
            "sweep.fmax" => self.sweep_fmax = parse_f64(key, v)?,
            "sweep.points" => self.sweep_points = parse_num(key, v)?,
            "sweep.scale" => {
                self.sweep_scale =
                    FreqScale::parse(v).ok_or_else(|| Error::Config(format!("sweep.scale: unknown '{v}'")))?
            }
            "seed" => self.seed = parse_num(key, v)?,
            "out.prefix" => {
                if v.is_empty() {
                    return Err(Error::Config("out.prefix must not be empty".into()));
                }
                self.out_prefix = v.to_string()
            }
            "n" => {
                self.n = parse_num(key, v)?;
                if self.n == 0 {
                    return Err(Error::Config("n must be at least 1".into()));
                }
            }
            "synth.alpha" => self.synth_alpha = parse_f64(key, v)?,
            "synth.beta" => self.synth_beta = parse_f64(key, v)?,
            "synth.kappa" => self.synth_kappa = parse_f64(key, v)?,
            "diag.alpha_split" => {
                let a = parse_f64(key, v)?;
                if !(0.0..=1.0).contains(&a) {
                    return Err(Error::Config("diag.alpha_split must lie in [0, 1]".into()));
                }
                self.alpha_split = a;
            }
            "itoar.literal" => self.literal = parse_switch(key, v)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected 'key = value'"))?;
            self.set(k.trim(), v.trim()).map_err(|e| match e {
                Error::Config(m) => Error::parse(i + 1, m),
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let mut cfg = RunConfig::default();
        cfg.apply_text(&fs::read_to_string(path)?)?;
        Ok(cfg)
    }

    pub fn shift(&self) -> Complex64 {
        Complex64::new(self.shift_re, self.shift_im)
    }

    pub fn is_complex(&self) -> bool {
        self.shift_im != 0.0
    }

    pub fn arnoldi_options(&self) -> ArnoldiOptions {
        let variant = match self.method {
            Method::Itoar(v) => v,
            Method::Toar => Default::default(),
        };
        ArnoldiOptions {
            reorth_first: self.ortho_first,
            reorth_second: self.ortho_second,
            deflation_tol: self.deflation_tol,
            breakdown_tol: self.breakdown_tol,
            variant,
            literal_structure: self.literal,
            ..ArnoldiOptions::default()
        }
    }

    pub fn output_path(&self, suffix: &str) -> PathBuf {
        PathBuf::from(format!("{}_{suffix}", self.out_prefix))
    }

    pub fn frequencies(&self) -> Vec<f64> {
        crate::mor::linspace(self.sweep_fmin, self.sweep_fmax, self.sweep_points)
    }
}
