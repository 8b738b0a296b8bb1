//! The `interpnorm` command line: one subcommand per operation, JSON inputs
//! given as file paths, inline documents or `-` for stdin, and a single
//! [`RunReport`] per run.
//!
//! Exit codes: 0 when every verification passes, 1 when one fails, 2 on
//! usage or input errors.

use std::io::{Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::acceptance;
use crate::curvature::{delta_curve, delta_estimate, hilbert_matrix, tau_power, DeltaSearch, FeasibleSet};
use crate::density::{change_of_density, DEFAULT_JITTER};
use crate::error::{Error, Result};
use crate::factor::{gamma_h, gamma_h_star, nuclear_norm_linf_l1};
use crate::graphs::{graph_report, random_regular, ObstructionStatus, RegularGraph};
use crate::interp::{calderon_oracle, interp_norm, BoundaryFamily, DEFAULT_DEGREE, DEFAULT_GRID};
use crate::linalg::{op_norm_l1, op_norm_linf, spectral_norm, svd, MatrixOp, C64};
use crate::norms::{dual_reg_ball_norm, fully_contractive_check, reg_norm_l2, reg_norm_lp, tensor_op_norm, NormSpec};
use crate::report::{input_digest, Assertion, RunReport};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "INTERPNORM_THREADS";

#[derive(Parser, Debug)]
#[command(name = "interpnorm", version, about = "Regular norms, factorization norms, complex interpolation and curvature moduli on C^n")]
struct Cli {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// ℓ_2, ℓ_1 and ℓ_∞ operator norms of a matrix.
    Norm {
        /// Matrix JSON: path, inline document or `-` for stdin (the default).
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Regular norm ‖|T|‖ on ℓ_2 (bounds on ℓ_p with --p) and the fully contractive test.
    Regnorm {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long)]
        p: Option<f64>,
    },
    /// Norm of φ in the predual of the regular operators, with its certificate.
    Dualball {
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Factorization norm γ_H(u) from ℓ_1 to ℓ_∞ through Hilbert space.
    Gammah {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// The trace-dual norm γ*_H(v).
    Gammahstar {
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Perron–Frobenius change of density of a regular operator.
    Densify {
        #[arg(long = "in", default_value = "-")]
        input: String,
        #[arg(long, default_value_t = DEFAULT_JITTER)]
        jitter: f64,
    },
    /// Upper and lower bounds for the norm of a vector in the interpolated space X(ξ).
    Interp {
        /// BoundaryFamily JSON.
        #[arg(long)]
        family: String,
        /// Vector JSON: an array of reals or {"re": [...], "im": [...]}.
        #[arg(long)]
        vector: String,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        xi_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        xi_im: f64,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 0)]
        dual_trials: usize,
    },
    /// Closed-form (X_0, X_1)_θ for diagonal pairs, optionally compared with the solver at a vector.
    Calderon {
        /// NormSpec JSON for X_0.
        #[arg(long)]
        x0: String,
        /// NormSpec JSON for X_1.
        #[arg(long)]
        x1: String,
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        vector: Option<String>,
        #[arg(long, default_value_t = DEFAULT_DEGREE)]
        degree: usize,
        #[arg(long, default_value_t = DEFAULT_GRID)]
        grid: usize,
    },
    /// Bounds for Δ_X(ε); several comma-separated ε give a curve.
    Delta {
        /// NormSpec JSON for X.
        #[arg(long)]
        norm: String,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// Matrix size of the search.
        #[arg(long, default_value_t = 8)]
        size: usize,
        /// Ascent steps per start.
        #[arg(long, default_value_t = 60)]
        budget: usize,
        #[arg(long, default_value_t = 4)]
        random_starts: usize,
        #[arg(long, value_enum, default_value_t = SetArg::Regular)]
        set: SetArg,
    },
    /// The Hilbert matrix Γ(n)(i, j) = 1/(n − (i + j)) with 1-based i, j (zero where i + j = n).
    Hilbertmat {
        #[arg(long)]
        n: usize,
    },
    /// The Kronecker power τ^{⊗m} of τ = [[1/2, 1/2], [1/2, −1/2]].
    Tau {
        #[arg(long, default_value_t = 1)]
        power: usize,
    },
    /// Spectral gaps ε(G), ε(G, X) and the obstruction inequalities for a regular graph.
    Expander {
        /// Graph JSON {"n", "k", "edges"}.
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        graph: Option<String>,
        /// A random k-regular graph on n vertices.
        #[arg(long, num_args = 3, value_names = ["N", "K", "SEED"])]
        random: Option<Vec<u64>>,
        /// NormSpec JSON for X; repeatable, defaults to ℓ_2^2.
        #[arg(long)]
        norm: Vec<String>,
        #[arg(long, default_value_t = 1)]
        power: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Runs the acceptance suite and prints a summary table on stderr.
    Check {
        /// Comma-separated criterion numbers; all eleven when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SetArg {
    Regular,
    FullyContractive,
}

/// Loaded input documents, kept for the digest.
#[derive(Default)]
struct Inputs {
    docs: Vec<(String, Vec<u8>)>,
}

impl Inputs {
    /// Reads `spec` as a path, an inline JSON document (leading `{` or `[`)
    /// or `-` for stdin, and parses it.
    fn load<T: for<'de> Deserialize<'de>>(&mut self, what: &str, spec: &str) -> std::result::Result<T, String> {
        let (name, bytes) = if spec == "-" {
            let mut b = Vec::new();
            std::io::stdin().read_to_end(&mut b).map_err(|e| format!("{what}: reading stdin: {e}"))?;
            ("stdin".to_string(), b)
        } else if spec.trim_start().starts_with(['{', '[']) {
            ("inline".to_string(), spec.as_bytes().to_vec())
        } else {
            let b = std::fs::read(spec).map_err(|e| format!("{what}: {spec}: {e}"))?;
            (spec.to_string(), b)
        };
        let parsed = serde_json::from_slice(&bytes).map_err(|e| format!("{what} ({name}): invalid JSON: {e}"))?;
        self.docs.push((format!("{what}:{name}"), bytes));
        Ok(parsed)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum VectorJson {
    Real(Vec<f64>),
    Complex { re: Vec<f64>, #[serde(default)] im: Option<Vec<f64>> },
}

impl VectorJson {
    fn into_vec(self) -> std::result::Result<Vec<C64>, String> {
        let v: Vec<C64> = match self {
            Self::Real(re) => re.into_iter().map(|a| C64::new(a, 0.0)).collect(),
            Self::Complex { re, im } => {
                let im = im.unwrap_or_else(|| vec![0.0; re.len()]);
                if im.len() != re.len() {
                    return Err(format!("vector has {} real and {} imaginary parts", re.len(), im.len()));
                }
                re.into_iter().zip(im).map(|(a, b)| C64::new(a, b)).collect()
            }
        };
        match v.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(i) => Err(format!("vector entry {i} is not finite")),
            None => Ok(v),
        }
    }
}

enum Failure {
    Usage(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Input(s)
    }
}

type Outcome = std::result::Result<(Value, Vec<Assertion>), Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Parses `args` (including the program name), runs the subcommand and
/// writes the report. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return 2;
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let (command, outcome) = dispatch(&cli, &mut inputs);
    let (outputs, verification) = match outcome {
        Ok(r) => r,
        Err(Failure::Usage(msg)) | Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    let digest = input_digest(&command, &inputs.docs);
    let report = RunReport::new(command, digest, outputs, verification, start.elapsed().as_secs_f64());
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let written = match &cli.out {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        eprintln!("error: writing report: {msg}");
        return 2;
    }
    if report.verified {
        0
    } else {
        1
    }
}

fn configure_threads() -> std::result::Result<(), String> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| format!("{THREADS_VAR}={v:?} is not a positive integer"))?;
    // a pool configured earlier in the same process is kept
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// The canonical command echo and the outcome of the subcommand.
fn dispatch(cli: &Cli, inputs: &mut Inputs) -> (Vec<String>, Outcome) {
    let seed = cli.seed;
    let echo = |name: &str, parts: Vec<String>| -> Vec<String> {
        let mut v = vec![name.to_string()];
        v.extend(parts);
        v.push(format!("--seed={seed}"));
        v
    };
    match &cli.command {
        Command::Norm { input } => (echo("norm", vec![format!("--in={input}")]), norm(inputs, input)),
        Command::Regnorm { input, p } => (echo("regnorm", vec![format!("--in={input}"), format!("--p={p:?}")]), regnorm(inputs, input, *p)),
        Command::Dualball { input } => (echo("dualball", vec![format!("--in={input}")]), dualball(inputs, input)),
        Command::Gammah { input, tol } => (echo("gammah", vec![format!("--in={input}"), format!("--tol={tol}")]), gammah(inputs, input, *tol)),
        Command::Gammahstar { input } => (echo("gammahstar", vec![format!("--in={input}")]), gammahstar(inputs, input)),
        Command::Densify { input, jitter } => (
            echo("densify", vec![format!("--in={input}"), format!("--jitter={jitter}")]),
            densify(inputs, input, *jitter),
        ),
        Command::Interp { family, vector, xi_re, xi_im, degree, grid, dual_trials } => (
            echo(
                "interp",
                vec![
                    format!("--family={family}"),
                    format!("--vector={vector}"),
                    format!("--xi-re={xi_re}"),
                    format!("--xi-im={xi_im}"),
                    format!("--degree={degree}"),
                    format!("--grid={grid}"),
                    format!("--dual-trials={dual_trials}"),
                ],
            ),
            interp(inputs, family, vector, C64::new(*xi_re, *xi_im), *degree, *grid, *dual_trials),
        ),
        Command::Calderon { x0, x1, theta, vector, degree, grid } => (
            echo(
                "calderon",
                vec![
                    format!("--x0={x0}"),
                    format!("--x1={x1}"),
                    format!("--theta={theta}"),
                    format!("--vector={vector:?}"),
                    format!("--degree={degree}"),
                    format!("--grid={grid}"),
                ],
            ),
            calderon(inputs, x0, x1, *theta, vector.as_deref(), *degree, *grid),
        ),
        Command::Delta { norm, eps, size, budget, random_starts, set } => {
            let set = match set {
                SetArg::Regular => FeasibleSet::Regular,
                SetArg::FullyContractive => FeasibleSet::FullyContractive,
            };
            let search = DeltaSearch {
                n_op: *size,
                budget: *budget,
                random_starts: *random_starts,
                seed,
                set,
            };
            (
                echo(
                    "delta",
                    vec![
                        format!("--norm={norm}"),
                        format!("--eps={eps:?}"),
                        format!("--size={size}"),
                        format!("--budget={budget}"),
                        format!("--random-starts={random_starts}"),
                        format!("--set={set:?}"),
                    ],
                ),
                delta(inputs, norm, eps, search),
            )
        }
        Command::Hilbertmat { n } => (echo("hilbertmat", vec![format!("--n={n}")]), hilbertmat(*n)),
        Command::Tau { power } => (echo("tau", vec![format!("--power={power}")]), tau(*power)),
        Command::Expander { graph, random, norm, power, trials } => (
            echo(
                "expander",
                vec![
                    format!("--graph={graph:?}"),
                    format!("--random={random:?}"),
                    format!("--norm={norm:?}"),
                    format!("--power={power}"),
                    format!("--trials={trials}"),
                ],
            ),
            expander(inputs, graph.as_deref(), random.as_deref(), norm, *power, *trials, seed),
        ),
        Command::Check { only } => (echo("check", vec![format!("--only={only:?}")]), check(only)),
    }
}

fn matrix(inputs: &mut Inputs, spec: &str) -> std::result::Result<MatrixOp, Failure> {
    Ok(inputs.load::<MatrixOp>("matrix", spec)?)
}

fn norm(inputs: &mut Inputs, spec: &str) -> Outcome {
    let t = matrix(inputs, spec)?;
    let s = spectral_norm(&t)?;
    let (l1, linf) = (op_norm_l1(&t)?, op_norm_linf(&t)?);
    let out = json!({
        "op_norm_l2": s.value,
        "op_norm_l1": l1,
        "op_norm_linf": linf,
        "method": s.method,
        "iterations": s.iterations,
        "converged": s.converged,
    });
    let checks = vec![
        Assertion::flag("spectral solver converged", s.converged, format!("{:?}", s.method)),
        Assertion::at_most("‖T‖ ≤ (‖T‖_1 ‖T‖_∞)^{1/2}", s.value, (l1 * linf).sqrt(), 1e-12 * s.value.max(1.0)),
    ];
    Ok((out, checks))
}

fn regnorm(inputs: &mut Inputs, spec: &str, p: Option<f64>) -> Outcome {
    let t = matrix(inputs, spec)?;
    let reg = reg_norm_l2(&t)?;
    let op = spectral_norm(&t)?.value;
    let fc = fully_contractive_check(&t)?;
    let mut out = json!({ "reg_norm_l2": reg, "op_norm_l2": op, "fully_contractive": fc });
    let mut checks = vec![Assertion::at_most("‖T‖ ≤ ‖T‖_reg", op, reg, 1e-12 * reg.max(1.0))];
    if let Some(p) = p {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Failure::Usage(format!("--p must be in (1, ∞), got {p}")));
        }
        let b = reg_norm_lp(&t, 1.0 - 1.0 / p)?;
        checks.push(Assertion::at_most("ℓ_p lower ≤ upper", b.lower, b.upper, 1e-12 * b.upper.max(1.0)));
        out["reg_norm_lp"] = to_value(&b);
    }
    Ok((out, checks))
}

fn dualball(inputs: &mut Inputs, spec: &str) -> Outcome {
    let phi = matrix(inputs, spec)?;
    let (value, cert) = dual_reg_ball_norm(&phi)?;
    let trace: f64 = svd(&phi)?.trace_norm();
    let checks = vec![
        Assertion::at_most("certificate dominates |φ|", cert.violation(&phi), 0.0, 1e-12 * phi.max_abs().max(1.0)),
        Assertion::at_most("certified lower ≤ value", cert.lower, value, 1e-12 * value.max(1.0)),
        Assertion::at_most("value ≤ trace norm", value, trace, 1e-9 * trace.max(1.0)),
    ];
    Ok((json!({ "value": value, "trace_norm": trace, "certificate": cert }), checks))
}

fn gammah(inputs: &mut Inputs, spec: &str, tol: f64) -> Outcome {
    let u = matrix(inputs, spec)?;
    let g = gamma_h(&u, tol)?;
    let checks = vec![
        Assertion::at_most("factorization reproduces u", g.certificate.residual(&u), 0.0, 1e-8),
        Assertion::at_most("lower ≤ value", g.lower, g.value, 1e-12 * g.value.max(1.0)),
        Assertion::at_most("value ≤ lower (1 + tol)", g.value, g.lower * (1.0 + tol), 1e-12 * g.value.max(1.0)),
        Assertion::at_most("max |u_ij| ≤ value", u.max_abs(), g.value, 1e-12 * g.value.max(1.0)),
    ];
    Ok((to_value(&g), checks))
}

fn gammahstar(inputs: &mut Inputs, spec: &str) -> Outcome {
    let v = matrix(inputs, spec)?;
    let g = gamma_h_star(&v)?;
    let nuclear = nuclear_norm_linf_l1(&v);
    let checks = vec![
        Assertion::at_most("lower ≤ value", g.lower, g.value, 1e-9 * g.value.max(1.0)),
        Assertion::at_most("value ≤ N(v)", g.value, nuclear, 1e-9 * nuclear.max(1.0)),
    ];
    Ok((json!({ "gamma_h_star": g, "nuclear_norm": nuclear }), checks))
}

fn densify(inputs: &mut Inputs, spec: &str, jitter: f64) -> Outcome {
    let t = matrix(inputs, spec)?;
    let d = change_of_density(&t, jitter)?;
    let c = &d.check;
    let checks = vec![
        Assertion::at_most("Perron residual", c.perron_residual, 0.0, 1e-10),
        Assertion::at_most("L_∞(μ) → L_∞(μ′) bound", c.row_bound, 1.0, 1e-10),
        Assertion::at_most("L_1(μ) → L_1(μ′) bound", c.column_bound, 1.0, 1e-10),
        Assertion::at_most("reconstruction of ‖T_X‖", c.reconstruction_error, 0.0, 1e-8),
    ];
    Ok((to_value(&d), checks))
}

fn interp(inputs: &mut Inputs, family: &str, vector: &str, xi: C64, d: usize, m: usize, trials: usize) -> Outcome {
    let f: BoundaryFamily = inputs.load("family", family)?;
    let x = inputs.load::<VectorJson>("vector", vector)?.into_vec()?;
    let b = interp_norm(&f, &x, xi, d, m, trials)?;
    let checks = vec![
        Assertion::at_most("lower ≤ upper", b.lower.value, b.upper.value, 1e-9 * b.upper.value.max(1e-300)),
        Assertion::at_most("upper ≤ constant competitor", b.upper.value, b.upper.constant, 1e-12 * b.upper.constant),
    ];
    Ok((to_value(&b), checks))
}

fn calderon(inputs: &mut Inputs, x0: &str, x1: &str, theta: f64, vector: Option<&str>, d: usize, m: usize) -> Outcome {
    let a: NormSpec = inputs.load("x0", x0)?;
    let b: NormSpec = inputs.load("x1", x1)?;
    let oracle = calderon_oracle(&a, &b, theta)?;
    let mut out = json!({ "oracle": oracle });
    let mut checks = Vec::new();
    if let Some(v) = vector {
        let x = inputs.load::<VectorJson>("vector", v)?.into_vec()?;
        let value = oracle.eval(&x);
        let f = BoundaryFamily::two_valued(a, b, theta)?;
        let bounds = interp_norm(&f, &x, C64::new(0.0, 0.0), d, m, 0)?;
        let (lo, up) = (bounds.lower.value, bounds.upper.value);
        checks.push(Assertion::at_most("lower ≤ oracle", lo, value, 1e-9 * value.max(1e-300)));
        checks.push(Assertion::at_most("oracle ≤ upper", value, up, 1e-9 * value.max(1e-300)));
        checks.push(Assertion::at_most("upper/oracle ≤ 1.05", up / value, 1.05, 0.0));
        checks.push(Assertion::at_most("oracle/lower ≤ 1.05", value / lo, 1.05, 0.0));
        out["value"] = json!(value);
        out["solver"] = to_value(&bounds);
    }
    Ok((out, checks))
}

fn delta(inputs: &mut Inputs, norm: &str, eps: &[f64], search: DeltaSearch) -> Outcome {
    let x: NormSpec = inputs.load("norm", norm)?;
    let feasible = |w: &MatrixOp, e: f64| -> Result<Vec<Assertion>> {
        let reg = match search.set {
            FeasibleSet::Regular => reg_norm_l2(w)?,
            FeasibleSet::FullyContractive => op_norm_l1(w)?.max(op_norm_linf(w)?),
        };
        Ok(vec![
            Assertion::at_most(format!("witness at ε = {e} in the unit ball"), reg, 1.0, 1e-9),
            Assertion::at_most(format!("witness at ε = {e} has ‖T‖ ≤ ε"), spectral_norm(w)?.value, e, 1e-9),
        ])
    };
    let value_check = |w: &MatrixOp, e: f64, claimed: f64, upper: f64| -> Result<Vec<Assertion>> {
        let v = tensor_op_norm(w, &x)?.lower;
        Ok(vec![
            Assertion::close(format!("witness at ε = {e} attains the lower bound"), v, claimed, 1e-9 * claimed.max(1.0)),
            Assertion::at_most(format!("lower ≤ upper at ε = {e}"), claimed, upper, 1e-9),
        ])
    };
    if let [e] = eps {
        let d = delta_estimate(&x, *e, search)?;
        let mut checks = feasible(&d.witness, *e)?;
        checks.extend(value_check(&d.witness, *e, d.lower, d.upper)?);
        return Ok((to_value(&d), checks));
    }
    let c = delta_curve(&x, eps, search)?;
    let mut checks = Vec::new();
    for k in 0..c.eps_grid.len() {
        checks.extend(feasible(&c.witnesses[k], c.eps_grid[k])?);
        checks.extend(value_check(&c.witnesses[k], c.eps_grid[k], c.values[k], c.upper[k])?);
    }
    Ok((to_value(&c), checks))
}

fn hilbertmat(n: usize) -> Outcome {
    let g = hilbert_matrix(n)?;
    let op = spectral_norm(&g)?.value;
    let reg = reg_norm_l2(&g)?;
    let out = json!({
        "n": n,
        "op_norm_l2": op,
        "reg_norm_l2": reg,
        "reg_over_log": reg / (n as f64 + 1.0).ln(),
    });
    let checks = vec![
        Assertion::at_most("‖Γ(n)‖ ≤ ‖Γ(n)‖_reg", op, reg, 1e-12 * reg.max(1.0)),
        Assertion::at_most("‖Γ(n)‖ ≤ π", op, std::f64::consts::PI, 1e-12),
    ];
    Ok((out, checks))
}

fn tau(power: usize) -> Outcome {
    let t = tau_power(power)?;
    let op = spectral_norm(&t)?.value;
    let reg = reg_norm_l2(&t)?;
    let fc = fully_contractive_check(&t)?;
    let want = 2f64.powf(-(power as f64) / 2.0);
    let out = json!({
        "power": power,
        "dimension": t.rows(),
        "op_norm_l2": op,
        "expected_op_norm": want,
        "reg_norm_l2": reg,
        "fully_contractive": fc,
    });
    let checks = vec![
        Assertion::close("‖τ^{⊗m}‖ = 2^{−m/2}", op, want, 1e-10),
        Assertion::close("‖τ^{⊗m}‖_reg = 1", reg, 1.0, 1e-10),
        Assertion::flag("fully contractive", fc.contractive, format!("l1 {} linf {}", fc.l1, fc.linf)),
    ];
    Ok((out, checks))
}

fn expander(
    inputs: &mut Inputs,
    graph: Option<&str>,
    random: Option<&[u64]>,
    norms: &[String],
    power: u32,
    trials: usize,
    seed: u64,
) -> Outcome {
    let g = match (graph, random) {
        (Some(spec), _) => inputs.load::<RegularGraph>("graph", spec)?,
        (None, Some(&[n, k, s])) => random_regular(n as usize, k as usize, s)?,
        _ => return Err(Failure::Usage("give --graph or --random N K SEED".into())),
    };
    let mut spaces = Vec::new();
    for n in norms {
        spaces.push(inputs.load::<NormSpec>("norm", n)?);
    }
    if spaces.is_empty() {
        spaces.push(NormSpec::euclidean(2));
    }
    let r = graph_report(&g, &spaces, power, trials, seed)?;
    let mut checks: Vec<Assertion> = r
        .spaces
        .iter()
        .enumerate()
        .map(|(i, s)| Assertion::at_most(format!("space {i}: ε(G, X) lower ≤ upper"), s.lower, s.upper, 1e-12))
        .collect();
    for (i, o) in r.obstruction.iter().enumerate() {
        checks.push(Assertion::flag(
            format!("space {i}: obstruction inequalities"),
            o.status != ObstructionStatus::Violated,
            format!("{:?}: centring {} / spectral {} violations", o.status, o.centring_violations, o.spectral_violations),
        ));
    }
    Ok((to_value(&r), checks))
}

fn check(only: &[u8]) -> Outcome {
    let ids: Vec<u8> = if only.is_empty() { (1..=11).collect() } else { only.to_vec() };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=11).contains(&i)) {
        return Err(Failure::Usage(format!("no acceptance criterion {bad}; criteria are 1..=11")));
    }
    let results: Vec<acceptance::Criterion> = ids.iter().filter_map(|&i| acceptance::run(i)).collect();
    eprintln!("{:>3}  {:<6} {:<45} {:>9}", "id", "result", "criterion", "seconds");
    for c in &results {
        eprintln!("{:>3}  {:<6} {:<45} {:>9.2}", c.id, if c.passed { "PASS" } else { "FAIL" }, c.title, c.seconds);
        for k in c.checks.iter().filter(|k| !k.passed) {
            let note = acceptance::known_unattainable(c.id, k).map(|w| format!(" [known unattainable: {w}]")).unwrap_or_default();
            eprintln!("{:>12} {}: {}{note}", "", k.name, k.detail);
        }
    }
    let checks = results
        .iter()
        .flat_map(|c| {
            c.checks.iter().map(move |k| Assertion {
                name: format!("criterion {}: {}", c.id, k.name),
                ..k.clone()
            })
        })
        .collect();
    Ok((json!({ "criteria": results }), checks))
}
