//! The acceptance suite: eleven criteria, each a list of named checks with a
//! runtime budget. Shared by the `check` subcommand and the integration tests.

use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvature::{delta_estimate, duality_bound_check, hilbert_matrix, tau, tau_power, DeltaSearch};
use crate::density::change_of_density;
use crate::error::Result;
use crate::factor::{gamma_h, gamma_h_star, trace_pair};
use crate::graphs::{epsilon_g, obstruction_check, random_regular, ObstructionStatus, RegularGraph};
use crate::interp::{calderon_oracle, domination_check, interp_norm, rescaling_invariance_check, BoundaryFamily};
use crate::linalg::{norm2, op_norm_l2, phase, spectral_norm, MatrixOp, C64, ZERO};
use crate::norms::{dual_reg_ball_norm, fully_contractive_check, reg_norm_l2, tensor_op_norm, NormSpec};
use crate::report::Assertion as Check;
use crate::sample;

/// Checks whose stated target cannot be met; they are run and reported as
/// failing, and the reasons are kept here so callers can tell them apart.
pub const KNOWN_UNATTAINABLE: &[(u8, &str, &str)] = &[
    (
        2,
        "op norm variation < 5%",
        "‖Γ(n)‖ increases towards π logarithmically slowly; from n = 32 to 512 it moves by about 7.6%",
    ),
    (
        10,
        "ε(C5) = cos(2π/5)",
        "the second largest |λ| of the 5-cycle is cos(π/5) ≈ 0.8090, while cos(2π/5) ≈ 0.3090",
    ),
];

/// The reason a failing check is expected, when it is listed in
/// [`KNOWN_UNATTAINABLE`] for criterion `id`.
pub fn known_unattainable(id: u8, check: &Check) -> Option<&'static str> {
    KNOWN_UNATTAINABLE
        .iter()
        .find(|(c, name, _)| *c == id && *name == check.name)
        .map(|(_, _, why)| *why)
}

#[derive(Clone, Debug, Serialize)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub seconds: f64,
    pub budget_seconds: f64,
}

impl Criterion {
    /// One line: id, verdict, title, runtime and the failing checks.
    pub fn summary(&self) -> String {
        let failing: Vec<String> = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        format!(
            "criterion {:>2} {} {} [{:.1}s / {:.0}s]{}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.budget_seconds,
            if failing.is_empty() { String::new() } else { format!(": {}", failing.join("; ")) }
        )
    }
}

pub const TITLES: [&str; 11] = [
    "tau witness",
    "Hilbert matrix growth",
    "regular norm duality",
    "change of density",
    "interpolation oracle agreement",
    "rescaling invariance",
    "easy-half domination",
    "Delta for Hilbert space",
    "trace duality inequality suite",
    "graph spectra and obstruction inequalities",
    "gamma_H sanity",
];

const BUDGETS: [f64; 11] = [1.0, 60.0, 60.0, 30.0, 300.0, 60.0, 600.0, 120.0, 300.0, 120.0, 120.0];

/// Runs criterion `id` in `1..=11`.
pub fn run(id: u8) -> Option<Criterion> {
    let k = (id as usize).checked_sub(1).filter(|&k| k < 11)?;
    let start = Instant::now();
    let mut checks = match id {
        1 => tau_witness(),
        2 => hilbert_growth(),
        3 => reg_duality(),
        4 => density(),
        5 => oracle_agreement(),
        6 => rescaling(),
        7 => domination(),
        8 => delta_hilbert(),
        9 => trace_duality_suite(),
        10 => graph_spectra(),
        _ => gamma_h_sanity(),
    };
    let seconds = start.elapsed().as_secs_f64();
    checks.push(Check::new("runtime", BUDGETS[k] - seconds, BUDGETS[k], format!("{seconds:.2}s")));
    Some(Criterion {
        id,
        title: TITLES[k],
        passed: checks.iter().all(|c| c.passed),
        checks,
        seconds,
        budget_seconds: BUDGETS[k],
    })
}

pub fn run_all() -> Vec<Criterion> {
    (1..=11).filter_map(run).collect()
}

fn tau_witness() -> Vec<Check> {
    let t = tau();
    let mut out = Vec::new();
    match op_norm_l2(&t) {
        Ok(v) => out.push(Check::close("op norm", v, 0.5f64.sqrt(), 1e-12)),
        Err(e) => out.push(Check::error("op norm", e)),
    }
    match fully_contractive_check(&t) {
        Ok(f) => out.push(Check::flag("fully contractive", f.contractive, format!("l1 {} linf {}", f.l1, f.linf))),
        Err(e) => out.push(Check::error("fully contractive", e)),
    }
    match reg_norm_l2(&t) {
        Ok(v) => out.push(Check::close("regular norm", v, 1.0, 1e-12)),
        Err(e) => out.push(Check::error("regular norm", e)),
    }
    for m in 1..=6 {
        let name = format!("op norm of tau^{m}");
        match tau_power(m).and_then(|p| op_norm_l2(&p)) {
            Ok(v) => out.push(Check::close(name, v, 2f64.powf(-(m as f64) / 2.0), 1e-10)),
            Err(e) => out.push(Check::error(name, e)),
        }
    }
    out
}

fn hilbert_growth() -> Vec<Check> {
    let sizes = [32, 64, 128, 256, 512];
    let rows: Result<Vec<(f64, f64)>> = sizes
        .par_iter()
        .map(|&n| {
            let g = hilbert_matrix(n)?;
            Ok((op_norm_l2(&g)?, reg_norm_l2(&g)? / (n as f64 + 1.0).ln()))
        })
        .collect();
    let rows = match rows {
        Ok(r) => r,
        Err(e) => return vec![Check::error("Hilbert matrix norms", e)],
    };
    let spread = |v: Vec<f64>| -> (f64, f64) {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(0.0, f64::max);
        (lo, hi)
    };
    let (olo, ohi) = spread(rows.iter().map(|r| r.0).collect());
    let (rlo, rhi) = spread(rows.iter().map(|r| r.1).collect());
    let variation = ohi / olo - 1.0;
    vec![
        Check::new(
            "op norm variation < 5%",
            0.05 - variation,
            0.05,
            format!("op norms {:.6}..{:.6}, variation {:.2}%", olo, ohi, 100.0 * variation),
        ),
        Check::new(
            "reg/log(n+1) within a factor 2",
            2.0 - rhi / rlo,
            2.0,
            format!("ratios {:.6}..{:.6}", rlo, rhi),
        ),
    ]
}

/// `sup |Σ φ_ij a_ij|` over certified dual-ball candidates: the Perron
/// functional of `|a|` and random perturbations of it, each divided by the
/// certified bound for its dual norm.
fn dual_sup(a: &MatrixOp, seed: u64) -> Result<f64> {
    let n = a.rows();
    let s = spectral_norm(&a.modulus())?;
    let base = MatrixOp::from_fn(n, a.cols(), |i, j| phase(a.get(i, j)).conj() * (s.left[i].norm() * s.right[j].norm()));
    let mut r = sample::rng(seed);
    let mut best: f64 = 0.0;
    for k in 0..9 {
        let phi = if k == 0 {
            base.clone()
        } else {
            let e = sample::complex_matrix(&mut r, n, a.cols()).scale(0.05);
            base.add(&e)?
        };
        let (dn, _) = dual_reg_ball_norm(&phi)?;
        if dn > 0.0 {
            let pairing: C64 = phi.data().iter().zip(a.data()).map(|(p, x)| p * x).sum();
            best = best.max(pairing.norm() / dn);
        }
    }
    Ok(best)
}

fn reg_duality() -> Vec<Check> {
    let res: Result<Vec<(f64, f64)>> = (0..50u64)
        .into_par_iter()
        .map(|s| {
            let a = sample::complex_matrix(&mut sample::rng(1000 + s), 3, 3);
            Ok((dual_sup(&a, s)?, reg_norm_l2(&a)?))
        })
        .collect();
    match res {
        Ok(v) => {
            let low = v.iter().map(|(d, r)| d / r).fold(f64::INFINITY, f64::min);
            let excess = v.iter().map(|(d, r)| d - r).fold(f64::NEG_INFINITY, f64::max);
            vec![
                Check::new("dual sup ≥ 0.98 reg", low - 0.98, 0.02, format!("worst ratio {low:.9}")),
                Check::new("dual sup ≤ reg + 1e-8", 1e-8 - excess, 1e-8, format!("largest excess {excess:.3e}")),
            ]
        }
        Err(e) => vec![Check::error("dual sup", e)],
    }
}

fn density() -> Vec<Check> {
    let res: Result<Vec<(f64, f64)>> = (0..100u64)
        .into_par_iter()
        .map(|s| {
            let mut r = sample::rng(2000 + s);
            let t = sample::complex_matrix(&mut r, 5, 5);
            let t = t.scale(r.gen_range(0.5..1.0) / reg_norm_l2(&t)?);
            let d = change_of_density(&t, 1e-8)?;
            Ok((d.check.row_bound, d.check.column_bound))
        })
        .collect();
    let mut out = match res {
        Ok(v) => {
            let row = v.iter().map(|b| b.0).fold(0.0, f64::max);
            let col = v.iter().map(|b| b.1).fold(0.0, f64::max);
            vec![
                Check::new("row contraction", 1.0 + 1e-10 - row, 1e-10, format!("max {row:.12}")),
                Check::new("column contraction", 1.0 + 1e-10 - col, 1e-10, format!("max {col:.12}")),
            ]
        }
        Err(e) => vec![Check::error("random kernels", e)],
    };
    match change_of_density(&tau(), 1e-8) {
        Ok(d) => {
            let h = 0.5f64.sqrt();
            let vec_err = d.xi.iter().chain(&d.eta).map(|v| (v - h).abs()).fold(0.0, f64::max);
            let k = [1.0, 1.0, 1.0, -1.0];
            let ker_err = d.kernel.data().iter().zip(k).map(|(z, w)| (z - C64::new(w, 0.0)).norm()).fold(0.0, f64::max);
            out.push(Check::new("tau densities", 1e-10 - vec_err, 1e-10, format!("max error {vec_err:.3e}")));
            out.push(Check::new("tau kernel", 1e-10 - ker_err, 1e-10, format!("max error {ker_err:.3e}")));
        }
        Err(e) => out.push(Check::error("tau case", e)),
    }
    out
}

fn oracle_agreement() -> Vec<Check> {
    let ps = [1.0, 2.0, f64::INFINITY];
    let res: Result<Vec<(f64, f64, f64)>> = (0..20u64)
        .into_par_iter()
        .map(|s| {
            let mut r = sample::rng(3000 + s);
            let n = r.gen_range(1..=4);
            let mut pick = || NormSpec::lp(ps[r.gen_range(0..3)], (0..n).map(|_| r.gen_range(0.5..2.0)).collect());
            let (x0, x1) = (pick()?, pick()?);
            let theta = r.gen_range(0.2..0.8);
            let v = sample::complex_vector(&mut r, n);
            let oracle = calderon_oracle(&x0, &x1, theta)?.eval(&v);
            let f = BoundaryFamily::two_valued(x0, x1, theta)?;
            let b = interp_norm(&f, &v, ZERO, 32, 256, 0)?;
            Ok((b.lower.value, oracle, b.upper.value))
        })
        .collect();
    let mut out = match res {
        Ok(v) => {
            let below = v.iter().map(|(l, o, _)| l / o - 1.0).fold(f64::NEG_INFINITY, f64::max);
            let above = v.iter().map(|(_, o, u)| 1.0 - u / o).fold(f64::NEG_INFINITY, f64::max);
            let up = v.iter().map(|(_, o, u)| u / o).fold(0.0, f64::max);
            let down = v.iter().map(|(l, o, _)| o / l).fold(0.0, f64::max);
            vec![
                Check::new("lower ≤ oracle", 1e-9 - below, 1e-9, format!("largest lower/oracle − 1 = {below:.3e}")),
                Check::new("oracle ≤ upper", 1e-9 - above, 1e-9, format!("largest 1 − upper/oracle = {above:.3e}")),
                Check::new("upper/oracle ≤ 1.05", 1.05 - up, 0.05, format!("worst {up:.6}")),
                Check::new("oracle/lower ≤ 1.05", 1.05 - down, 0.05, format!("worst {down:.6}")),
            ]
        }
        Err(e) => vec![Check::error("random families", e)],
    };
    let l1_linf = NormSpec::lp_uniform(1.0, 2)
        .and_then(|a| BoundaryFamily::two_valued(a, NormSpec::lp_uniform(f64::INFINITY, 2)?, 0.5))
        .and_then(|f| interp_norm(&f, &[C64::new(1.0, 0.0); 2], ZERO, 32, 256, 0));
    match l1_linf {
        Ok(b) => {
            let r2 = 2f64.sqrt();
            out.push(Check::close("l1/linf upper = √2 ± 3%", b.upper.value / r2, 1.0, 0.03));
            out.push(Check::close("l1/linf lower = √2 ± 3%", b.lower.value / r2, 1.0, 0.03));
        }
        Err(e) => out.push(Check::error("l1/linf midpoint", e)),
    }
    out
}

fn rescaling() -> Vec<Check> {
    let res = NormSpec::lp_uniform(1.0, 2)
        .and_then(|a| BoundaryFamily::two_valued(a, NormSpec::lp_uniform(f64::INFINITY, 2)?, 0.5))
        .and_then(|f| {
            let gamma = |t: f64| (C64::new(2.0, 0.0) + C64::from_polar(1.0, t)).norm();
            rescaling_invariance_check(&f, &[C64::new(1.0, 0.0), C64::new(0.5, 0.5)], &gamma, 32, 256)
        });
    match res {
        Ok(r) => vec![
            Check::close("upper scales by 2", r.upper_ratio / 2.0, 1.0, 0.03),
            Check::close("lower scales by 2", r.lower_ratio / 2.0, 1.0, 0.03),
            Check::close("outer factor at 0", r.outer_center, 2.0, 1e-8),
        ],
        Err(e) => vec![Check::error("rescaling", e)],
    }
}

fn domination() -> Vec<Check> {
    let mut ops = vec![tau()];
    match hilbert_matrix(8).and_then(|g| Ok(g.scale(1.0 / reg_norm_l2(&g)?))) {
        Ok(g) => ops.push(g),
        Err(e) => return vec![Check::error("Γ(8)", e)],
    }
    let mut r = sample::rng(4000);
    ops.extend((0..20).map(|_| sample::complex_matrix(&mut r, 3, 3)));
    let jobs: Vec<(usize, f64)> = (0..ops.len()).flat_map(|i| [0.25, 0.5, 0.75].map(|t| (i, t))).collect();
    let res: Result<Vec<(usize, f64)>> = jobs
        .par_iter()
        .map(|&(i, theta)| {
            let rep = domination_check(&ops[i], theta, 10, 5000 + i as u64, 8, 64)?;
            Ok((rep.violations, rep.worst_margin))
        })
        .collect();
    match res {
        Ok(v) => {
            let violations: usize = v.iter().map(|x| x.0).sum();
            let worst = v.iter().map(|x| x.1).fold(f64::INFINITY, f64::min);
            vec![Check::new(
                "tensor lower ≤ pair upper + 1e-6",
                if violations == 0 { worst } else { -(violations as f64) },
                1e-6,
                format!("{} cases, {violations} violations, worst margin {worst:.3e}", jobs.len() * 10),
            )]
        }
        Err(e) => vec![Check::error("domination", e)],
    }
}

fn delta_hilbert() -> Vec<Check> {
    let mut out = Vec::new();
    let h = NormSpec::euclidean(2);
    let l1 = match NormSpec::lp_uniform(1.0, 2) {
        Ok(s) => s,
        Err(e) => return vec![Check::error("ℓ1", e)],
    };
    let mut estimates = Vec::new();
    for eps in [0.1, 0.3, 0.7] {
        match delta_estimate(&h, eps, DeltaSearch::default()) {
            Ok(d) => {
                out.push(Check::close(format!("Hilbertian lower at {eps}"), d.lower, eps, 1e-6));
                out.push(Check::close(format!("Hilbertian upper at {eps}"), d.upper, eps, 1e-6));
                estimates.push((h.clone(), d));
            }
            Err(e) => out.push(Check::error(format!("Hilbertian at {eps}"), e)),
        }
    }
    let eps = 0.5f64.sqrt();
    match delta_estimate(&l1, eps, DeltaSearch::default()) {
        Ok(d) => {
            out.push(Check::new("ℓ1^2 lower ≥ 1 − 1e-6", d.lower - (1.0 - 1e-6), 1e-6, format!("{:.9}", d.lower)));
            estimates.push((l1.clone(), d));
        }
        Err(e) => out.push(Check::error("ℓ1^2", e)),
    }
    let mut worst = f64::INFINITY;
    let mut detail = String::new();
    for (x, d) in &estimates {
        let value = tensor_op_norm(&d.witness, x).map(|t| t.lower).unwrap_or(f64::INFINITY);
        let reg = reg_norm_l2(&d.witness).unwrap_or(f64::INFINITY);
        let op = op_norm_l2(&d.witness).unwrap_or(f64::INFINITY);
        let bound = ((x.dim() as f64).sqrt() * d.eps).min(1.0);
        let m = (bound + 1e-9 - value).min(1.0 + 1e-9 - reg).min(d.eps + 1e-9 - op);
        if m < worst {
            worst = m;
            detail = format!("ε = {}: value {value:.9}, bound {bound:.9}, reg {reg:.9}, op {op:.9}", d.eps);
        }
    }
    out.push(Check::new("witnesses within √dim bound", worst, 1e-9, detail));
    out
}

fn trace_duality_suite() -> Vec<Check> {
    let jobs: Vec<(u64, f64)> = (0..500u64).flat_map(|s| [(s, 0.2), (s, 0.5)]).collect();
    let res: Result<Vec<f64>> = jobs
        .par_iter()
        .map(|&(s, eps)| {
            let mut r = sample::rng(6000 + s);
            let (n, d) = (4, 1 + (s as usize % 3));
            let v = sample::complex_matrix(&mut r, n, n);
            let mut j = sample::complex_matrix(&mut r, n, d);
            let mut q = sample::complex_matrix(&mut r, d, n);
            for i in 0..n {
                let c = norm2(j.row(i)).max(1.0);
                for k in 0..d {
                    j.set(i, k, j.get(i, k) / c);
                }
                let c = norm2(&q.column(i)).max(1.0);
                for k in 0..d {
                    q.set(k, i, q.get(k, i) / c);
                }
            }
            let b = duality_bound_check(&v, &NormSpec::euclidean(d), eps, &j, &q)?;
            Ok(if b.holds { b.margin.max(0.0) } else { b.margin.min(-f64::MIN_POSITIVE) })
        })
        .collect();
    match res {
        Ok(m) => {
            let violations = m.iter().filter(|&&x| x < 0.0).count();
            let worst = m.iter().copied().fold(f64::INFINITY, f64::min);
            vec![Check::new(
                "trace duality inequality",
                if violations == 0 { worst } else { -(violations as f64) },
                0.0,
                format!("{} trials, {violations} violations, worst margin {worst:.3e}", m.len()),
            )]
        }
        Err(e) => vec![Check::error("trace duality inequality", e)],
    }
}

fn graph_spectra() -> Vec<Check> {
    let mut out = Vec::new();
    let pi = std::f64::consts::PI;
    let named: Vec<(&str, Result<RegularGraph>, f64)> = vec![
        ("ε(K4) = 1/3", RegularGraph::complete(4), 1.0 / 3.0),
        ("ε(C5) = cos(2π/5)", RegularGraph::cycle(5), (2.0 * pi / 5.0).cos()),
        ("ε(Petersen) = 2/3", Ok(RegularGraph::petersen()), 2.0 / 3.0),
    ];
    let mut graphs = Vec::new();
    for (name, g, want) in named {
        match g.and_then(|g| Ok((epsilon_g(&g)?, g))) {
            Ok((e, g)) => {
                out.push(Check::close(name, e, want, 1e-10));
                if g.n == 5 {
                    out.push(Check::close("ε(C5) ≈ 0.8090", e, 0.8090, 5e-5));
                }
                graphs.push(g);
            }
            Err(e) => out.push(Check::error(name, e)),
        }
    }
    let spaces = [NormSpec::euclidean(2), NormSpec::lp_uniform(1.0, 3).expect("valid")];
    let mut worst = f64::INFINITY;
    let mut violations = 0;
    for (gi, g) in graphs.iter().enumerate() {
        for (xi, x) in spaces.iter().enumerate() {
            match obstruction_check(g, x, 1, 500, 7000 + 10 * gi as u64 + xi as u64) {
                Ok(r) => {
                    violations += r.centring_violations;
                    worst = worst.min(1.0 - r.centring_worst_ratio);
                }
                Err(e) => out.push(Check::error("centring inequality", e)),
            }
        }
    }
    out.push(Check::new(
        "centring inequality with constant 2",
        if violations == 0 { worst } else { -(violations as f64) },
        0.0,
        format!("500 functions per graph and space, {violations} violations, worst ratio {:.6}", 1.0 - worst),
    ));
    for seed in 0..3 {
        let name = format!("spectral inequality on random 3-regular graph, seed {seed}");
        match random_regular(50, 3, seed).and_then(|g| obstruction_check(&g, &NormSpec::euclidean(3), 2, 200, 7100 + seed)) {
            Ok(r) => {
                let ratio = r.spectral_worst_ratio.unwrap_or(f64::INFINITY);
                let ok = r.status == ObstructionStatus::Holds && r.spectral_violations == 0;
                out.push(Check::new(
                    name,
                    if ok { 1.0 - ratio } else { -1.0 },
                    0.0,
                    format!("status {:?}, worst ratio {ratio:.6}, ε = {:.6}", r.status, r.epsilon),
                ));
            }
            Err(e) => out.push(Check::error(name, e)),
        }
    }
    out
}

fn gamma_h_sanity() -> Vec<Check> {
    let mut out = Vec::new();
    let ones = MatrixOp::from_fn(3, 3, |_, _| C64::new(1.0, 0.0));
    for (name, u) in [("γ_H(identity) = 1", MatrixOp::identity(3)), ("γ_H(all-ones) = 1", ones)] {
        match gamma_h(&u, 1e-6) {
            Ok(g) => out.push(Check::close(name, g.value, 1.0, 1e-6)),
            Err(e) => out.push(Check::error(name, e)),
        }
    }
    let res: Result<Vec<f64>> = (0..200u64)
        .into_par_iter()
        .map(|s| {
            let mut r = sample::rng(8000 + s);
            let u = sample::complex_matrix(&mut r, 3, 3);
            let v = sample::complex_matrix(&mut r, 3, 3);
            let bound = gamma_h(&u, 1e-6)?.value * gamma_h_star(&v)?.value * (1.0 + 1e-6);
            Ok(1.0 - trace_pair(&u, &v).norm() / bound)
        })
        .collect();
    match res {
        Ok(m) => {
            let worst = m.iter().copied().fold(f64::INFINITY, f64::min);
            out.push(Check::new("|tr(uv)| ≤ γ_H(u) γ*_H(v)", worst, 1e-6, format!("200 pairs, worst relative slack {worst:.3e}")));
        }
        Err(e) => out.push(Check::error("trace duality", e)),
    }
    out
}
