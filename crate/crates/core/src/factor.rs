//! Factorization through Hilbert space between `ℓ_1^n` and `ℓ_∞^m`.
//!
//! `γ_H(u)` is the infimum of `sup_i ‖h_i‖ · sup_j ‖k_j‖` over vectors with
//! `u_ij = Σ_l h_i[l] k_j[l]`; it coincides with the Schur multiplier norm of
//! `u`. Its trace dual `γ*_H(v) = sup { |tr(uv)| : γ_H(u) ≤ 1 }` is computed
//! through diagonal scalings `v_ij = λ_i a_ij μ_j`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, norm2, spectral_norm, svd, MatrixOp, C64, ZERO};
use crate::optim::Lbfgs;
use crate::sample;

const ASCENT_ITERS: usize = 2000;
const ASCENT_STARTS: usize = 8;
const FLOOR: f64 = 1e-10;
const PSD_SWEEPS: usize = 5000;
const PSD_FEASIBLE: f64 = 1e-9;
const PSD_STALL: f64 = 1e-7;

/// `Σ_ij |v_ij|`, the nuclear norm of `v: ℓ_∞ → ℓ_1`.
pub fn nuclear_norm_linf_l1(v: &MatrixOp) -> f64 {
    v.data().iter().map(|z| z.norm()).sum()
}

/// A factorization `u_ij = Σ_l h_i[l] k_j[l]`.
#[derive(Clone, Debug, Serialize)]
pub struct GammaHCertificate {
    pub h: Vec<Vec<C64>>,
    pub k: Vec<Vec<C64>>,
    /// `sup_i ‖h_i‖ · sup_j ‖k_j‖`.
    pub value: f64,
}

impl GammaHCertificate {
    fn new(h: Vec<Vec<C64>>, k: Vec<Vec<C64>>) -> Self {
        let hm = h.iter().map(|v| norm2(v)).fold(0.0, f64::max);
        let km = k.iter().map(|v| norm2(v)).fold(0.0, f64::max);
        Self { h, k, value: hm * km }
    }

    pub fn product(&self) -> MatrixOp {
        MatrixOp::from_fn(self.h.len(), self.k.len(), |i, j| {
            self.h[i].iter().zip(&self.k[j]).fold(ZERO, |a, (&x, &y)| a + x * y)
        })
    }

    /// `max_ij |u_ij − Σ_l h_i[l] k_j[l]|`.
    pub fn residual(&self, u: &MatrixOp) -> f64 {
        let p = self.product();
        u.data()
            .iter()
            .zip(p.data())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }


    /// Appends coordinates absorbing the residual `R = u − Σ h_i k_j`, so that
    /// the factorization becomes exact: `h_i ← [h_i; α_i e_i]`,
    /// `k_j ← [k_j; (R_ij / α_i)_i]`. Either a uniform `α` (value grows by at
    /// most the largest column norm of `R`) or the slack `α_i² = H² − ‖h_i‖²`
    /// of each row is used, whichever is smaller.
    fn corrected(self, u: &MatrixOp) -> Self {
        let p = self.product();
        let r = u.sub(&p).expect("same shape");
        let rho = (0..r.cols()).map(|j| norm2(&r.column(j))).fold(0.0, f64::max);
        if rho == 0.0 {
            return self;
        }
        let hn: Vec<f64> = self.h.iter().map(|v| norm2(v)).collect();
        let hm = hn.iter().copied().fold(0.0, f64::max);
        let km = self.k.iter().map(|v| norm2(v)).fold(0.0, f64::max);
        let uniform = if hm > 0.0 && km > 0.0 { (rho * hm / km).sqrt() } else { rho.sqrt() };
        let tiny = 1e-12 * u.max_abs();
        let dirty: Vec<bool> = (0..r.rows()).map(|i| r.row(i).iter().any(|z| z.norm() > tiny)).collect();
        let slack: Vec<f64> = hn.iter().map(|&t| (hm * hm - t * t).max(0.0).sqrt()).collect();
        let slack_ok = (0..r.rows()).all(|i| !dirty[i] || slack[i] > 1e-6 * hm);
        let build = |alpha: &dyn Fn(usize) -> f64| -> Self {
            let m = u.rows();
            let h = self
                .h
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let mut v = v.clone();
                    v.extend((0..m).map(|l| if l == i && dirty[i] { C64::new(alpha(i), 0.0) } else { ZERO }));
                    v
                })
                .collect();
            let k = self
                .k
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let mut v = v.clone();
                    v.extend((0..m).map(|i| if dirty[i] { r.get(i, j) / alpha(i) } else { ZERO }));
                    v
                })
                .collect();
            Self::new(h, k)
        };
        let a = build(&|_| uniform);
        if slack_ok {
            let b = build(&|i| slack[i]);
            if b.value < a.value {
                return b;
            }
        }
        a
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Bracket {
    Converged,
    /// The refinement could not close the bracket to the requested tolerance.
    Indeterminate { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaH {
    /// The certified upper bound, `certificate.value`.
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub bracket: Bracket,
    /// Nonnegative unit vectors with `‖D_x u D_y‖_tr = lower`.
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub certificate: GammaHCertificate,
    pub psd_sweeps: usize,
}

/// `γ_H(u)` to relative tolerance `tol` (at least `1e-8`).
///
/// The lower bound maximizes `‖D_x u D_y‖_tr` over unit `x, y ≥ 0` by
/// alternating updates, each of which cannot decrease the trace norm. The
/// singular value decomposition at the best `(x, y)` yields a factorization
/// which is optimal when the ascent has converged. If a gap remains, the
/// bracket is narrowed by bisection on the positive semidefinite completion
/// `[[A, u/c], [u*/c, B]] ⪰ 0`, `diag A, diag B ≤ 1`.
pub fn gamma_h(u: &MatrixOp, tol: f64) -> Result<GammaH> {
    if u.is_empty() {
        return Err(Error::EmptyOperator);
    }
    if !(tol >= 1e-8) {
        return Err(Error::InvalidParameter(format!("gamma_h tolerance {tol} below 1e-8")));
    }
    let (m, n) = (u.rows(), u.cols());
    let max_entry = u.max_abs();
    if max_entry == 0.0 {
        return Ok(GammaH {
            value: 0.0,
            lower: 0.0,
            upper: 0.0,
            bracket: Bracket::Converged,
            x: uniform(m),
            y: uniform(n),
            certificate: GammaHCertificate::new(vec![vec![]; m], vec![vec![]; n]),
            psd_sweeps: 0,
        });
    }

    let (istar, jstar) = argmax_entry(u);
    let starts: Vec<(Vec<f64>, Vec<f64>)> = (0..ASCENT_STARTS)
        .map(|s| match s {
            0 => (uniform(m), uniform(n)),
            1 => (unit_at(m, istar), unit_at(n, jstar)),
            2 => (sqrt_normalized(&u.row_abs_sums()), sqrt_normalized(&u.col_abs_sums())),
            _ => {
                let mut r = sample::rng(s as u64);
                let x: Vec<f64> = sample::complex_vector(&mut r, m).iter().map(|z| z.norm()).collect();
                let y: Vec<f64> = sample::complex_vector(&mut r, n).iter().map(|z| z.norm()).collect();
                (unit_real(x), unit_real(y))
            }
        })
        .collect();
    let runs: Vec<Result<(f64, Vec<f64>, Vec<f64>)>> =
        starts.into_par_iter().map(|(x, y)| trace_ascent(u, x, y)).collect();
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    for r in runs {
        let r = r?;
        if best.as_ref().map_or(true, |b| r.0 > b.0) {
            best = Some(r);
        }
    }
    let (trace_lower, x, y) = best.expect("at least one start");
    let mut lower = trace_lower.max(max_entry);

    let mut certs = vec![
        ascent_factorization(u, &x, &y)?,
        row_factorization(u),
        row_factorization(&u.transpose()).transposed(),
    ];
    certs.push(svd_factorization(u)?);
    let (bl, bc) = barrier_path(u, &x, &y)?;
    lower = lower.max(bl);
    certs.extend(bc);
    let mut cert = certs
        .into_iter()
        .map(|c| c.corrected(u))
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("candidates");

    let mut bracket = Bracket::Converged;
    let mut sweeps = 0;
    if cert.value > lower * (1.0 + tol) {
        let mut lo = lower;
        let mut hi = cert.value;
        let mut undecided = false;
        while hi > lo * (1.0 + tol) {
            let c = 0.5 * (lo + hi);
            let (outcome, s) = psd_feasible(u, c);
            sweeps += s;
            match outcome {
                Feasibility::Feasible(g) => {
                    let found = gram_factorization(u, &g, c)?.corrected(u);
                    if found.value < cert.value {
                        cert = found;
                    }
                    hi = c;
                }
                Feasibility::Infeasible => lo = c,
                Feasibility::Undecided => {
                    undecided = true;
                    break;
                }
            }
        }
        lower = lower.max(lo);
        if undecided || cert.value > lower * (1.0 + tol) {
            bracket = Bracket::Indeterminate { lo: lower, hi: cert.value };
        }
    }
    Ok(GammaH {
        value: cert.value,
        lower,
        upper: cert.value,
        bracket,
        x,
        y,
        certificate: cert,
        psd_sweeps: sweeps,
    })
}

/// The Schur multiplier norm of `φ`, equal to `γ_H(φ)`.
pub fn schur_multiplier_norm(phi: &MatrixOp, tol: f64) -> Result<GammaH> {
    gamma_h(phi, tol)
}

fn uniform(n: usize) -> Vec<f64> {
    vec![1.0 / (n as f64).sqrt(); n]
}

fn unit_at(n: usize, k: usize) -> Vec<f64> {
    // a tiny spread keeps every coordinate in play
    let mut v = vec![1e-3; n];
    v[k] = 1.0;
    unit_real(v)
}

fn sqrt_normalized(a: &[f64]) -> Vec<f64> {
    unit_real(a.iter().map(|t| t.sqrt().max(FLOOR)).collect())
}

fn unit_real(mut v: Vec<f64>) -> Vec<f64> {
    let s = v.iter().map(|t| t * t).sum::<f64>().sqrt();
    if s > 0.0 {
        v.iter_mut().for_each(|t| *t /= s);
        v
    } else {
        uniform(v.len())
    }
}

fn argmax_entry(u: &MatrixOp) -> (usize, usize) {
    let k = u
        .data()
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
        .map(|(k, _)| k)
        .unwrap_or(0);
    (k / u.cols(), k % u.cols())
}

fn scaled(u: &MatrixOp, x: &[f64], y: &[f64]) -> MatrixOp {
    MatrixOp::from_fn(u.rows(), u.cols(), |i, j| u.get(i, j) * (x[i] * y[j]))
}

fn trace_ascent(u: &MatrixOp, mut x: Vec<f64>, mut y: Vec<f64>) -> Result<(f64, Vec<f64>, Vec<f64>)> {
    let mut best = svd(&scaled(u, &x, &y))?.trace_norm();
    for _ in 0..ASCENT_ITERS {
        let s = svd(&scaled(u, &x, &y))?;
        // W = P Q*, C = Re(conj(W) ∘ u); the trace norm of D_x u D_y is x^T C y
        let (m, n) = (u.rows(), u.cols());
        let c = MatrixOp::from_fn(m, n, |i, j| {
            let w = (0..s.s.len()).fold(ZERO, |a, l| a + s.u.get(i, l) * s.v.get(j, l).conj());
            C64::new((w.conj() * u.get(i, j)).re, 0.0)
        });
        let top = spectral_norm(&c)?;
        let nx = unit_real(top.left.iter().map(|z| z.norm().max(FLOOR)).collect());
        let ny = unit_real(top.right.iter().map(|z| z.norm().max(FLOOR)).collect());
        let value = svd(&scaled(u, &nx, &ny))?.trace_norm();
        if value <= best * (1.0 + 1e-14) {
            if value > best {
                best = value;
                x = nx;
                y = ny;
            }
            break;
        }
        best = value;
        x = nx;
        y = ny;
    }
    Ok((best, x, y))
}

/// `u_ij = Σ_l (P Σ^{1/2})_il / x_i · (Σ^{1/2} Q*)_lj / y_j` for
/// `D_x u D_y = P Σ Q*` on rows and columns with non-negligible weight. The
/// remaining rows, then columns, are filled with minimum-norm solutions of
/// their interpolation equations; the other order is tried as well.
fn ascent_factorization(u: &MatrixOp, x: &[f64], y: &[f64]) -> Result<GammaHCertificate> {
    let s = svd(&scaled(u, x, y))?;
    let r = s.s.len();
    let top = x.iter().chain(y).fold(0.0f64, |a, &b| a.max(b));
    let mut best: Option<GammaHCertificate> = None;
    // which weights count as zero is decided by trying several cut-offs
    for rel in [1e-8, 1e-6, 1e-4, 1e-3, 1e-2] {
        let cut = rel * top;
        let h: Vec<Option<Vec<C64>>> = (0..u.rows())
            .map(|i| (x[i] > cut).then(|| (0..r).map(|l| s.u.get(i, l) * s.s[l].sqrt() / x[i]).collect()))
            .collect();
        let k: Vec<Option<Vec<C64>>> = (0..u.cols())
            .map(|j| (y[j] > cut).then(|| (0..r).map(|l| s.v.get(j, l).conj() * s.s[l].sqrt() / y[j]).collect()))
            .collect();
        let c = complete(u, h, k, r)?.corrected(u);
        if best.as_ref().map_or(true, |b| c.value < b.value) {
            best = Some(c);
        }
    }
    Ok(best.expect("cut-offs tried"))
}

/// Follows the maximizers of `log ‖D_x u D_y‖_tr + t Σ log(x_i²) + t Σ log(y_j²)`
/// on unit vectors as `t → 0`. Interior maximizers give well-defined
/// factorizations whose value exceeds the trace norm by `O(t (m + n))`, which
/// handles optima with vanishing weights.
fn barrier_path(u: &MatrixOp, x0: &[f64], y0: &[f64]) -> Result<(f64, Vec<GammaHCertificate>)> {
    let (m, n) = (u.rows(), u.cols());
    let mut z: Vec<f64> = x0.iter().chain(y0).map(|&v| v.max(1e-6).ln()).collect();
    let mut lower: f64 = 0.0;
    let mut out = Vec::new();
    for e in 2..=11 {
        let t = 10f64.powi(-e);
        let run = Lbfgs { max_iter: 300, ..Default::default() }
            .minimize(|z| barrier_objective(u, z, t).unwrap_or((f64::INFINITY, vec![0.0; m + n])), z);
        z = run.x;
        let (x, y) = unit_from_log(&z, m);
        let s = svd(&scaled(u, &x, &y))?;
        lower = lower.max(s.trace_norm());
        let r = s.s.len();
        let h = (0..m)
            .map(|i| (0..r).map(|l| s.u.get(i, l) * s.s[l].sqrt() / x[i]).collect())
            .collect();
        let k = (0..n)
            .map(|j| (0..r).map(|l| s.v.get(j, l).conj() * s.s[l].sqrt() / y[j]).collect())
            .collect();
        out.push(GammaHCertificate::new(h, k));
    }
    Ok((lower, out))
}

fn unit_from_log(z: &[f64], m: usize) -> (Vec<f64>, Vec<f64>) {
    let (s, t) = z.split_at(m);
    let f = |w: &[f64]| {
        let mx = w.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        unit_real(w.iter().map(|&v| (v - mx).exp()).collect())
    };
    (f(s), f(t))
}

/// Negated barrier objective in log coordinates `x_i ∝ e^{s_i}`.
fn barrier_objective(u: &MatrixOp, z: &[f64], t: f64) -> Result<(f64, Vec<f64>)> {
    let (m, n) = (u.rows(), u.cols());
    let (x, y) = unit_from_log(z, m);
    if x.iter().chain(&y).any(|&v| !(v > 0.0)) {
        return Ok((f64::INFINITY, vec![0.0; m + n]));
    }
    let s = svd(&scaled(u, &x, &y))?;
    let tr = s.trace_norm();
    if !(tr > 0.0) {
        return Ok((f64::INFINITY, vec![0.0; m + n]));
    }
    let r = s.s.len();
    let mut value = tr.ln();
    let mut g = Vec::with_capacity(m + n);
    for i in 0..m {
        let d: f64 = (0..r).map(|l| s.u.get(i, l).norm_sqr() * s.s[l]).sum();
        let a = x[i] * x[i];
        value += t * a.ln();
        g.push(-(d / tr - a + 2.0 * t * (1.0 - m as f64 * a)));
    }
    for j in 0..n {
        let d: f64 = (0..r).map(|l| s.v.get(j, l).norm_sqr() * s.s[l]).sum();
        let b = y[j] * y[j];
        value += t * b.ln();
        g.push(-(d / tr - b + 2.0 * t * (1.0 - n as f64 * b)));
    }
    Ok((-value, g))
}

/// Fills each missing `h_i` (resp. `k_j`) with the minimum-norm solution of
/// its equations against the known `k_j` (resp. `h_i`). Entries between two
/// filled vectors are left to the residual correction.
fn complete(
    u: &MatrixOp,
    h: Vec<Option<Vec<C64>>>,
    k: Vec<Option<Vec<C64>>>,
    r: usize,
) -> Result<GammaHCertificate> {
    let fill = |u: &MatrixOp, own: &[Option<Vec<C64>>], other: &[Option<Vec<C64>>]| -> Result<Vec<Vec<C64>>> {
        let known: Vec<usize> = (0..other.len()).filter(|&j| other[j].is_some()).collect();
        let a = MatrixOp::from_fn(known.len().max(1), r, |p, l| {
            known.get(p).map_or(ZERO, |&j| other[j].as_ref().expect("known")[l])
        });
        own.iter()
            .enumerate()
            .map(|(i, v)| match v {
                Some(v) => Ok(v.clone()),
                None => {
                    let b: Vec<C64> = (0..known.len().max(1))
                        .map(|p| known.get(p).map_or(ZERO, |&j| u.get(i, j)))
                        .collect();
                    min_norm_solve(&a, &b)
                }
            })
            .collect()
    };
    let hs = fill(u, &h, &k)?;
    let ks = fill(&u.transpose(), &k, &h)?;
    Ok(GammaHCertificate::new(hs, ks))
}

/// Minimum-norm least-squares solution of `a z = b`.
fn min_norm_solve(a: &MatrixOp, b: &[C64]) -> Result<Vec<C64>> {
    let s = svd(a)?;
    let tol = 1e-12 * s.s.first().copied().unwrap_or(0.0);
    let mut z = vec![ZERO; a.cols()];
    for l in 0..s.s.len() {
        if s.s[l] > tol {
            let c = (0..a.rows()).fold(ZERO, |acc, i| acc + s.u.get(i, l).conj() * b[i]) / s.s[l];
            for (p, zp) in z.iter_mut().enumerate() {
                *zp += s.v.get(p, l) * c;
            }
        }
    }
    Ok(z)
}

/// `h_i` = row `i` of `u`, `k_j = e_j`.
fn row_factorization(u: &MatrixOp) -> GammaHCertificate {
    let n = u.cols();
    let h = (0..u.rows()).map(|i| u.row(i).to_vec()).collect();
    let k = (0..n)
        .map(|j| (0..n).map(|l| if l == j { C64::new(1.0, 0.0) } else { ZERO }).collect())
        .collect();
    GammaHCertificate::new(h, k)
}

impl GammaHCertificate {
    fn transposed(self) -> Self {
        Self { h: self.k, k: self.h, value: self.value }
    }
}

fn svd_factorization(u: &MatrixOp) -> Result<GammaHCertificate> {
    let s = svd(u)?;
    let r = s.s.len();
    let h = (0..u.rows())
        .map(|i| (0..r).map(|l| s.u.get(i, l) * s.s[l].sqrt()).collect())
        .collect();
    let k = (0..u.cols())
        .map(|j| (0..r).map(|l| s.v.get(j, l).conj() * s.s[l].sqrt()).collect())
        .collect();
    Ok(GammaHCertificate::new(h, k))
}

enum Feasibility {
    Feasible(MatrixOp),
    Infeasible,
    Undecided,
}

/// Alternating projections between the positive semidefinite cone and
/// `{G : G_12 = u/c, diag G ≤ 1}`.
fn psd_feasible(u: &MatrixOp, c: f64) -> (Feasibility, usize) {
    let (m, n) = (u.rows(), u.cols());
    let d = m + n;
    let target = |i: usize, j: usize| -> Option<C64> {
        match (i < m, j < m) {
            (true, false) => Some(u.get(i, j - m) / c),
            (false, true) => Some(u.get(j, i - m).conj() / c),
            _ => None,
        }
    };
    let project_affine = |g: &mut MatrixOp| {
        for i in 0..d {
            for j in 0..d {
                if let Some(t) = target(i, j) {
                    g.set(i, j, t);
                } else if i == j {
                    let v = g.get(i, i).re.min(1.0);
                    g.set(i, i, C64::new(v, 0.0));
                }
            }
        }
    };
    let mut g = MatrixOp::identity(d);
    project_affine(&mut g);
    let mut last = f64::INFINITY;
    let mut stalled = 0;
    for sweep in 1..=PSD_SWEEPS {
        let e = match herm_eig(&g) {
            Ok(e) => e,
            Err(_) => return (Feasibility::Undecided, sweep),
        };
        let p = e.reconstruct(|l| l.max(0.0));
        let mut q = p.clone();
        project_affine(&mut q);
        let dist = p.sub(&q).expect("same shape").frobenius();
        if dist < PSD_FEASIBLE {
            return (Feasibility::Feasible(p), sweep);
        }
        if sweep > 50 && dist > PSD_STALL && dist > last * (1.0 - 1e-6) {
            stalled += 1;
            if stalled > 20 {
                return (Feasibility::Infeasible, sweep);
            }
        } else {
            stalled = 0;
        }
        last = dist;
        g = q;
    }
    (Feasibility::Undecided, PSD_SWEEPS)
}

fn gram_factorization(u: &MatrixOp, g: &MatrixOp, c: f64) -> Result<GammaHCertificate> {
    let m = u.rows();
    let e = herm_eig(g)?;
    let d = g.rows();
    let root = |i: usize| -> Vec<C64> {
        (0..d)
            .map(|l| e.vectors.get(i, l) * e.values[l].max(0.0).sqrt())
            .collect()
    };
    let h = (0..m).map(|i| root(i).into_iter().map(|z| z * c).collect()).collect();
    let k = (0..u.cols())
        .map(|j| root(m + j).into_iter().map(|z| z.conj()).collect())
        .collect();
    Ok(GammaHCertificate::new(h, k))
}

/// `v_ij = λ_i a_ij μ_j`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingCertificate {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub a: MatrixOp,
    /// `‖λ‖_2 · ‖a‖ · ‖μ‖_2`.
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GammaHStar {
    /// The certified upper bound, `certificate.value`.
    pub value: f64,
    pub lower: f64,
    pub gap: f64,
    pub certificate: ScalingCertificate,
    /// `u` with `γ_H(u) ≤ 1` attaining `lower` as `|tr(uv)|`.
    pub witness: MatrixOp,
}

/// `γ*_H(v)`: the upper bound minimizes `‖λ‖‖μ‖ ‖D_λ^{-1} v D_μ^{-1}‖` over
/// positive scalings, in log coordinates with the largest singular value
/// smoothed by a power mean whose exponent is raised in stages. The lower
/// bound evaluates `|tr(uv)|` on candidates `u` carrying an explicit
/// factorization, so that `γ_H(u)` is bounded in closed form.
pub fn gamma_h_star(v: &MatrixOp) -> Result<GammaHStar> {
    if v.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let (n, m) = (v.rows(), v.cols());
    if v.max_abs() == 0.0 {
        return Ok(GammaHStar {
            value: 0.0,
            lower: 0.0,
            gap: 0.0,
            certificate: ScalingCertificate {
                lambda: vec![0.0; n],
                mu: vec![0.0; m],
                a: MatrixOp::zeros(n, m),
                value: 0.0,
            },
            witness: MatrixOp::zeros(m, n),
        });
    }
    // zero rows and columns carry zero weight (0/0 = 0)
    let rows: Vec<usize> = (0..n).filter(|&i| v.row(i).iter().any(|z| z.norm() > 0.0)).collect();
    let cols: Vec<usize> = (0..m).filter(|&j| (0..n).any(|i| v.get(i, j).norm() > 0.0)).collect();
    let w = MatrixOp::from_fn(rows.len(), cols.len(), |a, b| v.get(rows[a], cols[b]));
    let rs = w.row_abs_sums();
    let cs = w.col_abs_sums();
    let mut z: Vec<f64> = rs.iter().chain(&cs).map(|s| 0.25 * s.ln()).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut stages: Vec<(Vec<f64>, f64)> = Vec::new();
    for stage in 0..12 {
        let beta = 4f64.powi(stage + 1);
        let run = Lbfgs { max_iter: 400, ..Default::default() }.minimize(
            |z| smoothed_scaling(&w, z, beta).unwrap_or((f64::INFINITY, vec![0.0; z.len()])),
            z,
        );
        z = run.x;
        let exact = scaling_from_log(&w, &z).0;
        if best.as_ref().map_or(true, |b| exact < b.0) {
            best = Some((exact, z.clone()));
        }
        stages.push((z.clone(), beta));
    }
    let (_, zb) = best.expect("stages ran");
    let (_, lam_w, mu_w) = scaling_from_log(&w, &zb);
    let mut lambda = vec![0.0; n];
    let mut mu = vec![0.0; m];
    for (a, &i) in rows.iter().enumerate() {
        lambda[i] = lam_w[a];
    }
    for (b, &j) in cols.iter().enumerate() {
        mu[j] = mu_w[b];
    }
    let cert = scaling_certificate(v, &lambda, &mu)?;

    // At a stationary point of the smoothed problem with weights π_l on the
    // singular triples (σ_l, U_l, V_l) of D_λ^{-1} w D_μ^{-1}, the vectors
    // h_i[l] = √π_l conj(U_il) ‖λ‖/λ_i and k_j[l] = √π_l V_jl ‖μ‖/μ_j have unit
    // norm, and u_ji = Σ_l k_j[l] h_i[l] gives tr(uw) = ‖λ‖‖μ‖ Σ_l π_l σ_l.
    let mut candidates: Vec<(MatrixOp, f64)> = Vec::new();
    for (z, beta) in stages.iter().rev().take(6) {
        let (_, lam, muw) = scaling_from_log(&w, z);
        let a = MatrixOp::from_fn(w.rows(), w.cols(), |i, j| w.get(i, j) / (lam[i] * muw[j]));
        let s = svd(&a)?;
        let top = s.s[0];
        let raw: Vec<f64> = s.s.iter().map(|&x| if x > 0.0 { (beta * (x / top).ln()).exp() } else { 0.0 }).collect();
        let tot: f64 = raw.iter().sum();
        let pi: Vec<f64> = raw.iter().map(|x| x / tot).collect();
        let ln = norm2_real(&lam);
        let mn = norm2_real(&muw);
        let h: Vec<Vec<C64>> = (0..w.rows())
            .map(|i| (0..pi.len()).map(|l| s.u.get(i, l).conj() * (pi[l].sqrt() * ln / lam[i])).collect())
            .collect();
        let k: Vec<Vec<C64>> = (0..w.cols())
            .map(|j| (0..pi.len()).map(|l| s.v.get(j, l) * (pi[l].sqrt() * mn / muw[j])).collect())
            .collect();
        let c = GammaHCertificate::new(k, h);
        if c.value > 0.0 {
            let small = c.product();
            let mut u = MatrixOp::zeros(m, n);
            for (b, &j) in cols.iter().enumerate() {
                for (a, &i) in rows.iter().enumerate() {
                    u.set(j, i, small.get(b, a));
                }
            }
            candidates.push((u, c.value));
        }
    }
    let (i0, j0) = argmax_entry(v);
    candidates.push((
        MatrixOp::from_fn(m, n, |j, i| {
            if i == i0 && j == j0 {
                crate::linalg::phase(v.get(i0, j0)).conj()
            } else {
                ZERO
            }
        }),
        1.0,
    ));
    // u = Q P* from v = P Σ Q*: tr(uv) = ‖v‖_tr, γ_H(u) ≤ min(max row, max column) ℓ_2 norm
    let sv = svd(v)?;
    let qp = MatrixOp::from_fn(m, n, |j, i| {
        (0..sv.s.len()).fold(ZERO, |a, l| a + sv.v.get(j, l) * sv.u.get(i, l).conj())
    });
    let g = (0..m)
        .map(|j| norm2(qp.row(j)))
        .fold(0.0, f64::max)
        .min((0..n).map(|i| norm2(&qp.column(i))).fold(0.0, f64::max));
    if g > 0.0 {
        candidates.push((qp, g));
    }
    let (lower, witness) = candidates
        .into_iter()
        .map(|(u, g)| (trace_pair(&u, v).norm() / g, u.scale(1.0 / g)))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("candidates");
    let lower = lower.min(cert.value);
    Ok(GammaHStar {
        value: cert.value,
        lower,
        gap: cert.value - lower,
        certificate: cert,
        witness,
    })
}

/// `tr(u v)` for `u` of shape `m × n` and `v` of shape `n × m`.
pub fn trace_pair(u: &MatrixOp, v: &MatrixOp) -> C64 {
    let mut s = ZERO;
    for i in 0..v.rows() {
        for j in 0..v.cols() {
            s += v.get(i, j) * u.get(j, i);
        }
    }
    s
}

fn norm2_real(v: &[f64]) -> f64 {
    v.iter().map(|t| t * t).sum::<f64>().sqrt()
}

fn log_sum_exp2(z: &[f64]) -> (f64, Vec<f64>) {
    let mx = z.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let e: Vec<f64> = z.iter().map(|&t| (2.0 * (t - mx)).exp()).collect();
    let s: f64 = e.iter().sum();
    (0.5 * s.ln() + mx, e.into_iter().map(|x| x / s).collect())
}

/// `½ log Σ e^{2s} + ½ log Σ e^{2t} + log σ_β(D_{e^{-s}} w D_{e^{-t}})` with
/// `σ_β` the `β`-power mean of the singular values, and its gradient.
fn smoothed_scaling(w: &MatrixOp, z: &[f64], beta: f64) -> Result<(f64, Vec<f64>)> {
    let (p, q) = (w.rows(), w.cols());
    let (s, t) = z.split_at(p);
    let a = MatrixOp::from_fn(p, q, |i, j| w.get(i, j) * (-s[i] - t[j]).exp());
    let d = svd(&a)?;
    let top = d.s[0];
    if !(top > 0.0) || !top.is_finite() {
        return Ok((f64::INFINITY, vec![0.0; z.len()]));
    }
    let raw: Vec<f64> = d.s.iter().map(|&x| if x > 0.0 { (beta * (x / top).ln()).exp() } else { 0.0 }).collect();
    let tot: f64 = raw.iter().sum();
    let pi: Vec<f64> = raw.iter().map(|x| x / tot).collect();
    let lsig = top.ln() + tot.ln() / beta;
    let (ls, ps) = log_sum_exp2(s);
    let (lt, pt) = log_sum_exp2(t);
    let mut g = Vec::with_capacity(p + q);
    for i in 0..p {
        let wsum: f64 = (0..pi.len()).map(|l| pi[l] * d.u.get(i, l).norm_sqr()).sum();
        g.push(ps[i] - wsum);
    }
    for j in 0..q {
        let wsum: f64 = (0..pi.len()).map(|l| pi[l] * d.v.get(j, l).norm_sqr()).sum();
        g.push(pt[j] - wsum);
    }
    Ok((ls + lt + lsig, g))
}

fn scaling_from_log(w: &MatrixOp, z: &[f64]) -> (f64, Vec<f64>, Vec<f64>) {
    let (s, t) = z.split_at(w.rows());
    let shift_s = s.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let shift_t = t.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let lambda: Vec<f64> = s.iter().map(|&x| (x - shift_s).exp()).collect();
    let mu: Vec<f64> = t.iter().map(|&x| (x - shift_t).exp()).collect();
    let a = MatrixOp::from_fn(w.rows(), w.cols(), |i, j| w.get(i, j) / (lambda[i] * mu[j]));
    let value = spectral_norm(&a).map(|sn| sn.value).unwrap_or(f64::INFINITY)
        * norm2_real(&lambda)
        * norm2_real(&mu);
    (value, lambda, mu)
}

fn scaling_certificate(v: &MatrixOp, lambda: &[f64], mu: &[f64]) -> Result<ScalingCertificate> {
    let a = MatrixOp::from_fn(v.rows(), v.cols(), |i, j| {
        let d = lambda[i] * mu[j];
        if d > 0.0 {
            v.get(i, j) / d
        } else {
            ZERO
        }
    });
    let value = norm2_real(lambda) * norm2_real(mu) * spectral_norm(&a)?.value;
    Ok(ScalingCertificate {
        lambda: lambda.to_vec(),
        mu: mu.to_vec(),
        a,
        value,
    })
}

/// `φ_ij = λ_i v_ij μ_j` with `γ_H(v) ≤ 1` and `‖λ‖_2 ‖μ‖_2 = ‖φ‖_tr`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceClassFactorization {
    pub lambda: Vec<f64>,
    pub v: MatrixOp,
    pub mu: Vec<f64>,
    pub trace_norm: f64,
    /// A factorization of `v` through unit vectors.
    pub certificate: GammaHCertificate,
}

impl TraceClassFactorization {
    pub fn product_norm(&self) -> f64 {
        norm2_real(&self.lambda) * norm2_real(&self.mu)
    }
}

/// Splits `φ = P Σ Q* = (P Σ^{1/2})(Σ^{1/2} Q*)` and normalizes the rows of
/// the first factor and the columns of the second.
pub fn trace_class_factorize(phi: &MatrixOp) -> Result<TraceClassFactorization> {
    let s = svd(phi)?;
    let r = s.s.len();
    let rows: Vec<Vec<C64>> = (0..phi.rows())
        .map(|i| (0..r).map(|l| s.u.get(i, l) * s.s[l].sqrt()).collect())
        .collect();
    let cols: Vec<Vec<C64>> = (0..phi.cols())
        .map(|j| (0..r).map(|l| s.v.get(j, l).conj() * s.s[l].sqrt()).collect())
        .collect();
    let lambda: Vec<f64> = rows.iter().map(|v| norm2(v)).collect();
    let mu: Vec<f64> = cols.iter().map(|v| norm2(v)).collect();
    let unit = |v: &[C64], t: f64| -> Vec<C64> {
        if t > 0.0 {
            v.iter().map(|z| z / t).collect()
        } else {
            vec![ZERO; v.len()]
        }
    };
    let h: Vec<Vec<C64>> = rows.iter().zip(&lambda).map(|(v, &t)| unit(v, t)).collect();
    let k: Vec<Vec<C64>> = cols.iter().zip(&mu).map(|(v, &t)| unit(v, t)).collect();
    let certificate = GammaHCertificate::new(h, k);
    let v = certificate.product();
    Ok(TraceClassFactorization {
        lambda,
        v,
        mu,
        trace_norm: s.trace_norm(),
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: usize, cols: usize, d: &[f64]) -> MatrixOp {
        MatrixOp::from_real(rows, cols, d).unwrap()
    }

    #[test]
    fn nuclear_examples() {
        assert_eq!(nuclear_norm_linf_l1(&MatrixOp::identity(4)), 4.0);
        assert_eq!(nuclear_norm_linf_l1(&m(2, 2, &[1.0, 0.0, 0.0, 0.0])), 1.0);
        assert_eq!(nuclear_norm_linf_l1(&m(2, 2, &[0.5, 0.5, 0.5, -0.5])), 2.0);
    }

    #[test]
    fn gamma_h_examples() {
        for u in [MatrixOp::identity(2), MatrixOp::identity(5), m(3, 3, &[1.0; 9])] {
            let g = gamma_h(&u, 1e-8).unwrap();
            assert!((g.value - 1.0).abs() < 1e-6, "{g:?}");
            assert!(g.certificate.residual(&u) < 1e-8);
            assert_eq!(g.bracket, Bracket::Converged);
        }
    }

    #[test]
    fn tolerance_floor() {
        assert!(gamma_h(&MatrixOp::identity(2), 1e-9).is_err());
    }

    /// Brute force over 2-dimensional factorizations of `[[1,1],[1,-1]]`:
    /// `h_1 = (cos a, sin a) r`, `h_2 = (cos b, sin b) r`, the `k_j` are then
    /// determined by the linear system and the value is scanned on a grid.
    #[test]
    fn hadamard_matches_brute_force() {
        let u = m(2, 2, &[1.0, 1.0, 1.0, -1.0]);
        let mut best = f64::INFINITY;
        let steps = 720;
        for ia in 0..steps {
            let a = std::f64::consts::PI * ia as f64 / steps as f64;
            for ib in 0..steps {
                let b = std::f64::consts::PI * ib as f64 / steps as f64;
                let h = [[a.cos(), a.sin()], [b.cos(), b.sin()]];
                let det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
                if det.abs() < 1e-9 {
                    continue;
                }
                let solve = |c0: f64, c1: f64| {
                    [(c0 * h[1][1] - c1 * h[0][1]) / det, (h[0][0] * c1 - h[1][0] * c0) / det]
                };
                let k1 = solve(1.0, 1.0);
                let k2 = solve(1.0, -1.0);
                let kn = (k1[0].hypot(k1[1])).max(k2[0].hypot(k2[1]));
                best = best.min(kn);
            }
        }
        let g = gamma_h(&u, 1e-8).unwrap();
        assert!(g.value <= best + 1e-6, "{} vs grid {best}", g.value);
        assert!(g.value >= best * (1.0 - 1e-4), "{} vs grid {best}", g.value);
        let dual = gamma_h_star(&m(2, 2, &[0.5, 0.5, 0.5, -0.5])).unwrap();
        let pairing = trace_pair(&u, &m(2, 2, &[0.5, 0.5, 0.5, -0.5])).norm();
        assert!(pairing / dual.value <= g.value + 1e-9);
    }

    #[test]
    fn psd_completion_decides_identity() {
        let u = MatrixOp::identity(3);
        assert!(matches!(psd_feasible(&u, 1.05).0, Feasibility::Feasible(_)));
        assert!(matches!(psd_feasible(&u, 0.9).0, Feasibility::Infeasible));
        if let (Feasibility::Feasible(g), _) = psd_feasible(&u, 1.2) {
            let c = gram_factorization(&u, &g, 1.2).unwrap().corrected(&u);
            assert!(c.residual(&u) < 1e-10);
            assert!(c.value <= 1.2 + 1e-6);
        }
    }

    #[test]
    fn zero_and_rank_one() {
        let g = gamma_h(&MatrixOp::zeros(2, 3), 1e-8).unwrap();
        assert_eq!(g.value, 0.0);
        let x = [1.0, -2.0, 0.5];
        let y = [3.0, 0.25];
        let u = MatrixOp::from_fn(3, 2, |i, j| C64::new(x[i] * y[j], 0.0));
        let g = gamma_h(&u, 1e-8).unwrap();
        assert!((g.value - 6.0).abs() < 1e-7, "{g:?}");
    }

    #[test]
    fn gamma_h_star_examples() {
        let e11 = m(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        let g = gamma_h_star(&e11).unwrap();
        assert!((g.value - 1.0).abs() < 1e-9 && (g.lower - 1.0).abs() < 1e-9, "{g:?}");

        let d = [0.5, 2.0, 1.5, 3.0];
        let g = gamma_h_star(&MatrixOp::diag_real(&d)).unwrap();
        // u = identity has γ_H = 1 and tr(u v) = Σ d_i
        let oracle: f64 = d.iter().sum();
        assert!((g.value - oracle).abs() < 1e-6 * oracle, "{g:?}");
        assert!((g.lower - oracle).abs() < 1e-6 * oracle, "{g:?}");

        let z = gamma_h_star(&MatrixOp::zeros(3, 2)).unwrap();
        assert_eq!(z.value, 0.0);
    }

    #[test]
    fn scaling_certificate_reconstructs() {
        let mut r = sample::rng(3);
        let v = sample::complex_matrix(&mut r, 3, 4);
        let g = gamma_h_star(&v).unwrap();
        let c = &g.certificate;
        for i in 0..3 {
            for j in 0..4 {
                let back = c.a.get(i, j) * (c.lambda[i] * c.mu[j]);
                assert!((back - v.get(i, j)).norm() < 1e-12);
            }
        }
        assert!(g.lower <= g.value && g.gap < 1e-3 * g.value, "{g:?}");
    }

    #[test]
    fn trace_class_examples() {
        let n = 4;
        let f = trace_class_factorize(&MatrixOp::identity(n)).unwrap();
        assert!((f.product_norm() - n as f64).abs() < 1e-9);
        for (&l, &m) in f.lambda.iter().zip(&f.mu) {
            assert!((l - 1.0).abs() < 1e-9 && (m - 1.0).abs() < 1e-9);
        }
        let mut r = sample::rng(8);
        let u = sample::unitary(&mut r, n);
        let f = trace_class_factorize(&u).unwrap();
        assert!((f.product_norm() - n as f64).abs() < 1e-9);

        let x = [3.0, 0.0, -1.0];
        let y = [1.0, 2.0];
        let phi = MatrixOp::from_fn(3, 2, |i, j| C64::new(x[i] * y[j], 0.0));
        let f = trace_class_factorize(&phi).unwrap();
        let xn = 10f64.sqrt();
        let yn = 5f64.sqrt();
        let s = (xn * yn).sqrt();
        for i in 0..3 {
            assert!((f.lambda[i] - x[i].abs() / xn * s).abs() < 1e-9);
        }
        for j in 0..2 {
            assert!((f.mu[j] - y[j].abs() / yn * s).abs() < 1e-9);
        }
        for i in 0..3 {
            for j in 0..2 {
                let back = f.v.get(i, j) * (f.lambda[i] * f.mu[j]);
                assert!((back - phi.get(i, j)).norm() < 1e-9);
            }
        }
        assert!(gamma_h(&f.v, 1e-6).unwrap().value <= 1.0 + 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn duality_and_lower_bound(seed in 0u64..10_000) {
            let mut r = sample::rng(seed);
            let u = sample::complex_matrix(&mut r, 3, 3);
            let v = sample::complex_matrix(&mut r, 3, 3);
            let g = gamma_h(&u, 1e-6).unwrap();
            let s = gamma_h_star(&v).unwrap();
            prop_assert!(u.max_abs() <= g.value * (1.0 + 1e-12));
            prop_assert!(g.certificate.residual(&u) < 1e-8);
            prop_assert!(trace_pair(&u, &v).norm() <= g.value * s.value * (1.0 + 1e-6));
            prop_assert!(g.lower <= g.value * (1.0 + 1e-12));
            prop_assert!(g.value <= g.lower * (1.0 + 1e-6));
        }

        #[test]
        fn permutation_and_phase_invariance(seed in 0u64..10_000) {
            let mut r = sample::rng(seed);
            let u = sample::complex_matrix(&mut r, 3, 4);
            let eps: Vec<C64> = sample::complex_vector(&mut r, 3).into_iter().map(crate::linalg::phase).collect();
            let del: Vec<C64> = sample::complex_vector(&mut r, 4).into_iter().map(crate::linalg::phase).collect();
            let pr = [2, 0, 1];
            let pc = [3, 1, 0, 2];
            let w = MatrixOp::from_fn(3, 4, |i, j| eps[i] * u.get(pr[i], pc[j]) * del[j]);
            let a = gamma_h(&u, 1e-6).unwrap().value;
            let b = gamma_h(&w, 1e-6).unwrap().value;
            prop_assert!((a - b).abs() <= 2e-6 * a);
        }

        #[test]
        fn trace_class_bound(seed in 0u64..10_000) {
            let mut r = sample::rng(seed);
            let phi = sample::complex_matrix(&mut r, 3, 4);
            let f = trace_class_factorize(&phi).unwrap();
            prop_assert!(f.product_norm() <= f.trace_norm + 1e-9);
            prop_assert!(f.certificate.value <= 1.0 + 1e-9);
        }
    }
}
