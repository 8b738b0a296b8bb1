use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, op_norm_l1, op_norm_l2, op_norm_linf, phase, MatrixOp, C64};

use super::Exponent;

/// `‖T‖_reg = ‖ |T| : ℓ_2 → ℓ_2 ‖`.
pub fn reg_norm_l2(t: &MatrixOp) -> Result<f64> {
    op_norm_l2(&t.modulus())
}

#[derive(Clone, Debug, Serialize)]
pub struct FullyContractive {
    pub contractive: bool,
    pub l1: f64,
    pub linf: f64,
    /// `1 − ‖T‖_{1→1}`; negative when violated.
    pub margin_l1: f64,
    pub margin_linf: f64,
}

/// Contraction on `ℓ_1` and on `ℓ_∞` simultaneously, with slack `1e-12`.
pub fn fully_contractive_check(t: &MatrixOp) -> Result<FullyContractive> {
    let l1 = op_norm_l1(t)?;
    let linf = op_norm_linf(t)?;
    Ok(FullyContractive {
        contractive: l1 <= 1.0 + 1e-12 && linf <= 1.0 + 1e-12,
        l1,
        linf,
        margin_l1: 1.0 - l1,
        margin_linf: 1.0 - linf,
    })
}

/// Rank-one domination `|φ_ij| ≤ x_i y_j` certifying an upper bound for the
/// norm dual to `‖·‖_reg`.
#[derive(Clone, Debug, Serialize)]
pub struct DualBallCertificate {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// `‖x‖_2 ‖y‖_2`.
    pub value: f64,
    /// Certified lower bound for the infimum.
    pub lower: f64,
}

impl DualBallCertificate {
    /// Largest `|φ_ij| − x_i y_j`, zero when the certificate dominates.
    pub fn violation(&self, phi: &MatrixOp) -> f64 {
        if self.x.is_empty() {
            return phi.max_abs();
        }
        let mut worst: f64 = 0.0;
        for i in 0..phi.rows() {
            for j in 0..phi.cols() {
                worst = worst.max(phi.get(i, j).norm() - self.x[i] * self.y[j]);
            }
        }
        worst
    }
}

/// `inf { ‖x‖_2 ‖y‖_2 : |φ_ij| ≤ x_i y_j }`, the norm of `φ` in the predual of
/// the regular operators on `ℓ_2`.
///
/// Eliminating `x` leaves a convex problem in `t = log y`, which is solved by
/// Newton's method on a soft-max smoothing with increasing sharpness. The
/// returned value is the exact `‖x‖‖y‖` of the final feasible pair.
pub fn dual_reg_ball_norm(phi: &MatrixOp) -> Result<(f64, DualBallCertificate)> {
    let sol = solve_dual_ball(phi)?;
    Ok((sol.cert.value, sol.cert))
}

/// Returns `(‖φ‖_{reg*}, B)` with `‖B‖_reg ≤ 1` and `Σ conj(b_ij) φ_ij` close to
/// the dual norm.
pub fn dual_reg_norming(phi: &MatrixOp) -> Result<(f64, MatrixOp)> {
    let sol = solve_dual_ball(phi)?;
    let v = sol.cert.value;
    let (n, m) = (phi.rows(), phi.cols());
    if v == 0.0 {
        return Ok((0.0, MatrixOp::zeros(n, m)));
    }
    let b = MatrixOp::from_fn(n, m, |i, j| {
        let l = sol.plan[i * m + j];
        if l == 0.0 {
            return C64::new(0.0, 0.0);
        }
        phase(phi.get(i, j)) * (l * v / (sol.cert.x[i] * sol.cert.y[j]))
    });
    let r = reg_norm_l2(&b)?;
    Ok((v, if r > 1.0 { b.scale(1.0 / r) } else { b }))
}

struct DualBallSolution {
    cert: DualBallCertificate,
    /// Transport plan on the support of `φ`, row-major, total mass 1.
    plan: Vec<f64>,
}

struct Support {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Per active row: `(column slot, log|φ_ij|)`.
    entries: Vec<Vec<(usize, f64)>>,
}

fn solve_dual_ball(phi: &MatrixOp) -> Result<DualBallSolution> {
    if phi.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let (n, m) = (phi.rows(), phi.cols());
    let mut col_slot = vec![usize::MAX; m];
    let mut sup = Support {
        rows: Vec::new(),
        cols: Vec::new(),
        entries: Vec::new(),
    };
    for j in 0..m {
        if (0..n).any(|i| phi.get(i, j).norm() > 0.0) {
            col_slot[j] = sup.cols.len();
            sup.cols.push(j);
        }
    }
    for i in 0..n {
        let e: Vec<(usize, f64)> = (0..m)
            .filter_map(|j| {
                let a = phi.get(i, j).norm();
                (a > 0.0).then(|| (col_slot[j], a.max(1e-300).ln()))
            })
            .collect();
        if !e.is_empty() {
            sup.rows.push(i);
            sup.entries.push(e);
        }
    }
    if sup.rows.is_empty() {
        return Ok(DualBallSolution {
            cert: DualBallCertificate {
                x: Vec::new(),
                y: Vec::new(),
                value: 0.0,
                lower: 0.0,
            },
            plan: vec![0.0; n * m],
        });
    }

    let k = sup.cols.len();
    // start from column maxima so every constraint is roughly balanced
    let mut t: Vec<f64> = (0..k).map(|_| f64::NEG_INFINITY).collect();
    for row in &sup.entries {
        for &(s, a) in row {
            t[s] = t[s].max(a);
        }
    }
    for v in t.iter_mut() {
        *v *= 0.5;
    }

    let mut best_t = t.clone();
    let mut best_f = exact_objective(&sup, &t);
    let mut best_lower = f64::NEG_INFINITY;
    let mut best_plan = Vec::new();

    let mut beta = 1.0;
    while beta <= 2.0e7 {
        for _ in 0..60 {
            let st = smooth_state(&sup, &t, beta);
            let lb = entropy_lower_bound(&sup, &st.plan);
            if lb > best_lower {
                best_lower = lb;
                best_plan = st.plan.clone();
            }
            let f = exact_objective(&sup, &t);
            if f < best_f {
                best_f = f;
                best_t = t.clone();
            }
            let dir = match newton_direction(&st, k) {
                Some(d) => d,
                None => st.grad.iter().map(|g| -g).collect(),
            };
            let dec: f64 = -dir.iter().zip(&st.grad).map(|(d, g)| d * g).sum::<f64>();
            if dec <= 1e-15 {
                break;
            }
            let mut step = 1.0;
            let mut moved = false;
            for _ in 0..50 {
                let cand: Vec<f64> = t.iter().zip(&dir).map(|(a, d)| a + step * d).collect();
                if smooth_value(&sup, &cand, beta) <= st.value - 0.25 * step * dec {
                    t = cand;
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        beta *= 4.0;
    }
    let f = exact_objective(&sup, &t);
    if f < best_f {
        best_t = t;
    }

    // feasible pair from the best log-scaling, balanced so ‖x‖ = ‖y‖
    let mut y = vec![0.0; m];
    for (s, &j) in sup.cols.iter().enumerate() {
        y[j] = best_t[s].exp();
    }
    let mut x = vec![0.0; n];
    for i in 0..n {
        x[i] = (0..m)
            .filter(|&j| y[j] > 0.0)
            .map(|j| phi.get(i, j).norm() / y[j])
            .fold(0.0, f64::max);
    }
    let nx = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let ny = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let c = (ny / nx).sqrt();
    for v in x.iter_mut() {
        *v *= c;
    }
    for v in y.iter_mut() {
        *v /= c;
    }
    // the division above can round an active constraint down by an ulp
    for i in 0..n {
        for j in 0..m {
            let a = phi.get(i, j).norm();
            if a > x[i] * y[j] {
                x[i] = a / y[j] * (1.0 + 4.0 * f64::EPSILON);
            }
        }
    }
    let value = x.iter().map(|v| v * v).sum::<f64>().sqrt() * y.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut plan = vec![0.0; n * m];
    for (r, row) in sup.entries.iter().enumerate() {
        for (e, &(s, _)) in row.iter().enumerate() {
            plan[sup.rows[r] * m + sup.cols[s]] = best_plan[r][e];
        }
    }
    Ok(DualBallSolution {
        cert: DualBallCertificate {
            x,
            y,
            value,
            lower: best_lower.exp().min(value),
        },
        plan,
    })
}

/// `½ log Σ_i max_j |φ_ij|² e^{-2t_j} + ½ log Σ_j e^{2t_j}`.
fn exact_objective(sup: &Support, t: &[f64]) -> f64 {
    let rows: Vec<f64> = sup
        .entries
        .iter()
        .map(|row| row.iter().map(|&(s, a)| 2.0 * (a - t[s])).fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let cols: Vec<f64> = t.iter().map(|v| 2.0 * v).collect();
    0.5 * lse(&rows) + 0.5 * lse(&cols)
}

fn lse(v: &[f64]) -> f64 {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn softmax(v: &[f64]) -> Vec<f64> {
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = v.iter().map(|x| (x - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

struct SmoothState {
    value: f64,
    grad: Vec<f64>,
    /// Per active row, soft-max weights over its entries.
    pi: Vec<Vec<f64>>,
    /// Row weights.
    r: Vec<f64>,
    /// Column weights `softmax(2t)`.
    c: Vec<f64>,
    plan: Vec<Vec<f64>>,
    beta: f64,
    slots: Vec<Vec<usize>>,
}

fn row_soft_max(row: &[(usize, f64)], t: &[f64], beta: f64) -> (f64, Vec<f64>) {
    let u: Vec<f64> = row.iter().map(|&(s, a)| beta * 2.0 * (a - t[s])).collect();
    (lse(&u) / beta, softmax(&u))
}

fn smooth_value(sup: &Support, t: &[f64], beta: f64) -> f64 {
    let l: Vec<f64> = sup.entries.iter().map(|row| row_soft_max(row, t, beta).0).collect();
    let cols: Vec<f64> = t.iter().map(|v| 2.0 * v).collect();
    0.5 * lse(&l) + 0.5 * lse(&cols)
}

fn smooth_state(sup: &Support, t: &[f64], beta: f64) -> SmoothState {
    let mut l = Vec::with_capacity(sup.entries.len());
    let mut pi = Vec::with_capacity(sup.entries.len());
    for row in &sup.entries {
        let (v, p) = row_soft_max(row, t, beta);
        l.push(v);
        pi.push(p);
    }
    let cols: Vec<f64> = t.iter().map(|v| 2.0 * v).collect();
    let value = 0.5 * lse(&l) + 0.5 * lse(&cols);
    let r = softmax(&l);
    let c = softmax(&cols);
    let mut grad = c.clone();
    let mut plan = Vec::with_capacity(pi.len());
    for ((row, p), &ri) in sup.entries.iter().zip(&pi).zip(&r) {
        let mut pr = Vec::with_capacity(row.len());
        for (&(s, _), &pij) in row.iter().zip(p) {
            grad[s] -= ri * pij;
            pr.push(ri * pij);
        }
        plan.push(pr);
    }
    SmoothState {
        value,
        grad,
        pi,
        r,
        c,
        plan,
        beta,
        slots: sup.entries.iter().map(|row| row.iter().map(|e| e.0).collect()).collect(),
    }
}

/// Newton step for the smoothed objective, with the constant direction (along
/// which the objective is invariant) pinned by a rank-one term.
fn newton_direction(st: &SmoothState, k: usize) -> Option<Vec<f64>> {
    let mut h = vec![0.0; k * k];
    let mut p = vec![0.0; k];
    for ((slots, pi), &ri) in st.slots.iter().zip(&st.pi).zip(&st.r) {
        for (a, &sa) in slots.iter().enumerate() {
            p[sa] += ri * pi[a];
            h[sa * k + sa] += 2.0 * st.beta * ri * pi[a];
            for (b, &sb) in slots.iter().enumerate() {
                let w = ri * pi[a] * pi[b];
                h[sa * k + sb] += 2.0 * (1.0 - st.beta) * w;
            }
        }
    }
    for a in 0..k {
        for b in 0..k {
            h[a * k + b] += -2.0 * p[a] * p[b] - 2.0 * st.c[a] * st.c[b] + 1.0 / k as f64;
        }
        h[a * k + a] += 2.0 * st.c[a];
    }
    let scale = (0..k).map(|a| h[a * k + a]).fold(0.0, f64::max).max(1e-300);
    for a in 0..k {
        h[a * k + a] += 1e-12 * scale;
    }
    let g: Vec<f64> = st.grad.iter().map(|v| -v).collect();
    cholesky_solve(&h, k, &g)
}

/// `Σ λ log|φ| + ½H(rows) + ½H(cols)` for a probability plan on the support.
fn entropy_lower_bound(sup: &Support, plan: &[Vec<f64>]) -> f64 {
    let k = sup.cols.len();
    let mut colm = vec![0.0; k];
    let mut lin = 0.0;
    let mut hrow = 0.0;
    for (row, pr) in sup.entries.iter().zip(plan) {
        let rm: f64 = pr.iter().sum();
        if rm > 0.0 {
            hrow -= rm * rm.ln();
        }
        for (&(s, a), &l) in row.iter().zip(pr) {
            lin += l * a;
            colm[s] += l;
        }
    }
    let hcol: f64 = colm.iter().filter(|&&c| c > 0.0).map(|c| -c * c.ln()).sum();
    lin + 0.5 * hrow + 0.5 * hcol
}

/// Two-sided bounds for `‖ |T| : ℓ_p → ℓ_p ‖` with `1/p = 1 − θ`.
#[derive(Clone, Debug, Serialize)]
pub struct RegLpBounds {
    pub p: f64,
    pub upper: f64,
    pub lower: f64,
    /// Nonnegative witness with `‖x‖_p = 1` attaining `lower`.
    pub witness: Vec<f64>,
    pub iterations: usize,
}

/// Regular norm on `ℓ_p`, `1/p = 1 − θ`.
///
/// The lower bound comes from Boyd's power iteration on `|T|`. The upper bound
/// is a Schur test with weights built from the iterate, which certifies a
/// factorization of `|T|` into a row-normalized and a column-normalized part.
pub fn reg_norm_lp(t: &MatrixOp, theta: f64) -> Result<RegLpBounds> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!("θ = {theta} must lie in (0, 1)")));
    }
    if t.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let p = Exponent::from_inv_p(1.0 - theta)?;
    let q = p.conjugate();
    let (n, m) = (t.rows(), t.cols());
    let a: Vec<f64> = t.data().iter().map(|z| z.norm()).collect();
    let apply = |x: &[f64]| -> Vec<f64> {
        (0..n).map(|i| (0..m).map(|j| a[i * m + j] * x[j]).sum()).collect()
    };
    let apply_t = |y: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; m];
        for i in 0..n {
            for j in 0..m {
                out[j] += a[i * m + j] * y[i];
            }
        }
        out
    };

    let mut x = vec![1.0; m];
    let nx = p.norm(&x);
    x.iter_mut().for_each(|v| *v /= nx);
    let mut sigma = p.norm(&apply(&x));
    let mut iterations = 0;
    if sigma > 0.0 {
        for it in 1..=5000 {
            iterations = it;
            let y = apply(&x);
            let u = apply_t(&p.norming(&y));
            let mut xn = q.norming(&u);
            let s = p.norm(&xn);
            if s == 0.0 {
                break;
            }
            xn.iter_mut().for_each(|v| *v /= s);
            let sn = p.norm(&apply(&xn));
            let done = sn <= sigma * (1.0 + 1e-15);
            if sn >= sigma {
                x = xn;
                sigma = sn;
            }
            if done {
                break;
            }
        }
    }

    let l1 = a_norm_cols(&a, n, m);
    let linf = a_norm_rows(&a, n, m);
    // Riesz–Thorin for |T|
    let mut upper = l1.powf(p.inv_p()) * linf.powf(p.theta());
    let xmax = x.iter().copied().fold(0.0, f64::max);
    for delta in [1e-15, 1e-12, 1e-9, 1e-6, 1e-3] {
        let h: Vec<f64> = x.iter().map(|&v| v.max(delta * xmax.max(1e-300))).collect();
        let y = apply(&h);
        let c1 = 1.0;
        let yp: Vec<f64> = y.iter().map(|&v| if v > 0.0 { v.powf(p.p() - 1.0) } else { 0.0 }).collect();
        let z = apply_t(&yp);
        let c2 = z
            .iter()
            .zip(&h)
            .map(|(&num, &den)| num / den.powf(p.p() - 1.0))
            .fold(0.0, f64::max);
        let b = c1 * c2.powf(p.inv_p());
        if b.is_finite() {
            upper = upper.min(b);
        }
    }
    Ok(RegLpBounds {
        p: p.p(),
        upper: upper.max(sigma),
        lower: sigma,
        witness: x,
        iterations,
    })
}

fn a_norm_cols(a: &[f64], n: usize, m: usize) -> f64 {
    (0..m).map(|j| (0..n).map(|i| a[i * m + j]).sum::<f64>()).fold(0.0, f64::max)
}

fn a_norm_rows(a: &[f64], n: usize, m: usize) -> f64 {
    (0..n).map(|i| a[i * m..(i + 1) * m].iter().sum::<f64>()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::svd;
    use crate::sample;
    use proptest::prelude::*;

    fn tau() -> MatrixOp {
        MatrixOp::from_real(2, 2, &[0.5, 0.5, 0.5, -0.5]).unwrap()
    }

    #[test]
    fn regular_norm_examples() {
        assert!((reg_norm_l2(&tau()).unwrap() - 1.0).abs() < 1e-14);
        let rot = MatrixOp::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!((reg_norm_l2(&rot).unwrap() - 1.0).abs() < 1e-14);
        let pos = MatrixOp::from_real(2, 3, &[1.0, 2.0, 0.5, 0.0, 3.0, 1.0]).unwrap();
        assert!((reg_norm_l2(&pos).unwrap() - op_norm_l2(&pos).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn fully_contractive_examples() {
        assert!(fully_contractive_check(&tau()).unwrap().contractive);
        assert!(fully_contractive_check(&MatrixOp::identity(3)).unwrap().contractive);
        let r = fully_contractive_check(&MatrixOp::identity(3).scale(2.0)).unwrap();
        assert!(!r.contractive && r.margin_l1 < 0.0);
    }

    /// Brute-force `inf (a²+b²)(c²+d²)` over a log grid for 2×2 inputs.
    fn grid_oracle(phi: &MatrixOp) -> f64 {
        let mut best = f64::INFINITY;
        let steps = 4000;
        for k in 0..=steps {
            let s = -6.0 + 12.0 * k as f64 / steps as f64;
            let y = [1.0, s.exp()];
            let x: Vec<f64> = (0..2)
                .map(|i| (0..2).map(|j| phi.get(i, j).norm() / y[j]).fold(0.0, f64::max))
                .collect();
            let v = (x[0] * x[0] + x[1] * x[1]).sqrt() * (y[0] * y[0] + y[1] * y[1]).sqrt();
            best = best.min(v);
        }
        best
    }

    #[test]
    fn dual_ball_examples() {
        let e11 = MatrixOp::from_real(2, 2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        let (v, c) = dual_reg_ball_norm(&e11).unwrap();
        assert!((v - 1.0).abs() < 1e-9 && c.violation(&e11) <= 0.0);

        let ones = MatrixOp::from_real(2, 2, &[1.0; 4]).unwrap();
        let (v, c) = dual_reg_ball_norm(&ones).unwrap();
        assert!((v - grid_oracle(&ones)).abs() < 1e-6 && (v - 2.0).abs() < 1e-6);
        assert!(c.violation(&ones) <= 0.0);

        let id = MatrixOp::identity(2);
        let (v, c) = dual_reg_ball_norm(&id).unwrap();
        // AM–GM: (a²+b²)(a⁻²+b⁻²) ≥ 4
        assert!((v - 2.0).abs() < 1e-6, "{v}");
        assert!(c.lower >= 2.0 * (1.0 - 1e-6));

        let (v, c) = dual_reg_ball_norm(&MatrixOp::zeros(2, 3)).unwrap();
        assert_eq!(v, 0.0);
        assert!(c.x.is_empty() && c.y.is_empty());
    }

    #[test]
    fn dual_ball_zero_rows_and_columns() {
        let phi = MatrixOp::from_real(3, 3, &[0.0, 0.0, 0.0, 0.0, 2.0, 1.0, 0.0, 1.0, 3.0]).unwrap();
        let (v, c) = dual_reg_ball_norm(&phi).unwrap();
        assert!(c.violation(&phi) <= 0.0);
        assert_eq!(c.x[0], 0.0);
        assert_eq!(c.y[0], 0.0);
        assert!(v >= c.lower && v <= c.lower * (1.0 + 1e-6), "{v} {}", c.lower);
    }

    #[test]
    fn dual_ball_gap_on_random_inputs() {
        let mut r = sample::rng(11);
        for n in [2, 3, 5, 8] {
            for _ in 0..5 {
                let phi = sample::complex_matrix(&mut r, n, n);
                let (v, c) = dual_reg_ball_norm(&phi).unwrap();
                assert!(c.violation(&phi) <= 0.0);
                assert!(v <= c.lower * (1.0 + 1e-6), "n={n} gap {}", v / c.lower - 1.0);
                // ‖·‖ ≤ ‖·‖_reg, so the dual norms compare the other way
                let tr = svd(&phi).unwrap().trace_norm();
                assert!(v <= tr * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn dual_norming_is_feasible_and_attains() {
        let mut r = sample::rng(5);
        let phi = sample::complex_matrix(&mut r, 4, 4);
        let (v, b) = dual_reg_norming(&phi).unwrap();
        assert!(reg_norm_l2(&b).unwrap() <= 1.0 + 1e-9);
        let pair: C64 = b.data().iter().zip(phi.data()).map(|(x, y)| x.conj() * y).sum();
        assert!(pair.re >= v * (1.0 - 1e-4), "{} vs {v}", pair.re);
    }

    #[test]
    fn reg_lp_examples() {
        let mut r = sample::rng(2);
        for _ in 0..5 {
            let t = sample::real_matrix(&mut r, 4, 4).modulus();
            let b = reg_norm_lp(&t, 0.5).unwrap();
            let exact = reg_norm_l2(&t).unwrap();
            assert!(b.lower <= exact + 1e-10 && b.upper >= exact - 1e-10);
            assert!(b.upper - b.lower <= 1e-4, "{b:?}");
        }
        let b = reg_norm_lp(&tau(), 0.5).unwrap();
        assert!(b.upper >= 1.0 - 1e-6 && b.lower <= 1.0 + 1e-12);

        // row-stochastic, p → 1: the maximal column sum
        let t = MatrixOp::from_real(3, 3, &[0.2, 0.5, 0.3, 0.6, 0.1, 0.3, 0.1, 0.1, 0.8]).unwrap();
        let b = reg_norm_lp(&t, 1e-6).unwrap();
        let l1 = op_norm_l1(&t).unwrap();
        assert!((b.lower - l1).abs() < 1e-4 && (b.upper - l1).abs() < 1e-4, "{b:?}");
        assert!(reg_norm_lp(&t, 0.0).is_err() && reg_norm_lp(&t, 1.0).is_err());
    }

    #[test]
    fn reg_lp_reducible_input() {
        let t = MatrixOp::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0]).unwrap();
        for theta in [0.3, 0.5, 0.8] {
            let b = reg_norm_lp(&t, theta).unwrap();
            assert!((b.lower - 2.0).abs() < 1e-9 && b.upper <= 2.0 * (1.0 + 1e-6), "{b:?}");
        }
    }

    proptest! {
        #[test]
        fn operator_norm_below_regular(seed in 0u64..100_000, n in 1usize..6, m in 1usize..6) {
            let t = sample::complex_matrix(&mut sample::rng(seed), n, m);
            prop_assert!(op_norm_l2(&t).unwrap() <= reg_norm_l2(&t).unwrap() * (1.0 + 1e-12));
        }

        #[test]
        fn regular_norm_is_a_norm(seed in 0u64..100_000, c in -4.0f64..4.0) {
            let mut r = sample::rng(seed);
            let a = sample::complex_matrix(&mut r, 3, 3);
            let b = sample::complex_matrix(&mut r, 3, 3);
            let ra = reg_norm_l2(&a).unwrap();
            prop_assert!((reg_norm_l2(&a.scale(c)).unwrap() - c.abs() * ra).abs() <= 1e-12 * (1.0 + ra));
            prop_assert!(reg_norm_l2(&a.add(&b).unwrap()).unwrap() <= ra + reg_norm_l2(&b).unwrap() + 1e-12);
        }

        #[test]
        fn reg_lp_bracket_is_ordered(seed in 0u64..100_000, theta in 0.05f64..0.95) {
            let t = sample::complex_matrix(&mut sample::rng(seed), 3, 4);
            let b = reg_norm_lp(&t, theta).unwrap();
            prop_assert!(b.lower <= b.upper * (1.0 + 1e-12));
        }
    }
}
