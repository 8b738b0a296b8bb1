//! The modulus `Δ_X(ε) = sup { ‖T ⊗ id_X‖ : ‖T‖_reg ≤ 1, ‖T‖ ≤ ε }`, its
//! canonical witnesses and the trace duality inequality
//! `|tr(vJQ)| ≤ 2ε⁻¹ Δ_X(ε) γ*_H(v) + 2 Δ_X(ε) N(v)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::{gamma_h_star, nuclear_norm_linf_l1};
use crate::linalg::{op_norm_l1, op_norm_l2, op_norm_linf, svd, MatrixOp, C64, ZERO};
use crate::norms::{reg_norm_l2, tensor_ratio, NormSpec};
use crate::sample;

/// `τ(x, y) = ((x + y)/2, (x − y)/2)`.
pub fn tau() -> MatrixOp {
    MatrixOp::from_real(2, 2, &[0.5, 0.5, 0.5, -0.5]).expect("2x2")
}

/// The `m`-fold Kronecker power of `τ`, `1 ≤ m ≤ 10`.
pub fn tau_power(m: usize) -> Result<MatrixOp> {
    if !(1..=10).contains(&m) {
        return Err(Error::InvalidParameter(format!("tau power {m} outside 1..=10")));
    }
    let t = tau();
    Ok((1..m).fold(t.clone(), |acc, _| acc.kron(&t)))
}

/// `Γ(n)(i, j) = 1/(n − (i + j))` for `1 ≤ i, j ≤ n`, zero where `i + j = n`.
pub fn hilbert_matrix(n: usize) -> Result<MatrixOp> {
    if n == 0 {
        return Err(Error::EmptyOperator);
    }
    Ok(MatrixOp::from_fn(n, n, |i, j| {
        let d = n as f64 - (i + 1 + j + 1) as f64;
        C64::new(if d == 0.0 { 0.0 } else { 1.0 / d }, 0.0)
    }))
}

/// Which operators the search ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FeasibleSet {
    /// `‖T‖_reg ≤ 1`, `‖T‖ ≤ ε`.
    Regular,
    /// `‖T‖_{1→1} ≤ 1`, `‖T‖_{∞→∞} ≤ 1`, `‖T‖ ≤ ε`.
    FullyContractive,
}

#[derive(Clone, Copy, Debug)]
pub struct DeltaSearch {
    /// Matrix size of the search.
    pub n_op: usize,
    /// Ascent steps per start.
    pub budget: usize,
    pub random_starts: usize,
    pub seed: u64,
    pub set: FeasibleSet,
}

impl Default for DeltaSearch {
    fn default() -> Self {
        Self {
            n_op: 8,
            budget: 60,
            random_starts: 4,
            seed: 0,
            set: FeasibleSet::Regular,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaEstimate {
    pub eps: f64,
    pub lower: f64,
    pub upper: f64,
    /// Set when `X` is Hilbertian and `Δ_X(ε) = ε`.
    pub exact: bool,
    pub n_op: usize,
    pub set: FeasibleSet,
    pub witness: MatrixOp,
    pub witness_reg: f64,
    pub witness_op: f64,
}

/// `ε` when `X` is Hilbertian, else `min(1, √dim X · ε)`.
pub fn delta_upper(x: &NormSpec, eps: f64) -> f64 {
    if x.is_hilbertian() {
        eps
    } else {
        ((x.dim() as f64).sqrt() * eps).min(1.0)
    }
}

/// Lower and upper bounds for `Δ_X(ε)` at matrix size `n_op`.
pub fn delta_estimate(x: &NormSpec, eps: f64, search: DeltaSearch) -> Result<DeltaEstimate> {
    delta_estimate_seeded(x, eps, search, &[])
}

fn delta_estimate_seeded(
    x: &NormSpec,
    eps: f64,
    search: DeltaSearch,
    extra: &[MatrixOp],
) -> Result<DeltaEstimate> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {eps} outside (0, 1]")));
    }
    let n = search.n_op.max(1);
    let mut seeds: Vec<MatrixOp> = Vec::new();
    let mut e11 = MatrixOp::zeros(n, n);
    e11.set(0, 0, C64::new(eps, 0.0));
    seeds.push(e11);
    let mut m = 1;
    while 1usize << m <= n && m <= 10 {
        seeds.push(embed(&tau_power(m)?, n));
        m += 1;
    }
    if n >= 2 {
        seeds.push(hilbert_matrix(n)?);
    }
    let mut r = sample::rng(search.seed);
    for _ in 0..search.random_starts {
        seeds.push(sample::complex_matrix(&mut r, n, n));
    }
    seeds.extend(extra.iter().map(|t| embed(t, n)));

    let results: Vec<Result<(f64, MatrixOp)>> = seeds
        .into_par_iter()
        .enumerate()
        .map(|(k, t)| {
            let t = project(&t, eps, search.set)?;
            ascend(x, t, eps, search, search.seed.wrapping_add(k as u64))
        })
        .collect();
    let mut best: Option<(f64, MatrixOp)> = None;
    for r in results {
        let r = r?;
        if best.as_ref().map_or(true, |b| r.0 > b.0) {
            best = Some(r);
        }
    }
    let (mut lower, witness) = best.expect("seeds");
    let witness_reg = reg_norm_l2(&witness)?;
    let witness_op = op_norm_l2(&witness)?;
    let exact = x.is_hilbertian();
    let upper = delta_upper(x, eps);
    if lower > upper && lower <= upper * (1.0 + 1e-12) {
        lower = upper;
    }
    Ok(DeltaEstimate {
        eps,
        lower,
        upper,
        exact,
        n_op: n,
        set: search.set,
        witness,
        witness_reg,
        witness_op,
    })
}

fn embed(t: &MatrixOp, n: usize) -> MatrixOp {
    if t.rows() == n && t.cols() == n {
        return t.clone();
    }
    MatrixOp::from_fn(n, n, |i, j| if i < t.rows() && j < t.cols() { t.get(i, j) } else { ZERO })
}

/// Heuristic projection: alternate the norm constraint of the set with
/// clipping singular values at `ε`, then scale uniformly into the set.
pub fn project(t: &MatrixOp, eps: f64, set: FeasibleSet) -> Result<MatrixOp> {
    let mut t = t.clone();
    if t.max_abs() == 0.0 {
        return Ok(t);
    }
    for _ in 0..50 {
        let c = constraint(&t, set)?;
        if c > 1.0 {
            t = t.scale(1.0 / c);
        }
        let s = svd(&t)?;
        if s.s[0] <= eps * (1.0 + 1e-12) {
            break;
        }
        t = MatrixOp::from_fn(t.rows(), t.cols(), |i, j| {
            (0..s.s.len()).fold(ZERO, |a, l| a + s.u.get(i, l) * s.s[l].min(eps) * s.v.get(j, l).conj())
        });
    }
    let c = constraint(&t, set)?;
    let op = op_norm_l2(&t)?;
    let f = 1.0f64.min(1.0 / c).min(eps / op) * (1.0 - 1e-13);
    Ok(t.scale(f))
}

fn constraint(t: &MatrixOp, set: FeasibleSet) -> Result<f64> {
    match set {
        FeasibleSet::Regular => reg_norm_l2(t),
        FeasibleSet::FullyContractive => Ok(op_norm_l1(t)?.max(op_norm_linf(t)?)),
    }
}

fn feasible(t: &MatrixOp, eps: f64, set: FeasibleSet) -> Result<bool> {
    Ok(constraint(t, set)? <= 1.0 + 1e-12 && op_norm_l2(t)? <= eps * (1.0 + 1e-12))
}

/// Projected ascent on `T ↦ ‖(T ⊗ id) v‖ / ‖v‖` with the witness `v`
/// re-optimized at every step.
fn ascend(x: &NormSpec, t0: MatrixOp, eps: f64, search: DeltaSearch, seed: u64) -> Result<(f64, MatrixOp)> {
    let n = t0.rows();
    let d = x.dim();
    let mut r = sample::rng(seed);
    let mut starts = vec![sample::complex_vector(&mut r, n * d)];
    let sv = crate::linalg::spectral_norm(&t0)?;
    let mut e = vec![ZERO; d];
    e[0] = C64::new(1.0, 0.0);
    starts.push(sv.right.iter().flat_map(|&s| e.iter().map(move |&z| z * s)).collect());
    starts.push((0..n).flat_map(|j| (0..d).map(move |k| if k == j % d { C64::new(1.0, 0.0) } else { ZERO })).collect());
    let (mut best, mut v) = starts
        .into_iter()
        .map(|s| tensor_ratio(&t0, x, s, 200))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("starts");
    if !feasible(&t0, eps, search.set)? {
        return Ok((0.0, t0));
    }
    let mut t = t0;
    let mut step = 0.5 * eps;
    let space = crate::norms::L2Of { x };
    for _ in 0..search.budget {
        let w = crate::norms::apply_blocks(&t, &v, d);
        let psi = space.norming(&w);
        // d‖(T ⊗ id) v‖ = Re Σ_ij conj(G_ij) dT_ij with G_ij = Σ_k ψ_ik conj(v_jk)
        let g = MatrixOp::from_fn(n, n, |i, j| {
            (0..d).fold(ZERO, |a, k| a + psi[i * d + k] * v[j * d + k].conj())
        });
        let gn = g.frobenius();
        if gn == 0.0 {
            break;
        }
        let cand = project(&t.add(&g.scale(step / gn))?, eps, search.set)?;
        let (val, vv) = tensor_ratio(&cand, x, v.clone(), 100);
        if val > best * (1.0 + 1e-13) && feasible(&cand, eps, search.set)? {
            best = val;
            t = cand;
            v = vv;
            step *= 1.5;
        } else {
            step *= 0.5;
            if step < 1e-9 * eps {
                break;
            }
        }
    }
    Ok((best, t))
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaCurve {
    pub eps_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub upper: Vec<f64>,
    pub witnesses: Vec<MatrixOp>,
    pub n_op: usize,
    pub note: &'static str,
}

pub const CURVE_NOTE: &str = "values are lower bounds for Δ_X(ε) found at a fixed matrix size; \
curved / fully curved / uniformly curved are properties of the supremum over all sizes and are not decided here";

/// `delta_estimate` along an increasing grid, reusing witnesses; values are
/// made nondecreasing since a feasible `T` at `ε` stays feasible at `ε' > ε`.
pub fn delta_curve(x: &NormSpec, eps_grid: &[f64], search: DeltaSearch) -> Result<DeltaCurve> {
    if eps_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter("ε grid must be increasing".into()));
    }
    let mut values = Vec::with_capacity(eps_grid.len());
    let mut upper = Vec::with_capacity(eps_grid.len());
    let mut witnesses: Vec<MatrixOp> = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let prev: Vec<MatrixOp> = witnesses.last().cloned().into_iter().collect();
        let est = delta_estimate_seeded(x, eps, search, &prev)?;
        let (value, witness) = match (values.last(), witnesses.last()) {
            (Some(&pv), Some(pw)) if pv > est.lower => (pv, pw.clone()),
            _ => (est.lower, est.witness),
        };
        values.push(value);
        upper.push(est.upper);
        witnesses.push(witness);
    }
    Ok(DeltaCurve {
        eps_grid: eps_grid.to_vec(),
        values,
        upper,
        witnesses,
        n_op: search.n_op,
        note: CURVE_NOTE,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Nonsquareness {
    /// `min(‖(x+y)/2‖, ‖(x−y)/2‖)` at the best unit pair found.
    pub value: f64,
    pub margin: f64,
    pub x: Vec<C64>,
    pub y: Vec<C64>,
}

/// Maximizes `min(‖(x+y)/2‖, ‖(x−y)/2‖)` over unit `x, y`.
pub fn nonsquareness_check(x: &NormSpec, trials: usize, seed: u64) -> Nonsquareness {
    let d = x.dim();
    let unit = |v: Vec<C64>| -> Vec<C64> {
        let s = x.eval(&v);
        v.into_iter().map(|z| z / s).collect()
    };
    let score = |a: &[C64], b: &[C64]| -> f64 {
        let p: Vec<C64> = a.iter().zip(b).map(|(u, v)| (u + v) * 0.5).collect();
        let m: Vec<C64> = a.iter().zip(b).map(|(u, v)| (u - v) * 0.5).collect();
        x.eval(&p).min(x.eval(&m))
    };
    let basis = |k: usize| -> Vec<C64> {
        (0..d).map(|l| if l == k { C64::new(1.0, 0.0) } else { ZERO }).collect()
    };
    let mut pairs: Vec<(Vec<C64>, Vec<C64>)> = Vec::new();
    for i in 0..d {
        for j in 0..d {
            pairs.push((unit(basis(i)), unit(basis(j))));
        }
        let b = unit(basis(i));
        pairs.push((b.clone(), b.iter().map(|z| z * C64::new(0.0, 1.0)).collect()));
    }
    let mut r = sample::rng(seed);
    for _ in 0..trials {
        let a = unit(sample::complex_vector(&mut r, d));
        let b = unit(sample::complex_vector(&mut r, d));
        pairs.push((a, b));
    }
    let (mut bx, mut by) = pairs
        .into_iter()
        .max_by(|p, q| score(&p.0, &p.1).total_cmp(&score(&q.0, &q.1)))
        .expect("pairs");
    let mut best = score(&bx, &by);
    let mut radius = 0.3;
    for _ in 0..trials.max(200) {
        let da = sample::complex_vector(&mut r, d);
        let db = sample::complex_vector(&mut r, d);
        let a = unit(bx.iter().zip(&da).map(|(u, e)| u + e * radius).collect());
        let b = unit(by.iter().zip(&db).map(|(u, e)| u + e * radius).collect());
        let s = score(&a, &b);
        if s > best {
            best = s;
            bx = a;
            by = b;
        } else {
            radius *= 0.97;
        }
    }
    Nonsquareness {
        value: best,
        margin: 1.0 - best,
        x: bx,
        y: by,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityBound {
    /// `|tr(vJQ)|`.
    pub lhs: f64,
    pub rhs: f64,
    pub gamma_h_star: f64,
    pub nuclear: f64,
    /// The upper bound used for `Δ_X(ε)`.
    pub delta: f64,
    /// `Δ_X(ε)` is exact (Hilbertian `X`), so a violation would be a defect.
    pub exact: bool,
    pub holds: bool,
    pub margin: f64,
}

/// Checks `|tr(vJQ)| ≤ 2ε⁻¹ Δ γ*_H(v) + 2 Δ N(v)` for `v: ℓ_∞^n → ℓ_1^n`,
/// `J: X → ℓ_∞^n` (`n × d`) and `Q: ℓ_1^n → X` (`d × n`) of norm at most one.
pub fn duality_bound_check(v: &MatrixOp, x: &NormSpec, eps: f64, j: &MatrixOp, q: &MatrixOp) -> Result<DualityBound> {
    let n = v.rows();
    let d = x.dim();
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidParameter(format!("ε = {eps} outside (0, 1]")));
    }
    if v.cols() != n {
        return Err(Error::DimensionMismatch { context: "v must be square", expected: n, got: v.cols() });
    }
    if j.rows() != n || j.cols() != d {
        return Err(Error::DimensionMismatch { context: "J must be n × dim X", expected: n * d, got: j.rows() * j.cols() });
    }
    if q.rows() != d || q.cols() != n {
        return Err(Error::DimensionMismatch { context: "Q must be dim X × n", expected: d * n, got: q.rows() * q.cols() });
    }
    for c in 0..n {
        let norm = x.eval(&q.column(c));
        if norm > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!("column {c} of Q has X-norm {norm} > 1")));
        }
    }
    let dual = x.bilinear_dual_spec();
    for r in 0..n {
        let norm = dual.eval(j.row(r));
        if norm > 1.0 + 1e-12 {
            return Err(Error::Precondition(format!("row {r} of J has dual norm {norm} > 1")));
        }
    }
    let vjq = v.matmul(j)?.matmul(q)?;
    let lhs = vjq.trace().norm();
    let gs = gamma_h_star(v)?.value;
    let nuclear = nuclear_norm_linf_l1(v);
    let delta = delta_upper(x, eps);
    let rhs = 2.0 * delta / eps * gs + 2.0 * delta * nuclear;
    let holds = lhs <= rhs * (1.0 + 1e-9) + 1e-12;
    Ok(DualityBound {
        lhs,
        rhs,
        gamma_h_star: gs,
        nuclear,
        delta,
        exact: x.is_hilbertian(),
        holds,
        margin: rhs - lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::norms::fully_contractive_check;
    use proptest::prelude::*;

    #[test]
    fn tau_powers() {
        for m in 1..=6 {
            let t = tau_power(m).unwrap();
            assert!((op_norm_l2(&t).unwrap() - 2f64.powf(-(m as f64) / 2.0)).abs() < 1e-10);
            assert!((reg_norm_l2(&t).unwrap() - 1.0).abs() < 1e-10);
            assert!(fully_contractive_check(&t).unwrap().contractive);
        }
        assert!(tau_power(0).is_err() && tau_power(11).is_err());
    }

    #[test]
    fn hilbert_matrix_entries() {
        assert_eq!(hilbert_matrix(1).unwrap().get(0, 0), C64::new(-1.0, 0.0));
        let g = hilbert_matrix(2).unwrap();
        assert_eq!(g.get(0, 0), ZERO);
        assert_eq!(g.get(0, 1), C64::new(-1.0, 0.0));
        assert_eq!(g.get(1, 1), C64::new(-0.5, 0.0));
        let g = hilbert_matrix(5).unwrap();
        assert_eq!(g.get(0, 0), C64::new(1.0 / 3.0, 0.0));
        assert_eq!(g.get(1, 2), ZERO);
    }

    #[test]
    fn hilbertian_delta_is_eps() {
        for eps in [0.1, 0.3, 0.7] {
            let x = NormSpec::euclidean(2);
            let e = delta_estimate(&x, eps, DeltaSearch { budget: 10, random_starts: 1, ..Default::default() }).unwrap();
            assert!((e.lower - eps).abs() < 1e-6 && (e.upper - eps).abs() < 1e-12, "{e:?}");
        }
    }

    #[test]
    fn l1_square_at_tau() {
        let x = NormSpec::lp_uniform(1.0, 2).unwrap();
        let e = delta_estimate(&x, 0.5f64.sqrt(), DeltaSearch { budget: 10, random_starts: 1, ..Default::default() }).unwrap();
        assert!(e.lower >= 1.0 - 1e-6, "{e:?}");
        assert!(e.lower <= e.upper);
        assert!(e.witness_reg <= 1.0 + 1e-9 && e.witness_op <= 0.5f64.sqrt() + 1e-9);
    }

    #[test]
    fn curve_is_monotone() {
        let x = NormSpec::lp_uniform(1.0, 2).unwrap();
        let grid = [0.2, 0.4, 0.5f64.sqrt(), 0.9];
        let c = delta_curve(&x, &grid, DeltaSearch { budget: 8, random_starts: 1, n_op: 4, ..Default::default() }).unwrap();
        assert!(c.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(c.values[2] >= 1.0 - 1e-6);
        for (w, &e) in c.witnesses.iter().zip(&grid) {
            assert!(reg_norm_l2(w).unwrap() <= 1.0 + 1e-9);
            assert!(op_norm_l2(w).unwrap() <= e + 1e-9);
        }
        let single = delta_curve(&NormSpec::euclidean(1), &[0.5], DeltaSearch::default()).unwrap();
        assert_eq!(single.values.len(), 1);
        assert!((single.values[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn nonsquareness_examples() {
        let l1 = nonsquareness_check(&NormSpec::lp_uniform(1.0, 2).unwrap(), 50, 0);
        assert!((l1.value - 1.0).abs() < 1e-12);
        let h = nonsquareness_check(&NormSpec::euclidean(3), 200, 1);
        assert!(h.value <= 0.5f64.sqrt() + 1e-12);
        let one = nonsquareness_check(&NormSpec::euclidean(1), 10, 2);
        assert!((one.value - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn duality_bound_preconditions() {
        let x = NormSpec::euclidean(2);
        let v = MatrixOp::identity(2);
        let j = MatrixOp::from_real(2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        let q = MatrixOp::identity(2);
        match duality_bound_check(&v, &x, 0.5, &j, &q) {
            Err(Error::Precondition(m)) => assert!(m.contains("row 0")),
            other => panic!("{other:?}"),
        }
        let q = MatrixOp::from_real(2, 2, &[1.0, 0.0, 0.0, 3.0]).unwrap();
        match duality_bound_check(&v, &x, 0.5, &MatrixOp::identity(2), &q) {
            Err(Error::Precondition(m)) => assert!(m.contains("column 1")),
            other => panic!("{other:?}"),
        }
        let z = duality_bound_check(&MatrixOp::zeros(2, 2), &x, 0.5, &MatrixOp::identity(2), &MatrixOp::identity(2)).unwrap();
        assert_eq!(z.lhs, 0.0);
        assert!(z.holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn delta_at_least_eps_and_bounded(seed in 0u64..1000, eps in 0.05f64..1.0, kind in 0usize..3) {
            let x = match kind {
                0 => NormSpec::lp_uniform(1.0, 2).unwrap(),
                1 => NormSpec::lp_uniform(f64::INFINITY, 3).unwrap(),
                _ => NormSpec::lp(3.0, vec![1.0, 2.0]).unwrap(),
            };
            let s = DeltaSearch { n_op: 4, budget: 5, random_starts: 1, seed, ..Default::default() };
            let e = delta_estimate(&x, eps, s).unwrap();
            prop_assert!(e.lower >= eps * (1.0 - 1e-9));
            prop_assert!(e.lower <= e.upper * (1.0 + 1e-12));
            prop_assert!(e.upper <= (x.dim() as f64).sqrt() * eps + 1e-12);
            prop_assert!(e.witness_reg <= 1.0 + 1e-9 && e.witness_op <= eps + 1e-9);
        }

        #[test]
        fn rotated_hilbertian_curve_unchanged(seed in 0u64..1000) {
            let mut r = sample::rng(seed);
            let u = sample::unitary(&mut r, 2);
            let a = u.adjoint().matmul(&MatrixOp::diag_real(&[1.0, 4.0])).unwrap().matmul(&u).unwrap();
            let x = NormSpec::hilbertian(a).unwrap();
            let s = DeltaSearch { n_op: 2, budget: 3, random_starts: 1, seed, ..Default::default() };
            let c = delta_curve(&x, &[0.25, 0.5], s).unwrap();
            prop_assert!((c.values[0] - 0.25).abs() < 1e-8 && (c.values[1] - 0.5).abs() < 1e-8);
        }

        #[test]
        fn duality_inequality_hilbertian(seed in 0u64..10_000, eps in 0.1f64..1.0) {
            let mut r = sample::rng(seed);
            let n = 4;
            let d = 1 + (seed as usize % 3);
            let x = NormSpec::euclidean(d);
            let v = sample::complex_matrix(&mut r, n, n);
            let mut j = sample::complex_matrix(&mut r, n, d);
            let mut q = sample::complex_matrix(&mut r, d, n);
            for i in 0..n {
                let s = crate::linalg::norm2(j.row(i)).max(1.0);
                for k in 0..d { j.set(i, k, j.get(i, k) / s); }
                let s = crate::linalg::norm2(&q.column(i)).max(1.0);
                for k in 0..d { q.set(k, i, q.get(k, i) / s); }
            }
            let b = duality_bound_check(&v, &x, eps, &j, &q).unwrap();
            prop_assert!(b.holds, "{b:?}");
        }
    }
}
