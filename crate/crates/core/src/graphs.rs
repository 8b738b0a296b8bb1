//! `k`-regular graphs, the Markov operator `M^G`, the gaps `ε(G)` and
//! `ε(G, X)`, and the expander obstruction inequalities.

use std::collections::{BTreeSet, VecDeque};

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::delta_upper;
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, MatrixOp, C64, ZERO};
use crate::norms::{apply_blocks, reg_norm_l2, NormSpec};
use crate::sample;

const REJECTION_BUDGET: usize = 100_000;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "GraphJson")]
pub struct RegularGraph {
    pub n: usize,
    pub k: usize,
    pub edges: Vec<[usize; 2]>,
    pub connected: bool,
    /// Some connected component is bipartite, equivalently `−1` is an
    /// eigenvalue of `M^G`.
    pub bipartite: bool,
}

#[derive(Deserialize)]
struct GraphJson {
    n: usize,
    k: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for RegularGraph {
    type Error = Error;

    fn try_from(g: GraphJson) -> Result<Self> {
        RegularGraph::new(g.n, g.k, g.edges)
    }
}

impl RegularGraph {
    /// Validates a simple `k`-regular graph on `0..n`.
    pub fn new(n: usize, k: usize, edges: Vec<[usize; 2]>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidGraph(format!("need n ≥ 1 and k ≥ 1, got n = {n}, k = {k}")));
        }
        let mut seen = BTreeSet::new();
        let mut degree = vec![0usize; n];
        for &[a, b] in &edges {
            if a >= n || b >= n {
                return Err(Error::InvalidGraph(format!("edge ({a}, {b}) outside 0..{n}")));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at {a}")));
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::InvalidGraph(format!("repeated edge ({a}, {b})")));
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if let Some(v) = degree.iter().position(|&d| d != k) {
            return Err(Error::InvalidGraph(format!("vertex {v} has degree {} ≠ {k}", degree[v])));
        }
        let mut g = Self {
            n,
            k,
            edges,
            connected: false,
            bipartite: false,
        };
        (g.connected, g.bipartite) = g.components();
        Ok(g)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::with_capacity(self.k); self.n];
        for &[a, b] in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn components(&self) -> (bool, bool) {
        let adj = self.neighbours();
        let mut colour: Vec<Option<bool>> = vec![None; self.n];
        let mut count = 0;
        let mut any_bipartite = false;
        for s in 0..self.n {
            if colour[s].is_some() {
                continue;
            }
            count += 1;
            let mut two_colourable = true;
            colour[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                let c = colour[v].expect("visited");
                for &w in &adj[v] {
                    match colour[w] {
                        None => {
                            colour[w] = Some(!c);
                            queue.push_back(w);
                        }
                        Some(cw) if cw == c => two_colourable = false,
                        _ => {}
                    }
                }
            }
            any_bipartite |= two_colourable;
        }
        (count == 1, any_bipartite)
    }

    pub fn adjacency(&self) -> MatrixOp {
        let mut a = MatrixOp::zeros(self.n, self.n);
        for &[i, j] in &self.edges {
            a.set(i, j, C64::new(1.0, 0.0));
            a.set(j, i, C64::new(1.0, 0.0));
        }
        a
    }

    pub fn complete(n: usize) -> Result<Self> {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).collect();
        Self::new(n, n.saturating_sub(1), edges)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs n ≥ 3, got {n}")));
        }
        Self::new(n, 2, (0..n).map(|i| [i, (i + 1) % n]).collect())
    }

    pub fn petersen() -> Self {
        let mut edges = Vec::with_capacity(15);
        for i in 0..5 {
            edges.push([i, (i + 1) % 5]);
            edges.push([i, i + 5]);
            edges.push([5 + i, 5 + (i + 2) % 5]);
        }
        Self::new(10, 3, edges).expect("petersen graph")
    }
}

/// A uniformly paired configuration, rejected until it is simple.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<RegularGraph> {
    if k == 0 || k >= n || (n * k) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("no simple {k}-regular graph on {n} vertices")));
    }
    let mut rng = sample::rng(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat(v).take(k)).collect();
    'attempt: for _ in 0..REJECTION_BUDGET {
        points.shuffle(&mut rng);
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(n * k / 2);
        for p in points.chunks(2) {
            let (a, b) = (p[0].min(p[1]), p[0].max(p[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            edges.push([a, b]);
        }
        return RegularGraph::new(n, k, edges);
    }
    Err(Error::InvalidParameter(format!(
        "rejection budget exhausted for ({n}, {k}) after {REJECTION_BUDGET} pairings"
    )))
}

/// `M^G = A / k`.
pub fn markov_operator(g: &RegularGraph) -> MatrixOp {
    g.adjacency().scale(1.0 / g.k as f64)
}

/// `E f = mean(f)` as the matrix `J / n`.
pub fn expectation(n: usize) -> MatrixOp {
    MatrixOp::from_fn(n, n, |_, _| C64::new(1.0 / n as f64, 0.0))
}

/// Eigenvalues of `M^G`, ascending.
pub fn spectrum(g: &RegularGraph) -> Result<Vec<f64>> {
    Ok(herm_eig(&markov_operator(g))?.values)
}

/// `‖M^G‖` on mean-zero functions, the second largest `|λ|`.
pub fn epsilon_g(g: &RegularGraph) -> Result<f64> {
    if !g.connected {
        return Err(Error::Disconnected);
    }
    Ok(gap_of(&spectrum(g)?))
}

fn gap_of(spec: &[f64]) -> f64 {
    let m = spec.len();
    if m == 1 {
        return 0.0;
    }
    spec[0].abs().max(spec[m - 2].abs())
}

#[derive(Clone, Debug, Serialize)]
pub struct GapX {
    pub space: NormSpec,
    pub lower: f64,
    pub upper: f64,
    /// Set when `X` is Hilbertian and `ε(G, X) = ε(G)`.
    pub exact: bool,
    pub method: &'static str,
}

/// Bounds for `‖M^G ⊗ id_X‖` on mean-zero functions in `ℓ_2(G; X)`.
pub fn epsilon_g_x(g: &RegularGraph, x: &NormSpec, iterations: usize, seed: u64) -> Result<GapX> {
    if !g.connected {
        return Err(Error::Disconnected);
    }
    let m = markov_operator(g);
    let eig = herm_eig(&m)?;
    let eps = gap_of(&eig.values);
    let n = g.n;
    let d = x.dim();
    let exact = x.is_hilbertian();
    let centred = m.sub(&expectation(n))?;
    let upper = if exact {
        eps
    } else {
        1f64.min((d as f64).sqrt() * eps).min(reg_norm_l2(&centred)?)
    };
    let space = crate::norms::L2Of { x };
    let ratio = |f: &[C64]| -> f64 {
        let den = space.eval(f);
        if den == 0.0 {
            0.0
        } else {
            space.eval(&apply_blocks(&m, f, d)) / den
        }
    };
    let centre = |f: Vec<C64>| -> Vec<C64> {
        let mut mean = vec![ZERO; d];
        for b in f.chunks(d) {
            mean.iter_mut().zip(b).for_each(|(a, z)| *a += z / n as f64);
        }
        f.chunks(d).flat_map(|b| b.iter().zip(&mean).map(|(z, a)| z - a).collect::<Vec<_>>()).collect()
    };

    // scalar eigenfunctions tensored with basis vectors attain ε(G)
    let top = if eig.values[0].abs() >= eig.values[n.saturating_sub(2)].abs() { 0 } else { n.saturating_sub(2) };
    let phi = eig.vector(top);
    let mut starts: Vec<Vec<C64>> = (0..d)
        .map(|l| phi.iter().flat_map(|&p| (0..d).map(move |q| if q == l { p } else { ZERO })).collect())
        .collect();
    let mut r = sample::rng(seed);
    starts.extend((0..4).map(|_| centre(sample::complex_vector(&mut r, n * d))));

    let lower = starts
        .into_par_iter()
        .map(|f| {
            if n == 1 {
                return 0.0;
            }
            let mut f = f;
            let mut best = ratio(&f);
            for _ in 0..iterations {
                let psi = space.norming(&apply_blocks(&m, &f, d));
                let cand = centre(space.dual_norming(&apply_blocks(&m, &psi, d)));
                let rc = ratio(&cand);
                if rc <= best * (1.0 + 1e-14) {
                    break;
                }
                best = rc;
                f = cand;
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    Ok(GapX {
        space: x.clone(),
        lower: if exact { eps } else { lower },
        upper,
        exact,
        method: if exact { "exact_hilbertian" } else { "projected_boyd_ascent" },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObstructionStatus {
    Holds,
    Violated,
    /// `δ ≥ 1`, so the spectral inequality says nothing.
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObstructionReport {
    pub epsilon: f64,
    pub power: u32,
    /// `2 Δ_X(ε(G)^n / 2)` from the upper bound for `Δ`.
    pub delta: f64,
    pub trials: usize,
    /// Largest `lhs / rhs` for the centring inequality.
    pub centring_worst_ratio: f64,
    pub centring_violations: usize,
    /// Largest `lhs / rhs` for the spectral inequality, absent when inconclusive.
    pub spectral_worst_ratio: Option<f64>,
    pub spectral_violations: usize,
    /// `max |M E − E|, |E M − E|`.
    pub expectation_defect: f64,
    pub status: ObstructionStatus,
}

/// Pairwise spread `(|G|⁻¹ Σ_{x,y} ‖f(x) − f(y)‖²)^{1/2}` (unnormalised form).
fn spread(f: &[C64], x: &NormSpec, n: usize) -> f64 {
    let d = x.dim();
    let mut s = 0.0;
    let mut diff = vec![ZERO; d];
    for a in 0..n {
        for b in 0..n {
            diff.iter_mut().enumerate().for_each(|(l, z)| *z = f[a * d + l] - f[b * d + l]);
            s += x.eval(&diff).powi(2);
        }
    }
    s.sqrt()
}

fn l2(f: &[C64], x: &NormSpec) -> f64 {
    f.chunks(x.dim()).map(|b| x.eval(b).powi(2)).sum::<f64>().sqrt()
}

/// Samples `X`-valued `f` and checks
/// `(|G|⁻² Σ‖f(x) − f(y)‖²)^{1/2} ≤ 2 (|G|⁻¹ Σ‖f − Ef‖²)^{1/2}` and
/// `(|G|⁻¹ Σ‖f(x) − f(y)‖²)^{1/2} ≤ 2(1 − δ)⁻¹ ‖f − (M^G)^n f‖`.
pub fn obstruction_check(g: &RegularGraph, x: &NormSpec, power: u32, trials: usize, seed: u64) -> Result<ObstructionReport> {
    if g.bipartite {
        return Err(Error::Precondition("bipartite graphs are excluded (−1 is an eigenvalue of M^G)".into()));
    }
    let eps = epsilon_g(g)?;
    let n = g.n;
    let d = x.dim();
    let m = markov_operator(g);
    let e = expectation(n);
    let expectation_defect = m.matmul(&e)?.sub(&e)?.max_abs().max(e.matmul(&m)?.sub(&e)?.max_abs());
    let mut mn = MatrixOp::identity(n);
    for _ in 0..power {
        mn = mn.matmul(&m)?;
    }
    let epsn = eps.powi(power as i32);
    let delta = 2.0 * delta_upper(x, epsn / 2.0);
    let conclusive = delta < 1.0;

    let results: Vec<(f64, Option<f64>)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = sample::rng(seed.wrapping_mul(1_000_003).wrapping_add(t as u64));
            let f = sample::complex_vector(&mut r, n * d);
            let sp = spread(&f, x, n);
            let ef = apply_blocks(&e, &f, d);
            let centred: Vec<C64> = f.iter().zip(&ef).map(|(a, b)| a - b).collect();
            let lhs3 = sp / n as f64;
            let rhs3 = 2.0 * l2(&centred, x) / (n as f64).sqrt();
            let c3 = ratio(lhs3, rhs3);
            let c2 = conclusive.then(|| {
                let mf = apply_blocks(&mn, &f, d);
                let res: Vec<C64> = f.iter().zip(&mf).map(|(a, b)| a - b).collect();
                let lhs2 = sp / (n as f64).sqrt();
                ratio(lhs2, 2.0 / (1.0 - delta) * l2(&res, x))
            });
            (c3, c2)
        })
        .collect();
    let tol = 1.0 + 1e-10;
    let centring_worst_ratio = results.iter().map(|r| r.0).fold(0.0, f64::max);
    let centring_violations = results.iter().filter(|r| r.0 > tol).count();
    let spectral_worst_ratio = conclusive.then(|| results.iter().filter_map(|r| r.1).fold(0.0, f64::max));
    let spectral_violations = results.iter().filter(|r| r.1.map_or(false, |c| c > tol)).count();
    let status = if centring_violations + spectral_violations > 0 {
        ObstructionStatus::Violated
    } else if !conclusive {
        ObstructionStatus::Inconclusive
    } else {
        ObstructionStatus::Holds
    };
    Ok(ObstructionReport {
        epsilon: eps,
        power,
        delta,
        trials,
        centring_worst_ratio,
        centring_violations,
        spectral_worst_ratio,
        spectral_violations,
        expectation_defect,
        status,
    })
}

fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs <= 1e-300 {
        0.0
    } else if rhs <= 1e-300 {
        f64::INFINITY
    } else {
        lhs / rhs
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphReport {
    pub graph: RegularGraph,
    pub epsilon: f64,
    pub spectrum: Vec<f64>,
    pub spaces: Vec<GapX>,
    pub obstruction: Vec<ObstructionReport>,
}

/// `ε(G)`, the spectrum, and `ε(G, X)` with the obstruction check for each space.
pub fn graph_report(g: &RegularGraph, spaces: &[NormSpec], power: u32, trials: usize, seed: u64) -> Result<GraphReport> {
    let epsilon = epsilon_g(g)?;
    let spectrum = spectrum(g)?;
    let gaps = spaces
        .iter()
        .map(|x| epsilon_g_x(g, x, 100, seed))
        .collect::<Result<Vec<_>>>()?;
    let obstruction = spaces
        .iter()
        .map(|x| obstruction_check(g, x, power, trials, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(GraphReport {
        graph: g.clone(),
        epsilon,
        spectrum,
        spaces: gaps,
        obstruction,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn named_graph_gaps() {
        let k4 = RegularGraph::complete(4).unwrap();
        assert!((epsilon_g(&k4).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        let c5 = RegularGraph::cycle(5).unwrap();
        // second largest |λ| is |cos(4π/5)| = cos(π/5) ≈ 0.8090
        assert!((epsilon_g(&c5).unwrap() - (std::f64::consts::PI / 5.0).cos()).abs() < 1e-10);
        let p = RegularGraph::petersen();
        assert!((epsilon_g(&p).unwrap() - 2.0 / 3.0).abs() < 1e-10);
        let s = spectrum(&p).unwrap();
        assert_eq!(s.iter().filter(|&&l| (l - 1.0 / 3.0).abs() < 1e-9).count(), 5);
        assert_eq!(s.iter().filter(|&&l| (l + 2.0 / 3.0).abs() < 1e-9).count(), 4);
    }

    #[test]
    fn markov_examples() {
        let m = markov_operator(&RegularGraph::complete(4).unwrap());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 0.0 } else { 1.0 / 3.0 };
                assert!((m.get(i, j).re - want).abs() < 1e-15);
            }
        }
        let c = markov_operator(&RegularGraph::cycle(5).unwrap());
        assert_eq!(c.get(0, 1).re, 0.5);
        assert_eq!(c.get(0, 4).re, 0.5);
        let pair = RegularGraph::new(2, 1, vec![[0, 1]]).unwrap();
        assert!(pair.bipartite && pair.connected);
        assert_eq!(markov_operator(&pair).get(0, 1).re, 1.0);
    }

    #[test]
    fn validation_and_json() {
        assert!(RegularGraph::new(3, 1, vec![[0, 1]]).is_err());
        assert!(RegularGraph::new(2, 1, vec![[0, 0]]).is_err());
        assert!(RegularGraph::new(4, 2, vec![[0, 1], [0, 1], [2, 3], [2, 3]]).is_err());
        let g = RegularGraph::from_json(r#"{"n":3,"k":2,"edges":[[0,1],[1,2],[2,0]]}"#).unwrap();
        assert!(g.connected && !g.bipartite);
        assert!(RegularGraph::from_json(r#"{"n":3,"k":2,"edges":[[0,1]]}"#).is_err());
        let two = RegularGraph::new(6, 2, vec![[0, 1], [1, 2], [2, 0], [3, 4], [4, 5], [5, 3]]).unwrap();
        assert!(!two.connected);
        assert!(matches!(epsilon_g(&two), Err(Error::Disconnected)));
    }

    #[test]
    fn random_regular_examples() {
        let g = random_regular(4, 3, 0).unwrap();
        assert_eq!(g.edges.len(), 6);
        assert!((epsilon_g(&g).unwrap() - 1.0 / 3.0).abs() < 1e-10);
        let g = random_regular(50, 3, 1).unwrap();
        let a = g.adjacency();
        assert!(a.row_abs_sums().iter().all(|&s| s == 3.0));
        let c = random_regular(12, 2, 3).unwrap();
        assert_eq!(c.k, 2);
        assert!(random_regular(5, 3, 0).is_err());
        assert_eq!(random_regular(50, 3, 7).unwrap().edges, random_regular(50, 3, 7).unwrap().edges);
    }

    #[test]
    fn vector_valued_gap() {
        let k4 = RegularGraph::complete(4).unwrap();
        let h = epsilon_g_x(&k4, &NormSpec::euclidean(3), 50, 0).unwrap();
        assert!((h.lower - 1.0 / 3.0).abs() < 1e-9 && h.upper == h.lower);
        let l1 = epsilon_g_x(&k4, &NormSpec::lp_uniform(1.0, 2).unwrap(), 50, 0).unwrap();
        assert!(l1.lower >= 1.0 / 3.0 - 1e-9 && l1.lower <= l1.upper + 1e-12);
        let one = epsilon_g_x(&RegularGraph::petersen(), &NormSpec::lp_uniform(4.0, 1).unwrap(), 50, 0).unwrap();
        assert!((one.lower - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn obstruction_examples() {
        let k4 = RegularGraph::complete(4).unwrap();
        let r = obstruction_check(&k4, &NormSpec::euclidean(2), 2, 500, 0).unwrap();
        assert_eq!(r.status, ObstructionStatus::Holds, "{r:?}");
        assert!(r.expectation_defect < 1e-15);
        let pair = RegularGraph::new(2, 1, vec![[0, 1]]).unwrap();
        assert!(matches!(obstruction_check(&pair, &NormSpec::euclidean(1), 1, 10, 0), Err(Error::Precondition(_))));
        let c5 = RegularGraph::cycle(5).unwrap();
        let l1 = obstruction_check(&c5, &NormSpec::lp_uniform(1.0, 4).unwrap(), 1, 20, 0).unwrap();
        assert_eq!(l1.status, ObstructionStatus::Inconclusive);
        assert!(l1.spectral_worst_ratio.is_none() && l1.centring_violations == 0);
    }

    #[test]
    fn constant_function_spreads_vanish() {
        let x = NormSpec::euclidean(2);
        let f: Vec<C64> = (0..5).flat_map(|_| [C64::new(1.0, 2.0), C64::new(-3.0, 0.5)]).collect();
        assert_eq!(spread(&f, &x, 5), 0.0);
        assert_eq!(ratio(0.0, 0.0), 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn spectrum_and_expectation(seed in 0u64..1000, half in 3usize..12) {
            let g = random_regular(2 * half, 3, seed).unwrap();
            let s = spectrum(&g).unwrap();
            prop_assert!(s.iter().all(|&l| (-1.0 - 1e-12..=1.0 + 1e-12).contains(&l)));
            prop_assert_eq!(s[0] < -1.0 + 1e-9, g.bipartite);
            let m = markov_operator(&g);
            let e = expectation(g.n);
            prop_assert!(m.matmul(&e).unwrap().sub(&e).unwrap().max_abs() < 1e-14);
            prop_assert!(e.matmul(&m).unwrap().sub(&e).unwrap().max_abs() < 1e-14);
            if g.connected {
                let r = epsilon_g_x(&g, &NormSpec::lp_uniform(3.0, 2).unwrap(), 20, seed).unwrap();
                prop_assert!(r.lower >= epsilon_g(&g).unwrap() - 1e-9);
            }
        }

        #[test]
        fn centring_inequality_always_holds(seed in 0u64..1000, p in 1.0f64..6.0) {
            let x = NormSpec::lp_uniform(p, 3).unwrap();
            let r = obstruction_check(&RegularGraph::petersen(), &x, 1, 20, seed).unwrap();
            prop_assert_eq!(r.centring_violations, 0);
            prop_assert!(r.centring_worst_ratio <= 1.0);
        }
    }
}
