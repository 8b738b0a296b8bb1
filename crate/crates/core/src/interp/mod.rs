//! Complex interpolation of piecewise constant families of norms on `C^n`
//! over the unit circle.

mod matrix;
mod outer;
mod solver;

pub use matrix::{domination_check, interp_pair_matrix_norm, DominationReport, DominationSample, PairBounds};
pub use outer::{grid_angles, harmonic_measure, outer_function, HarmonicMeasure, OuterFactor, LOG_FLOOR};

use std::f64::consts::TAU;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{bilinear, C64};
use crate::norms::{Exponent, Norm, NormSpec};
use crate::sample;
use solver::{dual_functional, solve, Gamma, View};

pub const DEFAULT_DEGREE: usize = 32;
pub const DEFAULT_GRID: usize = 256;
const PARTITION_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Arc {
    pub a: f64,
    pub b: f64,
    pub norm: NormSpec,
}

/// Arcs `[a, b)` partitioning `[0, 2π)`, each carrying a norm on `C^dim`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson")]
pub struct BoundaryFamily {
    pub dim: usize,
    pub arcs: Vec<Arc>,
    /// `(k1, k2)` with `k1‖x‖_2 ≤ ‖x‖_z ≤ k2‖x‖_2` for every `z`.
    pub k_bounds: (f64, f64),
}

#[derive(Deserialize)]
struct FamilyJson {
    dim: usize,
    arcs: Vec<Arc>,
}

impl TryFrom<FamilyJson> for BoundaryFamily {
    type Error = Error;

    fn try_from(f: FamilyJson) -> Result<Self> {
        let fam = BoundaryFamily::new(f.arcs)?;
        if fam.dim != f.dim {
            return Err(Error::DimensionMismatch {
                context: "family dim",
                expected: f.dim,
                got: fam.dim,
            });
        }
        Ok(fam)
    }
}

impl BoundaryFamily {
    /// Sorts the arcs, checks they partition the circle, and verifies the
    /// Euclidean comparison constants on sampled vectors.
    pub fn new(mut arcs: Vec<Arc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidParameter("family needs at least one arc".into()));
        }
        arcs.sort_by(|p, q| p.a.total_cmp(&q.a));
        let dim = arcs[0].norm.dim();
        let mut at = 0.0;
        for arc in &arcs {
            if arc.norm.dim() != dim {
                return Err(Error::DimensionMismatch {
                    context: "arc norm dimension",
                    expected: dim,
                    got: arc.norm.dim(),
                });
            }
            if (arc.a - at).abs() > PARTITION_TOL || !(arc.b > arc.a) {
                return Err(Error::InvalidParameter(format!(
                    "arcs must partition [0, 2π): arc [{}, {}) does not start at {at}",
                    arc.a, arc.b
                )));
            }
            at = arc.b;
        }
        if (at - TAU).abs() > PARTITION_TOL {
            return Err(Error::InvalidParameter(format!("arcs end at {at}, not 2π")));
        }
        let mut k1 = f64::INFINITY;
        let mut k2: f64 = 0.0;
        let mut r = sample::rng(0);
        for arc in &arcs {
            let (lo, hi) = arc.norm.euclidean_bounds();
            for _ in 0..32 {
                let v = sample::complex_vector(&mut r, dim);
                let ratio = arc.norm.eval(&v) / crate::linalg::norm2(&v);
                if ratio < lo * (1.0 - 1e-10) || ratio > hi * (1.0 + 1e-10) {
                    return Err(Error::InvalidParameter(format!(
                        "comparison constants ({lo}, {hi}) violated on arc [{}, {})",
                        arc.a, arc.b
                    )));
                }
            }
            k1 = k1.min(lo);
            k2 = k2.max(hi);
        }
        Ok(Self {
            dim,
            arcs,
            k_bounds: (k1, k2),
        })
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn constant(x: NormSpec) -> Self {
        Self::new(vec![Arc { a: 0.0, b: TAU, norm: x }]).expect("single arc")
    }

    /// `X0` on `[0, 2π(1 − θ))` and `X1` on `[2π(1 − θ), 2π)`.
    pub fn two_valued(x0: NormSpec, x1: NormSpec, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("θ = {theta} outside [0, 1]")));
        }
        let cut = TAU * (1.0 - theta);
        let mut arcs = Vec::with_capacity(2);
        if cut > 0.0 {
            arcs.push(Arc { a: 0.0, b: cut, norm: x0 });
        }
        if cut < TAU {
            arcs.push(Arc { a: cut, b: TAU, norm: x1 });
        }
        Self::new(arcs)
    }

    /// The arcwise dual family under the bilinear pairing.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            arcs: self
                .arcs
                .iter()
                .map(|a| Arc {
                    a: a.a,
                    b: a.b,
                    norm: a.norm.bilinear_dual_spec(),
                })
                .collect(),
            k_bounds: (1.0 / self.k_bounds.1, 1.0 / self.k_bounds.0),
        }
    }

    fn view<'a>(&'a self, gamma: Option<Gamma<'a>>, invert: bool) -> View<'a> {
        View {
            bounds: self.arcs.iter().map(|a| (a.a, a.b)).collect(),
            norms: self.arcs.iter().map(|a| &a.norm as &dyn Norm).collect(),
            gamma,
            invert_gamma: invert,
        }
    }
}

/// The explicit interpolation space of two diagonal norms:
/// `1/p_θ = (1 − θ)/p_0 + θ/p_1` and weights `w^{1−θ} v^θ`.
pub fn calderon_oracle(x0: &NormSpec, x1: &NormSpec, theta: f64) -> Result<NormSpec> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::InvalidParameter(format!("θ = {theta} outside [0, 1]")));
    }
    if x0.dim() != x1.dim() {
        return Err(Error::DimensionMismatch {
            context: "calderon_oracle endpoints",
            expected: x0.dim(),
            got: x1.dim(),
        });
    }
    if let (NormSpec::HilbertianPsd(a), NormSpec::HilbertianPsd(b)) = (x0, x1) {
        if x0.is_diagonal() && x1.is_diagonal() {
            let n = x0.dim();
            let d: Vec<f64> = (0..n)
                .map(|i| a.matrix().get(i, i).re.powf(1.0 - theta) * b.matrix().get(i, i).re.powf(theta))
                .collect();
            return NormSpec::hilbertian(crate::linalg::MatrixOp::diag_real(&d));
        }
    }
    let (p0, w0) = diagonal_form(x0)?;
    let (p1, w1) = diagonal_form(x1)?;
    let p = Exponent::from_inv_p((1.0 - theta) * p0.inv_p() + theta * p1.inv_p())?;
    let w = w0
        .iter()
        .zip(&w1)
        .map(|(a, b)| a.powf(1.0 - theta) * b.powf(theta))
        .collect();
    NormSpec::weighted(p, w)
}

fn diagonal_form(x: &NormSpec) -> Result<(Exponent, Vec<f64>)> {
    match x {
        NormSpec::WeightedLp { p, w } => Ok((*p, w.clone())),
        NormSpec::HilbertianPsd(h) if x.is_diagonal() => Ok((
            Exponent::TWO,
            (0..x.dim()).map(|i| h.matrix().get(i, i).re.sqrt()).collect(),
        )),
        _ => Err(Error::OracleUndefined),
    }
}

/// `ℓ_2^n` on an arc of measure `θ` and a random weighted `ℓ_1^n` elsewhere,
/// with the explicit interpolation space at the origin.
pub fn theta_euclidean_sample(n: usize, theta: f64, seed: u64) -> Result<(BoundaryFamily, NormSpec)> {
    let mut r = sample::rng(seed);
    let w: Vec<f64> = (0..n).map(|_| r.gen_range(0.5..2.0)).collect();
    let l1 = NormSpec::lp(1.0, w)?;
    let l2 = NormSpec::euclidean(n);
    let oracle = calderon_oracle(&l1, &l2, theta)?;
    Ok((BoundaryFamily::two_valued(l1, l2, theta)?, oracle))
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpUpper {
    /// Log-mean of the best competitor on the fine grid.
    pub value: f64,
    /// `max_m ‖f(z_m)‖` for the subgradient competitor at full degree and grid.
    pub minimax: f64,
    /// Log-mean of that subgradient competitor.
    pub minimax_log_mean: f64,
    /// Log-mean of the constant competitor `f ≡ x`.
    pub constant: f64,
    pub degree: usize,
    pub grid: usize,
    pub fine_grid: usize,
    pub base_point: C64,
    #[serde(skip)]
    pub coefficients: Vec<C64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpLower {
    pub value: f64,
    /// The dual vector attaining `value`, paired bilinearly with `x`.
    pub functional: Vec<C64>,
    /// Upper bound for the dual norm of `functional`.
    pub dual_upper: f64,
    pub trials: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpBounds {
    pub upper: InterpUpper,
    pub lower: InterpLower,
}

fn check_args(f: &BoundaryFamily, x: &[C64], xi: C64, d: usize, m: usize) -> Result<()> {
    if x.len() != f.dim {
        return Err(Error::DimensionMismatch {
            context: "interpolated vector",
            expected: f.dim,
            got: x.len(),
        });
    }
    harmonic_measure(xi, m)?;
    if m < 4 * d {
        return Err(Error::InvalidParameter(format!("grid {m} must be at least 4 × degree {d}")));
    }
    Ok(())
}

fn upper_with(view: &View, x: &[C64], xi: C64, d: usize, m: usize) -> InterpUpper {
    if x.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return InterpUpper {
            value: 0.0,
            minimax: 0.0,
            minimax_log_mean: 0.0,
            constant: 0.0,
            degree: d,
            grid: m,
            fine_grid: solver::fine_size(m),
            base_point: xi,
            coefficients: vec![C64::new(0.0, 0.0); d * x.len()],
        };
    }
    let s = solve(view, x, xi, d, m);
    InterpUpper {
        value: s.value,
        minimax: s.minimax,
        minimax_log_mean: s.minimax_log_mean,
        constant: s.constant,
        degree: d,
        grid: m,
        fine_grid: s.fine_grid,
        base_point: xi,
        coefficients: s.coeffs,
    }
}

/// Upper bound for `‖x‖_{X(ξ)}` from polynomial competitors of degree `≤ D`.
pub fn interp_norm_upper(f: &BoundaryFamily, x: &[C64], xi: C64, d: usize, m: usize) -> Result<InterpUpper> {
    check_args(f, x, xi, d, m)?;
    Ok(upper_with(&f.view(None, false), x, xi, d, m))
}

fn bounds_with(
    f: &BoundaryFamily,
    gamma: Option<Gamma>,
    x: &[C64],
    xi: C64,
    d: usize,
    m: usize,
    trials: usize,
    seed: u64,
) -> Result<InterpBounds> {
    check_args(f, x, xi, d, m)?;
    let primal = f.view(gamma, false);
    let upper = upper_with(&primal, x, xi, d, m);
    if upper.value == 0.0 {
        let lower = InterpLower {
            value: 0.0,
            functional: vec![C64::new(0.0, 0.0); x.len()],
            dual_upper: 0.0,
            trials,
        };
        return Ok(InterpBounds { upper, lower });
    }
    let sol = solver::Solution {
        value: upper.value,
        minimax: upper.minimax,
        minimax_log_mean: upper.minimax_log_mean,
        constant: upper.constant,
        coeffs: upper.coefficients.clone(),
        fine_grid: upper.fine_grid,
    };
    let phi = dual_functional(&primal, x, xi, &sol);
    let dual_family = f.dual();
    let dual = dual_family.view(gamma, true);
    let mut candidates = vec![phi.clone()];
    let mut r = sample::rng(seed);
    let scale = crate::linalg::norm2(&phi);
    for _ in 0..trials {
        let e = sample::complex_vector(&mut r, x.len());
        candidates.push(phi.iter().zip(&e).map(|(a, b)| a + b * (0.1 * scale)).collect());
    }
    let mut best = InterpLower {
        value: 0.0,
        functional: phi,
        dual_upper: f64::INFINITY,
        trials,
    };
    for c in candidates {
        let du = upper_with(&dual, &c, xi, d, m).value;
        let v = bilinear(&c, x).norm() / du;
        if v > best.value {
            best = InterpLower {
                value: v,
                functional: c,
                dual_upper: du,
                trials,
            };
        }
    }
    Ok(InterpBounds { upper, lower: best })
}

/// Upper and lower bounds sharing one primal solve. The lower bound is
/// `|Σ φ_i x_i| / ‖φ‖` over dual vectors `φ`, with the dual norm bounded by
/// the same solver on the arcwise dual family.
pub fn interp_norm(f: &BoundaryFamily, x: &[C64], xi: C64, d: usize, m: usize, trials: usize) -> Result<InterpBounds> {
    bounds_with(f, None, x, xi, d, m, trials, 0)
}

pub fn interp_norm_lower(f: &BoundaryFamily, x: &[C64], xi: C64, d: usize, m: usize, trials: usize) -> Result<InterpLower> {
    Ok(interp_norm(f, x, xi, d, m, trials)?.lower)
}

#[derive(Clone, Debug, Serialize)]
pub struct RescalingReport {
    /// `|W(0)| = exp ∫ log γ dm`.
    pub outer_center: f64,
    pub base: InterpBounds,
    pub scaled: InterpBounds,
    pub upper_ratio: f64,
    pub lower_ratio: f64,
    /// Both ratios within 3% of `|W(0)|`.
    pub holds: bool,
}

/// Multiplies every norm of the family by `γ(z)` and compares the
/// interpolated norms at the origin with the outer factor `|W(0)|`.
pub fn rescaling_invariance_check(
    f: &BoundaryFamily,
    x: &[C64],
    gamma: &(dyn Fn(f64) -> f64 + Sync),
    d: usize,
    m: usize,
) -> Result<RescalingReport> {
    let samples: Vec<f64> = grid_angles(solver::fine_size(m)).into_iter().map(gamma).collect();
    let outer = outer_function(&samples)?;
    let zero = C64::new(0.0, 0.0);
    let base = bounds_with(f, None, x, zero, d, m, 0, 0)?;
    let scaled = bounds_with(f, Some(gamma), x, zero, d, m, 0, 0)?;
    let upper_ratio = scaled.upper.value / base.upper.value;
    let lower_ratio = scaled.lower.value / base.lower.value;
    let w0 = outer.center;
    let holds = (upper_ratio / w0 - 1.0).abs() <= 0.03 && (lower_ratio / w0 - 1.0).abs() <= 0.03;
    Ok(RescalingReport {
        outer_center: w0,
        base,
        scaled,
        upper_ratio,
        lower_ratio,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(v: &[f64]) -> Vec<C64> {
        v.iter().map(|&a| C64::new(a, 0.0)).collect()
    }

    const ZERO: C64 = C64::new(0.0, 0.0);

    #[test]
    fn family_validation() {
        let x = NormSpec::euclidean(2);
        assert!(BoundaryFamily::new(vec![Arc { a: 0.0, b: 3.0, norm: x.clone() }]).is_err());
        let f = BoundaryFamily::two_valued(NormSpec::lp_uniform(1.0, 2).unwrap(), x.clone(), 0.5).unwrap();
        assert_eq!(f.arcs.len(), 2);
        assert!((f.k_bounds.0 - 1.0).abs() < 1e-12 && (f.k_bounds.1 - 2f64.sqrt()).abs() < 1e-12);
        assert!(BoundaryFamily::two_valued(x.clone(), NormSpec::euclidean(3), 0.5).is_err());
        let json = r#"{"dim":2,"arcs":[{"a":0,"b":6.283185307179586,"norm":{"kind":"lp","p":2,"w":[1,1]}}]}"#;
        assert_eq!(BoundaryFamily::from_json(json).unwrap().arcs.len(), 1);
    }

    #[test]
    fn oracle_examples() {
        let l1 = NormSpec::lp_uniform(1.0, 2).unwrap();
        let linf = NormSpec::lp_uniform(f64::INFINITY, 2).unwrap();
        assert_eq!(calderon_oracle(&l1, &linf, 0.0).unwrap(), l1);
        assert_eq!(calderon_oracle(&l1, &linf, 0.5).unwrap(), NormSpec::euclidean(2));
        let h0 = NormSpec::hilbertian(crate::linalg::MatrixOp::identity(2)).unwrap();
        let h1 = NormSpec::hilbertian(crate::linalg::MatrixOp::diag_real(&[1.0, 9.0])).unwrap();
        let o = calderon_oracle(&h0, &h1, 0.5).unwrap();
        assert!((o.eval(&c(&[0.0, 1.0])) - 3f64.sqrt()).abs() < 1e-12);
        let full = crate::linalg::MatrixOp::from_real(2, 2, &[2.0, 1.0, 1.0, 2.0]).unwrap();
        let nd = NormSpec::hilbertian(full).unwrap();
        assert!(matches!(calderon_oracle(&nd, &h1, 0.5), Err(Error::OracleUndefined)));
    }

    #[test]
    fn theta_euclidean_examples() {
        let (_, o) = theta_euclidean_sample(3, 1.0, 4).unwrap();
        assert_eq!(o, NormSpec::euclidean(3));
        let (f, o) = theta_euclidean_sample(3, 0.0, 4).unwrap();
        assert_eq!(o, f.arcs[0].norm);
        let (f, o) = theta_euclidean_sample(1, 0.3, 9).unwrap();
        let w = f.arcs[0].norm.eval(&c(&[1.0]));
        assert!((o.eval(&c(&[1.0])) - w.powf(0.7)).abs() < 1e-12);
    }

    #[test]
    fn constant_family() {
        let x = NormSpec::lp(3.0, vec![1.0, 2.0]).unwrap();
        let f = BoundaryFamily::constant(x.clone());
        let v = vec![C64::new(1.0, -1.0), C64::new(0.5, 2.0)];
        let b = interp_norm(&f, &v, ZERO, 8, 64, 0).unwrap();
        let want = x.eval(&v);
        assert!((b.upper.value - want).abs() < 1e-6, "{} {}", b.upper.value, want);
        assert!((b.lower.value / want - 1.0).abs() < 0.02);
        assert!(b.lower.value <= b.upper.value * (1.0 + 1e-9));
        let z = interp_norm(&f, &[ZERO, ZERO], ZERO, 8, 64, 0).unwrap();
        assert_eq!((z.upper.value, z.lower.value), (0.0, 0.0));
    }

    #[test]
    fn diagonal_hilbertian_pair() {
        let f = BoundaryFamily::two_valued(NormSpec::lp(2.0, vec![1.0]).unwrap(), NormSpec::lp(2.0, vec![4.0]).unwrap(), 0.5).unwrap();
        let b = interp_norm(&f, &c(&[1.0]), ZERO, 32, 256, 0).unwrap();
        assert!((b.upper.value / 2.0 - 1.0).abs() < 0.02, "{:?}", b.upper);
        assert!(b.lower.value <= b.upper.value * (1.0 + 1e-9) && b.lower.value / 2.0 > 0.95);
    }

    #[test]
    fn l1_linf_midpoint() {
        let f = BoundaryFamily::two_valued(
            NormSpec::lp_uniform(1.0, 2).unwrap(),
            NormSpec::lp_uniform(f64::INFINITY, 2).unwrap(),
            0.5,
        )
        .unwrap();
        let b = interp_norm(&f, &c(&[1.0, 1.0]), ZERO, 32, 256, 0).unwrap();
        let r2 = 2f64.sqrt();
        assert!((b.upper.value / r2 - 1.0).abs() < 0.02, "{:?}", b.upper);
        assert!(b.lower.value <= b.upper.value * (1.0 + 1e-9) && (b.lower.value / r2 - 1.0).abs() < 0.02, "{} {}", b.lower.value, b.upper.value);
        assert!(b.upper.minimax >= b.upper.value * (1.0 - 1e-9));
    }

    #[test]
    fn nested_refinement_is_monotone() {
        let f = BoundaryFamily::two_valued(
            NormSpec::lp(1.0, vec![1.0, 0.7, 1.5]).unwrap(),
            NormSpec::lp(2.0, vec![2.0, 1.0, 0.5]).unwrap(),
            0.4,
        )
        .unwrap();
        let v = vec![C64::new(1.0, 0.3), C64::new(-0.4, 1.0), C64::new(0.2, 0.0)];
        let mut prev = f64::INFINITY;
        for (d, m) in [(0, 8), (2, 16), (4, 32), (8, 64), (16, 128)] {
            let u = interp_norm_upper(&f, &v, ZERO, d, m).unwrap().value;
            assert!(u <= prev + 1e-9, "({d}, {m}): {u} > {prev}");
            prev = u;
        }
    }

    #[test]
    fn rescaling_by_outer_factor() {
        let f = BoundaryFamily::two_valued(NormSpec::lp_uniform(1.0, 2).unwrap(), NormSpec::euclidean(2), 0.5).unwrap();
        let v = c(&[1.0, 0.5]);
        let two = |t: f64| (C64::new(2.0, 0.0) + C64::from_polar(1.0, t)).norm();
        let r = rescaling_invariance_check(&f, &v, &two, 16, 128).unwrap();
        assert!((r.outer_center - 2.0).abs() < 1e-8);
        assert!(r.holds, "{} {}", r.upper_ratio, r.lower_ratio);
        let r = rescaling_invariance_check(&f, &v, &|_| 3.0, 8, 64).unwrap();
        assert!((r.upper_ratio - 3.0).abs() < 1e-6, "{}", r.upper_ratio);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]

        #[test]
        fn sandwich_and_oracle(seed in 0u64..1000) {
            let mut r = sample::rng(seed);
            let n = r.gen_range(1..4);
            let ps = [1.0, 2.0, f64::INFINITY];
            let mut pick = || NormSpec::lp(ps[r.gen_range(0..3)], (0..n).map(|_| r.gen_range(0.5..2.0)).collect()).unwrap();
            let (x0, x1) = (pick(), pick());
            let theta = sample::rng(seed + 1).gen_range(0.2..0.8);
            let oracle = calderon_oracle(&x0, &x1, theta).unwrap();
            let f = BoundaryFamily::two_valued(x0, x1, theta).unwrap();
            let v = sample::complex_vector(&mut sample::rng(seed + 2), n);
            let b = interp_norm(&f, &v, ZERO, 16, 128, 0).unwrap();
            let o = oracle.eval(&v);
            prop_assert!(b.lower.value <= b.upper.value * (1.0 + 1e-6));
            prop_assert!(b.upper.value / o <= 1.05 && o / b.lower.value <= 1.05, "{} {} {}", b.lower.value, o, b.upper.value);
        }
    }
}
