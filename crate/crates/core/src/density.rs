//! Perron–Frobenius change of density: a regular contraction `T` becomes a
//! kernel `K(i, j) = ξ_i⁻¹ a_ij η_j⁻¹` that contracts both `L_1(μ) → L_1(μ′)`
//! and `L_∞ → L_∞`, with `μ = η²`, `μ′ = ξ²`.

use serde::Serialize;

use crate::curvature::{delta_estimate, DeltaEstimate, DeltaSearch, FeasibleSet};
use crate::error::{Error, Result};
use crate::linalg::{herm_eig, norm2, op_norm_l2, MatrixOp, C64};
use crate::norms::{apply_blocks, reg_norm_l2, tensor_ratio, NormSpec};
use crate::sample;

pub const DEFAULT_JITTER: f64 = 1e-8;
const TOL: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct DensityCheck {
    /// `‖SS*ξ − ξ‖`.
    pub perron_residual: f64,
    /// `max_i Σ_j |K(i, j)| μ_j`, the `L_∞` bound.
    pub row_bound: f64,
    /// `max_j Σ_i μ′_i |K(i, j)|`, the `L_1` bound.
    pub column_bound: f64,
    /// Largest relative disagreement between `‖T_X v‖/‖v‖` computed directly
    /// and through the weighted kernel.
    pub reconstruction_error: f64,
    pub sampled_space: NormSpec,
    pub verified: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DensityRescaling {
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    pub kernel: MatrixOp,
    pub mu: Vec<f64>,
    pub mu_prime: Vec<f64>,
    /// `max(1, ‖T‖_reg)`, divided out before rescaling.
    pub pre_normalization: f64,
    /// `‖S‖` for the jittered `S = |T| / pre_normalization`.
    pub perron_norm: f64,
    /// `T = scale · (ξ K η)` entrywise, `scale = pre_normalization · perron_norm`.
    pub scale: f64,
    pub jitter: f64,
    pub check: DensityCheck,
}

impl DensityRescaling {
    /// `T` rebuilt from the kernel, `t_ij = scale · ξ_i K(i, j) η_j`.
    pub fn reconstruct(&self) -> MatrixOp {
        MatrixOp::from_fn(self.xi.len(), self.eta.len(), |i, j| {
            self.kernel.get(i, j) * (self.scale * self.xi[i] * self.eta[j])
        })
    }

    /// `‖g‖_{L_2(μ′; X)} / ‖f‖_{L_2(μ; X)}` for `g_i = Σ_j K(i, j) f_j μ_j`.
    pub fn weighted_ratio(&self, x: &NormSpec, f: &[C64]) -> f64 {
        let d = x.dim();
        let weighted = |v: &[C64], w: &[f64]| -> f64 {
            v.chunks(d)
                .zip(w)
                .map(|(b, &m)| m * x.eval(b).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let fm: Vec<C64> = f
            .chunks(d)
            .zip(&self.mu)
            .flat_map(|(b, &m)| b.iter().map(move |z| z * m))
            .collect();
        let g = apply_blocks(&self.kernel, &fm, d);
        let den = weighted(f, &self.mu);
        if den == 0.0 {
            0.0
        } else {
            weighted(&g, &self.mu_prime) / den
        }
    }

    /// The substitution `x_j ↦ η_j⁻¹ x_j` from `ℓ_2^n(X)` to `L_2(μ; X)`.
    pub fn to_weighted(&self, v: &[C64], d: usize) -> Vec<C64> {
        v.chunks(d)
            .zip(&self.eta)
            .flat_map(|(b, &e)| b.iter().map(move |z| z / e))
            .collect()
    }
}

/// Rescales `T` as in the Perron–Frobenius argument. Zero entries of `|T|` are
/// raised to `jitter · max|T|` for the Perron vector only.
pub fn change_of_density(t: &MatrixOp, jitter: f64) -> Result<DensityRescaling> {
    if t.is_empty() {
        return Err(Error::EmptyOperator);
    }
    if !(jitter >= 0.0 && jitter.is_finite()) {
        return Err(Error::InvalidParameter(format!("jitter {jitter} must be finite and ≥ 0")));
    }
    let amax = t.max_abs();
    if amax == 0.0 {
        return Err(Error::DegeneratePerron);
    }
    let pre = reg_norm_l2(t)?.max(1.0);
    let a = t.scale(1.0 / pre);
    let floor = jitter * amax / pre;
    let sj = a.modulus().map(|z| if z.re == 0.0 { C64::new(floor, 0.0) } else { z });
    let s = op_norm_l2(&sj)?;
    let sn = sj.scale(1.0 / s);
    let sst = sn.matmul(&sn.transpose())?;
    let eig = herm_eig(&sst)?;
    let m = eig.values.len();
    let gap = if m > 1 { eig.values[m - 1] - eig.values[m - 2] } else { f64::INFINITY };
    if jitter == 0.0 && gap < 1e-12 {
        return Err(Error::DegeneratePerron);
    }
    let mut xi: Vec<f64> = eig.vector(m - 1).iter().map(|z| z.re).collect();
    if xi.iter().sum::<f64>() < 0.0 {
        xi.iter_mut().for_each(|v| *v = -*v);
    }
    if xi.iter().any(|&v| v <= 0.0) {
        return Err(Error::DegeneratePerron);
    }
    let xc: Vec<C64> = xi.iter().map(|&v| C64::new(v, 0.0)).collect();
    let eta: Vec<f64> = sn.apply_adjoint(&xc).iter().map(|z| z.re).collect();
    if eta.iter().any(|&v| v <= 0.0) {
        return Err(Error::DegeneratePerron);
    }
    let back = sn.apply(&eta.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>());
    let perron_residual = norm2(&back.iter().zip(&xi).map(|(b, &x)| b - x).collect::<Vec<_>>());

    let kernel = MatrixOp::from_fn(a.rows(), a.cols(), |i, j| a.get(i, j) / (s * xi[i] * eta[j]));
    let mu: Vec<f64> = eta.iter().map(|v| v * v).collect();
    let mu_prime: Vec<f64> = xi.iter().map(|v| v * v).collect();
    let row_bound = (0..kernel.rows())
        .map(|i| (0..kernel.cols()).map(|j| kernel.get(i, j).norm() * mu[j]).sum::<f64>())
        .fold(0.0, f64::max);
    let column_bound = (0..kernel.cols())
        .map(|j| (0..kernel.rows()).map(|i| kernel.get(i, j).norm() * mu_prime[i]).sum::<f64>())
        .fold(0.0, f64::max);

    let mut out = DensityRescaling {
        xi,
        eta,
        kernel,
        mu,
        mu_prime,
        pre_normalization: pre,
        perron_norm: s,
        scale: pre * s,
        jitter,
        check: DensityCheck {
            perron_residual,
            row_bound,
            column_bound,
            reconstruction_error: 0.0,
            sampled_space: NormSpec::euclidean(1),
            verified: false,
        },
    };
    let (x, err) = reconstruction_error(t, &out)?;
    out.check.reconstruction_error = err;
    out.check.sampled_space = x;
    out.check.verified = perron_residual <= TOL
        && row_bound <= 1.0 + TOL
        && column_bound <= 1.0 + TOL
        && err <= RECONSTRUCTION_TOL;
    Ok(out)
}

fn reconstruction_error(t: &MatrixOp, r: &DensityRescaling) -> Result<(NormSpec, f64)> {
    if !t.is_square() {
        return Ok((NormSpec::euclidean(1), 0.0));
    }
    let mut rng = sample::rng(0);
    let x = NormSpec::lp(3.0, vec![1.0, 2.0, 0.5])?;
    let d = x.dim();
    let n = t.cols();
    let mut vs = vec![tensor_ratio(t, &x, sample::complex_vector(&mut rng, n * d), 100).1];
    vs.extend((0..4).map(|_| sample::complex_vector(&mut rng, n * d)));
    let space = |v: &[C64]| v.chunks(d).map(|b| x.eval(b).powi(2)).sum::<f64>().sqrt();
    let mut worst: f64 = 0.0;
    for v in vs {
        let direct = space(&apply_blocks(t, &v, d)) / space(&v);
        let via = r.scale * r.weighted_ratio(&x, &r.to_weighted(&v, d));
        worst = worst.max((direct - via).abs() / direct.max(1e-300));
    }
    Ok((x, worst))
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaComparison {
    pub regular: DeltaEstimate,
    pub fully_contractive: DeltaEstimate,
    pub gap: f64,
    /// Both searches agree to within 5% of the larger value.
    pub agree: bool,
}

/// Runs the `Δ_X(ε)` search over regular contractions and over fully
/// contractive matrices; the suprema coincide, so the gap measures search noise.
pub fn delta_via_regular_equals_delta_via_fully_contractive(
    x: &NormSpec,
    eps: f64,
    budget: usize,
) -> Result<DeltaComparison> {
    let run = |set| -> Result<DeltaEstimate> {
        if eps == 0.0 {
            return Ok(DeltaEstimate {
                eps,
                lower: 0.0,
                upper: 0.0,
                exact: true,
                n_op: 1,
                set,
                witness: MatrixOp::zeros(1, 1),
                witness_reg: 0.0,
                witness_op: 0.0,
            });
        }
        delta_estimate(x, eps, DeltaSearch { budget, set, ..Default::default() })
    };
    let regular = run(FeasibleSet::Regular)?;
    let fully_contractive = run(FeasibleSet::FullyContractive)?;
    let gap = (regular.lower - fully_contractive.lower).abs();
    let agree = gap <= 0.05 * regular.lower.max(fully_contractive.lower) + 1e-12;
    Ok(DeltaComparison {
        regular,
        fully_contractive,
        gap,
        agree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::tau;
    use crate::linalg::op_norm_linf;
    use proptest::prelude::*;

    #[test]
    fn tau_case() {
        let r = change_of_density(&tau(), DEFAULT_JITTER).unwrap();
        let h = 0.5f64.sqrt();
        for v in r.xi.iter().chain(&r.eta) {
            assert!((v - h).abs() < 1e-10);
        }
        let k = [[1.0, 1.0], [1.0, -1.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.kernel.get(i, j) - C64::new(k[i][j], 0.0)).norm() < 1e-10);
            }
        }
        assert!(r.mu.iter().chain(&r.mu_prime).all(|m| (m - 0.5).abs() < 1e-10));
        assert!(r.check.verified, "{:?}", r.check);
    }

    #[test]
    fn averaging_and_scalar() {
        let n = 4;
        let j = MatrixOp::from_fn(n, n, |_, _| C64::new(1.0 / n as f64, 0.0));
        let r = change_of_density(&j, 0.0).unwrap();
        assert!(r.kernel.data().iter().all(|z| (z - C64::new(1.0, 0.0)).norm() < 1e-10));
        assert!(r.mu.iter().all(|m| (m - 0.25).abs() < 1e-12));

        let c = C64::new(0.3, -0.4);
        let r = change_of_density(&MatrixOp::new(1, 1, vec![c]).unwrap(), 0.0).unwrap();
        assert!((r.kernel.get(0, 0) - c / c.norm()).norm() < 1e-12);
        assert!((r.scale - 0.5).abs() < 1e-12 && r.mu == vec![1.0]);
        assert!((r.reconstruct().get(0, 0) - c).norm() < 1e-12);
    }

    #[test]
    fn degenerate_without_jitter() {
        assert!(matches!(change_of_density(&MatrixOp::identity(3), 0.0), Err(Error::DegeneratePerron)));
        assert!(change_of_density(&MatrixOp::identity(3), DEFAULT_JITTER).unwrap().check.verified);
        assert!(matches!(change_of_density(&MatrixOp::zeros(2, 2), 1e-8), Err(Error::DegeneratePerron)));
    }

    #[test]
    fn prenormalizes_large_input() {
        let t = tau().scale(3.0);
        let r = change_of_density(&t, DEFAULT_JITTER).unwrap();
        assert!((r.pre_normalization - 3.0).abs() < 1e-12);
        assert!(r.reconstruct().sub(&t).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn delta_comparison() {
        let h = delta_via_regular_equals_delta_via_fully_contractive(&NormSpec::euclidean(2), 0.4, 10).unwrap();
        assert!((h.regular.lower - 0.4).abs() < 1e-6 && (h.fully_contractive.lower - 0.4).abs() < 1e-6);
        let l1 = NormSpec::lp_uniform(1.0, 2).unwrap();
        let c = delta_via_regular_equals_delta_via_fully_contractive(&l1, 0.5f64.sqrt(), 10).unwrap();
        assert!(c.regular.lower >= 1.0 - 1e-6 && c.fully_contractive.lower >= 1.0 - 1e-6);
        assert!(op_norm_linf(&c.fully_contractive.witness).unwrap() <= 1.0 + 1e-9);
        let z = delta_via_regular_equals_delta_via_fully_contractive(&l1, 0.0, 10).unwrap();
        assert_eq!((z.regular.lower, z.fully_contractive.lower), (0.0, 0.0));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn weighted_contraction_and_reconstruction(seed in 0u64..100_000, n in 1usize..6) {
            let mut r = sample::rng(seed);
            let t = sample::complex_matrix(&mut r, n, n);
            let t = t.scale(1.0 / reg_norm_l2(&t).unwrap());
            let d = change_of_density(&t, DEFAULT_JITTER).unwrap();
            prop_assert!(d.check.verified, "{:?}", d.check);
            prop_assert!(d.reconstruct().sub(&t).unwrap().max_abs() < 1e-10);
        }
    }
}
