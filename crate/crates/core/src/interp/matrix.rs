use rayon::prelude::*;
use serde::Serialize;

use super::solver::{dual_functional, solve, View};
use super::theta_euclidean_sample;
use crate::error::{Error, Result};
use crate::linalg::{phase, spectral_norm, svd, MatrixOp, C64, ZERO};
use crate::norms::{dual_reg_ball_norm, reg_norm_l2, tensor_op_norm, Norm};

/// `‖·‖_reg` on `n × n` matrices stored row-major in `C^{n²}`.
struct RegNorm(usize);

/// `‖·‖_{ℓ_2 → ℓ_2}` on `n × n` matrices stored row-major in `C^{n²}`.
struct OpNorm(usize);

fn as_matrix(n: usize, v: &[C64]) -> MatrixOp {
    MatrixOp::new(n, n, v.to_vec()).expect("n² entries")
}

impl Norm for RegNorm {
    fn dim(&self) -> usize {
        self.0 * self.0
    }

    fn eval(&self, x: &[C64]) -> f64 {
        reg_norm_l2(&as_matrix(self.0, x)).expect("non-empty")
    }

    /// `phase(t_ij) u_i v_j` from the Perron vectors of `|T|`.
    fn norming(&self, x: &[C64]) -> Vec<C64> {
        let t = as_matrix(self.0, x);
        let s = spectral_norm(&t.modulus()).expect("non-empty");
        if s.value == 0.0 {
            return vec![ZERO; x.len()];
        }
        let n = self.0;
        (0..n * n)
            .map(|k| phase(x[k]) * (s.left[k / n].norm() * s.right[k % n].norm()))
            .collect()
    }
}

impl Norm for OpNorm {
    fn dim(&self) -> usize {
        self.0 * self.0
    }

    fn eval(&self, x: &[C64]) -> f64 {
        spectral_norm(&as_matrix(self.0, x)).expect("non-empty").value
    }

    /// `u v*` for the top singular pair.
    fn norming(&self, x: &[C64]) -> Vec<C64> {
        let s = spectral_norm(&as_matrix(self.0, x)).expect("non-empty");
        if s.value == 0.0 {
            return vec![ZERO; x.len()];
        }
        let n = self.0;
        (0..n * n).map(|k| s.left[k / n] * s.right[k % n].conj()).collect()
    }
}

fn trace_norm(t: &MatrixOp) -> Result<f64> {
    Ok(svd(t)?.s.iter().sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct PairBounds {
    pub theta: f64,
    pub upper: f64,
    pub lower: f64,
    pub reg_norm: f64,
    pub op_norm: f64,
    /// `‖T‖_reg^{1−θ} ‖T‖^θ`, the constant competitor.
    pub constant: f64,
    pub degree: usize,
    pub grid: usize,
}

/// Bounds for `‖T‖` in `(B_r(ℓ_2^n), B(ℓ_2^n))_θ`. The lower bound pairs `T`
/// with dual matrices `φ` whose dual norm is bounded by the constant
/// competitor, `‖φ‖_reg*^{1−θ} ‖φ‖_1^θ`.
pub fn interp_pair_matrix_norm(t: &MatrixOp, theta: f64, d: usize, m: usize) -> Result<PairBounds> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::InvalidParameter(format!("θ = {theta} outside (0, 1)")));
    }
    if !t.is_square() || t.is_empty() {
        return Err(Error::DimensionMismatch {
            context: "interp_pair_matrix_norm expects a square matrix",
            expected: t.rows(),
            got: t.cols(),
        });
    }
    super::harmonic_measure(ZERO, m)?;
    if m < 4 * d {
        return Err(Error::InvalidParameter(format!("grid {m} must be at least 4 × degree {d}")));
    }
    let n = t.rows();
    let reg = RegNorm(n);
    let op = OpNorm(n);
    let cut = std::f64::consts::TAU * (1.0 - theta);
    let view = View {
        bounds: vec![(0.0, cut), (cut, std::f64::consts::TAU)],
        norms: vec![&reg, &op],
        gamma: None,
        invert_gamma: false,
    };
    let reg_norm = reg_norm_l2(t)?;
    let op_norm = spectral_norm(t)?.value;
    let constant = reg_norm.powf(1.0 - theta) * op_norm.powf(theta);
    let x = t.data().to_vec();
    if reg_norm == 0.0 {
        return Ok(PairBounds { theta, upper: 0.0, lower: 0.0, reg_norm, op_norm, constant, degree: d, grid: m });
    }
    let sol = solve(&view, &x, ZERO, d, m);
    let upper = sol.value.min(constant);

    let phi = dual_functional(&view, &x, ZERO, &sol);
    let s = svd(t)?;
    let polar = MatrixOp::from_fn(n, n, |i, j| {
        (0..n).fold(ZERO, |a, l| a + s.u.get(i, l) * s.v.get(j, l).conj())
    });
    let mut candidates = vec![as_matrix(n, &phi), t.conj(), polar.conj()];
    candidates.push(as_matrix(n, &reg.norming(&x)).conj());
    candidates.push(as_matrix(n, &op.norming(&x)).conj());
    let mut lower: f64 = 0.0;
    for c in candidates {
        let pairing = c.data().iter().zip(&x).map(|(a, b)| a * b).sum::<C64>().norm();
        let (rd, _) = dual_reg_ball_norm(&c)?;
        let du = rd.powf(1.0 - theta) * trace_norm(&c)?.powf(theta);
        if du > 0.0 {
            lower = lower.max(pairing / du);
        }
    }
    Ok(PairBounds {
        theta,
        upper,
        lower,
        reg_norm,
        op_norm,
        constant,
        degree: d,
        grid: m,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationSample {
    pub seed: u64,
    pub tensor_lower: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DominationReport {
    pub pair: PairBounds,
    pub samples: Vec<DominationSample>,
    pub worst_margin: f64,
    pub violations: usize,
}

/// For θ-Euclidean spaces `X` of dimension `n`, checks
/// `‖T ⊗ id_X‖ ≤ ‖T‖_{(B_r, B)_θ}` using the search lower bound on the left
/// and the solver upper bound on the right, with slack `1e-6`.
pub fn domination_check(t: &MatrixOp, theta: f64, samples: usize, seed: u64, d: usize, m: usize) -> Result<DominationReport> {
    let pair = interp_pair_matrix_norm(t, theta, d, m)?;
    let n = t.rows();
    let entries = (0..samples as u64)
        .into_par_iter()
        .map(|s| -> Result<DominationSample> {
            let (_, x) = theta_euclidean_sample(n, theta, seed.wrapping_add(s))?;
            let lower = tensor_op_norm(t, &x)?.lower;
            Ok(DominationSample {
                seed: seed.wrapping_add(s),
                tensor_lower: lower,
                margin: pair.upper + 1e-6 - lower,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst_margin = entries.iter().map(|e| e.margin).fold(f64::INFINITY, f64::min);
    let violations = entries.iter().filter(|e| e.margin < 0.0).count();
    Ok(DominationReport {
        pair,
        samples: entries,
        worst_margin,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::tau;
    use crate::sample;

    #[test]
    fn matrix_norms_norming() {
        let mut r = sample::rng(3);
        let t = sample::complex_matrix(&mut r, 3, 3);
        let x = t.data().to_vec();
        for (norm, dual) in [
            (&RegNorm(3) as &dyn Norm, 0usize),
            (&OpNorm(3) as &dyn Norm, 1usize),
        ] {
            let psi = norm.norming(&x);
            let pairing: C64 = psi.iter().zip(&x).map(|(a, b)| a.conj() * b).sum();
            assert!((pairing.re - norm.eval(&x)).abs() < 1e-9 && pairing.im.abs() < 1e-9);
            let p = as_matrix(3, &psi);
            let dn = if dual == 0 { dual_reg_ball_norm(&p).unwrap().0 } else { trace_norm(&p).unwrap() };
            assert!(dn <= 1.0 + 1e-6, "{dn}");
        }
    }

    #[test]
    fn tau_pair() {
        for theta in [0.25, 0.5, 0.75] {
            let b = interp_pair_matrix_norm(&tau(), theta, 4, 32).unwrap();
            let want = 2f64.powf(-theta / 2.0);
            assert!(b.upper <= want + 1e-9 && b.lower >= want - 1e-9, "{b:?}");
        }
    }

    #[test]
    fn nonnegative_pair_is_operator_norm() {
        let mut r = sample::rng(5);
        let t = sample::real_matrix(&mut r, 3, 3).modulus();
        let b = interp_pair_matrix_norm(&t, 0.4, 4, 32).unwrap();
        let op = spectral_norm(&t).unwrap().value;
        assert!((b.upper - op).abs() < 1e-9 && (b.lower - op).abs() < 1e-6, "{b:?}");
        let near_one = interp_pair_matrix_norm(&tau(), 0.999, 4, 32).unwrap();
        assert!((near_one.upper - 0.5f64.sqrt()).abs() < 1e-3);
    }

    #[test]
    fn domination_examples() {
        let r = domination_check(&MatrixOp::identity(2).scale(0.3), 0.5, 3, 0, 4, 32).unwrap();
        assert_eq!(r.violations, 0);
        let r = domination_check(&tau(), 0.5, 3, 0, 4, 32).unwrap();
        assert!(r.worst_margin >= 0.0, "{r:?}");
    }
}
