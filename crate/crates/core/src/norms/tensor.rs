use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, MatrixOp, C64, ZERO};
use crate::sample;

use super::{reg_norm_l2, NormSpec};

/// Search budget for the lower bound of `‖T ⊗ id_X‖`.
#[derive(Clone, Copy, Debug)]
pub struct TensorSearch {
    pub starts: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for TensorSearch {
    fn default() -> Self {
        Self {
            starts: 16,
            iterations: 300,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorNorm {
    pub lower: f64,
    pub upper: f64,
    /// Set when `X` is Hilbertian and the value is `‖T‖` exactly.
    pub exact: bool,
    /// Unit vector of `ℓ_2^n(X)` attaining `lower`, blocks of length `dim X`.
    #[serde(skip)]
    pub witness: Vec<C64>,
    pub op_norm: f64,
    pub reg_norm: f64,
}

/// The space `ℓ_2^n(X)`.
pub(crate) struct L2Of<'a> {
    pub x: &'a NormSpec,
}

impl L2Of<'_> {
    fn d(&self) -> usize {
        self.x.dim()
    }

    pub fn eval(&self, v: &[C64]) -> f64 {
        v.chunks(self.d())
            .map(|b| self.x.eval(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn norming(&self, v: &[C64]) -> Vec<C64> {
        let a: Vec<f64> = v.chunks(self.d()).map(|b| self.x.eval(b)).collect();
        let n = a.iter().map(|t| t * t).sum::<f64>().sqrt();
        if n == 0.0 {
            return vec![ZERO; v.len()];
        }
        v.chunks(self.d())
            .zip(&a)
            .flat_map(|(b, &ai)| self.x.norming(b).into_iter().map(move |z| z * (ai / n)))
            .collect()
    }

    pub fn dual_norming(&self, u: &[C64]) -> Vec<C64> {
        let a: Vec<f64> = u.chunks(self.d()).map(|b| self.x.dual_eval(b)).collect();
        let n = a.iter().map(|t| t * t).sum::<f64>().sqrt();
        if n == 0.0 {
            return vec![ZERO; u.len()];
        }
        u.chunks(self.d())
            .zip(&a)
            .flat_map(|(b, &ai)| self.x.dual_norming(b).into_iter().map(move |z| z * (ai / n)))
            .collect()
    }
}

/// `(T ⊗ id) v` for blockwise `v`.
pub(crate) fn apply_blocks(t: &MatrixOp, v: &[C64], d: usize) -> Vec<C64> {
    let mut out = vec![ZERO; t.rows() * d];
    for i in 0..t.rows() {
        let o = &mut out[i * d..(i + 1) * d];
        for (j, &tij) in t.row(i).iter().enumerate() {
            if tij == ZERO {
                continue;
            }
            for (ok, &vk) in o.iter_mut().zip(&v[j * d..(j + 1) * d]) {
                *ok += tij * vk;
            }
        }
    }
    out
}

/// `(T* ⊗ id) u`.
pub(crate) fn apply_blocks_adjoint(t: &MatrixOp, u: &[C64], d: usize) -> Vec<C64> {
    let mut out = vec![ZERO; t.cols() * d];
    for i in 0..t.rows() {
        let ui = &u[i * d..(i + 1) * d];
        for (j, &tij) in t.row(i).iter().enumerate() {
            if tij == ZERO {
                continue;
            }
            let c = tij.conj();
            for (ok, &uk) in out[j * d..(j + 1) * d].iter_mut().zip(ui) {
                *ok += c * uk;
            }
        }
    }
    out
}

/// Boyd's nonlinear power method for `sup ‖A v‖ / ‖v‖` on a normed space whose
/// norming maps are given. The ratio never decreases along the iteration.
pub(crate) fn boyd_ascent(
    space: &L2Of<'_>,
    forward: impl Fn(&[C64]) -> Vec<C64>,
    backward: impl Fn(&[C64]) -> Vec<C64>,
    start: Vec<C64>,
    iterations: usize,
) -> (f64, Vec<C64>) {
    let n0 = space.eval(&start);
    if n0 == 0.0 {
        return (0.0, start);
    }
    let mut v: Vec<C64> = start.into_iter().map(|z| z / n0).collect();
    let mut best = space.eval(&forward(&v));
    for _ in 0..iterations {
        let w = forward(&v);
        let psi = space.norming(&w);
        let u = backward(&psi);
        let cand = space.dual_norming(&u);
        let nc = space.eval(&cand);
        if nc == 0.0 {
            break;
        }
        let cand: Vec<C64> = cand.into_iter().map(|z| z / nc).collect();
        let r = space.eval(&forward(&cand));
        if r <= best * (1.0 + 1e-14) {
            if r > best {
                best = r;
                v = cand;
            }
            break;
        }
        best = r;
        v = cand;
    }
    (best, v)
}

/// `‖(T ⊗ id) v‖ / ‖v‖` improved by Boyd's iteration from `start`.
pub(crate) fn tensor_ratio(t: &MatrixOp, x: &NormSpec, start: Vec<C64>, iterations: usize) -> (f64, Vec<C64>) {
    let d = x.dim();
    boyd_ascent(
        &L2Of { x },
        |v| apply_blocks(t, v, d),
        |u| apply_blocks_adjoint(t, u, d),
        start,
        iterations,
    )
}

/// Bounds for `‖T ⊗ id_X : ℓ_2^n(X) → ℓ_2^n(X)‖` with the default search.
pub fn tensor_op_norm(t: &MatrixOp, x: &NormSpec) -> Result<TensorNorm> {
    tensor_op_norm_with(t, x, TensorSearch::default())
}

pub fn tensor_op_norm_with(t: &MatrixOp, x: &NormSpec, search: TensorSearch) -> Result<TensorNorm> {
    if t.is_empty() {
        return Err(Error::EmptyOperator);
    }
    if !t.is_square() {
        return Err(Error::DimensionMismatch {
            context: "tensor_op_norm expects a square operator",
            expected: t.rows(),
            got: t.cols(),
        });
    }
    let n = t.rows();
    let d = x.dim();
    let sn = spectral_norm(t)?;
    let reg = reg_norm_l2(t)?;
    let exact = x.is_hilbertian();
    let upper = if exact {
        sn.value
    } else {
        reg.min((d as f64).sqrt() * sn.value)
    };

    let space = L2Of { x };
    let unit = |k: usize| -> Vec<C64> {
        let mut e = vec![ZERO; d];
        e[k % d] = C64::new(1.0, 0.0);
        let s = x.eval(&e);
        e.into_iter().map(|z| z / s).collect()
    };
    let starts: Vec<Vec<C64>> = (0..search.starts.max(3))
        .map(|k| match k {
            // scalar embedding of the top singular vector: ratio ‖T‖ at once
            0 => sn.right.iter().flat_map(|&s| unit(0).into_iter().map(move |z| z * s)).collect(),
            1 => (0..n).flat_map(|j| unit(j)).collect(),
            2 => (0..n)
                .flat_map(|j| {
                    let s = sn.right[j];
                    unit(j).into_iter().map(move |z| z * s)
                })
                .collect(),
            _ => sample::complex_vector(&mut sample::rng(search.seed.wrapping_add(k as u64)), n * d),
        })
        .collect();

    let results: Vec<(f64, Vec<C64>)> = starts
        .into_par_iter()
        .map(|s| {
            boyd_ascent(
                &space,
                |v| apply_blocks(t, v, d),
                |u| apply_blocks_adjoint(t, u, d),
                s,
                search.iterations,
            )
        })
        .collect();
    let (mut lower, witness) = results
        .into_iter()
        .fold((f64::NEG_INFINITY, Vec::new()), |acc, r| if r.0 > acc.0 { r } else { acc });
    if lower > upper && lower <= upper * (1.0 + 1e-12) {
        lower = upper;
    }
    Ok(TensorNorm {
        lower,
        upper,
        exact,
        witness,
        op_norm: sn.value,
        reg_norm: reg,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::op_norm_l2;
    use proptest::prelude::*;

    fn tau() -> MatrixOp {
        MatrixOp::from_real(2, 2, &[0.5, 0.5, 0.5, -0.5]).unwrap()
    }

    #[test]
    fn hilbertian_is_exact() {
        let mut r = sample::rng(4);
        for d in [1, 2, 3] {
            let t = sample::complex_matrix(&mut r, 4, 4);
            let op = op_norm_l2(&t).unwrap();
            for x in [NormSpec::euclidean(d), NormSpec::hilbertian(MatrixOp::identity(d)).unwrap()] {
                let b = tensor_op_norm(&t, &x).unwrap();
                assert!(b.exact);
                assert!((b.lower - op).abs() < 1e-9 && (b.upper - op).abs() < 1e-9, "{b:?}");
            }
        }
    }

    #[test]
    fn tau_on_l1_attains_one() {
        let x = NormSpec::lp_uniform(1.0, 2).unwrap();
        let b = tensor_op_norm(&tau(), &x).unwrap();
        assert!(b.lower >= 1.0 - 1e-6, "{b:?}");
        assert!(b.upper <= 1.0 + 1e-12);
    }

    #[test]
    fn non_square_rejected() {
        let t = MatrixOp::zeros(2, 3);
        assert!(tensor_op_norm(&t, &NormSpec::euclidean(2)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn bracket_and_sqrt_dim(seed in 0u64..10_000, kind in 0usize..4, d in 1usize..4) {
            let mut r = sample::rng(seed);
            let t = sample::complex_matrix(&mut r, 3, 3);
            let x = match kind {
                0 => NormSpec::lp_uniform(1.0, d).unwrap(),
                1 => NormSpec::lp_uniform(f64::INFINITY, d).unwrap(),
                2 => NormSpec::lp(3.0, (1..=d).map(|k| k as f64).collect()).unwrap(),
                _ => NormSpec::euclidean(d),
            };
            let search = TensorSearch { starts: 4, iterations: 100, seed };
            let b = tensor_op_norm_with(&t, &x, search).unwrap();
            let op = op_norm_l2(&t).unwrap();
            prop_assert!(b.lower <= b.upper * (1.0 + 1e-12));
            prop_assert!(b.upper <= (d as f64).sqrt() * op + 1e-12);
            prop_assert!(b.lower >= op * (1.0 - 1e-9));
        }
    }
}
