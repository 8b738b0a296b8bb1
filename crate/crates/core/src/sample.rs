//! Seeded random draws shared by the search routines, tests and examples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{MatrixOp, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_normal(rng: &mut impl Rng) -> C64 {
    let a: f64 = rng.sample(StandardNormal);
    let b: f64 = rng.sample(StandardNormal);
    C64::new(a, b) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn complex_vector(rng: &mut impl Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_normal(rng)).collect()
}

pub fn complex_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> MatrixOp {
    MatrixOp::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> MatrixOp {
    MatrixOp::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

/// Haar-distributed unitary via Gram–Schmidt on a Gaussian matrix.
pub fn unitary(rng: &mut impl Rng, n: usize) -> MatrixOp {
    let g = complex_matrix(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.column(j);
        for _ in 0..2 {
            for q in &cols {
                let c = crate::linalg::dot(q, &v);
                for (vi, &qi) in v.iter_mut().zip(q) {
                    *vi -= qi * c;
                }
            }
        }
        crate::linalg::normalize(&mut v);
        cols.push(v);
    }
    MatrixOp::from_fn(n, n, |i, j| cols[j][i])
}
