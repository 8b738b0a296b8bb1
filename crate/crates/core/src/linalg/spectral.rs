use serde::Serialize;

use super::{dot, herm_eig, norm2, normalize, MatrixOp, C64, ZERO};
use crate::error::{Error, Result};

const POWER_ITERS: usize = 300;
const LANCZOS_STEPS: usize = 64;
const LANCZOS_RESTARTS: usize = 40;
const DENSE_LIMIT: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Dense,
    Power,
    Lanczos,
}

/// Largest singular value with its singular vectors, `A v = σ u`.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralNorm {
    pub value: f64,
    #[serde(skip)]
    pub left: Vec<C64>,
    #[serde(skip)]
    pub right: Vec<C64>,
    pub iterations: usize,
    pub converged: bool,
    pub method: SpectralMethod,
}

/// `‖A: ℓ_2 → ℓ_2‖`.
pub fn op_norm_l2(a: &MatrixOp) -> Result<f64> {
    spectral_norm(a).map(|s| s.value)
}

/// Top eigenvector of `A*A` by Jacobi when `A` has at most 32 columns;
/// otherwise power iteration on `A*A`, falling back to restarted Lanczos
/// with full reorthogonalisation when the power method stalls.
pub fn spectral_norm(a: &MatrixOp) -> Result<SpectralNorm> {
    if a.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let n = a.cols();
    if a.max_abs() == 0.0 {
        let mut right = vec![ZERO; n];
        right[0] = C64::new(1.0, 0.0);
        let mut left = vec![ZERO; a.rows()];
        left[0] = C64::new(1.0, 0.0);
        return Ok(SpectralNorm {
            value: 0.0,
            left,
            right,
            iterations: 0,
            converged: true,
            method: SpectralMethod::Power,
        });
    }

    if n <= DENSE_LIMIT {
        let g = a.adjoint().matmul(a)?;
        let e = herm_eig(&g)?;
        let mut v = e.vector(n - 1);
        // one power step polishes the vector against Jacobi rounding
        let mut w = a.apply_adjoint(&a.apply(&v));
        if normalize(&mut w) > 0.0 {
            v = w;
        }
        return Ok(finish(a, v, e.sweeps, e.converged, SpectralMethod::Dense));
    }

    // start from the heaviest column plus a small deterministic complex spread
    let sums = a.col_abs_sums();
    let mut v: Vec<C64> = sums
        .iter()
        .enumerate()
        .map(|(j, &s)| {
            let t = (j as f64 * 0.618).fract();
            C64::new(s + 1e-3 * (1.0 + t), 1e-3 * (0.5 - t))
        })
        .collect();
    normalize(&mut v);

    let mut sigma = 0.0;
    for it in 1..=POWER_ITERS {
        let u = a.apply(&v);
        let s_new = norm2(&u);
        let mut w = a.apply_adjoint(&u);
        let wn = normalize(&mut w);
        if wn == 0.0 {
            break;
        }
        // residual of A*A v = λ v
        let lam = s_new * s_new;
        let res = w
            .iter()
            .zip(&v)
            .map(|(&x, &y)| (x * wn - y * lam).norm_sqr())
            .sum::<f64>()
            .sqrt();
        v = w;
        let done = res <= 1e-11 * lam || (s_new - sigma).abs() <= 1e-15 * s_new;
        sigma = s_new;
        if done {
            return Ok(finish(a, v, it, true, SpectralMethod::Power));
        }
    }
    lanczos(a, v)
}

fn finish(a: &MatrixOp, v: Vec<C64>, iterations: usize, converged: bool, method: SpectralMethod) -> SpectralNorm {
    let mut u = a.apply(&v);
    let value = normalize(&mut u);
    SpectralNorm {
        value,
        left: u,
        right: v,
        iterations,
        converged,
        method,
    }
}

fn lanczos(a: &MatrixOp, start: Vec<C64>) -> Result<SpectralNorm> {
    let n = a.cols();
    let k_max = LANCZOS_STEPS.min(n);
    let mut x = start;
    let mut total = 0;
    let mut prev = 0.0;
    for _restart in 0..LANCZOS_RESTARTS {
        let mut basis: Vec<Vec<C64>> = Vec::with_capacity(k_max);
        let mut alpha = Vec::with_capacity(k_max);
        let mut beta: Vec<f64> = Vec::with_capacity(k_max);
        let mut q = x.clone();
        normalize(&mut q);
        for _ in 0..k_max {
            total += 1;
            let mut w = a.apply_adjoint(&a.apply(&q));
            alpha.push(dot(&q, &w).re);
            basis.push(q.clone());
            // full reorthogonalisation, twice
            for _ in 0..2 {
                for b in &basis {
                    let c = dot(b, &w);
                    for (wi, &bi) in w.iter_mut().zip(b) {
                        *wi -= bi * c;
                    }
                }
            }
            let bn = normalize(&mut w);
            if bn <= 1e-14 * alpha[0].abs().max(1e-300) || basis.len() == n {
                break;
            }
            beta.push(bn);
            q = w;
        }
        let k = basis.len();
        let t = MatrixOp::from_fn(k, k, |i, j| {
            if i == j {
                C64::new(alpha[i], 0.0)
            } else if i + 1 == j {
                C64::new(beta[i], 0.0)
            } else if j + 1 == i {
                C64::new(beta[j], 0.0)
            } else {
                ZERO
            }
        });
        let e = herm_eig(&t)?;
        let y = e.vector(k - 1);
        let mut ritz = vec![ZERO; n];
        for (b, &c) in basis.iter().zip(&y) {
            for (r, &bi) in ritz.iter_mut().zip(b) {
                *r += bi * c;
            }
        }
        normalize(&mut ritz);
        let lam = e.values[k - 1];
        let w = a.apply_adjoint(&a.apply(&ritz));
        let res = w
            .iter()
            .zip(&ritz)
            .map(|(&p, &r)| (p - r * lam).norm_sqr())
            .sum::<f64>()
            .sqrt();
        x = ritz;
        if res <= 1e-11 * lam.abs() || k == n || (lam - prev).abs() <= 1e-15 * lam.abs() {
            return Ok(finish(a, x, total, true, SpectralMethod::Lanczos));
        }
        prev = lam;
    }
    Ok(finish(a, x, total, false, SpectralMethod::Lanczos))
}
