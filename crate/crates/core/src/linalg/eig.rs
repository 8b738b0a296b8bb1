use super::{MatrixOp, C64, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct HermEig {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, ordered like `values`.
    pub vectors: MatrixOp,
    pub sweeps: usize,
    pub converged: bool,
}

impl HermEig {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Rebuilds `V f(Λ) V*`.
    pub fn reconstruct(&self, f: impl Fn(f64) -> f64) -> MatrixOp {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        MatrixOp::from_fn(n, n, |i, j| {
            (0..n).fold(ZERO, |acc, k| {
                acc + self.vectors.get(i, k) * fv[k] * self.vectors.get(j, k).conj()
            })
        })
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Requires `A` Hermitian to within `1e-12 · max(1, max|a_ij|)`.
pub fn herm_eig(a: &MatrixOp) -> Result<HermEig> {
    if a.is_empty() {
        return Err(Error::EmptyOperator);
    }
    let defect = a.hermitian_defect();
    if defect > 1e-12 * a.max_abs().max(1.0) {
        return Err(Error::NotHermitian(defect));
    }
    let n = a.rows();
    // symmetrize so rounding in the input cannot drive the iteration
    let mut m = MatrixOp::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(a.get(i, i).re, 0.0)
        } else {
            (a.get(i, j) + a.get(j, i).conj()) * 0.5
        }
    });
    let mut v = MatrixOp::identity(n);
    let total = m.frobenius();
    let mut sweeps = 0;
    let mut converged = n == 1 || total == 0.0;

    while !converged && sweeps < MAX_SWEEPS {
        sweeps += 1;
        let off = off_diagonal_norm(&m);
        if off <= 1e-15 * total {
            converged = true;
            break;
        }
        // skip tiny pivots during the first sweeps
        let thresh = if sweeps < 4 {
            0.2 * off / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m.get(p, q);
                let mag = apq.norm();
                if mag == 0.0 || mag < thresh {
                    continue;
                }
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let zeta = (aqq - app) / (2.0 * mag);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph = apq / mag;
                rotate(&mut m, &mut v, p, q, c, s, ph);
                m.set(p, p, C64::new(app - t * mag, 0.0));
                m.set(q, q, C64::new(aqq + t * mag, 0.0));
                m.set(p, q, ZERO);
                m.set(q, p, ZERO);
            }
        }
    }
    if !converged {
        converged = off_diagonal_norm(&m) <= 1e-13 * total;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(i, i).re.total_cmp(&m.get(j, j).re));
    let values = order.iter().map(|&k| m.get(k, k).re).collect();
    let vectors = MatrixOp::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok(HermEig {
        values,
        vectors,
        sweeps,
        converged,
    })
}

fn off_diagonal_norm(m: &MatrixOp) -> f64 {
    let n = m.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Applies `A ← J* A J`, `V ← V J` with
/// `J_pp = J_qq = c`, `J_pq = s·ph`, `J_qp = −s·conj(ph)`.
fn rotate(m: &mut MatrixOp, v: &mut MatrixOp, p: usize, q: usize, c: f64, s: f64, ph: C64) {
    let n = m.rows();
    let sp = ph * s;
    let spc = ph.conj() * s;
    // columns
    for k in 0..n {
        let akp = m.get(k, p);
        let akq = m.get(k, q);
        m.set(k, p, akp * c - spc * akq);
        m.set(k, q, sp * akp + akq * c);
    }
    // rows
    for k in 0..n {
        let apk = m.get(p, k);
        let aqk = m.get(q, k);
        m.set(p, k, apk * c - sp * aqk);
        m.set(q, k, spc * apk + aqk * c);
    }
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, vkp * c - spc * vkq);
        v.set(k, q, sp * vkp + vkq * c);
    }
}
