use super::{MatrixOp, C64, ZERO};
use crate::error::{Error, Result};

/// Thin singular value decomposition `A = U diag(s) V*`.
#[derive(Clone, Debug)]
pub struct Svd {
    /// `rows × k` with orthonormal columns (zero columns for zero singular values).
    pub u: MatrixOp,
    /// Singular values, descending.
    pub s: Vec<f64>,
    /// `cols × k`.
    pub v: MatrixOp,
}

impl Svd {
    pub fn trace_norm(&self) -> f64 {
        self.s.iter().sum()
    }
}

/// One-sided (Hestenes) Jacobi SVD, `k = min(rows, cols)`.
pub fn svd(a: &MatrixOp) -> Result<Svd> {
    if a.is_empty() {
        return Err(Error::EmptyOperator);
    }
    if a.rows() < a.cols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            s: t.s,
            v: t.u,
        });
    }
    let (m, n) = (a.rows(), a.cols());
    // columns of A stored contiguously
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<C64>> = (0..n)
        .map(|j| {
            let mut e = vec![ZERO; n];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();

    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma = cols[p]
                    .iter()
                    .zip(&cols[q])
                    .fold(ZERO, |acc, (&x, &y)| acc + x.conj() * y);
                let g = gamma.norm();
                if g == 0.0 || g <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph = gamma / g;
                let sp = ph * s;
                let spc = ph.conj() * s;
                rot_pair(&mut cols, p, q, c, sp, spc);
                rot_pair(&mut v, p, q, c, sp, spc);
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<(f64, usize)> = cols
        .iter()
        .enumerate()
        .map(|(j, c)| (c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(), j))
        .collect();
    sv.sort_by(|a, b| b.0.total_cmp(&a.0));
    let smax = sv.first().map(|x| x.0).unwrap_or(0.0);
    let mut u = MatrixOp::zeros(m, n);
    let mut vm = MatrixOp::zeros(n, n);
    let mut s = Vec::with_capacity(n);
    for (k, &(sigma, j)) in sv.iter().enumerate() {
        s.push(sigma);
        if sigma > 1e-300 && sigma > smax * 1e-300 {
            for i in 0..m {
                u.set(i, k, cols[j][i] / sigma);
            }
        }
        for i in 0..n {
            vm.set(i, k, v[j][i]);
        }
    }
    Ok(Svd { u, s, v: vm })
}

fn rot_pair(cols: &mut [Vec<C64>], p: usize, q: usize, c: f64, sp: C64, spc: C64) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp = &mut lo[p];
    let cq = &mut hi[0];
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * c - spc * b;
        *y = sp * a + b * c;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(d: &Svd) -> MatrixOp {
        let (m, n, k) = (d.u.rows(), d.v.rows(), d.s.len());
        MatrixOp::from_fn(m, n, |i, j| {
            (0..k).fold(ZERO, |acc, l| acc + d.u.get(i, l) * d.s[l] * d.v.get(j, l).conj())
        })
    }

    #[test]
    fn tau_singular_values() {
        let tau = MatrixOp::from_real(2, 2, &[0.5, 0.5, 0.5, -0.5]).unwrap();
        let d = svd(&tau).unwrap();
        let r = 0.5f64.sqrt();
        assert!((d.s[0] - r).abs() < 1e-15 && (d.s[1] - r).abs() < 1e-15);
    }

    #[test]
    fn rectangular_complex_reconstruction() {
        let a = MatrixOp::from_fn(3, 5, |i, j| {
            C64::new((i * 7 + j * 3) as f64 % 5.0 - 2.0, (i + 2 * j) as f64 % 3.0 - 1.0)
        });
        for m in [a.clone(), a.adjoint()] {
            let d = svd(&m).unwrap();
            assert!(reconstruct(&d).sub(&m).unwrap().frobenius() < 1e-12);
            assert!(d.s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn rank_deficient() {
        let a = MatrixOp::from_real(3, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0, 0.0, 0.0, 0.0]).unwrap();
        let d = svd(&a).unwrap();
        assert!((d.s[0] - 70f64.sqrt()).abs() < 1e-12);
        assert!(d.s[1] < 1e-12 && d.s[2] < 1e-12);
        assert!(reconstruct(&d).sub(&a).unwrap().frobenius() < 1e-12);
    }
}
