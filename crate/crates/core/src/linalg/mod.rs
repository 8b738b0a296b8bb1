//! Dense complex linear algebra.
//!
//! Everything downstream works with [`MatrixOp`], a row-major dense matrix of
//! `Complex64` entries. The solvers here are written for desk-scale problems
//! (up to roughly 1024 × 1024) and have no external numeric dependencies.

mod eig;
mod spectral;
mod svd;

pub use eig::{herm_eig, HermEig};
pub use spectral::{op_norm_l2, spectral_norm, SpectralMethod, SpectralNorm};
pub use svd::{svd, Svd};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Dense `rows × cols` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOp {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl MatrixOp {
    /// Builds a matrix, checking the entry count and finiteness.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                got: data.len(),
            });
        }
        if let Some(i) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { ONE } else { ZERO })
    }

    pub fn diag_real(d: &[f64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { C64::new(d[i], 0.0) } else { ZERO })
    }

    pub fn diag(d: &[C64]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<C64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Entrywise modulus `[|t_ij|]`.
    pub fn modulus(&self) -> Self {
        self.map(|z| C64::new(z.norm(), 0.0))
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: C64) -> Self {
        self.map(|z| z * s)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                context: "elementwise operands",
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                context: "matrix product",
                expected: self.cols,
                got: other.rows,
            });
        }
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let orow = &mut out[i * m..(i + 1) * m];
            for l in 0..k {
                let a = self.data[i * k + l];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[l * m..(l + 1) * m];
                for (o, &b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out,
        })
    }

    /// `y = A x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.cols, "apply: vector length");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `y = A* x`.
    pub fn apply_adjoint(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.rows, "apply_adjoint: vector length");
        let mut y = vec![ZERO; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            if xi == ZERO {
                continue;
            }
            for (yj, &a) in y.iter_mut().zip(self.row(i)) {
                *yj += a.conj() * xi;
            }
        }
        y
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1, r2, c2) = (self.rows, self.cols, other.rows, other.cols);
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self.get(i / r2, j / c2) * other.get(i % r2, j % c2)
        })
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest `|a_ij - conj(a_ji)|`; infinite for non-square input.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    pub fn row_abs_sums(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|z| z.norm()).sum())
            .collect()
    }

    pub fn col_abs_sums(&self) -> Vec<f64> {
        let mut s = vec![0.0; self.cols];
        for i in 0..self.rows {
            for (sj, z) in s.iter_mut().zip(self.row(i)) {
                *sj += z.norm();
            }
        }
        s
    }

    fn non_empty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyOperator)
        } else {
            Ok(())
        }
    }
}

/// `‖T: ℓ_1 → ℓ_1‖`, the largest absolute column sum.
pub fn op_norm_l1(t: &MatrixOp) -> Result<f64> {
    t.non_empty()?;
    Ok(t.col_abs_sums().into_iter().fold(0.0, f64::max))
}

/// `‖T: ℓ_∞ → ℓ_∞‖`, the largest absolute row sum.
pub fn op_norm_linf(t: &MatrixOp) -> Result<f64> {
    t.non_empty()?;
    Ok(t.row_abs_sums().into_iter().fold(0.0, f64::max))
}

pub fn norm2(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Sesquilinear pairing `Σ conj(a_i) b_i`.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).fold(ZERO, |acc, (&x, &y)| acc + x.conj() * y)
}

/// Bilinear pairing `Σ a_i b_i`.
pub fn bilinear(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).fold(ZERO, |acc, (&x, &y)| acc + x * y)
}

pub fn normalize(x: &mut [C64]) -> f64 {
    let n = norm2(x);
    if n > 0.0 {
        for z in x.iter_mut() {
            *z /= n;
        }
    }
    n
}

pub fn real_vec(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}

/// Unit-modulus phase of `z`, zero for `z = 0`.
#[inline]
pub fn phase(z: C64) -> C64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        ZERO
    }
}

/// Solves `A x = b` for a real symmetric positive-definite `n × n` matrix
/// stored row-major. Returns `None` if the factorization breaks down.
pub fn cholesky_solve(a: &[f64], n: usize, b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s = a[i * n + j] - (0..j).map(|k| l[i * n + k] * l[j * n + k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        y[i] = (b[i] - (0..i).map(|k| l[i * n + k] * y[k]).sum::<f64>()) / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        x[i] = (y[i] - (i + 1..n).map(|k| l[k * n + i] * x[k]).sum::<f64>()) / l[i * n + i];
    }
    Some(x)
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    re: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    im: Option<Vec<f64>>,
}

impl Serialize for MatrixOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let im = if self.is_real() {
            None
        } else {
            Some(self.data.iter().map(|z| z.im).collect())
        };
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            re: self.data.iter().map(|z| z.re).collect(),
            im,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MatrixOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = MatrixJson::deserialize(d)?;
        let n = m.rows * m.cols;
        if m.re.len() != n {
            return Err(D::Error::custom(format!(
                "\"re\" has {} entries, expected rows*cols = {n}",
                m.re.len()
            )));
        }
        let data = match m.im {
            Some(im) => {
                if im.len() != n {
                    return Err(D::Error::custom(format!(
                        "\"im\" has {} entries, expected rows*cols = {n}",
                        im.len()
                    )));
                }
                m.re.iter().zip(&im).map(|(&a, &b)| C64::new(a, b)).collect()
            }
            None => real_vec(&m.re),
        };
        MatrixOp::new(m.rows, m.cols, data).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes_and_nan() {
        assert!(MatrixOp::from_real(2, 2, &[1.0, 2.0, 3.0]).is_err());
        assert!(matches!(
            MatrixOp::from_real(1, 2, &[1.0, f64::NAN]),
            Err(Error::NonFinite(1))
        ));
    }

    #[test]
    fn l1_linf_norms() {
        let id = MatrixOp::identity(3);
        assert_eq!(op_norm_l1(&id).unwrap(), 1.0);
        assert_eq!(op_norm_linf(&id).unwrap(), 1.0);
        let ones = MatrixOp::from_real(2, 2, &[1.0; 4]).unwrap();
        assert_eq!(op_norm_l1(&ones).unwrap(), 2.0);
        assert_eq!(op_norm_linf(&ones).unwrap(), 2.0);
        let tau = MatrixOp::from_real(2, 2, &[0.5, 0.5, 0.5, -0.5]).unwrap();
        assert_eq!(op_norm_l1(&tau).unwrap(), 1.0);
        assert_eq!(op_norm_linf(&tau).unwrap(), 1.0);
        assert!(matches!(
            op_norm_l1(&MatrixOp::zeros(0, 3)),
            Err(Error::EmptyOperator)
        ));
    }

    #[test]
    fn cholesky_small_system() {
        let a = [4.0, 2.0, 2.0, 3.0];
        let x = cholesky_solve(&a, 2, &[2.0, 1.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-15 && x[1].abs() < 1e-15);
        assert!(cholesky_solve(&[1.0, 2.0, 2.0, 1.0], 2, &[1.0, 1.0]).is_none());
    }

    #[test]
    fn kron_shape_and_entries() {
        let a = MatrixOp::from_real(2, 1, &[1.0, 2.0]).unwrap();
        let b = MatrixOp::from_real(1, 2, &[3.0, 4.0]).unwrap();
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.get(1, 1), C64::new(8.0, 0.0));
    }

    #[test]
    fn json_roundtrip_and_real_default() {
        let m: MatrixOp =
            serde_json::from_str(r#"{"rows":1,"cols":2,"re":[1,2]}"#).unwrap();
        assert_eq!(m.get(0, 1), C64::new(2.0, 0.0));
        let z = MatrixOp::new(1, 1, vec![C64::new(1.0, -2.0)]).unwrap();
        let s = serde_json::to_string(&z).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":1,"re":[1.0],"im":[-2.0]}"#);
        let back: MatrixOp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<MatrixOp>(r#"{"rows":2,"cols":2,"re":[1]}"#).is_err());
    }
}
