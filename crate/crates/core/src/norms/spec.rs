use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{herm_eig, phase, MatrixOp, C64, ZERO};

/// An exponent `p ∈ [1, ∞]`, stored as `θ = 1/p′ = 1 − 1/p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Exponent {
    theta: f64,
}

impl Exponent {
    pub const ONE: Exponent = Exponent { theta: 0.0 };
    pub const TWO: Exponent = Exponent { theta: 0.5 };
    pub const INF: Exponent = Exponent { theta: 1.0 };

    pub fn from_p(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidParameter(format!("exponent p = {p} must lie in [1, ∞]")));
        }
        Ok(Self {
            theta: if p.is_infinite() { 1.0 } else { 1.0 - 1.0 / p },
        })
    }

    /// From `1/p ∈ [0, 1]`.
    pub fn from_inv_p(inv_p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&inv_p) {
            return Err(Error::InvalidParameter(format!("1/p = {inv_p} must lie in [0, 1]")));
        }
        Ok(Self { theta: 1.0 - inv_p })
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn inv_p(self) -> f64 {
        1.0 - self.theta
    }

    /// `p` as a float; infinite for `p = ∞`.
    pub fn p(self) -> f64 {
        if self.theta == 1.0 {
            f64::INFINITY
        } else {
            1.0 / (1.0 - self.theta)
        }
    }

    pub fn conjugate(self) -> Self {
        Self {
            theta: 1.0 - self.theta,
        }
    }

    pub fn is_one(self) -> bool {
        self.theta == 0.0
    }

    pub fn is_inf(self) -> bool {
        self.theta == 1.0
    }

    /// `ℓ_p` norm of a nonnegative vector.
    pub fn norm(self, a: &[f64]) -> f64 {
        if self.theta == 0.0 {
            return a.iter().sum();
        }
        let m = a.iter().copied().fold(0.0, f64::max);
        if self.theta == 1.0 || m == 0.0 {
            return m;
        }
        if self.theta == 0.5 {
            return a.iter().map(|v| v * v).sum::<f64>().sqrt();
        }
        let p = self.p();
        m * a.iter().map(|&v| (v / m).powf(p)).sum::<f64>().powf(1.0 / p)
    }

    /// Nonnegative `c` with `‖c‖_{p′} = 1` and `Σ c_i a_i = ‖a‖_p`. For
    /// `p = ∞` the mass is shared evenly by the maximal entries.
    pub fn norming(self, a: &[f64]) -> Vec<f64> {
        if self.theta == 0.0 {
            return vec![1.0; a.len()];
        }
        let mut c = vec![0.0; a.len()];
        if self.theta == 1.0 {
            if let Some(k) = argmax(a) {
                let top = a[k];
                let ties: Vec<usize> = (0..a.len()).filter(|&i| a[i] >= top * (1.0 - 1e-12)).collect();
                for &i in &ties {
                    c[i] = 1.0 / ties.len() as f64;
                }
            }
            return c;
        }
        let n = self.norm(a);
        if n == 0.0 {
            return c;
        }
        let q = self.p() - 1.0;
        for (ci, &ai) in c.iter_mut().zip(a) {
            *ci = (ai / n).powf(q);
        }
        c
    }
}

fn argmax(a: &[f64]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &v) in a.iter().enumerate() {
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| i)
}

/// Hermitian positive-definite Gram matrix with its cached inverse.
#[derive(Clone, Debug, PartialEq)]
pub struct Psd {
    a: MatrixOp,
    inv: MatrixOp,
    lo: f64,
    hi: f64,
}

impl Psd {
    fn new(a: MatrixOp) -> Result<Self> {
        if !a.is_square() || a.is_empty() {
            return Err(Error::InvalidParameter("Hilbertian norm needs a non-empty square matrix".into()));
        }
        let e = herm_eig(&a)?;
        let lo = e.values[0];
        let hi = e.values[e.values.len() - 1];
        if !(lo > 1e-14 * hi.abs().max(f64::MIN_POSITIVE)) {
            return Err(Error::NotPositiveDefinite(lo));
        }
        let inv = e.reconstruct(|l| 1.0 / l);
        Ok(Self { a, inv, lo, hi })
    }

    pub fn matrix(&self) -> &MatrixOp {
        &self.a
    }

    pub fn inverse(&self) -> &MatrixOp {
        &self.inv
    }

    fn swapped(&self) -> Self {
        Self {
            a: self.inv.clone(),
            inv: self.a.clone(),
            lo: 1.0 / self.hi,
            hi: 1.0 / self.lo,
        }
    }
}

fn quad(m: &MatrixOp, x: &[C64]) -> f64 {
    let y = m.apply(x);
    x.iter()
        .zip(&y)
        .map(|(a, b)| (a.conj() * b).re)
        .sum::<f64>()
        .max(0.0)
}

/// A concrete norm on `C^dim`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub enum NormSpec {
    /// `‖x‖ = (Σ |w_i x_i|^p)^{1/p}`.
    WeightedLp { p: Exponent, w: Vec<f64> },
    /// `‖x‖ = (x* A x)^{1/2}`.
    HilbertianPsd(Psd),
    /// `ℓ_p^copies(inner)`, blocks laid out consecutively.
    Product {
        p: Exponent,
        copies: usize,
        inner: Box<NormSpec>,
    },
}

impl NormSpec {
    pub fn lp(p: f64, w: Vec<f64>) -> Result<Self> {
        let p = Exponent::from_p(p)?;
        Self::weighted(p, w)
    }

    pub fn weighted(p: Exponent, w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::InvalidParameter("norm dimension must be at least 1".into()));
        }
        if let Some(v) = w.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::InvalidParameter(format!("weights must be positive and finite, got {v}")));
        }
        Ok(Self::WeightedLp { p, w })
    }

    /// Unweighted `ℓ_p^d`.
    pub fn lp_uniform(p: f64, d: usize) -> Result<Self> {
        Self::lp(p, vec![1.0; d])
    }

    /// `ℓ_2^d`.
    pub fn euclidean(d: usize) -> Self {
        Self::WeightedLp {
            p: Exponent::TWO,
            w: vec![1.0; d.max(1)],
        }
    }

    pub fn hilbertian(a: MatrixOp) -> Result<Self> {
        Ok(Self::HilbertianPsd(Psd::new(a)?))
    }

    pub fn product(p: f64, copies: usize, inner: NormSpec) -> Result<Self> {
        if copies == 0 {
            return Err(Error::InvalidParameter("product norm needs at least one copy".into()));
        }
        Ok(Self::Product {
            p: Exponent::from_p(p)?,
            copies,
            inner: Box::new(inner),
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::WeightedLp { w, .. } => w.len(),
            Self::HilbertianPsd(h) => h.a.rows(),
            Self::Product { copies, inner, .. } => copies * inner.dim(),
        }
    }

    fn check_len(&self, x: &[C64]) {
        assert_eq!(x.len(), self.dim(), "vector length does not match norm dimension");
    }

    pub fn eval(&self, x: &[C64]) -> f64 {
        self.check_len(x);
        match self {
            Self::WeightedLp { p, w } => {
                let a: Vec<f64> = x.iter().zip(w).map(|(z, wi)| z.norm() * wi).collect();
                p.norm(&a)
            }
            Self::HilbertianPsd(h) => quad(&h.a, x).sqrt(),
            Self::Product { p, inner, .. } => {
                let a: Vec<f64> = x.chunks(inner.dim()).map(|b| inner.eval(b)).collect();
                p.norm(&a)
            }
        }
    }

    /// `sup_{‖x‖ ≤ 1} |⟨ξ, x⟩|`.
    pub fn dual_eval(&self, xi: &[C64]) -> f64 {
        self.check_len(xi);
        match self {
            Self::WeightedLp { p, w } => {
                let a: Vec<f64> = xi.iter().zip(w).map(|(z, wi)| z.norm() / wi).collect();
                p.conjugate().norm(&a)
            }
            Self::HilbertianPsd(h) => quad(&h.inv, xi).sqrt(),
            Self::Product { p, inner, .. } => {
                let a: Vec<f64> = xi.chunks(inner.dim()).map(|b| inner.dual_eval(b)).collect();
                p.conjugate().norm(&a)
            }
        }
    }

    /// `ξ` with `‖ξ‖_* = 1` and `⟨ξ, x⟩ = ‖x‖` (zero for `x = 0`).
    pub fn norming(&self, x: &[C64]) -> Vec<C64> {
        self.check_len(x);
        match self {
            Self::WeightedLp { p, w } => {
                let a: Vec<f64> = x.iter().zip(w).map(|(z, wi)| z.norm() * wi).collect();
                if a.iter().all(|&v| v == 0.0) {
                    return vec![ZERO; x.len()];
                }
                let c = p.norming(&a);
                x.iter()
                    .zip(w)
                    .zip(&c)
                    .map(|((&z, &wi), &ci)| phase(z) * (ci * wi))
                    .collect()
            }
            Self::HilbertianPsd(h) => {
                let n = quad(&h.a, x).sqrt();
                if n == 0.0 {
                    return vec![ZERO; x.len()];
                }
                h.a.apply(x).into_iter().map(|z| z / n).collect()
            }
            Self::Product { p, inner, .. } => {
                let d = inner.dim();
                let a: Vec<f64> = x.chunks(d).map(|b| inner.eval(b)).collect();
                if a.iter().all(|&v| v == 0.0) {
                    return vec![ZERO; x.len()];
                }
                let c = p.norming(&a);
                x.chunks(d)
                    .zip(&c)
                    .flat_map(|(b, &ci)| inner.norming(b).into_iter().map(move |z| z * ci))
                    .collect()
            }
        }
    }

    /// `x` with `‖x‖ = 1` and `⟨ξ, x⟩ = ‖ξ‖_*` (zero for `ξ = 0`).
    pub fn dual_norming(&self, xi: &[C64]) -> Vec<C64> {
        self.check_len(xi);
        match self {
            Self::WeightedLp { p, w } => {
                let a: Vec<f64> = xi.iter().zip(w).map(|(z, wi)| z.norm() / wi).collect();
                if a.iter().all(|&v| v == 0.0) {
                    return vec![ZERO; xi.len()];
                }
                let c = p.conjugate().norming(&a);
                xi.iter()
                    .zip(w)
                    .zip(&c)
                    .map(|((&z, &wi), &ci)| phase(z) * (ci / wi))
                    .collect()
            }
            Self::HilbertianPsd(h) => {
                let n = quad(&h.inv, xi).sqrt();
                if n == 0.0 {
                    return vec![ZERO; xi.len()];
                }
                h.inv.apply(xi).into_iter().map(|z| z / n).collect()
            }
            Self::Product { p, inner, .. } => {
                let d = inner.dim();
                let a: Vec<f64> = xi.chunks(d).map(|b| inner.dual_eval(b)).collect();
                if a.iter().all(|&v| v == 0.0) {
                    return vec![ZERO; xi.len()];
                }
                let c = p.conjugate().norming(&a);
                xi.chunks(d)
                    .zip(&c)
                    .flat_map(|(b, &ci)| inner.dual_norming(b).into_iter().map(move |z| z * ci))
                    .collect()
            }
        }
    }

    /// The dual norm under the sesquilinear pairing.
    pub fn dual_spec(&self) -> NormSpec {
        match self {
            Self::WeightedLp { p, w } => Self::WeightedLp {
                p: p.conjugate(),
                w: w.iter().map(|v| 1.0 / v).collect(),
            },
            Self::HilbertianPsd(h) => Self::HilbertianPsd(h.swapped()),
            Self::Product { p, copies, inner } => Self::Product {
                p: p.conjugate(),
                copies: *copies,
                inner: Box::new(inner.dual_spec()),
            },
        }
    }

    /// The dual norm under the bilinear pairing `Σ φ_i x_i`.
    pub fn bilinear_dual_spec(&self) -> NormSpec {
        match self {
            Self::HilbertianPsd(h) => {
                let s = h.swapped();
                Self::HilbertianPsd(Psd {
                    a: s.a.conj(),
                    inv: s.inv.conj(),
                    ..s
                })
            }
            Self::Product { p, copies, inner } => Self::Product {
                p: p.conjugate(),
                copies: *copies,
                inner: Box::new(inner.bilinear_dual_spec()),
            },
            other => other.dual_spec(),
        }
    }

    /// `x ↦ c‖x‖` for `c > 0`.
    pub fn scaled(&self, c: f64) -> NormSpec {
        match self {
            Self::WeightedLp { p, w } => Self::WeightedLp {
                p: *p,
                w: w.iter().map(|v| v * c).collect(),
            },
            Self::HilbertianPsd(h) => Self::HilbertianPsd(Psd {
                a: h.a.scale(c * c),
                inv: h.inv.scale(1.0 / (c * c)),
                lo: h.lo * c * c,
                hi: h.hi * c * c,
            }),
            Self::Product { p, copies, inner } => Self::Product {
                p: *p,
                copies: *copies,
                inner: Box::new(inner.scaled(c)),
            },
        }
    }

    /// Whether the norm comes from an inner product.
    pub fn is_hilbertian(&self) -> bool {
        match self {
            Self::WeightedLp { p, w } => *p == Exponent::TWO || w.len() == 1,
            Self::HilbertianPsd(_) => true,
            Self::Product { p, copies, inner } => {
                inner.is_hilbertian() && (*p == Exponent::TWO || *copies == 1)
            }
        }
    }

    /// Whether the unit ball is invariant under coordinatewise rotations.
    pub fn is_diagonal(&self) -> bool {
        match self {
            Self::WeightedLp { .. } => true,
            Self::HilbertianPsd(h) => {
                let n = h.a.rows();
                (0..n).all(|i| (0..n).all(|j| i == j || h.a.get(i, j) == ZERO))
            }
            Self::Product { .. } => false,
        }
    }

    /// `(k1, k2)` with `k1‖x‖_2 ≤ ‖x‖ ≤ k2‖x‖_2`.
    pub fn euclidean_bounds(&self) -> (f64, f64) {
        match self {
            Self::WeightedLp { p, w } => {
                let (lo, hi) = lp_vs_l2(*p, w.len());
                let wmin = w.iter().copied().fold(f64::INFINITY, f64::min);
                let wmax = w.iter().copied().fold(0.0, f64::max);
                (lo * wmin, hi * wmax)
            }
            Self::HilbertianPsd(h) => (h.lo.sqrt(), h.hi.sqrt()),
            Self::Product { p, copies, inner } => {
                let (lo, hi) = lp_vs_l2(*p, *copies);
                let (k1, k2) = inner.euclidean_bounds();
                (lo * k1, hi * k2)
            }
        }
    }
}

/// Best constants in `lo‖y‖_2 ≤ ‖y‖_p ≤ hi‖y‖_2` on `C^d`.
fn lp_vs_l2(p: Exponent, d: usize) -> (f64, f64) {
    let f = (d as f64).powf(p.inv_p() - 0.5);
    if p.inv_p() >= 0.5 {
        (1.0, f)
    } else {
        (f, 1.0)
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum PJson {
    Num(f64),
    Text(String),
}

impl TryFrom<PJson> for Exponent {
    type Error = Error;

    fn try_from(p: PJson) -> Result<Self> {
        match p {
            PJson::Num(v) => Exponent::from_p(v),
            PJson::Text(s) => match s.trim().to_ascii_lowercase().as_str() {
                "inf" | "infinity" | "∞" => Ok(Exponent::INF),
                other => other
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidParameter(format!("unrecognised exponent {s:?}")))
                    .and_then(Exponent::from_p),
            },
        }
    }
}

impl From<Exponent> for PJson {
    fn from(p: Exponent) -> Self {
        if p.is_inf() {
            return PJson::Text("inf".into());
        }
        let v = p.p();
        let r = v.round();
        PJson::Num(if (v - r).abs() <= 1e-9 * v { r } else { v })
    }
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SpecJson {
    Lp {
        p: PJson,
        w: Vec<f64>,
    },
    Psd {
        a: MatrixOp,
    },
    Product {
        p: PJson,
        copies: usize,
        inner: Box<NormSpec>,
    },
}

impl TryFrom<SpecJson> for NormSpec {
    type Error = Error;

    fn try_from(j: SpecJson) -> Result<Self> {
        match j {
            SpecJson::Lp { p, w } => NormSpec::weighted(p.try_into()?, w),
            SpecJson::Psd { a } => NormSpec::hilbertian(a),
            SpecJson::Product { p, copies, inner } => {
                if copies == 0 {
                    return Err(Error::InvalidParameter("product norm needs at least one copy".into()));
                }
                Ok(NormSpec::Product {
                    p: p.try_into()?,
                    copies,
                    inner,
                })
            }
        }
    }
}

impl From<NormSpec> for SpecJson {
    fn from(n: NormSpec) -> Self {
        match n {
            NormSpec::WeightedLp { p, w } => SpecJson::Lp { p: p.into(), w },
            NormSpec::HilbertianPsd(h) => SpecJson::Psd { a: h.a },
            NormSpec::Product { p, copies, inner } => SpecJson::Product {
                p: p.into(),
                copies,
                inner,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, real_vec};
    use crate::sample;
    use proptest::prelude::*;

    fn specs() -> Vec<NormSpec> {
        let psd = MatrixOp::new(
            3,
            3,
            vec![
                C64::new(2.0, 0.0),
                C64::new(0.5, 0.5),
                C64::new(0.0, 0.0),
                C64::new(0.5, -0.5),
                C64::new(1.5, 0.0),
                C64::new(0.2, 0.1),
                C64::new(0.0, 0.0),
                C64::new(0.2, -0.1),
                C64::new(1.0, 0.0),
            ],
        )
        .unwrap();
        vec![
            NormSpec::lp(1.0, vec![1.0, 2.0, 0.5]).unwrap(),
            NormSpec::lp(f64::INFINITY, vec![1.0, 3.0, 0.25]).unwrap(),
            NormSpec::lp(3.0, vec![0.7, 1.1, 2.0]).unwrap(),
            NormSpec::lp(1.5, vec![1.0, 1.0, 1.0]).unwrap(),
            NormSpec::hilbertian(psd).unwrap(),
            NormSpec::product(1.0, 3, NormSpec::lp(2.0, vec![1.0]).unwrap()).unwrap(),
        ]
    }

    #[test]
    fn closed_form_values() {
        let x = real_vec(&[3.0, -4.0]);
        assert_eq!(NormSpec::lp_uniform(1.0, 2).unwrap().eval(&x), 7.0);
        assert_eq!(NormSpec::lp_uniform(f64::INFINITY, 2).unwrap().eval(&x), 4.0);
        assert!((NormSpec::euclidean(2).eval(&x) - 5.0).abs() < 1e-15);
        let w = NormSpec::lp(2.0, vec![1.0, 0.5]).unwrap();
        assert!((w.eval(&x) - 13f64.sqrt()).abs() < 1e-15);
        let h = NormSpec::hilbertian(MatrixOp::diag_real(&[1.0, 4.0])).unwrap();
        assert!((h.eval(&x) - 73f64.sqrt()).abs() < 1e-12);
        let prod = NormSpec::product(f64::INFINITY, 2, NormSpec::lp_uniform(1.0, 1).unwrap()).unwrap();
        assert_eq!(prod.eval(&x), 4.0);
    }

    #[test]
    fn dual_matches_closed_form() {
        let xi = real_vec(&[1.0, -2.0, 0.5]);
        let l1 = NormSpec::lp(1.0, vec![1.0, 2.0, 0.5]).unwrap();
        // ℓ_∞ with reciprocal weights
        assert!((l1.dual_eval(&xi) - 1.0).abs() < 1e-15);
        let h = NormSpec::hilbertian(MatrixOp::diag_real(&[1.0, 4.0, 0.25])).unwrap();
        assert!((h.dual_eval(&xi) - (1.0f64 + 1.0 + 1.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn norming_functionals_attain() {
        let mut r = sample::rng(3);
        for spec in specs() {
            for _ in 0..20 {
                let x = sample::complex_vector(&mut r, spec.dim());
                let xi = spec.norming(&x);
                assert!((spec.dual_eval(&xi) - 1.0).abs() < 1e-10, "{spec:?}");
                let pair = dot(&xi, &x);
                assert!((pair.re - spec.eval(&x)).abs() < 1e-10 && pair.im.abs() < 1e-10);
                let v = spec.dual_norming(&x);
                assert!((spec.eval(&v) - 1.0).abs() < 1e-10);
                let pair = dot(&x, &v);
                assert!((pair.re - spec.dual_eval(&x)).abs() < 1e-10 && pair.im.abs() < 1e-10);
                assert!((spec.dual_spec().eval(&x) - spec.dual_eval(&x)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bilinear_dual_conjugates_psd() {
        let h = NormSpec::hilbertian(
            MatrixOp::new(2, 2, vec![C64::new(2.0, 0.0), C64::new(0.0, 1.0), C64::new(0.0, -1.0), C64::new(2.0, 0.0)])
                .unwrap(),
        )
        .unwrap();
        let phi = vec![C64::new(1.0, 0.5), C64::new(-0.3, 2.0)];
        let conj: Vec<C64> = phi.iter().map(|z| z.conj()).collect();
        assert!((h.bilinear_dual_spec().eval(&phi) - h.dual_eval(&conj)).abs() < 1e-12);
    }

    #[test]
    fn euclidean_bounds_hold() {
        let mut r = sample::rng(8);
        for spec in specs() {
            let (k1, k2) = spec.euclidean_bounds();
            for _ in 0..50 {
                let x = sample::complex_vector(&mut r, spec.dim());
                let n2 = crate::linalg::norm2(&x);
                let v = spec.eval(&x);
                assert!(k1 * n2 <= v * (1.0 + 1e-12) && v <= k2 * n2 * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn json_forms() {
        let s: NormSpec = serde_json::from_str(r#"{"kind":"lp","p":"inf","w":[1,2]}"#).unwrap();
        assert_eq!(s, NormSpec::lp(f64::INFINITY, vec![1.0, 2.0]).unwrap());
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"lp","p":"inf","w":[1.0,2.0]}"#);
        let s: NormSpec = serde_json::from_str(r#"{"kind":"lp","p":3,"w":[1]}"#).unwrap();
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"kind":"lp","p":3.0,"w":[1.0]}"#);
        let s: NormSpec = serde_json::from_str(
            r#"{"kind":"product","p":2,"copies":2,"inner":{"kind":"psd","a":{"rows":1,"cols":1,"re":[4]}}}"#,
        )
        .unwrap();
        assert_eq!(s.dim(), 2);
        assert!((s.eval(&real_vec(&[1.0, 1.0])) - 8f64.sqrt()).abs() < 1e-12);
        assert!(serde_json::from_str::<NormSpec>(r#"{"kind":"lp","p":0.5,"w":[1]}"#).is_err());
        assert!(serde_json::from_str::<NormSpec>(r#"{"kind":"lp","p":2,"w":[0]}"#).is_err());
        assert!(serde_json::from_str::<NormSpec>(
            r#"{"kind":"psd","a":{"rows":2,"cols":2,"re":[1,0,0,-1]}}"#
        )
        .is_err());
    }

    proptest! {
        #[test]
        fn norm_axioms(idx in 0usize..6, seed in 0u64..1000, c in -3.0f64..3.0, ph in 0.0f64..6.3) {
            let spec = &specs()[idx];
            let mut r = sample::rng(seed);
            let x = sample::complex_vector(&mut r, spec.dim());
            let y = sample::complex_vector(&mut r, spec.dim());
            let s = C64::from_polar(c.abs(), ph);
            let sx: Vec<C64> = x.iter().map(|z| z * s).collect();
            prop_assert!((spec.eval(&sx) - c.abs() * spec.eval(&x)).abs() <= 1e-12 * (1.0 + spec.eval(&x)));
            let xy: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            prop_assert!(spec.eval(&xy) <= spec.eval(&x) + spec.eval(&y) + 1e-12);
            let d = spec.dual_eval(&y);
            prop_assert!(dot(&y, &x).norm() <= d * spec.eval(&x) * (1.0 + 1e-12) + 1e-14);
        }
    }
}
