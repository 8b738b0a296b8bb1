//! Machine-readable run reports: outputs, named assertions and an input digest.

use serde::Serialize;
use sha2::{Digest, Sha256};

/// A named pass/fail claim with its margin to the threshold.
#[derive(Clone, Debug, Serialize)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    /// Distance to the threshold, nonnegative exactly when the claim holds.
    pub margin: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Assertion {
    pub fn new(name: impl Into<String>, margin: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed: margin >= 0.0,
            margin,
            tolerance,
            detail: detail.into(),
        }
    }

    /// `|value − target| ≤ tol`.
    pub fn close(name: impl Into<String>, value: f64, target: f64, tol: f64) -> Self {
        Self::new(name, tol - (value - target).abs(), tol, format!("{value:.12} vs {target:.12}"))
    }

    /// `value ≤ bound + tol`.
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64, tol: f64) -> Self {
        Self::new(name, bound + tol - value, tol, format!("{value:.12} ≤ {bound:.12}"))
    }

    pub fn flag(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(name, if ok { 0.0 } else { -1.0 }, 0.0, detail)
    }

    pub fn error(name: impl Into<String>, e: crate::error::Error) -> Self {
        Self::flag(name, false, e.to_string())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    /// SHA-256 of the arguments and every input document, hex encoded.
    pub inputs_digest: String,
    pub outputs: serde_json::Value,
    pub verification: Vec<Assertion>,
    /// True exactly when every assertion passed.
    pub verified: bool,
    pub timing: Timing,
}

impl RunReport {
    pub fn new(command: Vec<String>, inputs_digest: String, outputs: serde_json::Value, verification: Vec<Assertion>, seconds: f64) -> Self {
        Self {
            command,
            inputs_digest,
            outputs,
            verified: verification.iter().all(|a| a.passed),
            verification,
            timing: Timing { seconds },
        }
    }
}

/// Hashes each argument and then each `(name, bytes)` input, all
/// NUL-terminated, so that reordering or moving bytes changes the digest.
pub fn input_digest(args: &[String], inputs: &[(String, Vec<u8>)]) -> String {
    let mut h = Sha256::new();
    for a in args {
        h.update(a.as_bytes());
        h.update([0]);
    }
    for (name, bytes) in inputs {
        h.update(name.as_bytes());
        h.update([0]);
        h.update(bytes);
        h.update([0]);
    }
    hex::encode(h.finalize())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_sensitive() {
        let a = vec!["norm".to_string()];
        let d = input_digest(&a, &[("m".into(), b"{}".to_vec())]);
        assert_eq!(d.len(), 64);
        assert_eq!(d, input_digest(&a, &[("m".into(), b"{}".to_vec())]));
        assert_ne!(d, input_digest(&a, &[("m".into(), b"{ }".to_vec())]));
        assert_ne!(input_digest(&["ab".into()], &[]), input_digest(&["a".into(), "b".into()], &[]));
    }

    #[test]
    fn verified_tracks_assertions() {
        let ok = Assertion::close("x", 1.0, 1.0, 1e-12);
        let bad = Assertion::at_most("y", 2.0, 1.0, 0.5);
        assert!(ok.passed && !bad.passed);
        assert!(RunReport::new(vec![], String::new(), serde_json::Value::Null, vec![ok.clone()], 0.0).verified);
        assert!(!RunReport::new(vec![], String::new(), serde_json::Value::Null, vec![ok, bad], 0.0).verified);
    }
}
