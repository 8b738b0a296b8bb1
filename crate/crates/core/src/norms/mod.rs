//! Norms on `C^n`, the regular norm and its predual ball, and vector-valued
//! operator norms `‖T ⊗ id_X‖`.
//!
//! Pairings are sesquilinear, `⟨ξ, x⟩ = Σ conj(ξ_i) x_i`, unless a function
//! says otherwise. A norming functional of `x` is any `ξ` in the dual unit
//! sphere with `⟨ξ, x⟩ = ‖x‖`.

mod regular;
mod spec;
mod tensor;

pub use regular::{
    dual_reg_ball_norm, dual_reg_norming, fully_contractive_check, reg_norm_l2, reg_norm_lp, DualBallCertificate,
    FullyContractive, RegLpBounds,
};
pub use spec::{Exponent, NormSpec};
pub use tensor::{tensor_op_norm, tensor_op_norm_with, TensorNorm, TensorSearch};
pub(crate) use tensor::{apply_blocks, tensor_ratio, L2Of};

use crate::linalg::C64;

/// A norm that can be evaluated and differentiated on `C^dim`.
pub trait Norm: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, x: &[C64]) -> f64;

    /// A norming functional of `x`; zero for `x = 0`.
    fn norming(&self, x: &[C64]) -> Vec<C64>;
}

impl Norm for NormSpec {
    fn dim(&self) -> usize {
        NormSpec::dim(self)
    }

    fn eval(&self, x: &[C64]) -> f64 {
        NormSpec::eval(self, x)
    }

    fn norming(&self, x: &[C64]) -> Vec<C64> {
        NormSpec::norming(self, x)
    }
}
