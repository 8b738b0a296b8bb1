//! Factorization through Hilbert space: `γ_H`, its dual and trace duality.

use interpnorm::factor::{gamma_h, gamma_h_star, nuclear_norm_linf_l1, schur_multiplier_norm, trace_class_factorize, trace_pair};
use interpnorm::linalg::MatrixOp;
use interpnorm::sample::{complex_matrix, rng};

fn main() -> interpnorm::error::Result<()> {
    let mut r = rng(11);
    let u = complex_matrix(&mut r, 4, 4);
    let v = complex_matrix(&mut r, 4, 4);
    let g = gamma_h(&u, 1e-6)?;
    let gs = gamma_h_star(&v)?;
    println!("gamma_H(u)  = {:.6} in [{:.6}, {:.6}]", g.value, g.lower, g.upper);
    println!("factor residual {:.2e}", g.certificate.residual(&u));
    println!("gamma_H*(v) = {:.6} (lower {:.6}, nuclear {:.6})", gs.value, gs.lower, nuclear_norm_linf_l1(&v));
    println!("|tr(u v^T)| = {:.6} <= {:.6}", trace_pair(&u, &v).norm(), g.value * gs.value);

    let phi = MatrixOp::from_fn(5, 5, |i, j| (1.0 / (1.0 + (i as f64 - j as f64).abs())).into());
    println!("\nSchur multiplier norm of 1/(1+|i-j|): {:.6}", schur_multiplier_norm(&phi, 1e-6)?.value);
    let f = trace_class_factorize(&phi)?;
    println!("trace class factorization: trace norm {:.6}, product norm {:.6}", f.trace_norm, f.product_norm());
    Ok(())
}
