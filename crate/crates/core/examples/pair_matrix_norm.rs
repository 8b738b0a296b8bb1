//! Norm of `T` on the interpolated pair `(ℓ2 with op norm, reg norm)` and its domination of `‖T ⊗ id_X‖`.

use interpnorm::curvature::tau;
use interpnorm::interp::{domination_check, interp_pair_matrix_norm};

fn main() -> interpnorm::error::Result<()> {
    let t = tau();
    println!("{:>6} {:>10} {:>10}", "theta", "lower", "upper");
    for theta in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let p = interp_pair_matrix_norm(&t, theta, 8, 64)?;
        println!("{theta:>6.2} {:>10.6} {:>10.6}", p.lower, p.upper);
    }
    let d = domination_check(&t, 0.5, 10, 0, 8, 64)?;
    println!("\ndomination at theta 1/2: {} violations, worst margin {:.6}", d.violations, d.worst_margin);
    Ok(())
}
