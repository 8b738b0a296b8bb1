//! The curvature modulus `δ_X(ε)` on a grid of `ε` for Hilbertian and `ℓ1` spaces.

use interpnorm::curvature::{delta_curve, delta_upper, DeltaSearch};
use interpnorm::norms::NormSpec;

fn main() -> interpnorm::error::Result<()> {
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9];
    for (name, x) in [("l2^2", NormSpec::euclidean(2)), ("l1^2", NormSpec::lp_uniform(1.0, 2)?)] {
        let c = delta_curve(&x, &grid, DeltaSearch { budget: 40, ..DeltaSearch::default() })?;
        println!("{name}");
        for (i, eps) in grid.iter().enumerate() {
            println!("  eps {eps:.1}: delta {:.6} (upper {:.6}, closed form {:.6})", c.values[i], c.upper[i], delta_upper(&x, *eps));
        }
    }
    Ok(())
}
