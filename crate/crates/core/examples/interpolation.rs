//! Interpolated norms of two-valued families against the Calderón oracle.

use interpnorm::interp::{calderon_oracle, interp_norm, BoundaryFamily};
use interpnorm::linalg::C64;
use interpnorm::norms::NormSpec;

fn main() -> interpnorm::error::Result<()> {
    let x0 = NormSpec::lp(1.0, vec![1.0, 2.0, 0.5])?;
    let x1 = NormSpec::lp(f64::INFINITY, vec![1.0, 1.0, 3.0])?;
    let x = [C64::new(1.0, 0.0), C64::new(0.5, -0.5), C64::new(0.0, 2.0)];
    println!("{:>6} {:>10} {:>10} {:>10}", "theta", "lower", "upper", "oracle");
    for theta in [0.25, 0.5, 0.75] {
        let f = BoundaryFamily::two_valued(x0.clone(), x1.clone(), theta)?;
        let b = interp_norm(&f, &x, C64::new(0.0, 0.0), 24, 256, 8)?;
        let oracle = calderon_oracle(&x0, &x1, theta)?.eval(&x);
        println!("{theta:>6.2} {:>10.6} {:>10.6} {oracle:>10.6}", b.lower.value, b.upper.value);
    }
    Ok(())
}
