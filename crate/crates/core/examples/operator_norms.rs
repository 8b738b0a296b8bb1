//! Operator norms of random complex matrices on `ℓ1`, `ℓ2` and `ℓ∞`.

use interpnorm::linalg::{op_norm_l1, op_norm_linf, spectral_norm, svd};
use interpnorm::sample::{complex_matrix, rng};

fn main() -> interpnorm::error::Result<()> {
    let mut r = rng(7);
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>8}", "size", "l1", "linf", "l2", "svd", "method");
    for n in [2, 5, 16, 40, 80] {
        let t = complex_matrix(&mut r, n, n);
        let s = spectral_norm(&t)?;
        let top = svd(&t)?.s[0];
        println!(
            "{n:>6} {:>10.6} {:>10.6} {:>10.6} {top:>10.6} {:>8?}",
            op_norm_l1(&t)?,
            op_norm_linf(&t)?,
            s.value,
            s.method
        );
    }
    Ok(())
}
