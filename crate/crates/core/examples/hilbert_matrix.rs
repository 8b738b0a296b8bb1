//! Operator and regular norms of the Hilbert matrix `Γ(n)` over dyadic sizes.

use interpnorm::curvature::hilbert_matrix;
use interpnorm::linalg::op_norm_l2;
use interpnorm::norms::reg_norm_l2;

fn main() -> interpnorm::error::Result<()> {
    println!("{:>5} {:>10} {:>10} {:>14}", "n", "op", "reg", "reg/log(n+1)");
    for n in [32, 64, 128, 256, 512] {
        let g = hilbert_matrix(n)?;
        let op = op_norm_l2(&g)?;
        let reg = reg_norm_l2(&g)?;
        println!("{n:>5} {op:>10.6} {reg:>10.6} {:>14.6}", reg / (n as f64 + 1.0).ln());
    }
    Ok(())
}
