//! Regular norms on `ℓ2` and `ℓp`, the fully contractive test and the dual ball.

use interpnorm::curvature::tau;
use interpnorm::linalg::{op_norm_l2, MatrixOp};
use interpnorm::norms::{dual_reg_ball_norm, fully_contractive_check, reg_norm_l2, reg_norm_lp};
use interpnorm::sample::{complex_matrix, rng};

fn main() -> interpnorm::error::Result<()> {
    let t = tau();
    println!("tau: op {:.6} reg {:.6}", op_norm_l2(&t)?, reg_norm_l2(&t)?);
    let fc = fully_contractive_check(&t)?;
    println!("tau: fully contractive {} (l1 {:.3}, linf {:.3})", fc.contractive, fc.l1, fc.linf);

    let a = complex_matrix(&mut rng(3), 4, 4);
    println!("\n{:>6} {:>10} {:>10}", "p", "lower", "upper");
    for theta in [0.1, 0.25, 0.5, 0.75, 0.9] {
        let b = reg_norm_lp(&a, theta)?;
        println!("{:>6.3} {:>10.6} {:>10.6}", b.p, b.lower, b.upper);
    }

    let phi = MatrixOp::from_real(2, 2, &[1.0, 0.5, 0.5, 1.0])?;
    let (v, cert) = dual_reg_ball_norm(&phi)?;
    println!("\ndual regular norm of [[1, .5], [.5, 1]]: {v:.6} (certified lower {:.6})", cert.lower);
    Ok(())
}
