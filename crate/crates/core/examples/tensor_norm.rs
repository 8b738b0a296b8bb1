//! `‖T ⊗ id_X‖` for several spaces `X`, bracketed between `‖T‖` and `‖T‖_reg`.

use interpnorm::curvature::tau;
use interpnorm::norms::{tensor_op_norm, NormSpec};

fn main() -> interpnorm::error::Result<()> {
    let t = tau();
    let spaces = [
        ("l2^2", NormSpec::euclidean(2)),
        ("l1^2", NormSpec::lp_uniform(1.0, 2)?),
        ("linf^2", NormSpec::lp_uniform(f64::INFINITY, 2)?),
        ("l4^3", NormSpec::lp_uniform(4.0, 3)?),
    ];
    println!("{:>8} {:>10} {:>10} {:>10} {:>10}", "X", "lower", "upper", "op", "reg");
    for (name, x) in spaces {
        let n = tensor_op_norm(&t, &x)?;
        println!("{name:>8} {:>10.6} {:>10.6} {:>10.6} {:>10.6}", n.lower, n.upper, n.op_norm, n.reg_norm);
    }
    Ok(())
}
