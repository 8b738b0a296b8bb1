//! The trace duality bound against `γ_H*(v)` and `δ_X(ε)` on random factorizations through `X`.

use interpnorm::curvature::duality_bound_check;
use interpnorm::linalg::{norm2, MatrixOp};
use interpnorm::norms::NormSpec;
use interpnorm::sample::{complex_matrix, rng};

fn unit_rows(m: &MatrixOp) -> MatrixOp {
    let mut out = m.clone();
    for i in 0..m.rows() {
        let c = norm2(m.row(i)).max(1.0);
        for k in 0..m.cols() {
            out.set(i, k, m.get(i, k) / c);
        }
    }
    out
}

fn main() -> interpnorm::error::Result<()> {
    let (n, d) = (4, 2);
    let x = NormSpec::euclidean(d);
    let mut r = rng(1);
    println!("{:>5} {:>10} {:>10} {:>10} {:>6}", "eps", "lhs", "rhs", "gamma*", "holds");
    for eps in [0.2, 0.5] {
        for _ in 0..3 {
            let v = complex_matrix(&mut r, n, n);
            let j = unit_rows(&complex_matrix(&mut r, n, d));
            let q = unit_rows(&complex_matrix(&mut r, n, d)).transpose();
            let b = duality_bound_check(&v, &x, eps, &j, &q)?;
            println!("{eps:>5.1} {:>10.6} {:>10.6} {:>10.6} {:>6}", b.lhs, b.rhs, b.gamma_h_star, b.holds);
        }
    }
    Ok(())
}
