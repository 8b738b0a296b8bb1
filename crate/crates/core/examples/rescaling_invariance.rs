//! Rescaling a boundary family by `γ` multiplies the interpolated norm by the outer value.

use std::f64::consts::PI;

use interpnorm::interp::{rescaling_invariance_check, Arc, BoundaryFamily};
use interpnorm::linalg::C64;
use interpnorm::norms::NormSpec;

fn main() -> interpnorm::error::Result<()> {
    let f = BoundaryFamily::new(vec![
        Arc { a: 0.0, b: PI, norm: NormSpec::lp_uniform(1.0, 2)? },
        Arc { a: PI, b: 2.0 * PI, norm: NormSpec::lp_uniform(f64::INFINITY, 2)? },
    ])?;
    let x = [C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
    let r = rescaling_invariance_check(&f, &x, &|t| (C64::new(2.0, 0.0) + C64::from_polar(1.0, t)).norm(), 32, 256)?;
    println!("outer value at 0 {:.6}", r.outer_center);
    println!("upper ratio      {:.6}", r.upper_ratio);
    println!("lower ratio      {:.6}", r.lower_ratio);
    println!("holds            {}", r.holds);
    Ok(())
}
