//! Harmonic measure of arcs and outer functions with prescribed boundary modulus.

use std::f64::consts::PI;

use interpnorm::interp::{grid_angles, harmonic_measure, outer_function};
use interpnorm::linalg::C64;

fn main() -> interpnorm::error::Result<()> {
    for xi in [C64::new(0.0, 0.0), C64::new(0.5, 0.0), C64::new(0.0, -0.8)] {
        let h = harmonic_measure(xi, 512)?;
        println!("xi = {xi:.2}: mass of upper half {:.6}", h.mass(0.0, PI));
    }
    let k: Vec<f64> = grid_angles(256).iter().map(|t| 2.0 + t.cos()).collect();
    let o = outer_function(&k)?;
    let err = o.boundary.iter().zip(&k).map(|(b, k)| (b.norm() - k).abs()).fold(0.0, f64::max);
    println!("\nouter of 2 + cos t: value at 0 {:.6} (exact {:.6}), boundary error {err:.2e}", o.center, (2.0 + 3f64.sqrt()) / 2.0);
    Ok(())
}
