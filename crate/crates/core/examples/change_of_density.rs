//! Rescaling a matrix to a fully contractive kernel by a Perron change of density.

use interpnorm::density::change_of_density;
use interpnorm::norms::reg_norm_l2;
use interpnorm::sample::{complex_matrix, rng};

fn main() -> interpnorm::error::Result<()> {
    let t = complex_matrix(&mut rng(5), 5, 5);
    let d = change_of_density(&t, 0.0)?;
    println!("reg norm          {:.6}", reg_norm_l2(&t)?);
    println!("perron norm       {:.6}", d.perron_norm);
    println!("perron residual   {:.2e}", d.check.perron_residual);
    println!("row bound         {:.6}", d.check.row_bound);
    println!("column bound      {:.6}", d.check.column_bound);
    println!("reconstruction    {:.2e}", d.check.reconstruction_error);
    println!("verified          {}", d.check.verified);
    Ok(())
}
