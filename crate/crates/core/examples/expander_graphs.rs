//! Spectral gaps of regular graphs, scalar and vector-valued.

use interpnorm::graphs::{epsilon_g, graph_report, random_regular, RegularGraph};
use interpnorm::norms::NormSpec;

fn main() -> interpnorm::error::Result<()> {
    for (name, g) in [
        ("K4", RegularGraph::complete(4)?),
        ("C5", RegularGraph::cycle(5)?),
        ("Petersen", RegularGraph::petersen()),
        ("random(50, 3)", random_regular(50, 3, 0)?),
    ] {
        println!("{name:>14}: eps {:.6}", epsilon_g(&g)?);
    }
    let g = random_regular(20, 3, 1)?;
    let spaces = [NormSpec::euclidean(3), NormSpec::lp_uniform(1.0, 3)?];
    let r = graph_report(&g, &spaces, 2, 100, 0)?;
    for s in &r.spaces {
        println!("eps(G, X) in [{:.6}, {:.6}] by {}", s.lower, s.upper, s.method);
    }
    for o in &r.obstruction {
        println!("obstruction at power {}: {:?}", o.power, o.status);
    }
    Ok(())
}
