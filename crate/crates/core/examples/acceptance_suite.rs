//! Runs acceptance criteria by number (all of them when none are given) and
//! prints one line per criterion; `-v` adds every check with its margin.

use interpnorm::acceptance::run;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let verbose = args.iter().any(|a| a == "-v");
    let mut ids: Vec<u8> = args.iter().filter_map(|a| a.parse().ok()).collect();
    if ids.is_empty() {
        ids = (1..=11).collect();
    }
    for id in ids {
        let Some(c) = run(id) else {
            eprintln!("no criterion {id}");
            continue;
        };
        println!("{}", c.summary());
        if verbose {
            for k in &c.checks {
                println!("    {:<5} {:<45} margin {:>11.3e}  {}", if k.passed { "ok" } else { "fail" }, k.name, k.margin, k.detail);
            }
        }
    }
}
