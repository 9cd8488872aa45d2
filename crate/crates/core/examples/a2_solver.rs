//! Rank two: solve for symmetric maps `[[a, b], [b, a]]` and the points `q`
//! at which they are ring isomorphisms.

use crepant::isocheck::{solve_a2, verify_at, IsoError};
use crepant::mckay::bgp_map;

fn main() -> Result<(), IsoError> {
    let sols = solve_a2()?;
    for (k, sol) in sols.iter().enumerate() {
        println!("solution {}:", k + 1);
        println!("  a  = {} ≈ {}", sol.a, sol.a.to_decimal_string());
        println!("  b  = {} ≈ {}", sol.b, sol.b.to_decimal_string());
        println!("  q1 = q2 = {}", sol.q1);
        let report = verify_at(&sol.map(), &sol.q())?;
        println!("  transport check: {}", report.pass());
        let m = k as i64 + 1;
        println!(
            "  equals candidate map m = {m}: {}",
            bgp_map(2, m)? == sol.map()
        );
    }
    Ok(())
}
