//! Rank one: every scalar map `E ↦ t·e` that identifies the two rings.

use crepant::isocheck::{solve_a1, verify_at, IsoError};
use crepant::mckay::bgp_map;

fn main() -> Result<(), IsoError> {
    for sol in solve_a1()? {
        println!("t = {} at q = {}", sol.t, sol.q);
    }
    let map = bgp_map(1, 1)?;
    let report = verify_at(&map, &[crepant::exactnum::Cyclotomic::from_int(-1)])?;
    print!("candidate map {map}");
    println!("isomorphism at q = -1: {}", report.pass());
    Ok(())
}
