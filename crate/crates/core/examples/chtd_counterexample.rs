//! The Chern character twisted by the square root of Todd does not transport
//! the quantum product onto the orbifold product.

use crepant::exactnum::Cyclotomic;
use crepant::isocheck::{verify_at, IsoError};
use crepant::mckay::chtd_map;

fn main() -> Result<(), IsoError> {
    let map = chtd_map(2);
    print!("Φ:\n{map}");
    for j in [1, 2] {
        let q = Cyclotomic::zeta(3, j);
        let report = verify_at(&map, &[q.clone(), q.clone()])?;
        println!("q = {q}: pass = {}", report.pass());
        for entry in report.failures() {
            println!(
                "  E{}*E{}: s-coefficient off by {}",
                entry.i,
                entry.j,
                entry.diff.s_coeff()
            );
            for (l, c) in entry.diff.basis_coeffs().iter().enumerate() {
                if !c.is_zero() {
                    println!("    E{} coefficient off by {c}", l + 1);
                }
            }
        }
    }
    Ok(())
}
