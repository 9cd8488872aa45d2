//! Quantum-corrected products: symbolic in the δ functions, then evaluated.

use crepant::cartan::CartanData;
use crepant::corrections::r_function;
use crepant::exactnum::Cyclotomic;
use crepant::ringtables::{qc_eval, qc_table, render_text, TableError};

fn main() -> Result<(), TableError> {
    let cd = CartanData::build(2);
    println!("R_111 = {}", r_function(&cd, 1, 1, 1));
    println!("R_112 = {}", r_function(&cd, 1, 1, 2));

    let symbolic = qc_table(&cd);
    print!("{}", render_text(&symbolic));

    let z = Cyclotomic::zeta(3, 1);
    print!("{}", render_text(&qc_eval(&symbolic, &[z.clone(), z])?));

    let minus_one = Cyclotomic::from_int(-1);
    match qc_eval(&symbolic, &[minus_one.clone(), minus_one]) {
        Err(e) => println!("at q = (-1, -1): {e}"),
        Ok(_) => println!("unexpectedly finite at q = (-1, -1)"),
    }
    Ok(())
}
