//! Exact arithmetic in cyclotomic fields.

use crepant::exactnum::{branch_sqrt, rat, sqrt_rational, Cyclotomic};

fn main() {
    let z3 = Cyclotomic::zeta(3, 1);
    let z4 = Cyclotomic::i();
    println!("ζ3 + ζ3² = {}", &z3 + &z3.pow(2).unwrap());

    // Mixed conductors are lifted to the lcm.
    let mixed = &z3 * &z4;
    println!("ζ3·i = {mixed} (conductor {})", mixed.conductor());
    println!("as a root of unity: {:?}", mixed.as_root_of_unity());

    let sqrt3 = sqrt_rational(&rat(3, 1)).unwrap();
    println!("√3 = {sqrt3} ≈ {}", sqrt3.to_decimal_string());
    println!("√-2 = {}", sqrt_rational(&rat(-2, 1)).unwrap());

    let inv = (&sqrt3 + &z3).inverse().unwrap();
    println!("1/(√3 + ζ3) = {inv}");

    let root = branch_sqrt(2, 1, 1).unwrap();
    println!("√(ζ3 + ζ3⁻¹ - 2) = {root}, squared = {}", &root * &root);
}
