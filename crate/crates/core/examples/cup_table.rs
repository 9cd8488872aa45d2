//! Classical cup product on the exceptional divisors of the crepant resolution.

use crepant::cartan::CartanData;
use crepant::ringtables::{cup_table, render_latex, render_text};

fn main() {
    let cd = CartanData::build(2);
    println!("inverse Cartan matrix:");
    for row in cd.inverse() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        println!("  {}", cells.join("  "));
    }
    let table = cup_table(&cd);
    print!("{}", render_text(&table));
    print!("{}", render_latex(&table));
}
