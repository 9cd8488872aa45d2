//! The orbifold product on the twisted sectors of `[C²/Z_{n+1}] × C`.

use crepant::ringtables::{cr_table, render_text};

fn main() {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(3);
    let table = cr_table(n);
    print!("{}", render_text(&table));
    let report = table.associativity_report();
    println!(
        "associativity: {} triples checked, {} failures",
        report.checked.len(),
        report.failures.len()
    );
}
