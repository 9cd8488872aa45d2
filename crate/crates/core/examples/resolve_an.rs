//! Resolves `xy = z^{n+1}` by repeated blow-ups and reads off the dual graph.

use crepant::mckay::an_mckay;
use crepant::resolve::{resolve_an, ResolveError};

fn main() -> Result<(), ResolveError> {
    let n = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    let graph = resolve_an(n)?;
    for (round, charts) in graph.history.iter().enumerate() {
        println!("blow-up {}:", round + 1);
        for record in charts {
            println!(
                "  {}: {} = 0 ({})",
                record.name, record.equation, record.singularity
            );
        }
    }
    println!("{} blow-ups, {} curves", graph.rounds, graph.nodes.len());
    println!("chain: {:?}", graph.chain_order());
    println!(
        "matches McKay: {}",
        graph.chain_adjacency() == Some(an_mckay(n, true).adjacency)
    );
    print!("{}", graph.to_dot());
    Ok(())
}
