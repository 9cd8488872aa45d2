//! McKay graphs of the finite subgroups of SL(2, C).

use crepant::mckay::{aut_gamma, mckay_graph, GroupLabel, McKayError};

fn main() -> Result<(), McKayError> {
    for label in [
        GroupLabel::A(4),
        GroupLabel::D(5),
        GroupLabel::E6,
        GroupLabel::E8,
    ] {
        let graph = mckay_graph(label, false)?;
        println!(
            "{label}: {} vertices, {} edges, automorphisms {:?}",
            graph.vertices.len(),
            graph.edges().len(),
            aut_gamma(label)
        );
    }
    print!("{}", mckay_graph(GroupLabel::E6, true)?.to_dot());
    Ok(())
}
