//! Tests the candidate map at every primitive `(n+1)`-th root of unity.

use crepant::isocheck::{conjecture_scan, IsoError, RootVerdict};

fn main() -> Result<(), IsoError> {
    let max = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(4);
    for n in 1..=max {
        let scan = conjecture_scan(n)?;
        for root in &scan.roots {
            let verdict = match &root.verdict {
                RootVerdict::Pass => "pass".to_string(),
                RootVerdict::Fail { failing_entries } => format!("fail at {failing_entries:?}"),
                RootVerdict::Undefined { mu, nu } => format!("pole at δ{mu}{nu}"),
            };
            println!("n = {n}, m = {}: {verdict}", root.m_root);
        }
    }
    Ok(())
}
