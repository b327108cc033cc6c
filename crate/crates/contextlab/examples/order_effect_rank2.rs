//! Rank-2 systems: the same two properties measured in two arrangements
//! (think question order effects).
//!
//! With consistent marginals, maximality forces each property's two
//! stand-ins to coincide, so a coupling exists exactly when the two
//! arrangements produce the same table: any order effect on the joint is
//! contextual. With inconsistent marginals the agreement requirement
//! drops below 1 and the verdict is still well defined.
//!
//! ```bash
//! cargo run -p contextlab --example order_effect_rank2
//! ```

use contextlab::scenarios::{anticorrelated_table, correlated_table, rank2_system};
use contextlab::{cbd_contextuality, format_rational, is_consistently_connected, ratio};

fn main() {
    let same = rank2_system(&[correlated_table(), correlated_table()]).unwrap();
    println!(
        "identical tables:            contextual = {}",
        cbd_contextuality(&same).unwrap().contextual
    );

    let opposite = rank2_system(&[correlated_table(), anticorrelated_table()]).unwrap();
    println!(
        "opposite correlations:       contextual = {}",
        cbd_contextuality(&opposite).unwrap().contextual
    );

    // Unequal marginals: Pr(Q1=0) is 3/4 in one arrangement, 1/2 in the
    // other. Inconsistently connected, agreement targets shrink, and a
    // coupling turns out to exist.
    let skewed = rank2_system(&[
        [ratio(1, 2), ratio(1, 4), ratio(0, 1), ratio(1, 4)],
        [ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)],
    ])
    .unwrap();
    let report = is_consistently_connected(&skewed);
    println!("\nskewed tables: consistently connected = {}", report.consistent);
    let verdict = cbd_contextuality(&skewed).unwrap();
    for (content, value) in &verdict.per_connection_max {
        println!("  required Pr({content} agrees) = {}", format_rational(value));
    }
    println!("  contextual = {}", verdict.contextual);
}
