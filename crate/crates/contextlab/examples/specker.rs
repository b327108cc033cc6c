//! The anti-correlated triple (Specker's parable): three binary
//! measurements, jointly measurable in pairs, each pair perfectly
//! anti-correlated with uniform marginals.
//!
//! The system is consistently connected and every connection couples
//! perfectly on its own, yet no single joint distribution serves all three
//! maximality requirements at once — the system is contextual. Dropping
//! any one requirement restores feasibility, which is the circular
//! contradiction made mechanical.
//!
//! ```bash
//! cargo run -p contextlab --example specker
//! ```

use std::collections::BTreeSet;

use contextlab::scenarios::specker_system;
use contextlab::{
    cbd_contextuality, connected_coupling, format_rational, is_consistently_connected,
    maximal_coupling, maximal_coupling_value, ContentId,
};

fn main() {
    let system = specker_system();

    println!("bunches (each pair takes opposite values with probability 1):");
    for (context, _) in system.contexts() {
        let joint = system.bunch(context).unwrap().joint();
        let rows: Vec<String> = joint
            .support()
            .map(|(t, p)| format!("({} {}) = {}", t[0], t[1], format_rational(p)))
            .collect();
        println!("  {context}: {}", rows.join(", "));
    }

    let report = is_consistently_connected(&system);
    println!("\nconsistently connected: {}", report.consistent);

    println!("\nper-connection maximal couplings:");
    for conn in system.connections() {
        let value = maximal_coupling_value(&conn);
        let coupling = maximal_coupling(&conn);
        println!(
            "  {}: Pr(all equal) = {} attained by the diagonal table {}",
            conn.content(),
            format_rational(&value),
            coupling
                .joint()
                .support()
                .map(|(t, p)| format!("({},{})={}", t[0], t[1], format_rational(p)))
                .collect::<Vec<_>>()
                .join(" ")
        );
    }

    let verdict = cbd_contextuality(&system).unwrap();
    println!("\ncontextual (no maximally connected coupling): {}", verdict.contextual);

    // Relax one connection at a time: every two-constraint subproblem is
    // feasible, so the infeasibility genuinely needs all three.
    let all: BTreeSet<ContentId> =
        system.connections().iter().map(|c| c.content().clone()).collect();
    for dropped in &all {
        let mut subset = all.clone();
        subset.remove(dropped);
        let feasible = connected_coupling(&system, &subset).unwrap().is_some();
        println!("  without maximality on {dropped}: coupling exists = {feasible}");
    }
}
