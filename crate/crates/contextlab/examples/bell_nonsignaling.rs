//! Marginal identities on 2x2 Bell tables.
//!
//! A Bell system is non-signaling when each side's marginal does not
//! depend on the other side's setting; with the block layout used here
//! that is the cell identity p1 + p2 = p3 + p4 and its relatives. The
//! report lists one comparison per connection, context pair, and value.
//!
//! ```bash
//! cargo run -p contextlab --example bell_nonsignaling
//! ```

use contextlab::scenarios::bell_system;
use contextlab::{format_rational, is_consistently_connected, nonsignaling_report, ratio, Rational};

/// Uniform marginals, Pr(equal) = 17/20 in three blocks, 3/20 in the
/// fourth: a rational stand-in for the quantum statistics.
fn quantum_style() -> [Rational; 16] {
    let corr = [ratio(17, 40), ratio(3, 40), ratio(3, 40), ratio(17, 40)];
    let anti = [ratio(3, 40), ratio(17, 40), ratio(17, 40), ratio(3, 40)];
    [
        corr[0].clone(), corr[1].clone(), corr[0].clone(), corr[1].clone(),
        corr[2].clone(), corr[3].clone(), corr[2].clone(), corr[3].clone(),
        corr[0].clone(), corr[1].clone(), anti[0].clone(), anti[1].clone(),
        corr[2].clone(), corr[3].clone(), anti[2].clone(), anti[3].clone(),
    ]
}

/// Same blocks except A1's marginal shifts between its two contexts.
fn signaling() -> [Rational; 16] {
    let u = ratio(1, 4);
    let shifted = [ratio(1, 8), ratio(1, 8), ratio(3, 8), ratio(3, 8)];
    [
        u.clone(), u.clone(), shifted[0].clone(), shifted[1].clone(),
        u.clone(), u.clone(), shifted[2].clone(), shifted[3].clone(),
        u.clone(), u.clone(), u.clone(), u.clone(),
        u.clone(), u.clone(), u.clone(), u.clone(),
    ]
}

fn main() {
    let system = bell_system(&quantum_style()).unwrap();
    println!("quantum-style table:");
    for entry in nonsignaling_report(&system) {
        println!(
            "  {} at {}: {} vs {} under {} / {} -> {}",
            entry.content,
            entry.value,
            format_rational(&entry.prob_a),
            format_rational(&entry.prob_b),
            entry.context_a,
            entry.context_b,
            if entry.equal() { "equal" } else { "UNEQUAL" }
        );
    }

    let system = bell_system(&signaling()).unwrap();
    let report = is_consistently_connected(&system);
    println!("\nsignaling table: consistently connected = {}", report.consistent);
    if let Some(v) = report.violation {
        println!(
            "  first violation: Pr({} = {}) is {} under {} but {} under {}",
            v.content,
            v.value,
            format_rational(&v.prob_a),
            v.context_a,
            format_rational(&v.prob_b),
            v.context_b
        );
    }
}
