//! Content-keyed vs variable-keyed deterministic models.
//!
//! The content-keyed search weighs assignments of one value per
//! observable (sixteen quadruples for a 2x2 Bell system). The
//! variable-keyed search weighs assignments of one value per
//! (observable, context) pair — 256 octuples — and pins each connection's
//! agreement mass to its maximal coupling value. For consistently
//! connected systems the two searches succeed or fail together; the
//! variable-keyed assignments that carry weight are exactly the collapsed,
//! context-independent ones.
//!
//! ```bash
//! cargo run -p contextlab --example hidden_variables
//! ```

use contextlab::scenarios::{bell_system, uniform_bell_params};
use contextlab::{fine_model, format_rational, octuple_model, ratio, Rational};

fn main() {
    // A mildly correlated local table: every block has Pr(equal) = 3/4.
    let block = [ratio(3, 8), ratio(1, 8), ratio(1, 8), ratio(3, 8)];
    let p: [Rational; 16] = [
        block[0].clone(), block[1].clone(), block[0].clone(), block[1].clone(),
        block[2].clone(), block[3].clone(), block[2].clone(), block[3].clone(),
        block[0].clone(), block[1].clone(), block[0].clone(), block[1].clone(),
        block[2].clone(), block[3].clone(), block[2].clone(), block[3].clone(),
    ];
    let system = bell_system(&p).unwrap();

    println!("correlated local table:");
    match fine_model(&system) {
        verdict @ contextlab::HvVerdict::Feasible(_) => {
            let model = verdict.model().unwrap();
            println!("  content-keyed model over {} quadruples:", 16);
            for (assignment, weight) in model.support() {
                let values: Vec<&str> = assignment
                    .iter()
                    .map(|&v| if v == 0 { "+1" } else { "-1" })
                    .collect();
                println!("    <{}> = {}", values.join(", "), format_rational(weight));
            }
        }
        contextlab::HvVerdict::Infeasible => println!("  content-keyed model: infeasible"),
    }
    let octuple = octuple_model(&system);
    println!(
        "  variable-keyed model over 256 octuples: {}",
        if octuple.is_feasible() { "feasible" } else { "infeasible" }
    );
    if let Some(model) = octuple.model() {
        let collapsed = model.support().all(|(assignment, _)| {
            // keys sorted by (content, context): positions 0/1 are A1's two
            // stand-ins, 2/3 A2's, 4/5 B1's, 6/7 B2's.
            assignment.chunks(2).all(|pair| pair[0] == pair[1])
        });
        println!("  every weighted octuple is context-collapsed: {collapsed}");
    }

    println!("\nuniform table:");
    let system = bell_system(&uniform_bell_params()).unwrap();
    println!("  content-keyed: {}", if fine_model(&system).is_feasible() { "feasible" } else { "infeasible" });
    println!("  variable-keyed: {}", if octuple_model(&system).is_feasible() { "feasible" } else { "infeasible" });
}
