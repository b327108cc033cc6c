//! Rank-3 cyclic systems without the anti-correlation requirement — the
//! Leggett-Garg shape: three binary properties measured pairwise.
//!
//! Three perfectly correlated pairs admit a joint distribution (half
//! all-zeros, half all-ones). Flip one pair to perfect anti-correlation
//! and the parity obstruction makes the system contextual.
//!
//! ```bash
//! cargo run -p contextlab --example leggett_garg
//! ```

use contextlab::scenarios::{anticorrelated_table, correlated_table, leggett_garg_system};
use contextlab::{cbd_contextuality, format_rational};

fn main() {
    let correlated =
        leggett_garg_system(&[correlated_table(), correlated_table(), correlated_table()])
            .unwrap();
    let verdict = cbd_contextuality(&correlated).unwrap();
    println!("three correlated pairs: contextual = {}", verdict.contextual);
    if let Some(witness) = verdict.witness {
        println!("  witness coupling:");
        for (tuple, p) in witness.joint().support() {
            let values: Vec<String> = tuple.iter().map(ToString::to_string).collect();
            println!("    ({}) = {}", values.join(" "), format_rational(p));
        }
    }

    let frustrated =
        leggett_garg_system(&[correlated_table(), correlated_table(), anticorrelated_table()])
            .unwrap();
    let verdict = cbd_contextuality(&frustrated).unwrap();
    println!(
        "\ntwo correlated pairs + one anti-correlated: contextual = {}",
        verdict.contextual
    );
    println!("  (Q1 = Q2, Q2 = Q3, Q1 != Q3 has no solution)");
}
