//! Maximal couplings of a single connection, with the LP cross-check.
//!
//! The best possible agreement probability for variables with marginals
//! p_1..p_k is `sum_v min_i p_i(v)`. This example computes it in closed
//! form, builds an explicit coupling attaining it, and confirms the value
//! by maximizing agreement mass over the coupling polytope with the exact
//! LP solver.
//!
//! ```bash
//! cargo run -p contextlab --example maximal_coupling
//! ```

use contextlab::{
    format_rational, maximal_coupling, maximal_coupling_value, ratio, Bunch, ContentId, Context,
    Distribution, LinearProgram, LpResult, OutcomeSpace, Rational, System, VariableId,
};

/// One ternary content measured alone in two contexts.
fn connection_system(first: [Rational; 3], second: [Rational; 3]) -> System {
    let mk = |ctx: &str, m: &[Rational; 3]| {
        Bunch::new(
            ctx,
            Distribution::new(
                vec![VariableId::new("Q", ctx)],
                vec![3],
                m.iter().enumerate().map(|(v, p)| (vec![v], p.clone())),
            )
            .unwrap(),
        )
    };
    System::new(
        vec![(ContentId::new("Q"), OutcomeSpace::new(["a", "b", "c"]))],
        vec![Context::new("c1", ["Q"]), Context::new("c2", ["Q"])],
        vec![mk("c1", &first), mk("c2", &second)],
    )
    .unwrap()
}

fn main() {
    let first = [ratio(1, 2), ratio(1, 3), ratio(1, 6)];
    let second = [ratio(1, 6), ratio(1, 3), ratio(1, 2)];
    let system = connection_system(first.clone(), second.clone());
    let conn = &system.connections()[0];

    let value = maximal_coupling_value(conn);
    println!("marginals:");
    println!("  c1: {}", first.iter().map(format_rational).collect::<Vec<_>>().join(" "));
    println!("  c2: {}", second.iter().map(format_rational).collect::<Vec<_>>().join(" "));
    println!("closed form sum of minima: {}", format_rational(&value));

    let coupling = maximal_coupling(conn);
    println!("\none maximal coupling:");
    for (tuple, p) in coupling.joint().support() {
        println!("  ({} {}) = {}", tuple[0], tuple[1], format_rational(p));
    }
    println!("agreement mass: {}", format_rational(&coupling.equal_mass(conn)));

    // Cross-check: maximize agreement mass over all couplings.
    let cells: Vec<(usize, usize)> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).collect();
    let mut lp = LinearProgram::new(cells.len());
    for v in 0..3 {
        lp.add_equality(
            cells.iter().map(|&(a, _)| if a == v { ratio(1, 1) } else { ratio(0, 1) }).collect(),
            first[v].clone(),
        );
        lp.add_equality(
            cells.iter().map(|&(_, b)| if b == v { ratio(1, 1) } else { ratio(0, 1) }).collect(),
            second[v].clone(),
        );
    }
    lp.maximize(
        cells.iter().map(|&(a, b)| if a == b { ratio(1, 1) } else { ratio(0, 1) }).collect(),
    );
    match lp.solve().unwrap() {
        LpResult::Feasible { optimum: Some(opt), .. } => {
            println!("\nLP maximization over the coupling polytope: {}", format_rational(&opt));
            assert_eq!(opt, value);
            println!("closed form and LP agree exactly");
        }
        other => panic!("unexpected LP outcome: {other:?}"),
    }
}
