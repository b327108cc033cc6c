//! Builders for the textbook systems: the anti-correlated Specker triple,
//! 2x2 Bell tables, Leggett-Garg style rank-3 systems, order-effect rank-2
//! systems, and general cyclic systems of binary pair measurements.

use thiserror::Error;

use crate::model::{
    Bunch, ContentId, Context, ContextId, Distribution, ModelError, OutcomeSpace, System,
    VariableId,
};
use crate::rational::{ratio, Rational};

/// Builds a two-variable bunch from a 2x2 table laid out as
/// `[p(0,0), p(0,1), p(1,0), p(1,1)]`, rows indexing the first member.
fn pair_bunch(
    context: &ContextId,
    first: &ContentId,
    second: &ContentId,
    table: &[Rational; 4],
) -> Result<Bunch, ModelError> {
    let vars = vec![
        VariableId { content: first.clone(), context: context.clone() },
        VariableId { content: second.clone(), context: context.clone() },
    ];
    let entries = vec![
        (vec![0, 0], table[0].clone()),
        (vec![0, 1], table[1].clone()),
        (vec![1, 0], table[2].clone()),
        (vec![1, 1], table[3].clone()),
    ];
    Ok(Bunch::new(context.clone(), Distribution::new(vars, vec![2, 2], entries)?))
}

fn pair_context_id(first: &ContentId, second: &ContentId) -> ContextId {
    ContextId::new(format!("{first},{second}"))
}

/// Cyclic system of rank `n >= 2`: `n` binary contents, `n` two-content
/// contexts, each content measured in exactly two contexts. `tables[k]`
/// is the joint table of the k-th context.
///
/// Context pairs are `(Q1,Q2), (Q2,Q3), ..., (Q_{n-1},Q_n), (Q1,Q_n)`;
/// for rank 2 the two contexts are `(Q1,Q2)` and `(Q2,Q1)`, two distinct
/// arrangements of the same content pair.
pub fn cyclic_system(
    contents: &[ContentId],
    tables: &[[Rational; 4]],
) -> Result<System, ModelError> {
    assert!(contents.len() >= 2, "cyclic systems need rank >= 2");
    assert_eq!(contents.len(), tables.len(), "one table per context");
    let n = contents.len();
    let pairs: Vec<(ContentId, ContentId)> = (0..n)
        .map(|k| {
            if k + 1 < n {
                (contents[k].clone(), contents[k + 1].clone())
            } else if n == 2 {
                (contents[1].clone(), contents[0].clone())
            } else {
                (contents[0].clone(), contents[n - 1].clone())
            }
        })
        .collect();

    let mut contexts = Vec::new();
    let mut bunches = Vec::new();
    for ((first, second), table) in pairs.iter().zip(tables) {
        let id = pair_context_id(first, second);
        contexts.push(Context::new(id.clone(), [first.clone(), second.clone()]));
        bunches.push(pair_bunch(&id, first, second, table)?);
    }
    System::new(
        contents.iter().map(|q| (q.clone(), OutcomeSpace::binary01())).collect(),
        contexts,
        bunches,
    )
}

/// The anti-correlated triple: three binary contents M1, M2, M3 measured
/// pairwise, each pair taking opposite values with probability 1 and
/// uniform marginals. Consistently connected, and the canonical example of
/// a system with no maximally connected coupling.
pub fn specker_system() -> System {
    let space = OutcomeSpace::binary01();
    let mut table = [ratio(0, 1), ratio(0, 1), ratio(0, 1), ratio(0, 1)];
    for v in 0..2 {
        let opposite = space.opposite(v).expect("binary space");
        table[v * 2 + opposite] = ratio(1, 2);
    }
    let contents: Vec<ContentId> = ["M1", "M2", "M3"].map(ContentId::new).to_vec();
    cyclic_system(&contents, &[table.clone(), table.clone(), table])
        .expect("fixed tables are valid")
}

/// Rank-3 cyclic system over Q1, Q2, Q3 with caller-supplied tables for
/// the contexts `(Q1,Q2)`, `(Q2,Q3)`, `(Q1,Q3)` — the Leggett-Garg shape:
/// Specker's structure without the anti-correlation requirement.
pub fn leggett_garg_system(tables: &[[Rational; 4]; 3]) -> Result<System, ModelError> {
    let contents: Vec<ContentId> = ["Q1", "Q2", "Q3"].map(ContentId::new).to_vec();
    cyclic_system(&contents, tables)
}

/// Rank-2 system: the same two contents measured in two distinct
/// arrangements (an order effect). `tables[0]` is the joint for `(Q1,Q2)`,
/// `tables[1]` for `(Q2,Q1)` — note the transposed member order.
pub fn rank2_system(tables: &[[Rational; 4]; 2]) -> Result<System, ModelError> {
    let contents: Vec<ContentId> = ["Q1", "Q2"].map(ContentId::new).to_vec();
    cyclic_system(&contents, tables)
}

/// 2x2 Bell system over contents A1, A2 (one side) and B1, B2 (the other),
/// from the sixteen block entries `p1..p16` laid out as four 2x2 blocks on
/// `{+1, -1}` outcomes:
///
/// ```text
/// (A1,B1): p1  p2 / p5  p6      (A1,B2): p3  p4 / p7  p8
/// (A2,B1): p9  p10 / p13 p14    (A2,B2): p11 p12 / p15 p16
/// ```
///
/// Rows index the A value (+1 first), columns the B value. With this
/// layout, `Pr(A1 = +1)` is `p1 + p2` under B1 and `p3 + p4` under B2, so
/// non-signaling in the A1 connection is exactly `p1 + p2 = p3 + p4`.
pub fn bell_system(p: &[Rational; 16]) -> Result<System, ModelError> {
    let block = |a: usize, b: usize, c: usize, d: usize| -> [Rational; 4] {
        [p[a - 1].clone(), p[b - 1].clone(), p[c - 1].clone(), p[d - 1].clone()]
    };
    let blocks = [
        ("A1", "B1", block(1, 2, 5, 6)),
        ("A1", "B2", block(3, 4, 7, 8)),
        ("A2", "B1", block(9, 10, 13, 14)),
        ("A2", "B2", block(11, 12, 15, 16)),
    ];
    let contents: Vec<(ContentId, OutcomeSpace)> = ["A1", "A2", "B1", "B2"]
        .into_iter()
        .map(|q| (ContentId::new(q), OutcomeSpace::plus_minus()))
        .collect();
    let mut contexts = Vec::new();
    let mut bunches = Vec::new();
    for (a, b, table) in &blocks {
        let (a, b) = (ContentId::new(*a), ContentId::new(*b));
        let id = pair_context_id(&a, &b);
        contexts.push(Context::new(id.clone(), [a.clone(), b.clone()]));
        bunches.push(pair_bunch(&id, &a, &b, table)?);
    }
    System::new(contents, contexts, bunches)
}

/// Table with all mass on equal values, split evenly: `Pr(0,0) = Pr(1,1) = 1/2`.
pub fn correlated_table() -> [Rational; 4] {
    [ratio(1, 2), ratio(0, 1), ratio(0, 1), ratio(1, 2)]
}

/// Table with all mass on opposite values: `Pr(0,1) = Pr(1,0) = 1/2`.
pub fn anticorrelated_table() -> [Rational; 4] {
    [ratio(0, 1), ratio(1, 2), ratio(1, 2), ratio(0, 1)]
}

/// Independent uniform blocks: every entry 1/4.
pub fn uniform_bell_params() -> [Rational; 16] {
    std::array::from_fn(|_| ratio(1, 4))
}

/// The PR box: three perfectly correlated blocks and one perfectly
/// anti-correlated block, all marginals uniform. Non-signaling yet
/// admitting no joint distribution.
pub fn pr_box_params() -> [Rational; 16] {
    let c = correlated_table();
    let a = anticorrelated_table();
    let mut p: Vec<Rational> = Vec::with_capacity(16);
    // (A1,B1) = p1 p2 p5 p6 and (A1,B2) = p3 p4 p7 p8 interleave per row.
    p.extend([c[0].clone(), c[1].clone(), c[0].clone(), c[1].clone()]); // p1..p4
    p.extend([c[2].clone(), c[3].clone(), c[2].clone(), c[3].clone()]); // p5..p8
    p.extend([c[0].clone(), c[1].clone(), a[0].clone(), a[1].clone()]); // p9..p12
    p.extend([c[2].clone(), c[3].clone(), a[2].clone(), a[3].clone()]); // p13..p16
    p.try_into().unwrap()
}

/// A named scenario with its parameters, as accepted by the command line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScenarioSpec {
    Specker,
    BellChsh { p: Vec<Rational> },
    LeggettGarg { tables: Vec<Rational> },
    Rank2 { tables: Vec<Rational> },
    CyclicN { tables: Vec<Rational> },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}` (expected specker, bell, leggett-garg, rank2, or cyclic)")]
    UnknownScenario(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ScenarioSpec {
    /// Parses a scenario kind and its flat parameter list (2x2 tables are
    /// given row by row, contexts in builder order).
    pub fn parse(kind: &str, params: Vec<Rational>) -> Result<Self, ScenarioError> {
        let expect = |n: usize, what: &str| -> Result<(), ScenarioError> {
            if params.len() == n {
                Ok(())
            } else {
                Err(ScenarioError::InvalidParameters(format!(
                    "{kind} takes {n} rationals ({what}), got {}",
                    params.len()
                )))
            }
        };
        match kind {
            "specker" => {
                expect(0, "none")?;
                Ok(Self::Specker)
            }
            "bell" => {
                expect(16, "p1..p16")?;
                Ok(Self::BellChsh { p: params })
            }
            "leggett-garg" => {
                expect(12, "three 2x2 tables")?;
                Ok(Self::LeggettGarg { tables: params })
            }
            "rank2" => {
                expect(8, "two 2x2 tables")?;
                Ok(Self::Rank2 { tables: params })
            }
            "cyclic" => {
                if params.len() < 8 || !params.len().is_multiple_of(4) {
                    return Err(ScenarioError::InvalidParameters(format!(
                        "cyclic takes 4n rationals for rank n >= 2, got {}",
                        params.len()
                    )));
                }
                Ok(Self::CyclicN { tables: params })
            }
            other => Err(ScenarioError::UnknownScenario(other.to_owned())),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Specker => "specker",
            Self::BellChsh { .. } => "bell",
            Self::LeggettGarg { .. } => "leggett-garg",
            Self::Rank2 { .. } => "rank2",
            Self::CyclicN { .. } => "cyclic",
        }
    }

    pub fn build(&self) -> Result<System, ScenarioError> {
        fn chunk4(flat: &[Rational]) -> Vec<[Rational; 4]> {
            flat.chunks_exact(4)
                .map(|c| std::array::from_fn(|i| c[i].clone()))
                .collect()
        }
        match self {
            Self::Specker => Ok(specker_system()),
            Self::BellChsh { p } => {
                let p: &[Rational; 16] = p.as_slice().try_into().expect("validated at parse");
                Ok(bell_system(p)?)
            }
            Self::LeggettGarg { tables } => {
                let t: [[Rational; 4]; 3] = chunk4(tables).try_into().expect("validated at parse");
                Ok(leggett_garg_system(&t)?)
            }
            Self::Rank2 { tables } => {
                let t: [[Rational; 4]; 2] = chunk4(tables).try_into().expect("validated at parse");
                Ok(rank2_system(&t)?)
            }
            Self::CyclicN { tables } => {
                let t = chunk4(tables);
                let contents: Vec<ContentId> =
                    (1..=t.len()).map(|i| ContentId::new(format!("Q{i}"))).collect();
                Ok(cyclic_system(&contents, &t)?)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coupling::is_consistently_connected;

    #[test]
    fn specker_bunches_are_anticorrelated_with_half_mass() {
        let system = specker_system();
        for (context, _) in system.contexts() {
            let joint = system.bunch(context).unwrap().joint();
            assert_eq!(joint.prob(&[0, 0]), ratio(0, 1), "{context}");
            assert_eq!(joint.prob(&[0, 1]), ratio(1, 2), "{context}");
            assert_eq!(joint.prob(&[1, 0]), ratio(1, 2), "{context}");
            assert_eq!(joint.prob(&[1, 1]), ratio(0, 1), "{context}");
        }
        assert_eq!(system.connections().len(), 3);
        for conn in system.connections() {
            assert_eq!(conn.variables().len(), 2);
        }
        assert!(is_consistently_connected(&system).consistent);
    }

    #[test]
    fn specker_puts_zero_mass_on_equal_pairs() {
        let system = specker_system();
        for (context, _) in system.contexts() {
            let joint = system.bunch(context).unwrap().joint();
            let equal_mass: Rational =
                (0..2).map(|v| joint.prob(&[v, v])).sum();
            assert_eq!(equal_mass, ratio(0, 1));
        }
    }

    #[test]
    fn bell_layout_places_block_entries() {
        // Distinct entries to pin the p1..p16 layout cell by cell.
        let p: [Rational; 16] = std::array::from_fn(|i| match i {
            0 => ratio(1, 10),
            1 => ratio(2, 10),
            4 => ratio(3, 10),
            5 => ratio(4, 10), // block (A1,B1)
            2 => ratio(4, 10),
            3 => ratio(1, 10),
            6 => ratio(2, 10),
            7 => ratio(3, 10), // block (A1,B2)
            8 => ratio(1, 4),
            9 => ratio(1, 4),
            12 => ratio(1, 4),
            13 => ratio(1, 4), // block (A2,B1)
            10 => ratio(1, 2),
            11 => ratio(0, 1),
            14 => ratio(0, 1),
            _ => ratio(1, 2), // block (A2,B2)
        });
        let system = bell_system(&p).unwrap();
        let b11 = system.bunch(&ContextId::new("A1,B1")).unwrap().joint();
        assert_eq!(b11.prob(&[0, 0]), ratio(1, 10)); // p1 at (+1,+1)
        assert_eq!(b11.prob(&[0, 1]), ratio(1, 5)); // p2 at (+1,-1)
        assert_eq!(b11.prob(&[1, 0]), ratio(3, 10)); // p5 at (-1,+1)
        assert_eq!(b11.prob(&[1, 1]), ratio(2, 5)); // p6 at (-1,-1)
        let b12 = system.bunch(&ContextId::new("A1,B2")).unwrap().joint();
        assert_eq!(b12.prob(&[0, 0]), ratio(2, 5)); // p3
        assert_eq!(b12.prob(&[0, 1]), ratio(1, 10)); // p4

        // Pr(A1 = +1) under B1 is p1+p2; under B2 it is p3+p4.
        let a1 = VariableId::new("A1", "A1,B1");
        assert_eq!(b11.marginal(&[a1]).unwrap().prob(&[0]), ratio(3, 10));
        let a1 = VariableId::new("A1", "A1,B2");
        assert_eq!(b12.marginal(&[a1]).unwrap().prob(&[0]), ratio(1, 2));
    }

    #[test]
    fn bell_rejects_malformed_block() {
        let mut p = uniform_bell_params();
        p[0] = ratio(1, 2); // block (A1,B1) now sums to 5/4
        assert!(matches!(bell_system(&p), Err(ModelError::MalformedDistribution(_))));
    }

    #[test]
    fn pr_box_blocks_have_expected_correlations() {
        let system = bell_system(&pr_box_params()).unwrap();
        for (context, want_equal) in [
            ("A1,B1", ratio(1, 1)),
            ("A1,B2", ratio(1, 1)),
            ("A2,B1", ratio(1, 1)),
            ("A2,B2", ratio(0, 1)),
        ] {
            let joint = system.bunch(&ContextId::new(context)).unwrap().joint();
            let equal: Rational = (0..2).map(|v| joint.prob(&[v, v])).sum();
            assert_eq!(equal, want_equal, "{context}");
        }
        assert!(is_consistently_connected(&system).consistent);
    }

    #[test]
    fn rank2_contexts_are_distinct_over_the_same_pair() {
        let system = rank2_system(&[correlated_table(), correlated_table()]).unwrap();
        let contexts: Vec<_> = system.contexts().map(|(c, _)| c.clone()).collect();
        assert_eq!(contexts, vec![ContextId::new("Q1,Q2"), ContextId::new("Q2,Q1")]);
        assert_eq!(system.connections().len(), 2);
    }

    #[test]
    fn cyclic_rank_five_measures_each_content_twice() {
        let contents: Vec<ContentId> =
            (1..=5).map(|i| ContentId::new(format!("Q{i}"))).collect();
        let tables: Vec<[Rational; 4]> = (0..5).map(|_| correlated_table()).collect();
        let system = cyclic_system(&contents, &tables).unwrap();
        assert_eq!(system.contexts().count(), 5);
        let conns = system.connections();
        assert_eq!(conns.len(), 5);
        for conn in conns {
            assert_eq!(conn.variables().len(), 2);
        }
    }

    #[test]
    fn rank2_verdicts_track_table_agreement() {
        use crate::coupling::cbd_contextuality;
        let same = rank2_system(&[correlated_table(), correlated_table()]).unwrap();
        assert!(!cbd_contextuality(&same).unwrap().contextual);
        let opposite = rank2_system(&[correlated_table(), anticorrelated_table()]).unwrap();
        assert!(cbd_contextuality(&opposite).unwrap().contextual);
    }

    #[test]
    fn rank2_with_unequal_marginals_is_still_decided() {
        use crate::coupling::cbd_contextuality;
        let skewed = rank2_system(&[
            [ratio(1, 2), ratio(1, 4), ratio(0, 1), ratio(1, 4)],
            [ratio(1, 4), ratio(1, 4), ratio(1, 4), ratio(1, 4)],
        ])
        .unwrap();
        assert!(!is_consistently_connected(&skewed).consistent);
        let verdict = cbd_contextuality(&skewed).unwrap();
        // Pr(Q1 = 0) is 3/4 in one arrangement and 1/2 in the other, so
        // the required agreement drops to 3/4; Q2 stays at 1.
        assert_eq!(verdict.per_connection_max[&ContentId::new("Q1")], ratio(3, 4));
        assert_eq!(verdict.per_connection_max[&ContentId::new("Q2")], ratio(1, 1));
        assert!(!verdict.contextual);
    }

    #[test]
    fn leggett_garg_with_anticorrelated_tables_matches_the_specker_verdicts() {
        use crate::coupling::cbd_contextuality;
        let tables =
            [anticorrelated_table(), anticorrelated_table(), anticorrelated_table()];
        let system = leggett_garg_system(&tables).unwrap();
        assert!(is_consistently_connected(&system).consistent);
        assert!(cbd_contextuality(&system).unwrap().contextual);
        assert_eq!(
            cbd_contextuality(&system).unwrap().contextual,
            cbd_contextuality(&specker_system()).unwrap().contextual
        );
    }

    #[test]
    fn scenario_spec_parses_and_validates_counts() {
        assert!(ScenarioSpec::parse("specker", vec![]).is_ok());
        assert!(matches!(
            ScenarioSpec::parse("specker", vec![ratio(1, 2)]),
            Err(ScenarioError::InvalidParameters(_))
        ));
        assert!(matches!(
            ScenarioSpec::parse("belle", vec![]),
            Err(ScenarioError::UnknownScenario(_))
        ));
        let uniform = uniform_bell_params().to_vec();
        let spec = ScenarioSpec::parse("bell", uniform).unwrap();
        assert!(spec.build().is_ok());
    }
}
