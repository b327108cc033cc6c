//! Couplings, maximal couplings, consistent connectedness, and the
//! coupling-feasibility contextuality verdict.
//!
//! A *coupling* of separately distributed variables is one joint
//! distribution whose per-variable marginals reproduce each of them. For a
//! connection (one content's variables across contexts), a coupling is
//! *maximal* when it makes all variables take equal values with the largest
//! probability any coupling can achieve; that value has the closed form
//! `sum_v min_i Pr(a_i = v)`. A system-wide coupling is *maximally
//! connected* when it reproduces every bunch and restricts to a maximal
//! coupling on every connection. The system is **contextual** exactly when
//! no maximally connected coupling exists, which is decided here as an
//! exact LP feasibility question over the full product outcome space (the
//! construction enumerates that product, which is what makes verdicts
//! exact; it is meant for desk-scale systems, not hundreds of variables).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::lp::{LinearProgram, LpResult};
use crate::model::{product_tuples, Connection, ContentId, ContextId, Distribution, System, VariableId};
use crate::rational::Rational;

/// A joint distribution standing in for separately distributed variables.
///
/// Each stand-in is identified by the source [`VariableId`] it couples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupling {
    variables: Vec<VariableId>,
    joint: Distribution,
}

impl Coupling {
    pub fn variables(&self) -> &[VariableId] {
        &self.variables
    }

    pub fn joint(&self) -> &Distribution {
        &self.joint
    }

    /// Exact check that this coupling's marginal onto every context equals
    /// that context's bunch.
    pub fn reproduces_bunches(&self, system: &System) -> bool {
        system.bunches().all(|bunch| {
            match self.joint.marginal(bunch.joint().variables()) {
                Ok(m) => m.same_law(bunch.joint()),
                Err(_) => false,
            }
        })
    }

    /// Probability mass this coupling puts on "all of the connection's
    /// stand-ins take equal values".
    pub fn equal_mass(&self, connection: &Connection) -> Rational {
        let positions: Vec<usize> = connection
            .variables()
            .iter()
            .map(|v| {
                self.variables
                    .iter()
                    .position(|w| w == v)
                    .expect("connection variable missing from coupling")
            })
            .collect();
        self.joint
            .support()
            .filter(|(tuple, _)| {
                let first = tuple[positions[0]];
                positions[1..].iter().all(|&p| tuple[p] == first)
            })
            .map(|(_, p)| p.clone())
            .sum()
    }
}

/// Outcome of [`cbd_contextuality`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextualityVerdict {
    /// True iff no maximally connected coupling exists.
    pub contextual: bool,
    /// The imposed `Pr(all equal)` value per connection.
    pub per_connection_max: BTreeMap<ContentId, Rational>,
    /// A maximally connected coupling, when one exists.
    pub witness: Option<Coupling>,
}

/// One marginal comparison within a connection: the probability of a value
/// in two different contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalComparison {
    pub content: ContentId,
    pub context_a: ContextId,
    pub context_b: ContextId,
    pub value: String,
    pub prob_a: Rational,
    pub prob_b: Rational,
}

impl MarginalComparison {
    pub fn equal(&self) -> bool {
        self.prob_a == self.prob_b
    }
}

/// Result of [`is_consistently_connected`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectednessReport {
    pub consistent: bool,
    /// The first failing comparison, in deterministic scan order.
    pub violation: Option<MarginalComparison>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CouplingError {
    /// A connection whose variables disagree on their outcome space.
    /// Systems built through the model layer share spaces per content, so
    /// this cannot occur for them.
    #[error("connection `{content}` mixes outcome spaces")]
    MixedOutcomeSpace { content: ContentId },
}

/// All per-value marginal comparisons, for every connection and every
/// unordered pair of its contexts. Entry order is deterministic: by
/// content, then context pair, then value.
pub fn nonsignaling_report(system: &System) -> Vec<MarginalComparison> {
    let mut out = Vec::new();
    for conn in system.connections() {
        let space = system.space(conn.content()).expect("connection content exists");
        let vars = conn.variables();
        let margs = conn.marginals();
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                for v in 0..space.len() {
                    out.push(MarginalComparison {
                        content: conn.content().clone(),
                        context_a: vars[i].context.clone(),
                        context_b: vars[j].context.clone(),
                        value: space.label(v).to_owned(),
                        prob_a: margs[i].prob(&[v]),
                        prob_b: margs[j].prob(&[v]),
                    });
                }
            }
        }
    }
    out
}

/// Does every content have the same marginal distribution in all contexts
/// measuring it? Exact, value by value; the first mismatch is reported.
pub fn is_consistently_connected(system: &System) -> ConnectednessReport {
    let violation = nonsignaling_report(system).into_iter().find(|c| !c.equal());
    ConnectednessReport { consistent: violation.is_none(), violation }
}

/// The largest probability of "all variables equal" over all couplings of
/// the connection: `sum_v min_i Pr(a_i = v)`.
pub fn maximal_coupling_value(connection: &Connection) -> Rational {
    let card = connection.card();
    (0..card)
        .map(|v| {
            connection
                .marginals()
                .iter()
                .map(|m| m.prob(&[v]))
                .min()
                .expect("connection has at least two variables")
        })
        .sum()
}

/// Builds one coupling attaining [`maximal_coupling_value`].
///
/// Diagonal outcomes receive the pointwise minimum of the marginals; the
/// leftover mass is coupled independently from each variable's residual.
/// Every all-equal outcome has at least one zero residual factor, so the
/// residual part adds no diagonal mass and the total equals the closed
/// form.
pub fn maximal_coupling(connection: &Connection) -> Coupling {
    let card = connection.card();
    let vars = connection.variables().to_vec();
    let k = vars.len();
    let mins: Vec<Rational> = (0..card)
        .map(|v| {
            connection
                .marginals()
                .iter()
                .map(|m| m.prob(&[v]))
                .min()
                .unwrap()
        })
        .collect();
    let total_min: Rational = mins.iter().cloned().sum();

    let mut entries: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    for (v, m) in mins.iter().enumerate() {
        if !m.is_zero() {
            entries.insert(vec![v; k], m.clone());
        }
    }
    let leftover = Rational::one() - &total_min;
    if !leftover.is_zero() {
        // residual_i(v) = Pr(a_i = v) - min_j Pr(a_j = v)
        let residuals: Vec<Vec<Rational>> = connection
            .marginals()
            .iter()
            .map(|m| (0..card).map(|v| m.prob(&[v]) - &mins[v]).collect())
            .collect();
        let mut scale = Rational::one();
        for _ in 1..k {
            scale *= &leftover;
        }
        for tuple in product_tuples(&vec![card; k]) {
            let mut mass = Rational::one();
            for (i, &v) in tuple.iter().enumerate() {
                mass *= &residuals[i][v];
                if mass.is_zero() {
                    break;
                }
            }
            if !mass.is_zero() {
                *entries.entry(tuple).or_insert_with(Rational::zero) += mass / &scale;
            }
        }
    }

    let joint = Distribution::new(vars.clone(), vec![card; k], entries)
        .expect("construction yields a normalized distribution");
    Coupling { variables: vars, joint }
}

/// Searches for a system-wide coupling that reproduces every bunch and is
/// maximal on exactly the connections listed in `maximal_on`. Returns the
/// witness when the LP is feasible.
pub fn connected_coupling(
    system: &System,
    maximal_on: &BTreeSet<ContentId>,
) -> Result<Option<Coupling>, CouplingError> {
    let all_vars = system.variables();
    let cards: Vec<usize> = all_vars
        .iter()
        .map(|v| system.space(&v.content).expect("variable content exists").len())
        .collect();
    let tuples = product_tuples(&cards);

    let connections = system.connections();
    for conn in &connections {
        let card = conn.card();
        if conn.marginals().iter().any(|m| m.cards()[0] != card) {
            return Err(CouplingError::MixedOutcomeSpace { content: conn.content().clone() });
        }
    }

    let mut lp = LinearProgram::new(tuples.len());

    // (a) Marginal onto each context's variables equals that bunch.
    for (context, _) in system.contexts() {
        let bunch = system.bunch(context).expect("validated system");
        let bunch_vars = bunch.joint().variables();
        let positions: Vec<usize> = bunch_vars
            .iter()
            .map(|v| all_vars.binary_search(v).expect("bunch variable is a system variable"))
            .collect();
        let bunch_cards = bunch.joint().cards().to_vec();
        let mut rows: BTreeMap<Vec<usize>, Vec<Rational>> = product_tuples(&bunch_cards)
            .into_iter()
            .map(|t| (t, vec![Rational::zero(); tuples.len()]))
            .collect();
        for (i, tuple) in tuples.iter().enumerate() {
            let projected: Vec<usize> = positions.iter().map(|&p| tuple[p]).collect();
            rows.get_mut(&projected).expect("projection stays in range")[i] = Rational::one();
        }
        for (outcome, row) in rows {
            lp.add_equality(row, bunch.joint().prob(&outcome));
        }
    }

    // (b) Per selected connection: Pr(all stand-ins equal) fixed to the
    // maximal coupling value.
    for conn in &connections {
        if !maximal_on.contains(conn.content()) {
            continue;
        }
        let positions: Vec<usize> = conn
            .variables()
            .iter()
            .map(|v| all_vars.binary_search(v).expect("connection variable is a system variable"))
            .collect();
        let mut row = vec![Rational::zero(); tuples.len()];
        for (i, tuple) in tuples.iter().enumerate() {
            let first = tuple[positions[0]];
            if positions[1..].iter().all(|&p| tuple[p] == first) {
                row[i] = Rational::one();
            }
        }
        lp.add_equality(row, maximal_coupling_value(conn));
    }

    match lp.solve().expect("constraint rows built with LP dimensions") {
        LpResult::Infeasible => Ok(None),
        LpResult::Feasible { witness, .. } => {
            let entries = tuples
                .iter()
                .zip(&witness)
                .filter(|(_, p)| !p.is_zero())
                .map(|(t, p)| (t.clone(), p.clone()));
            let joint = Distribution::new(all_vars.clone(), cards, entries)
                .expect("LP witness is a probability vector");
            Ok(Some(Coupling { variables: all_vars, joint }))
        }
        LpResult::Unbounded => unreachable!("feasibility problem has no objective"),
    }
}

/// The coupling-feasibility contextuality verdict: contextual iff no
/// coupling of the whole system reproduces every bunch while being maximal
/// on every connection.
pub fn cbd_contextuality(system: &System) -> Result<ContextualityVerdict, CouplingError> {
    let connections = system.connections();
    let per_connection_max: BTreeMap<ContentId, Rational> = connections
        .iter()
        .map(|c| (c.content().clone(), maximal_coupling_value(c)))
        .collect();
    let all: BTreeSet<ContentId> = per_connection_max.keys().cloned().collect();
    let witness = connected_coupling(system, &all)?;
    Ok(ContextualityVerdict { contextual: witness.is_none(), per_connection_max, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Bunch, Context, OutcomeSpace};
    use crate::rational::ratio;

    fn var(q: &str, c: &str) -> VariableId {
        VariableId::new(q, c)
    }

    /// System exposing one connection as a pair of single-content
    /// contexts with the given univariate marginals.
    fn pair_connection_system(p0_first: Rational, p0_second: Rational) -> System {
        let d1 = Distribution::new(
            vec![var("Q", "c1")],
            vec![2],
            vec![(vec![0], p0_first.clone()), (vec![1], Rational::one() - p0_first)],
        )
        .unwrap();
        let d2 = Distribution::new(
            vec![var("Q", "c2")],
            vec![2],
            vec![(vec![0], p0_second.clone()), (vec![1], Rational::one() - p0_second)],
        )
        .unwrap();
        System::new(
            vec![(ContentId::new("Q"), OutcomeSpace::binary01())],
            vec![Context::new("c1", ["Q"]), Context::new("c2", ["Q"])],
            vec![Bunch::new("c1", d1), Bunch::new("c2", d2)],
        )
        .unwrap()
    }

    fn only_connection(system: &System) -> Connection {
        let mut conns = system.connections();
        assert_eq!(conns.len(), 1);
        conns.remove(0)
    }

    #[test]
    fn identical_uniform_marginals_couple_perfectly() {
        let system = pair_connection_system(ratio(1, 2), ratio(1, 2));
        let conn = only_connection(&system);
        assert_eq!(maximal_coupling_value(&conn), ratio(1, 1));
        let coupling = maximal_coupling(&conn);
        // Mass 1/2 on each diagonal outcome, nothing off it.
        assert_eq!(coupling.joint().prob(&[0, 0]), ratio(1, 2));
        assert_eq!(coupling.joint().prob(&[1, 1]), ratio(1, 2));
        assert_eq!(coupling.joint().prob(&[0, 1]), ratio(0, 1));
        assert_eq!(coupling.equal_mass(&conn), ratio(1, 1));
    }

    #[test]
    fn disjoint_point_masses_cannot_agree() {
        let system = pair_connection_system(ratio(1, 1), ratio(0, 1));
        let conn = only_connection(&system);
        assert_eq!(maximal_coupling_value(&conn), ratio(0, 1));
        let coupling = maximal_coupling(&conn);
        assert_eq!(coupling.joint().prob(&[0, 1]), ratio(1, 1));
        assert_eq!(coupling.equal_mass(&conn), ratio(0, 1));
    }

    #[test]
    fn identical_point_masses_couple_as_a_point_mass() {
        let system = pair_connection_system(ratio(1, 1), ratio(1, 1));
        let conn = only_connection(&system);
        assert_eq!(maximal_coupling_value(&conn), ratio(1, 1));
        let coupling = maximal_coupling(&conn);
        assert_eq!(coupling.joint().prob(&[0, 0]), ratio(1, 1));
        assert_eq!(coupling.equal_mass(&conn), ratio(1, 1));
    }

    #[test]
    fn mismatched_marginals_value_is_sum_of_minima() {
        let system = pair_connection_system(ratio(3, 4), ratio(1, 4));
        let conn = only_connection(&system);
        // min(3/4,1/4) + min(1/4,3/4) = 1/2.
        assert_eq!(maximal_coupling_value(&conn), ratio(1, 2));
        let coupling = maximal_coupling(&conn);
        assert_eq!(coupling.equal_mass(&conn), ratio(1, 2));
        for (i, m) in conn.marginals().iter().enumerate() {
            let got = coupling.joint().marginal(&conn.variables()[i..=i]).unwrap();
            assert!(got.same_law(m));
        }
    }

    /// LP oracle: maximize the diagonal mass over the transportation
    /// polytope of the connection's marginals.
    fn lp_maximal_value(conn: &Connection) -> Rational {
        let card = conn.card();
        let k = conn.variables().len();
        let tuples = product_tuples(&vec![card; k]);
        let mut lp = LinearProgram::new(tuples.len());
        for (i, m) in conn.marginals().iter().enumerate() {
            for v in 0..card {
                let row: Vec<Rational> = tuples
                    .iter()
                    .map(|t| if t[i] == v { Rational::one() } else { Rational::zero() })
                    .collect();
                lp.add_equality(row, m.prob(&[v]));
            }
        }
        let obj: Vec<Rational> = tuples
            .iter()
            .map(|t| {
                if t.iter().all(|&x| x == t[0]) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        lp.maximize(obj);
        match lp.solve().unwrap() {
            LpResult::Feasible { optimum, .. } => optimum.unwrap(),
            other => panic!("transportation LP must be feasible, got {other:?}"),
        }
    }

    #[test]
    fn closed_form_matches_lp_oracle_on_binary_pair() {
        let system = pair_connection_system(ratio(3, 4), ratio(1, 4));
        let conn = only_connection(&system);
        assert_eq!(maximal_coupling_value(&conn), lp_maximal_value(&conn));
    }

    #[test]
    fn closed_form_matches_lp_oracle_on_three_variable_connection() {
        // One content measured in three single-content contexts.
        let probs = [ratio(1, 3), ratio(1, 2), ratio(5, 6)];
        let dists: Vec<Distribution> = probs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                Distribution::new(
                    vec![var("Q", &format!("c{i}"))],
                    vec![2],
                    vec![(vec![0], p.clone()), (vec![1], Rational::one() - p)],
                )
                .unwrap()
            })
            .collect();
        let system = System::new(
            vec![(ContentId::new("Q"), OutcomeSpace::binary01())],
            (0..3).map(|i| Context::new(format!("c{i}"), ["Q"])).collect(),
            dists
                .into_iter()
                .enumerate()
                .map(|(i, d)| Bunch::new(format!("c{i}"), d))
                .collect(),
        )
        .unwrap();
        let conn = only_connection(&system);
        // min over the three at each value: min(1/3,1/2,5/6) + min(2/3,1/2,1/6) = 1/3 + 1/6 = 1/2.
        assert_eq!(maximal_coupling_value(&conn), ratio(1, 2));
        assert_eq!(lp_maximal_value(&conn), ratio(1, 2));
        let coupling = maximal_coupling(&conn);
        assert_eq!(coupling.equal_mass(&conn), ratio(1, 2));
        for (i, m) in conn.marginals().iter().enumerate() {
            let got = coupling.joint().marginal(&conn.variables()[i..=i]).unwrap();
            assert!(got.same_law(m), "marginal {i} mismatch");
        }
    }

    #[test]
    fn consistently_connected_pair_reports_no_violation() {
        let system = pair_connection_system(ratio(1, 3), ratio(1, 3));
        let report = is_consistently_connected(&system);
        assert!(report.consistent);
        assert!(report.violation.is_none());
    }

    #[test]
    fn first_violation_names_content_contexts_and_value() {
        let system = pair_connection_system(ratio(1, 2), ratio(1, 4));
        let report = is_consistently_connected(&system);
        assert!(!report.consistent);
        let v = report.violation.unwrap();
        assert_eq!(v.content, ContentId::new("Q"));
        assert_eq!(v.context_a, ContextId::new("c1"));
        assert_eq!(v.context_b, ContextId::new("c2"));
        assert_eq!(v.value, "0");
        assert_eq!(v.prob_a, ratio(1, 2));
        assert_eq!(v.prob_b, ratio(1, 4));
    }

    #[test]
    fn single_context_system_is_vacuously_consistent() {
        let joint = Distribution::new(
            vec![var("M1", "c"), var("M2", "c")],
            vec![2, 2],
            vec![(vec![0, 1], ratio(1, 2)), (vec![1, 0], ratio(1, 2))],
        )
        .unwrap();
        let system = System::new(
            vec![
                (ContentId::new("M1"), OutcomeSpace::binary01()),
                (ContentId::new("M2"), OutcomeSpace::binary01()),
            ],
            vec![Context::new("c", ["M1", "M2"])],
            vec![Bunch::new("c", joint)],
        )
        .unwrap();
        assert!(is_consistently_connected(&system).consistent);
        assert!(nonsignaling_report(&system).is_empty());
        // No connections: the coupling LP reduces to "reproduce the bunch".
        let verdict = cbd_contextuality(&system).unwrap();
        assert!(!verdict.contextual);
        assert!(verdict.witness.unwrap().reproduces_bunches(&system));
    }

    #[test]
    fn maximality_subsets_are_monotone() {
        // Dropping constraints can only move Infeasible -> Feasible.
        let system = crate::scenarios::specker_system();
        let contents: Vec<ContentId> =
            system.connections().iter().map(|c| c.content().clone()).collect();
        let subsets: Vec<(u32, bool)> = (0u32..8)
            .map(|mask| {
                let subset: BTreeSet<ContentId> = contents
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, q)| q.clone())
                    .collect();
                (mask, connected_coupling(&system, &subset).unwrap().is_some())
            })
            .collect();
        for &(small, _) in &subsets {
            for &(large, large_feasible) in &subsets {
                if small & large == small && large_feasible {
                    let small_feasible = subsets[small as usize].1;
                    assert!(small_feasible, "subset {small:b} of {large:b} must stay feasible");
                }
            }
        }
        // For this system, exactly the full constraint set is infeasible.
        for &(mask, feasible) in &subsets {
            assert_eq!(feasible, mask != 0b111, "subset {mask:b}");
        }
    }

    #[test]
    fn inconsistent_pair_still_gets_a_verdict() {
        // Two contexts, unequal marginals: maximality forces agreement
        // mass 1/2, which a coupling can realize.
        let system = pair_connection_system(ratio(3, 4), ratio(1, 4));
        let verdict = cbd_contextuality(&system).unwrap();
        assert_eq!(verdict.per_connection_max[&ContentId::new("Q")], ratio(1, 2));
        assert!(!verdict.contextual);
        let witness = verdict.witness.unwrap();
        assert!(witness.reproduces_bunches(&system));
        assert_eq!(witness.equal_mass(&only_connection(&system)), ratio(1, 2));
    }
}
