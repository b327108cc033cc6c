//! Deterministic hidden-variable model searches.
//!
//! Both checks enumerate deterministic value assignments and ask, by exact
//! LP feasibility, for nonnegative weights over them that reproduce every
//! bunch:
//!
//! * [`fine_model`] keys assignments by **content** — one value per
//!   observable regardless of context (for a 2x2 Bell system these are the
//!   sixteen quadruples).
//! * [`octuple_model`] keys assignments by **variable** — one value per
//!   (content, context) pair (256 octuples for Bell) — and additionally
//!   requires each connection's components to agree with exactly the
//!   maximal-coupling probability, making it the deterministic rendering
//!   of the coupling-feasibility criterion.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::coupling::maximal_coupling_value;
use crate::lp::{LinearProgram, LpResult};
use crate::model::{product_tuples, Connection, ContentId, ContextId, Distribution, System, VariableId};
use crate::rational::Rational;

/// How deterministic assignments are keyed.
pub trait AssignmentKey: Ord + Clone {
    fn for_variable(variable: &VariableId) -> Self;
    /// The content whose outcome space the key's values live in.
    fn content(&self) -> &ContentId;
}

impl AssignmentKey for ContentId {
    fn for_variable(variable: &VariableId) -> Self {
        variable.content.clone()
    }
    fn content(&self) -> &ContentId {
        self
    }
}

impl AssignmentKey for VariableId {
    fn for_variable(variable: &VariableId) -> Self {
        variable.clone()
    }
    fn content(&self) -> &ContentId {
        &self.content
    }
}

/// A mixture over the full enumeration of deterministic assignments.
///
/// `assignments[i][k]` is the value index assigned to `keys[k]` by the
/// i-th assignment; `weights[i]` its probability.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HiddenVariableModel<K> {
    keys: Vec<K>,
    assignments: Vec<Vec<usize>>,
    weights: Vec<Rational>,
}

/// Outcome of a hidden-variable search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HvVerdict<K> {
    Feasible(HiddenVariableModel<K>),
    Infeasible,
}

impl<K> HvVerdict<K> {
    pub fn is_feasible(&self) -> bool {
        matches!(self, HvVerdict::Feasible(_))
    }

    pub fn model(&self) -> Option<&HiddenVariableModel<K>> {
        match self {
            HvVerdict::Feasible(m) => Some(m),
            HvVerdict::Infeasible => None,
        }
    }
}

impl<K: AssignmentKey> HiddenVariableModel<K> {
    /// Assignment keys in enumeration order.
    pub fn keys(&self) -> &[K] {
        &self.keys
    }

    /// Assignments carrying nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.assignments
            .iter()
            .zip(&self.weights)
            .filter(|(_, w)| !w.is_zero())
    }

    fn key_position(&self, variable: &VariableId) -> usize {
        let key = K::for_variable(variable);
        self.keys
            .binary_search(&key)
            .expect("every system variable maps to an enumerated key")
    }

    /// The context statistics this model induces: each assignment
    /// contributes its weight to the outcome it determines.
    pub fn induced_bunch(&self, system: &System, context: &ContextId) -> Distribution {
        let members = system.members(context).expect("known context");
        let vars: Vec<VariableId> = members
            .iter()
            .map(|q| VariableId { content: q.clone(), context: context.clone() })
            .collect();
        let positions: Vec<usize> = vars.iter().map(|v| self.key_position(v)).collect();
        let cards: Vec<usize> =
            members.iter().map(|q| system.space(q).expect("known content").len()).collect();
        let mut probs: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (assignment, weight) in self.support() {
            let outcome: Vec<usize> = positions.iter().map(|&p| assignment[p]).collect();
            *probs.entry(outcome).or_insert_with(Rational::zero) += weight;
        }
        Distribution::new(vars, cards, probs).expect("weights sum to 1")
    }

    /// Exact re-verification: does every induced bunch match the system's?
    pub fn reproduces_bunches(&self, system: &System) -> bool {
        system.contexts().all(|(context, _)| {
            let bunch = system.bunch(context).expect("validated system");
            self.induced_bunch(system, context).same_law(bunch.joint())
        })
    }

    /// Weight of assignments on which all of the connection's components
    /// agree.
    pub fn connection_equal_mass(&self, connection: &Connection) -> Rational {
        let positions: Vec<usize> =
            connection.variables().iter().map(|v| self.key_position(v)).collect();
        self.support()
            .filter(|(assignment, _)| {
                let first = assignment[positions[0]];
                positions[1..].iter().all(|&p| assignment[p] == first)
            })
            .map(|(_, w)| w.clone())
            .sum()
    }
}

fn search<K: AssignmentKey>(system: &System, impose_maximality: bool) -> HvVerdict<K> {
    // Enumerate keys (sorted, deduplicated) and their cardinalities.
    let mut keyed: BTreeMap<K, usize> = BTreeMap::new();
    for v in system.variables() {
        let card = system.space(&v.content).expect("known content").len();
        keyed.insert(K::for_variable(&v), card);
    }
    let keys: Vec<K> = keyed.keys().cloned().collect();
    let cards: Vec<usize> = keyed.values().copied().collect();
    let assignments = product_tuples(&cards);

    let key_pos = |variable: &VariableId| -> usize {
        keys.binary_search(&K::for_variable(variable)).expect("enumerated key")
    };

    let mut lp = LinearProgram::new(assignments.len());

    // One equality per context outcome: consistent assignments carry the
    // bunch probability.
    for (context, members) in system.contexts() {
        let bunch = system.bunch(context).expect("validated system");
        let positions: Vec<usize> = members
            .iter()
            .map(|q| key_pos(&VariableId { content: q.clone(), context: context.clone() }))
            .collect();
        let member_cards: Vec<usize> =
            members.iter().map(|q| system.space(q).unwrap().len()).collect();
        let mut rows: BTreeMap<Vec<usize>, Vec<Rational>> = product_tuples(&member_cards)
            .into_iter()
            .map(|t| (t, vec![Rational::zero(); assignments.len()]))
            .collect();
        for (i, assignment) in assignments.iter().enumerate() {
            let outcome: Vec<usize> = positions.iter().map(|&p| assignment[p]).collect();
            rows.get_mut(&outcome).expect("outcome in range")[i] = Rational::from_integer(1.into());
        }
        for (outcome, row) in rows {
            lp.add_equality(row, bunch.joint().prob(&outcome));
        }
    }

    if impose_maximality {
        for conn in system.connections() {
            let positions: Vec<usize> = conn.variables().iter().map(&key_pos).collect();
            let row: Vec<Rational> = assignments
                .iter()
                .map(|a| {
                    let first = a[positions[0]];
                    if positions[1..].iter().all(|&p| a[p] == first) {
                        Rational::from_integer(1.into())
                    } else {
                        Rational::zero()
                    }
                })
                .collect();
            lp.add_equality(row, maximal_coupling_value(&conn));
        }
    }

    match lp.solve().expect("rows built with LP dimensions") {
        LpResult::Infeasible => HvVerdict::Infeasible,
        LpResult::Feasible { witness, .. } => {
            HvVerdict::Feasible(HiddenVariableModel { keys, assignments, weights: witness })
        }
        LpResult::Unbounded => unreachable!("feasibility problem has no objective"),
    }
}

/// Content-keyed deterministic model: weights over one-value-per-content
/// assignments reproducing every bunch.
pub fn fine_model(system: &System) -> HvVerdict<ContentId> {
    search(system, false)
}

/// Variable-keyed deterministic model with per-connection maximality:
/// weights over one-value-per-variable assignments reproducing every bunch
/// and giving each connection exactly its maximal agreement probability.
pub fn octuple_model(system: &System) -> HvVerdict<VariableId> {
    search(system, true)
}

/// [`octuple_model`] without the maximality constraints. Always feasible
/// for valid systems: the product of the bunch distributions is a witness.
pub fn octuple_model_unconstrained(system: &System) -> HvVerdict<VariableId> {
    search(system, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::scenarios::{
        bell_system, correlated_table, leggett_garg_system, pr_box_params, specker_system,
        uniform_bell_params,
    };

    fn correlated_bell_params() -> [Rational; 16] {
        let c = correlated_table();
        let mut p: Vec<Rational> = Vec::with_capacity(16);
        p.extend([c[0].clone(), c[1].clone(), c[0].clone(), c[1].clone()]);
        p.extend([c[2].clone(), c[3].clone(), c[2].clone(), c[3].clone()]);
        p.extend([c[0].clone(), c[1].clone(), c[0].clone(), c[1].clone()]);
        p.extend([c[2].clone(), c[3].clone(), c[2].clone(), c[3].clone()]);
        p.try_into().unwrap()
    }

    #[test]
    fn fully_correlated_bell_has_fine_model() {
        let system = bell_system(&correlated_bell_params()).unwrap();
        let verdict = fine_model(&system);
        let model = verdict.model().expect("classical correlations are reproducible");
        assert_eq!(model.keys().len(), 4);
        assert_eq!(model.assignments.len(), 16);
        assert!(model.reproduces_bunches(&system));
        // Only the all-equal quadruples can carry weight.
        for (assignment, weight) in model.support() {
            assert!(assignment.iter().all(|&v| v == assignment[0]), "{assignment:?} has {weight}");
        }
    }

    /// Brute-force oracle for perfect-correlation patterns: a content-keyed
    /// assignment can carry weight only if it lies in the support of every
    /// bunch, so if no assignment survives, the model is infeasible.
    fn surviving_content_assignments(system: &System) -> usize {
        let contents: Vec<ContentId> = system.contents().map(|(q, _)| q.clone()).collect();
        let cards: Vec<usize> = system.contents().map(|(_, s)| s.len()).collect();
        product_tuples(&cards)
            .into_iter()
            .filter(|assignment| {
                system.contexts().all(|(context, members)| {
                    let outcome: Vec<usize> = members
                        .iter()
                        .map(|q| {
                            let k = contents.iter().position(|c| c == q).unwrap();
                            assignment[k]
                        })
                        .collect();
                    !system.bunch(context).unwrap().joint().prob(&outcome).is_zero()
                })
            })
            .count()
    }

    #[test]
    fn pr_box_has_no_fine_model() {
        let system = bell_system(&pr_box_params()).unwrap();
        assert_eq!(surviving_content_assignments(&system), 0);
        assert!(!fine_model(&system).is_feasible());
    }

    #[test]
    fn pr_box_has_no_octuple_model() {
        let system = bell_system(&pr_box_params()).unwrap();
        assert!(!octuple_model(&system).is_feasible());
        // Dropping maximality restores feasibility.
        assert!(octuple_model_unconstrained(&system).is_feasible());
    }

    #[test]
    fn specker_triple_is_infeasible_both_ways() {
        let system = specker_system();
        // Content-keyed: the three pairwise anti-correlations cannot all
        // hold for binary values; the oracle confirms no triple survives.
        assert_eq!(surviving_content_assignments(&system), 0);
        assert!(!fine_model(&system).is_feasible());
        assert!(!octuple_model(&system).is_feasible());
    }

    #[test]
    fn correlated_rank3_has_an_octuple_model() {
        let tables = [correlated_table(), correlated_table(), correlated_table()];
        let system = leggett_garg_system(&tables).unwrap();
        let verdict = octuple_model(&system);
        let model = verdict.model().expect("all-equal mixture exists");
        assert_eq!(model.assignments.len(), 64);
        assert!(model.reproduces_bunches(&system));
        for conn in system.connections() {
            assert_eq!(model.connection_equal_mass(&conn), ratio(1, 1));
        }
    }

    #[test]
    fn unconstrained_search_feasible_on_random_systems() {
        // Without maximality rows, any valid system is reproducible (the
        // product of its bunches is always a witness).
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut random_table = || -> [Rational; 4] {
            loop {
                let w: [u32; 4] = std::array::from_fn(|_| rng.gen_range(0..8));
                let total: u32 = w.iter().sum();
                if total > 0 {
                    return std::array::from_fn(|i| ratio(w[i] as i64, total as i64));
                }
            }
        };
        for _ in 0..20 {
            let tables = [random_table(), random_table(), random_table()];
            let system = leggett_garg_system(&tables).unwrap();
            let verdict = octuple_model_unconstrained(&system);
            let model = verdict.model().expect("bunch reproduction alone is always satisfiable");
            assert!(model.reproduces_bunches(&system));
        }
    }

    #[test]
    fn uniform_bell_feasible_with_product_structure() {
        let system = bell_system(&uniform_bell_params()).unwrap();
        assert!(fine_model(&system).is_feasible());
        let verdict = octuple_model(&system);
        assert!(verdict.is_feasible());
        assert!(verdict.model().unwrap().reproduces_bunches(&system));
    }
}
