//! Domain model: contents, contexts, context-indexed random variables,
//! exact joint distributions, bunches, connections, and whole systems.
//!
//! A *content* is the property being measured; a *context* is the set of
//! contents measured together in one arrangement. Each (content, context)
//! pair is its own random variable. The variables sharing a context form a
//! *bunch* (one joint distribution per context); the variables sharing a
//! content across contexts form a *connection*. A [`System`] owns one bunch
//! per context and derives its connections on demand.
//!
//! All probabilities are exact rationals and every invariant is checked at
//! construction, so downstream feasibility verdicts never depend on
//! tolerances.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

/// Identifier of a measured property (observable).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentId(String);

/// Identifier of a measurement context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextId(String);

macro_rules! id_impls {
    ($ty:ident) => {
        impl $ty {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }
            pub fn as_str(&self) -> &str {
                &self.0
            }
        }
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }
        impl From<&str> for $ty {
            fn from(s: &str) -> Self {
                Self(s.to_owned())
            }
        }
        impl From<String> for $ty {
            fn from(s: String) -> Self {
                Self(s)
            }
        }
    };
}
id_impls!(ContentId);
id_impls!(ContextId);

/// A random variable: one content as measured in one context.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VariableId {
    pub content: ContentId,
    pub context: ContextId,
}

impl VariableId {
    pub fn new(content: impl Into<ContentId>, context: impl Into<ContextId>) -> Self {
        Self { content: content.into(), context: context.into() }
    }
}

impl fmt::Display for VariableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.content, self.context)
    }
}

/// The finite value set of a content, shared by all of its variables.
///
/// Values are opaque labels with a declared order. Numeric readings (such
/// as ±1) are an optional annotation; nothing in the model assumes them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeSpace {
    values: Vec<String>,
    numeric: Option<Vec<i64>>,
}

impl OutcomeSpace {
    pub fn new(values: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Self { values: values.into_iter().map(Into::into).collect(), numeric: None }
    }

    /// Attaches a numeric reading to each value, in declaration order.
    pub fn with_numeric(mut self, numeric: impl IntoIterator<Item = i64>) -> Self {
        self.numeric = Some(numeric.into_iter().collect());
        self
    }

    /// Binary `{0, 1}` space.
    pub fn binary01() -> Self {
        Self::new(["0", "1"])
    }

    /// Binary `{+1, -1}` space with the literal numeric annotation.
    pub fn plus_minus() -> Self {
        Self::new(["+1", "-1"]).with_numeric([1, -1])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[String] {
        &self.values
    }

    pub fn numeric(&self) -> Option<&[i64]> {
        self.numeric.as_deref()
    }

    pub fn label(&self, index: usize) -> &str {
        &self.values[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.values.iter().position(|v| v == label)
    }

    /// The index playing the role of "the opposite value" in
    /// anti-correlation conditions: numeric negation when an annotation is
    /// present, positional complement otherwise.
    pub fn opposite(&self, index: usize) -> Option<usize> {
        match &self.numeric {
            Some(nums) => {
                let target = -nums[index];
                nums.iter().position(|&n| n == target)
            }
            None => Some(self.values.len() - 1 - index),
        }
    }

    fn validate(&self, content: &ContentId) -> Result<(), ModelError> {
        if self.values.len() < 2 {
            return Err(ModelError::BadOutcomeSpace {
                content: content.clone(),
                details: "needs at least 2 values".into(),
            });
        }
        let mut seen = BTreeSet::new();
        for v in &self.values {
            if !seen.insert(v) {
                return Err(ModelError::BadOutcomeSpace {
                    content: content.clone(),
                    details: format!("duplicate value `{v}`"),
                });
            }
        }
        if let Some(nums) = &self.numeric {
            if nums.len() != self.values.len() {
                return Err(ModelError::BadOutcomeSpace {
                    content: content.clone(),
                    details: "numeric annotation length differs from value count".into(),
                });
            }
            let mut seen = BTreeSet::new();
            for n in nums {
                if !seen.insert(n) {
                    return Err(ModelError::BadOutcomeSpace {
                        content: content.clone(),
                        details: format!("duplicate numeric annotation {n}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// A measurement context: an identifier plus its member contents.
///
/// Members are a set (no content twice), but their declaration order fixes
/// the column order of the context's bunch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Context {
    pub id: ContextId,
    pub members: Vec<ContentId>,
}

impl Context {
    pub fn new(
        id: impl Into<ContextId>,
        members: impl IntoIterator<Item = impl Into<ContentId>>,
    ) -> Self {
        Self { id: id.into(), members: members.into_iter().map(Into::into).collect() }
    }
}

/// An exact joint distribution over an ordered list of variables.
///
/// Outcomes are stored as index tuples into each variable's outcome space;
/// explicit zero entries are dropped, so two distributions describe the
/// same law iff their stored supports are equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    variables: Vec<VariableId>,
    cards: Vec<usize>,
    probs: BTreeMap<Vec<usize>, Rational>,
}

impl Distribution {
    /// Builds and validates a distribution from `(outcome tuple, probability)`
    /// entries. Probabilities must be nonnegative and sum to exactly 1.
    pub fn new(
        variables: Vec<VariableId>,
        cards: Vec<usize>,
        entries: impl IntoIterator<Item = (Vec<usize>, Rational)>,
    ) -> Result<Self, ModelError> {
        if variables.is_empty() {
            return Err(ModelError::MalformedDistribution("no variables".into()));
        }
        if variables.len() != cards.len() {
            return Err(ModelError::MalformedDistribution(format!(
                "{} variables but {} cardinalities",
                variables.len(),
                cards.len()
            )));
        }
        let distinct: BTreeSet<_> = variables.iter().collect();
        if distinct.len() != variables.len() {
            return Err(ModelError::MalformedDistribution("duplicate variable".into()));
        }
        let mut probs = BTreeMap::new();
        let mut total = Rational::zero();
        for (tuple, p) in entries {
            if tuple.len() != cards.len() {
                return Err(ModelError::MalformedDistribution(format!(
                    "outcome tuple {tuple:?} has arity {}, expected {}",
                    tuple.len(),
                    cards.len()
                )));
            }
            for (i, &v) in tuple.iter().enumerate() {
                if v >= cards[i] {
                    return Err(ModelError::MalformedDistribution(format!(
                        "outcome index {v} out of range for variable {}",
                        variables[i]
                    )));
                }
            }
            if p.is_negative() {
                return Err(ModelError::MalformedDistribution(format!(
                    "negative probability {} for {tuple:?}",
                    format_rational(&p)
                )));
            }
            total += &p;
            if !p.is_zero() && probs.insert(tuple.clone(), p).is_some() {
                return Err(ModelError::MalformedDistribution(format!(
                    "duplicate outcome tuple {tuple:?}"
                )));
            }
        }
        if !total.is_one() {
            return Err(ModelError::MalformedDistribution(format!(
                "probabilities sum to {}, expected 1",
                format_rational(&total)
            )));
        }
        Ok(Self { variables, cards, probs })
    }

    pub fn variables(&self) -> &[VariableId] {
        &self.variables
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    /// Probability of one outcome tuple (0 when outside the support).
    pub fn prob(&self, tuple: &[usize]) -> Rational {
        self.probs.get(tuple).cloned().unwrap_or_else(Rational::zero)
    }

    /// Nonzero entries in lexicographic tuple order.
    pub fn support(&self) -> impl Iterator<Item = (&Vec<usize>, &Rational)> {
        self.probs.iter()
    }

    /// Marginalizes onto `keep`, summing out every other variable. The
    /// result's variable order follows `keep`.
    pub fn marginal(&self, keep: &[VariableId]) -> Result<Distribution, ModelError> {
        if keep.is_empty() {
            return Err(ModelError::MalformedDistribution(
                "cannot marginalize onto an empty variable set".into(),
            ));
        }
        let positions: Vec<usize> = keep
            .iter()
            .map(|v| {
                self.variables
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| ModelError::UnknownVariable(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let distinct: BTreeSet<_> = positions.iter().collect();
        if distinct.len() != positions.len() {
            return Err(ModelError::MalformedDistribution(
                "duplicate variable in marginal set".into(),
            ));
        }
        let mut probs: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (tuple, p) in &self.probs {
            let projected: Vec<usize> = positions.iter().map(|&i| tuple[i]).collect();
            *probs.entry(projected).or_insert_with(Rational::zero) += p;
        }
        Ok(Distribution {
            variables: keep.to_vec(),
            cards: positions.iter().map(|&i| self.cards[i]).collect(),
            probs,
        })
    }

    /// Whether two distributions define the same law, comparing value by
    /// value and ignoring variable identity.
    pub fn same_law(&self, other: &Distribution) -> bool {
        self.cards == other.cards && self.probs == other.probs
    }
}

/// The jointly distributed variables of one context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bunch {
    context: ContextId,
    joint: Distribution,
}

impl Bunch {
    pub fn new(context: impl Into<ContextId>, joint: Distribution) -> Self {
        Self { context: context.into(), joint }
    }

    pub fn context(&self) -> &ContextId {
        &self.context
    }

    pub fn joint(&self) -> &Distribution {
        &self.joint
    }
}

/// The variables of one content across the contexts measuring it, with
/// their per-variable marginal distributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    content: ContentId,
    variables: Vec<VariableId>,
    marginals: Vec<Distribution>,
}

impl Connection {
    pub fn content(&self) -> &ContentId {
        &self.content
    }

    /// Member variables, sorted by context id. Always at least two.
    pub fn variables(&self) -> &[VariableId] {
        &self.variables
    }

    /// Univariate marginals, parallel to [`Connection::variables`].
    pub fn marginals(&self) -> &[Distribution] {
        &self.marginals
    }

    /// Cardinality of the shared outcome space.
    pub fn card(&self) -> usize {
        self.marginals[0].cards()[0]
    }
}

/// A complete system: contents with their outcome spaces, contexts, and one
/// bunch per context. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct System {
    contents: BTreeMap<ContentId, OutcomeSpace>,
    contexts: BTreeMap<ContextId, Vec<ContentId>>,
    bunches: BTreeMap<ContextId, Bunch>,
}

impl System {
    /// Validates and assembles a system.
    ///
    /// Checks performed: unique content/context ids, well-formed outcome
    /// spaces, non-empty duplicate-free context members over known
    /// contents, every content measured somewhere, exactly one bunch per
    /// context, and each bunch jointly distributed over exactly its
    /// context's variables in member order.
    pub fn new(
        contents: Vec<(ContentId, OutcomeSpace)>,
        contexts: Vec<Context>,
        bunches: Vec<Bunch>,
    ) -> Result<Self, ModelError> {
        let mut content_map = BTreeMap::new();
        for (id, space) in contents {
            space.validate(&id)?;
            if content_map.insert(id.clone(), space).is_some() {
                return Err(ModelError::DuplicateContent(id));
            }
        }

        let mut context_map = BTreeMap::new();
        let mut used: BTreeSet<ContentId> = BTreeSet::new();
        for Context { id, members } in contexts {
            if members.is_empty() {
                return Err(ModelError::EmptyContext(id));
            }
            let mut seen = BTreeSet::new();
            for q in &members {
                if !content_map.contains_key(q) {
                    return Err(ModelError::UnknownContent(q.clone()));
                }
                if !seen.insert(q.clone()) {
                    return Err(ModelError::DuplicateMember {
                        context: id.clone(),
                        content: q.clone(),
                    });
                }
                used.insert(q.clone());
            }
            if context_map.insert(id.clone(), members).is_some() {
                return Err(ModelError::DuplicateContext(id));
            }
        }

        for q in content_map.keys() {
            if !used.contains(q) {
                return Err(ModelError::UnusedContent(q.clone()));
            }
        }

        let mut bunch_map = BTreeMap::new();
        for bunch in bunches {
            let context = bunch.context().clone();
            let members = context_map.get(&context).ok_or_else(|| ModelError::ContextMismatch {
                context: context.clone(),
                details: "no such context".into(),
            })?;
            let expected: Vec<VariableId> = members
                .iter()
                .map(|q| VariableId { content: q.clone(), context: context.clone() })
                .collect();
            if bunch.joint().variables() != expected.as_slice() {
                return Err(ModelError::ContextMismatch {
                    context: context.clone(),
                    details: format!(
                        "bunch variables {:?} do not match context members {:?}",
                        bunch.joint().variables().iter().map(ToString::to_string).collect::<Vec<_>>(),
                        expected.iter().map(ToString::to_string).collect::<Vec<_>>()
                    ),
                });
            }
            let expected_cards: Vec<usize> =
                members.iter().map(|q| content_map[q].len()).collect();
            if bunch.joint().cards() != expected_cards.as_slice() {
                return Err(ModelError::ContextMismatch {
                    context: context.clone(),
                    details: "bunch cardinalities do not match the members' outcome spaces".into(),
                });
            }
            if bunch_map.insert(context.clone(), bunch).is_some() {
                return Err(ModelError::DuplicateBunch(context));
            }
        }
        for c in context_map.keys() {
            if !bunch_map.contains_key(c) {
                return Err(ModelError::MissingBunch(c.clone()));
            }
        }

        Ok(Self { contents: content_map, contexts: context_map, bunches: bunch_map })
    }

    /// Contents with their outcome spaces, sorted by id.
    pub fn contents(&self) -> impl Iterator<Item = (&ContentId, &OutcomeSpace)> {
        self.contents.iter()
    }

    pub fn space(&self, content: &ContentId) -> Option<&OutcomeSpace> {
        self.contents.get(content)
    }

    /// Contexts with their members, sorted by context id.
    pub fn contexts(&self) -> impl Iterator<Item = (&ContextId, &[ContentId])> {
        self.contexts.iter().map(|(c, m)| (c, m.as_slice()))
    }

    pub fn members(&self, context: &ContextId) -> Option<&[ContentId]> {
        self.contexts.get(context).map(Vec::as_slice)
    }

    pub fn bunch(&self, context: &ContextId) -> Option<&Bunch> {
        self.bunches.get(context)
    }

    /// Bunches in context-id order.
    pub fn bunches(&self) -> impl Iterator<Item = &Bunch> {
        self.bunches.values()
    }

    /// Every variable of the system, sorted by (content, context).
    pub fn variables(&self) -> Vec<VariableId> {
        let mut vars: Vec<VariableId> = self
            .contexts
            .iter()
            .flat_map(|(c, members)| {
                members
                    .iter()
                    .map(|q| VariableId { content: q.clone(), context: c.clone() })
            })
            .collect();
        vars.sort();
        vars
    }

    /// One connection per content measured in two or more contexts, sorted
    /// by content id; contents measured once yield none.
    pub fn connections(&self) -> Vec<Connection> {
        let mut by_content: BTreeMap<&ContentId, Vec<&ContextId>> = BTreeMap::new();
        for (c, members) in &self.contexts {
            for q in members {
                by_content.entry(q).or_default().push(c);
            }
        }
        by_content
            .into_iter()
            .filter(|(_, contexts)| contexts.len() >= 2)
            .map(|(q, mut contexts)| {
                contexts.sort();
                let variables: Vec<VariableId> = contexts
                    .iter()
                    .map(|&c| VariableId { content: q.clone(), context: c.clone() })
                    .collect();
                let marginals = variables
                    .iter()
                    .map(|v| {
                        self.bunches[&v.context]
                            .joint()
                            .marginal(std::slice::from_ref(v))
                            .expect("bunch contains its own variable")
                    })
                    .collect();
                Connection { content: q.clone(), variables, marginals }
            })
            .collect()
    }
}

/// Enumerates all index tuples over the given cardinalities in
/// lexicographic order (first position most significant).
pub(crate) fn product_tuples(cards: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = cards.iter().product();
    let mut out = Vec::with_capacity(total);
    let mut tuple = vec![0usize; cards.len()];
    for _ in 0..total {
        out.push(tuple.clone());
        for i in (0..cards.len()).rev() {
            tuple[i] += 1;
            if tuple[i] < cards[i] {
                break;
            }
            tuple[i] = 0;
        }
    }
    out
}

/// Validation and lookup errors for the domain model.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed distribution: {0}")]
    MalformedDistribution(String),
    #[error("unknown content `{0}`")]
    UnknownContent(ContentId),
    #[error("bunch/context mismatch for `{context}`: {details}")]
    ContextMismatch { context: ContextId, details: String },
    #[error("duplicate bunch for context `{0}`")]
    DuplicateBunch(ContextId),
    #[error("unknown variable `{0}`")]
    UnknownVariable(VariableId),
    #[error("duplicate content `{0}`")]
    DuplicateContent(ContentId),
    #[error("duplicate context `{0}`")]
    DuplicateContext(ContextId),
    #[error("context `{0}` has no members")]
    EmptyContext(ContextId),
    #[error("content `{content}` listed twice in context `{context}`")]
    DuplicateMember { context: ContextId, content: ContentId },
    #[error("invalid outcome space for `{content}`: {details}")]
    BadOutcomeSpace { content: ContentId, details: String },
    #[error("context `{0}` has no bunch")]
    MissingBunch(ContextId),
    #[error("content `{0}` appears in no context")]
    UnusedContent(ContentId),
}
