//! Structured analysis reports with stable JSON serialization.
//!
//! Field order is fixed by the struct declarations and every probability
//! is a rational string, so serialized reports are byte-stable across runs
//! and re-parse to the same verdicts.

use serde::{Deserialize, Serialize};

use crate::coupling::{
    cbd_contextuality, is_consistently_connected, maximal_coupling_value, nonsignaling_report,
    Coupling, MarginalComparison,
};
use crate::hidden::{fine_model, octuple_model, AssignmentKey, HiddenVariableModel, HvVerdict};
use crate::model::System;
use crate::rational::format_rational;

/// Which analyses [`run_checks`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckOptions {
    pub nonsignaling: bool,
    pub cbd: bool,
    pub fine: bool,
    pub octuple: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { nonsignaling: true, cbd: true, fine: true, octuple: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub source: String,
    pub consistent_connectedness: ConnectednessSection,
    pub connections: Vec<ConnectionSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonsignaling: Option<Vec<ComparisonEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cbd: Option<CbdSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fine: Option<HiddenVariableSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub octuple: Option<HiddenVariableSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectednessSection {
    pub consistent: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub violation: Option<ComparisonEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub content: String,
    pub context_a: String,
    pub context_b: String,
    pub value: String,
    pub prob_a: String,
    pub prob_b: String,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionSection {
    pub content: String,
    pub contexts: Vec<String>,
    pub maximal_coupling_value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CbdSection {
    pub contextual: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<DistributionSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenVariableSection {
    pub feasible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<DistributionSection>,
}

/// A joint distribution (or assignment mixture) written with value labels
/// and rational strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistributionSection {
    pub variables: Vec<String>,
    pub support: Vec<SupportEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupportEntry {
    pub outcomes: Vec<String>,
    pub probability: String,
}

fn comparison_entry(c: &MarginalComparison) -> ComparisonEntry {
    ComparisonEntry {
        content: c.content.to_string(),
        context_a: c.context_a.to_string(),
        context_b: c.context_b.to_string(),
        value: c.value.clone(),
        prob_a: format_rational(&c.prob_a),
        prob_b: format_rational(&c.prob_b),
        equal: c.equal(),
    }
}

fn coupling_section(system: &System, coupling: &Coupling) -> DistributionSection {
    let labels: Vec<&crate::model::OutcomeSpace> = coupling
        .variables()
        .iter()
        .map(|v| system.space(&v.content).expect("validated system"))
        .collect();
    DistributionSection {
        variables: coupling.variables().iter().map(ToString::to_string).collect(),
        support: coupling
            .joint()
            .support()
            .map(|(tuple, p)| SupportEntry {
                outcomes: tuple
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| labels[k].label(v).to_owned())
                    .collect(),
                probability: format_rational(p),
            })
            .collect(),
    }
}

fn model_section<K>(system: &System, model: &HiddenVariableModel<K>) -> DistributionSection
where
    K: AssignmentKey + ToString,
{
    let spaces: Vec<&crate::model::OutcomeSpace> = model
        .keys()
        .iter()
        .map(|k| system.space(k.content()).expect("validated system"))
        .collect();
    DistributionSection {
        variables: model.keys().iter().map(ToString::to_string).collect(),
        support: model
            .support()
            .map(|(assignment, w)| SupportEntry {
                outcomes: assignment
                    .iter()
                    .enumerate()
                    .map(|(k, &v)| spaces[k].label(v).to_owned())
                    .collect(),
                probability: format_rational(w),
            })
            .collect(),
    }
}

/// Runs the selected analyses and assembles the report. Consistent
/// connectedness and per-connection maximal values are always included.
pub fn run_checks(system: &System, source: &str, options: &CheckOptions) -> Report {
    let connectedness = is_consistently_connected(system);
    let connections = system
        .connections()
        .iter()
        .map(|conn| ConnectionSection {
            content: conn.content().to_string(),
            contexts: conn.variables().iter().map(|v| v.context.to_string()).collect(),
            maximal_coupling_value: format_rational(&maximal_coupling_value(conn)),
        })
        .collect();

    let nonsignaling = options
        .nonsignaling
        .then(|| nonsignaling_report(system).iter().map(comparison_entry).collect());

    let cbd = options.cbd.then(|| {
        let verdict = cbd_contextuality(system)
            .expect("systems built by the model layer share outcome spaces per content");
        CbdSection {
            contextual: verdict.contextual,
            witness: verdict.witness.as_ref().map(|w| coupling_section(system, w)),
        }
    });

    let fine = options.fine.then(|| match fine_model(system) {
        HvVerdict::Feasible(model) => HiddenVariableSection {
            feasible: true,
            model: Some(model_section(system, &model)),
        },
        HvVerdict::Infeasible => HiddenVariableSection { feasible: false, model: None },
    });

    let octuple = options.octuple.then(|| match octuple_model(system) {
        HvVerdict::Feasible(model) => HiddenVariableSection {
            feasible: true,
            model: Some(model_section(system, &model)),
        },
        HvVerdict::Infeasible => HiddenVariableSection { feasible: false, model: None },
    });

    Report {
        source: source.to_owned(),
        consistent_connectedness: ConnectednessSection {
            consistent: connectedness.consistent,
            violation: connectedness.violation.as_ref().map(comparison_entry),
        },
        connections,
        nonsignaling,
        cbd,
        fine,
        octuple,
    }
}

impl Report {
    /// Deterministic pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Human-readable rendering; `color` enables ANSI highlighting of the
    /// verdict lines.
    pub fn render_text(&self, color: bool) -> String {
        let paint = |s: &str, code: &str| -> String {
            if color {
                format!("\x1b[{code}m{s}\x1b[0m")
            } else {
                s.to_owned()
            }
        };
        let yes_no = |b: bool, yes: &str, no: &str| -> String {
            if b {
                paint(yes, "31") // red: the "interesting" outcome
            } else {
                paint(no, "32")
            }
        };
        let mut out = String::new();
        out.push_str(&format!("system: {}\n", self.source));

        let cc = &self.consistent_connectedness;
        out.push_str(&format!(
            "consistently connected: {}\n",
            yes_no(!cc.consistent, "no", "yes")
        ));
        if let Some(v) = &cc.violation {
            out.push_str(&format!(
                "  first violation: content {} has Pr({}) = {} in {} but {} in {}\n",
                v.content, v.value, v.prob_a, v.context_a, v.prob_b, v.context_b
            ));
        }

        if self.connections.is_empty() {
            out.push_str("connections: none\n");
        } else {
            out.push_str("connections:\n");
            for c in &self.connections {
                out.push_str(&format!(
                    "  {} across {} -> maximal coupling value {}\n",
                    c.content,
                    c.contexts.join(", "),
                    c.maximal_coupling_value
                ));
            }
        }

        if let Some(entries) = &self.nonsignaling {
            let unequal = entries.iter().filter(|e| !e.equal).count();
            out.push_str(&format!(
                "marginal comparisons: {} total, {} unequal\n",
                entries.len(),
                unequal
            ));
            for e in entries.iter().filter(|e| !e.equal) {
                out.push_str(&format!(
                    "  {}: Pr({}) = {} in {} vs {} in {}\n",
                    e.content, e.value, e.prob_a, e.context_a, e.prob_b, e.context_b
                ));
            }
        }

        if let Some(cbd) = &self.cbd {
            out.push_str(&format!(
                "contextual (no maximally connected coupling): {}\n",
                yes_no(cbd.contextual, "yes", "no")
            ));
            if let Some(w) = &cbd.witness {
                out.push_str("  witness coupling:\n");
                render_distribution(&mut out, w);
            }
        }
        if let Some(fine) = &self.fine {
            out.push_str(&format!(
                "content-keyed deterministic model: {}\n",
                yes_no(!fine.feasible, "infeasible", "feasible")
            ));
            if let Some(m) = &fine.model {
                render_distribution(&mut out, m);
            }
        }
        if let Some(oct) = &self.octuple {
            out.push_str(&format!(
                "variable-keyed deterministic model: {}\n",
                yes_no(!oct.feasible, "infeasible", "feasible")
            ));
            if let Some(m) = &oct.model {
                render_distribution(&mut out, m);
            }
        }
        out
    }
}

fn render_distribution(out: &mut String, d: &DistributionSection) {
    out.push_str(&format!("    over: {}\n", d.variables.join(" ")));
    for row in &d.support {
        out.push_str(&format!("    {} = {}\n", row.outcomes.join(" "), row.probability));
    }
}
