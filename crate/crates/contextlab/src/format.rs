//! The line-oriented system file format.
//!
//! A file declares contents with their outcome values, then contexts, then
//! one bunch block per context. `#` starts a comment, blank lines are
//! ignored, probabilities are exact rational strings, and omitted outcome
//! rows have probability 0:
//!
//! ```text
//! content M1 values 0 1
//! content M2 values 0 1
//!
//! context M1,M2 = M1 M2
//!
//! bunch M1,M2
//!   0 1 = 1/2
//!   1 0 = 1/2
//! end
//! ```
//!
//! `content ... values v1 v2 ... [numeric n1 n2 ...]` optionally annotates
//! each value with an integer reading (used for `{+1, -1}` style spaces).
//! Every referenced id must already be declared, unknown directives are
//! rejected, and [`write_system`] emits the canonical form: contents and
//! contexts sorted by id, bunch rows in outcome order, so
//! parse-then-write is idempotent. The full grammar lives in
//! `docs/format.md`.

use thiserror::Error;

use crate::model::{
    Bunch, ContentId, Context, ContextId, Distribution, ModelError, OutcomeSpace, System,
    VariableId,
};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FileError {
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid system: {0}")]
    Validation(#[from] ModelError),
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

/// A bunch block whose `end` has not been reached yet.
struct OpenBlock {
    context: ContextId,
    members: Vec<ContentId>,
    spaces: Vec<OutcomeSpace>,
    rows: Vec<(Vec<usize>, Rational)>,
    header_line: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let uncommented = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in uncommented.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { column: s + 1, text: &uncommented[s..i] });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { column: s + 1, text: &uncommented[s..] });
    }
    tokens
}

/// Parses a system file. Reference errors (unknown ids, bad rows) are
/// reported with line and column; whole-system invariant violations show
/// up as [`FileError::Validation`].
pub fn parse_system(text: &str) -> Result<System, FileError> {
    let err = |line: usize, column: usize, message: String| FileError::Parse { line, column, message };

    let mut contents: Vec<(ContentId, OutcomeSpace)> = Vec::new();
    let mut contexts: Vec<Context> = Vec::new();
    let mut bunches: Vec<Bunch> = Vec::new();

    let space_of = |contents: &[(ContentId, OutcomeSpace)], q: &ContentId| -> Option<OutcomeSpace> {
        contents.iter().find(|(id, _)| id == q).map(|(_, s)| s.clone())
    };

    let mut open: Option<OpenBlock> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }

        if open.is_some() {
            if tokens.len() == 1 && tokens[0].text == "end" {
                let block = open.take().unwrap();
                let vars: Vec<VariableId> = block
                    .members
                    .iter()
                    .map(|q| VariableId { content: q.clone(), context: block.context.clone() })
                    .collect();
                let cards: Vec<usize> = block.spaces.iter().map(OutcomeSpace::len).collect();
                let joint = Distribution::new(vars, cards, block.rows)?;
                bunches.push(Bunch::new(block.context, joint));
                continue;
            }
            // Row: one value label per member, then `=`, then a rational.
            let block = open.as_mut().unwrap();
            let arity = block.members.len();
            if tokens.len() != arity + 2 {
                return Err(err(
                    lineno,
                    tokens[0].column,
                    format!(
                        "bunch row needs {arity} value(s), `=`, and a probability (block opened on line {})",
                        block.header_line
                    ),
                ));
            }
            let eq = &tokens[arity];
            if eq.text != "=" {
                return Err(err(lineno, eq.column, "expected `=` before the probability".into()));
            }
            let mut tuple = Vec::with_capacity(arity);
            for (k, tok) in tokens[..arity].iter().enumerate() {
                match block.spaces[k].index_of(tok.text) {
                    Some(i) => tuple.push(i),
                    None => {
                        return Err(err(
                            lineno,
                            tok.column,
                            format!("`{}` is not a value of content `{}`", tok.text, block.members[k]),
                        ))
                    }
                }
            }
            let ptok = &tokens[arity + 1];
            let prob = parse_rational(ptok.text).ok_or_else(|| {
                err(lineno, ptok.column, format!("`{}` is not a rational number", ptok.text))
            })?;
            block.rows.push((tuple, prob));
            continue;
        }

        match tokens[0].text {
            "content" => {
                if tokens.len() < 3 || tokens[1].text == "values" || tokens[2].text != "values" {
                    return Err(err(
                        lineno,
                        tokens[0].column,
                        "expected `content <id> values <v1> <v2> ... [numeric <n1> ...]`".into(),
                    ));
                }
                let id = ContentId::new(tokens[1].text);
                let rest = &tokens[3..];
                let split = rest.iter().position(|t| t.text == "numeric").unwrap_or(rest.len());
                let values: Vec<String> = rest[..split].iter().map(|t| t.text.to_owned()).collect();
                if values.is_empty() {
                    return Err(err(lineno, tokens[2].column, "content needs at least one value".into()));
                }
                let mut space = OutcomeSpace::new(values.clone());
                if split < rest.len() {
                    let nums: Vec<i64> = rest[split + 1..]
                        .iter()
                        .map(|t| {
                            t.text.parse::<i64>().map_err(|_| {
                                err(lineno, t.column, format!("`{}` is not an integer", t.text))
                            })
                        })
                        .collect::<Result<_, _>>()?;
                    if nums.len() != values.len() {
                        return Err(err(
                            lineno,
                            rest[split].column,
                            "numeric annotation must list one integer per value".into(),
                        ));
                    }
                    space = space.with_numeric(nums);
                }
                contents.push((id, space));
            }
            "context" => {
                if tokens.len() < 4 || tokens[2].text != "=" {
                    return Err(err(
                        lineno,
                        tokens[0].column,
                        "expected `context <id> = <content> ...`".into(),
                    ));
                }
                let id = ContextId::new(tokens[1].text);
                let mut members = Vec::new();
                for tok in &tokens[3..] {
                    let q = ContentId::new(tok.text);
                    if space_of(&contents, &q).is_none() {
                        return Err(err(
                            lineno,
                            tok.column,
                            format!("unknown content `{}` (declare contents first)", tok.text),
                        ));
                    }
                    members.push(q);
                }
                contexts.push(Context { id, members });
            }
            "bunch" => {
                if tokens.len() != 2 {
                    return Err(err(lineno, tokens[0].column, "expected `bunch <context-id>`".into()));
                }
                let id = ContextId::new(tokens[1].text);
                let Some(context) = contexts.iter().find(|c| c.id == id) else {
                    return Err(err(
                        lineno,
                        tokens[1].column,
                        format!("unknown context `{}` (declare contexts first)", tokens[1].text),
                    ));
                };
                if bunches.iter().any(|b| b.context() == &id) {
                    return Err(err(
                        lineno,
                        tokens[1].column,
                        format!("context `{id}` already has a bunch"),
                    ));
                }
                let members = context.members.clone();
                let spaces: Vec<OutcomeSpace> = members
                    .iter()
                    .map(|q| space_of(&contents, q).expect("membership checked at declaration"))
                    .collect();
                open = Some(OpenBlock {
                    context: id,
                    members,
                    spaces,
                    rows: Vec::new(),
                    header_line: lineno,
                });
            }
            other => {
                return Err(err(
                    lineno,
                    tokens[0].column,
                    format!("unknown directive `{other}` (expected content, context, or bunch)"),
                ));
            }
        }
    }

    if let Some(block) = open {
        return Err(err(
            block.header_line,
            1,
            format!("bunch `{}` is missing its `end`", block.context),
        ));
    }

    Ok(System::new(contents, contexts, bunches)?)
}

/// Writes the canonical textual form of a system: contents sorted by id,
/// then contexts, then one bunch block per context with support rows in
/// outcome order.
pub fn write_system(system: &System) -> String {
    let mut out = String::new();
    for (q, space) in system.contents() {
        out.push_str(&format!("content {q} values {}", space.values().join(" ")));
        if let Some(nums) = space.numeric() {
            out.push_str(" numeric ");
            out.push_str(&nums.iter().map(i64::to_string).collect::<Vec<_>>().join(" "));
        }
        out.push('\n');
    }
    out.push('\n');
    for (c, members) in system.contexts() {
        let names: Vec<&str> = members.iter().map(ContentId::as_str).collect();
        out.push_str(&format!("context {c} = {}\n", names.join(" ")));
    }
    for (context, members) in system.contexts() {
        out.push('\n');
        out.push_str(&format!("bunch {context}\n"));
        let spaces: Vec<&OutcomeSpace> =
            members.iter().map(|q| system.space(q).expect("validated system")).collect();
        let joint = system.bunch(context).expect("validated system").joint();
        for (tuple, prob) in joint.support() {
            let labels: Vec<&str> =
                tuple.iter().enumerate().map(|(k, &v)| spaces[k].label(v)).collect();
            out.push_str(&format!("  {} = {}\n", labels.join(" "), format_rational(prob)));
        }
        out.push_str("end\n");
    }
    out
}
