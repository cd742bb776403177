//! Line-oriented text format for instances.
//!
//! ```text
//! # comment
//! k 2
//! w 7
//! lt x y soft 3
//! eq a b crisp
//! ```
//!
//! `k` is required exactly once; `w` defaults to `inf`; soft constraints
//! default to weight 1; a weight token on a crisp line is parsed and ignored.
//! Variables are declared implicitly and ordered by first occurrence.

use crate::model::{Constraint, Instance, Relation, Softness};
use std::collections::HashMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed line: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("line {line}: duplicate `{token}` line")]
    DuplicateBudget { line: usize, token: &'static str },
    #[error("line {line}: unknown relation token `{token}`")]
    UnknownRelation { line: usize, token: String },
    #[error("line {line}: nonpositive weight `{token}`")]
    NonpositiveWeight { line: usize, token: String },
    #[error("missing `k` line")]
    MissingBudget,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Strips a `#` comment and splits the rest on whitespace.
pub(crate) fn tokenize(line: &str) -> Vec<&str> {
    let body = match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    };
    body.split_whitespace().collect()
}

pub(crate) fn parse_weight(token: &str, line: usize) -> Result<u64, ParseError> {
    match token.parse::<i64>() {
        Ok(v) if v >= 1 => Ok(v as u64),
        Ok(_) => Err(ParseError::NonpositiveWeight { line, token: token.into() }),
        Err(_) => {
            Err(ParseError::Malformed { line, detail: format!("bad weight token `{token}`") })
        }
    }
}

pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut k: Option<u32> = None;
    let mut w: Option<Option<u64>> = None;
    let mut variables: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut constraints = Vec::new();

    let mut intern = |name: &str, variables: &mut Vec<String>| -> usize {
        if let Some(&i) = index.get(name) {
            return i;
        }
        let i = variables.len();
        variables.push(name.to_string());
        index.insert(name.to_string(), i);
        i
    };

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "k" => {
                if k.is_some() {
                    return Err(ParseError::DuplicateBudget { line, token: "k" });
                }
                if tokens.len() != 2 {
                    return Err(ParseError::Malformed { line, detail: "expected `k <int>`".into() });
                }
                let v: i64 = tokens[1].parse().map_err(|_| ParseError::Malformed {
                    line,
                    detail: format!("bad budget token `{}`", tokens[1]),
                })?;
                if v < 0 {
                    return Err(ParseError::Malformed { line, detail: "k must be >= 0".into() });
                }
                k = Some(v as u32);
            }
            "w" => {
                if w.is_some() {
                    return Err(ParseError::DuplicateBudget { line, token: "w" });
                }
                if tokens.len() != 2 {
                    return Err(ParseError::Malformed {
                        line,
                        detail: "expected `w <int|inf>`".into(),
                    });
                }
                if tokens[1] == "inf" {
                    w = Some(None);
                } else {
                    w = Some(Some(parse_weight(tokens[1], line)?));
                }
            }
            rel_token => {
                let rel = Relation::from_token(rel_token).ok_or_else(|| {
                    ParseError::UnknownRelation { line, token: rel_token.into() }
                })?;
                if tokens.len() < 4 || tokens.len() > 5 {
                    return Err(ParseError::Malformed {
                        line,
                        detail: "expected `<rel> <var> <var> <soft|crisp> [<weight>]`".into(),
                    });
                }
                if !valid_name(tokens[1]) || !valid_name(tokens[2]) {
                    return Err(ParseError::Malformed { line, detail: "bad variable name".into() });
                }
                let softness = match tokens[3] {
                    "soft" => Softness::Soft,
                    "crisp" => Softness::Crisp,
                    other => {
                        return Err(ParseError::Malformed {
                            line,
                            detail: format!("expected soft|crisp, got `{other}`"),
                        })
                    }
                };
                let weight = match tokens.get(4) {
                    Some(tok) => parse_weight(tok, line)?,
                    None => 1,
                };
                let x = intern(tokens[1], &mut variables);
                let y = intern(tokens[2], &mut variables);
                constraints.push(Constraint {
                    x,
                    y,
                    rel,
                    softness,
                    // weight is meaningful for soft constraints only
                    weight: if softness.is_soft() { weight } else { 1 },
                });
            }
        }
    }

    let k = k.ok_or(ParseError::MissingBudget)?;
    Ok(Instance::new(variables, constraints, k, w.unwrap_or(None)))
}

/// Canonical serialization; `parse_instance` round-trips it exactly.
pub fn serialize_instance(inst: &Instance) -> String {
    let mut out = String::new();
    out.push_str(&format!("k {}\n", inst.k));
    if let Some(w) = inst.w {
        out.push_str(&format!("w {w}\n"));
    }
    for c in &inst.constraints {
        let x = &inst.variables[c.x];
        let y = &inst.variables[c.y];
        match c.softness {
            Softness::Soft => {
                out.push_str(&format!("{} {} {} soft {}\n", c.rel.token(), x, y, c.weight))
            }
            Softness::Crisp => out.push_str(&format!("{} {} {} crisp\n", c.rel.token(), x, y)),
        }
    }
    out
}
