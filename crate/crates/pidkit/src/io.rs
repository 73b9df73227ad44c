//! Distribution files.
//!
//! Text format (UTF-8, `#` starts a comment):
//!
//! ```text
//! vars 3
//! cards 2 2 2
//! target 3        # optional, 1-based; defaults to the last variable
//! 0 0 0 0.5
//! 1 1 1 0.5
//! ```
//!
//! One row per outcome: the variable values followed by the probability.
//! Omitted outcomes have probability zero. The JSON form holds the same
//! fields: `{"cards": [...], "target": j, "rows": [{"outcome": [...], "p": ...}]}`.

use std::fmt::Write as _;
use std::path::Path;

use pidkit_core::{Error as CoreError, JointDistribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Invalid(#[from] CoreError),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse { line, msg: msg.into() }
}

pub fn parse_distribution(text: &str) -> Result<JointDistribution, IoError> {
    let mut vars: Option<usize> = None;
    let mut cards: Option<Vec<usize>> = None;
    let mut target: Option<usize> = None;
    let mut rows: Vec<(usize, Vec<usize>, f64)> = Vec::new();
    let mut last_line = 0;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut fields = content.split_whitespace();
        let head = fields.next().unwrap_or("");
        let rest: Vec<&str> = fields.collect();
        match head {
            "vars" => {
                if vars.is_some() {
                    return Err(parse_err(line_no, "repeated `vars` line"));
                }
                let [k] = rest[..] else {
                    return Err(parse_err(line_no, "expected `vars k`"));
                };
                let k: usize = k.parse().map_err(|_| parse_err(line_no, format!("bad variable count {k:?}")))?;
                if k == 0 {
                    return Err(parse_err(line_no, "need at least one variable"));
                }
                vars = Some(k);
            }
            "cards" => {
                let k = vars.ok_or_else(|| parse_err(line_no, "`cards` before `vars`"))?;
                if cards.is_some() {
                    return Err(parse_err(line_no, "repeated `cards` line"));
                }
                if rest.len() != k {
                    return Err(parse_err(line_no, format!("expected {k} cardinalities, got {}", rest.len())));
                }
                let parsed = rest
                    .iter()
                    .map(|v| match v.parse::<usize>() {
                        Ok(c) if c >= 1 => Ok(c),
                        _ => Err(parse_err(line_no, format!("bad cardinality {v:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                cards = Some(parsed);
            }
            "target" => {
                let k = vars.ok_or_else(|| parse_err(line_no, "`target` before `vars`"))?;
                if !rows.is_empty() {
                    return Err(parse_err(line_no, "`target` must come before the rows"));
                }
                let [j] = rest[..] else {
                    return Err(parse_err(line_no, "expected `target j`"));
                };
                match j.parse::<usize>() {
                    Ok(j) if (1..=k).contains(&j) => target = Some(j - 1),
                    _ => return Err(parse_err(line_no, format!("target must be in 1..={k}, got {j:?}"))),
                }
            }
            _ => {
                let cards = cards.as_ref().ok_or_else(|| parse_err(line_no, "outcome row before `cards`"))?;
                let all: Vec<&str> = std::iter::once(head).chain(rest).collect();
                if all.len() != cards.len() + 1 {
                    return Err(parse_err(
                        line_no,
                        format!("expected {} values and a probability, got {} fields", cards.len(), all.len()),
                    ));
                }
                let (values, p) = all.split_at(cards.len());
                let outcome = values
                    .iter()
                    .zip(cards)
                    .map(|(v, &c)| match v.parse::<usize>() {
                        Ok(x) if x < c => Ok(x),
                        _ => Err(parse_err(line_no, format!("value {v:?} outside 0..{c}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                let p: f64 = p[0]
                    .parse()
                    .ok()
                    .filter(|p: &f64| p.is_finite() && *p >= 0.0)
                    .ok_or_else(|| parse_err(line_no, format!("bad probability {:?}", p[0])))?;
                if let Some((first, _, _)) = rows.iter().find(|(_, o, _)| *o == outcome) {
                    return Err(parse_err(line_no, format!("duplicate outcome {outcome:?} (first on line {first})")));
                }
                rows.push((line_no, outcome, p));
            }
        }
    }
    let cards = cards.ok_or_else(|| parse_err(last_line.max(1), "missing `vars`/`cards` header"))?;
    let target = target.unwrap_or(cards.len() - 1);
    let dist = JointDistribution::from_outcomes(cards, Some(target), rows.iter().map(|(_, o, p)| (o.as_slice(), *p)))?;
    Ok(dist)
}

/// Text form: header, then the positive-probability outcomes in storage
/// order. Probabilities use the shortest representation that reads back
/// to the same float.
pub fn format_distribution(d: &JointDistribution) -> String {
    let mut out = String::new();
    let k = d.n_axes();
    let _ = writeln!(out, "vars {k}");
    let cards: Vec<String> = d.cards().iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "cards {}", cards.join(" "));
    if let Some(t) = d.target() {
        if t != k - 1 {
            let _ = writeln!(out, "target {}", t + 1);
        }
    }
    for (outcome, p) in d.support() {
        let values: Vec<String> = outcome.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{} {p}", values.join(" "));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionJson {
    pub cards: Vec<usize>,
    /// 1-based target variable.
    pub target: usize,
    pub rows: Vec<RowJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowJson {
    pub outcome: Vec<usize>,
    pub p: f64,
}

pub fn to_json(d: &JointDistribution) -> DistributionJson {
    DistributionJson {
        cards: d.cards().to_vec(),
        target: d.target().unwrap_or(d.n_axes() - 1) + 1,
        rows: d.support().map(|(outcome, p)| RowJson { outcome, p }).collect(),
    }
}

pub fn from_json(j: &DistributionJson) -> Result<JointDistribution, IoError> {
    if j.target == 0 || j.target > j.cards.len() {
        return Err(IoError::Invalid(CoreError::AxisOutOfRange { axis: j.target, n_axes: j.cards.len() }));
    }
    Ok(JointDistribution::from_outcomes(
        j.cards.clone(),
        Some(j.target - 1),
        j.rows.iter().map(|r| (r.outcome.as_slice(), r.p)),
    )?)
}

/// Parses either form; JSON is recognised by a leading `{`.
pub fn parse_any(text: &str) -> Result<JointDistribution, IoError> {
    if text.trim_start().starts_with('{') {
        from_json(&serde_json::from_str(text)?)
    } else {
        parse_distribution(text)
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File { path: path.display().to_string(), source })
}

pub fn load_distribution(path: &Path) -> Result<JointDistribution, IoError> {
    parse_any(&read_text(path)?)
}

pub fn save_distribution(path: &Path, d: &JointDistribution) -> Result<(), IoError> {
    std::fs::write(path, format_distribution(d))
        .map_err(|source| IoError::File { path: path.display().to_string(), source })
}
