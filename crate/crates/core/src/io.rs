//! JSON documents for posets and constraint systems, and the s-expression
//! syntax for series-parallel sums.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexsum::{LexSumError, LexSumSpec, SpExpression};
use crate::poset::{ConstraintSystem, Poset, PosetError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    LexSum(#[from] LexSumError),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PosetDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
}

impl PosetDoc {
    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        Poset::from_covers(&self.elements, &self.covers)
    }

    pub fn from_poset(p: &Poset) -> PosetDoc {
        PosetDoc {
            elements: p.elements().to_vec(),
            covers: p.cover_labels(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub elements: Vec<String>,
    #[serde(default)]
    pub covers: Vec<(String, String)>,
    #[serde(default)]
    pub forbidden_equal: Vec<(String, String)>,
}

impl ConstraintDoc {
    pub fn to_system(&self) -> Result<ConstraintSystem, PosetError> {
        let poset = Poset::from_covers(&self.elements, &self.covers)?;
        ConstraintSystem::new(poset, &self.forbidden_equal)
    }

    pub fn from_system(s: &ConstraintSystem) -> ConstraintDoc {
        ConstraintDoc {
            elements: s.poset.elements().to_vec(),
            covers: s.poset.cover_labels(),
            forbidden_equal: s
                .forbidden_equal
                .iter()
                .map(|&(i, j)| (s.poset.label(i).to_string(), s.poset.label(j).to_string()))
                .collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LexSumDoc {
    pub base: PosetDoc,
    pub parts: Vec<PosetDoc>,
}

pub fn parse_poset_json(text: &str) -> Result<Poset, IoError> {
    let doc: PosetDoc = serde_json::from_str(text)?;
    Ok(doc.to_poset()?)
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string_pretty(&PosetDoc::from_poset(p)).expect("poset doc serializes")
}

pub fn parse_constraint_json(text: &str) -> Result<ConstraintSystem, IoError> {
    let doc: ConstraintDoc = serde_json::from_str(text)?;
    Ok(doc.to_system()?)
}

pub fn constraint_to_json(s: &ConstraintSystem) -> String {
    serde_json::to_string_pretty(&ConstraintDoc::from_system(s)).expect("constraint doc serializes")
}

pub fn parse_lexsum_json(text: &str) -> Result<LexSumSpec, IoError> {
    let doc: LexSumDoc = serde_json::from_str(text)?;
    let base = doc.base.to_poset()?;
    let parts = doc
        .parts
        .iter()
        .map(|d| d.to_poset())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LexSumSpec::new(base, parts)?)
}

/// Parses `(chain ...)` / `(antichain ...)` s-expressions; a bare integer is
/// a chain of that length.
pub fn parse_sp_expr(text: &str) -> Result<SpExpression, IoError> {
    let tokens = tokenize(text)?;
    let mut pos = 0;
    let expr = parse_expr(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(IoError::Parse(format!(
            "trailing input after expression: {:?}",
            tokens[pos]
        )));
    }
    Ok(expr)
}

pub fn sp_to_string(expr: &SpExpression) -> String {
    match expr {
        SpExpression::Leaf(k) => k.to_string(),
        SpExpression::ChainSum(parts) => render_list("chain", parts),
        SpExpression::AntichainSum(parts) => render_list("antichain", parts),
    }
}

fn render_list(head: &str, parts: &[SpExpression]) -> String {
    let inner: Vec<String> = parts.iter().map(sp_to_string).collect();
    format!("({} {})", head, inner.join(" "))
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Word(String),
    Int(u64),
}

fn tokenize(text: &str) -> Result<Vec<Token>, IoError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                out.push(Token::Open);
                chars.next();
            }
            ')' => {
                out.push(Token::Close);
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            c if c.is_ascii_digit() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                let n = s
                    .parse()
                    .map_err(|_| IoError::Parse(format!("integer out of range: {s}")))?;
                out.push(Token::Int(n));
            }
            c if c.is_ascii_alphabetic() => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        s.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Word(s));
            }
            other => {
                return Err(IoError::Parse(format!("unexpected character {other:?}")));
            }
        }
    }
    Ok(out)
}

fn parse_expr(tokens: &[Token], pos: &mut usize) -> Result<SpExpression, IoError> {
    match tokens.get(*pos) {
        Some(Token::Int(k)) => {
            *pos += 1;
            Ok(SpExpression::Leaf(*k))
        }
        Some(Token::Open) => {
            *pos += 1;
            let head = match tokens.get(*pos) {
                Some(Token::Word(w)) => w.clone(),
                other => {
                    return Err(IoError::Parse(format!(
                        "expected chain or antichain, found {other:?}"
                    )))
                }
            };
            *pos += 1;
            let mut parts = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Token::Close) => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => parts.push(parse_expr(tokens, pos)?),
                    None => return Err(IoError::Parse("unclosed parenthesis".into())),
                }
            }
            if parts.is_empty() {
                return Err(IoError::Parse(format!("empty ({head}) form")));
            }
            match head.as_str() {
                "chain" => Ok(SpExpression::ChainSum(parts)),
                "antichain" => Ok(SpExpression::AntichainSum(parts)),
                other => Err(IoError::Parse(format!("unknown combinator {other:?}"))),
            }
        }
        other => Err(IoError::Parse(format!("expected expression, found {other:?}"))),
    }
}
