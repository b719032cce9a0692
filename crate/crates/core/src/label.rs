//! Canonical vertex labels.
//!
//! Every vertex of every complex in this crate is named by a [`Label`]: either
//! an atomic token, or a tuple of labels. Derived constructions (face posets,
//! barycentric apexes, lattice elements, cells of product-like complexes) name
//! their vertices by tuples of the labels they came from, so canonical forms
//! are reproducible across runs and complexes built by different routes can be
//! compared bit for bit.

use std::fmt;
use std::sync::Arc;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

/// A canonical vertex name: an atomic token or a tuple of labels.
///
/// The derived `Ord` is total and deterministic: atoms compare by their token,
/// tuples lexicographically by their entries, and every atom sorts before
/// every tuple.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Atom(Arc<str>),
    Tuple(Arc<[Label]>),
}

impl Label {
    pub fn atom(token: impl AsRef<str>) -> Self {
        Label::Atom(Arc::from(token.as_ref()))
    }

    pub fn tuple(items: impl Into<Vec<Label>>) -> Self {
        Label::Tuple(Arc::from(items.into()))
    }

    /// Tuple of the given labels in sorted order. This is the canonical name
    /// for a set-like derived object (a face, a block, a vertex set).
    pub fn sorted_tuple(items: impl Into<Vec<Label>>) -> Self {
        let mut v: Vec<Label> = items.into();
        v.sort();
        Label::Tuple(Arc::from(v))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Label::Atom(_))
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Atom(s) => write!(f, "{s}"),
            Label::Tuple(items) => {
                write!(f, "(")?;
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{it}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Error from parsing a label out of its text form.
#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LabelParseError {
    #[error("unbalanced parentheses in label `{0}`")]
    Unbalanced(String),
    #[error("empty label")]
    Empty,
    #[error("trailing input after label: `{0}`")]
    Trailing(String),
}

impl std::str::FromStr for Label {
    type Err = LabelParseError;

    /// Parses the `Display` form back: bare tokens are atoms, parenthesized
    /// whitespace-separated groups are tuples.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s)?;
        let mut pos = 0;
        let label = parse_tokens(&tokens, &mut pos, s)?;
        if pos != tokens.len() {
            return Err(LabelParseError::Trailing(s.to_string()));
        }
        Ok(label)
    }
}

#[derive(Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, LabelParseError> {
    let mut out = Vec::new();
    let mut word = String::new();
    for ch in s.chars() {
        match ch {
            '(' | ')' => {
                if !word.is_empty() {
                    out.push(Tok::Word(std::mem::take(&mut word)));
                }
                out.push(if ch == '(' { Tok::Open } else { Tok::Close });
            }
            c if c.is_whitespace() => {
                if !word.is_empty() {
                    out.push(Tok::Word(std::mem::take(&mut word)));
                }
            }
            c => word.push(c),
        }
    }
    if !word.is_empty() {
        out.push(Tok::Word(word));
    }
    if out.is_empty() {
        return Err(LabelParseError::Empty);
    }
    Ok(out)
}

fn parse_tokens(tokens: &[Tok], pos: &mut usize, src: &str) -> Result<Label, LabelParseError> {
    match tokens.get(*pos) {
        Some(Tok::Word(w)) => {
            *pos += 1;
            Ok(Label::atom(w))
        }
        Some(Tok::Open) => {
            *pos += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some(Tok::Close) => {
                        *pos += 1;
                        return Ok(Label::tuple(items));
                    }
                    Some(_) => items.push(parse_tokens(tokens, pos, src)?),
                    None => return Err(LabelParseError::Unbalanced(src.to_string())),
                }
            }
        }
        Some(Tok::Close) | None => Err(LabelParseError::Unbalanced(src.to_string())),
    }
}

// JSON form: atoms are strings, tuples are arrays.
impl Serialize for Label {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Label::Atom(s) => serializer.serialize_str(s),
            Label::Tuple(items) => {
                let mut seq = serializer.serialize_seq(Some(items.len()))?;
                for it in items.iter() {
                    seq.serialize_element(it)?;
                }
                seq.end()
            }
        }
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct LabelVisitor;

        impl<'de> Visitor<'de> for LabelVisitor {
            type Value = Label;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a string or an array of labels")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Label, E> {
                Ok(Label::atom(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Label, E> {
                Ok(Label::atom(v.to_string()))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Label, E> {
                Ok(Label::atom(v.to_string()))
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Label, A::Error> {
                let mut items = Vec::new();
                while let Some(item) = seq.next_element::<Label>()? {
                    items.push(item);
                }
                Ok(Label::tuple(items))
            }
        }

        deserializer.deserialize_any(LabelVisitor)
    }
}
