//! Orthographic normalization rulesets.
//!
//! A ruleset is plain data, loadable from a small text file:
//!
//! ```text
//! # comment
//! id r1918
//! strip_final ъ
//! map ѣ е
//! ```
//!
//! `map` rules rewrite every occurrence of a character. `strip_final` rules
//! remove the character from the end of the word, repeatedly, once all maps
//! have run. Construction rejects rulesets whose result could depend on rule
//! order: a map target may not be the source of another map, and a stripped
//! character may be neither a map source nor a map target. Under those
//! constraints applying a ruleset is idempotent.

use std::borrow::Cow;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

const R1918_SOURCE: &str = include_str!("../../data/rulesets/r1918.txt");
const EMPTY_SOURCE: &str = include_str!("../../data/rulesets/empty.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    StripFinal(char),
    MapChar { from: char, to: char },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::StripFinal(c) => write!(f, "strip_final {c}"),
            Rule::MapChar { from, to } => write!(f, "map {from} {to}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizationRuleset {
    id: String,
    rules: Vec<Rule>,
    // derived lookup tables
    maps: Vec<(char, char)>,
    strips: Vec<char>,
}

impl NormalizationRuleset {
    pub fn new(id: impl Into<String>, rules: Vec<Rule>) -> Result<Self> {
        let id = id.into();
        if id.is_empty() || id.chars().any(|c| c.is_whitespace() || c == ';' || c == '=') {
            return Err(Error::InvalidRuleset(format!("bad ruleset id {id:?}")));
        }
        let mut maps: Vec<(char, char)> = Vec::new();
        let mut strips: Vec<char> = Vec::new();
        for rule in &rules {
            match *rule {
                Rule::MapChar { from, to } => {
                    if from == to {
                        return Err(Error::InvalidRuleset(format!("identity rule: {rule}")));
                    }
                    if maps.iter().any(|&(f, _)| f == from) {
                        return Err(Error::InvalidRuleset(format!("{from} mapped twice")));
                    }
                    maps.push((from, to));
                }
                Rule::StripFinal(c) => {
                    if !strips.contains(&c) {
                        strips.push(c);
                    }
                }
            }
        }
        for &(from, to) in &maps {
            if maps.iter().any(|&(f, _)| f == to) {
                return Err(Error::InvalidRuleset(format!("map chain through {to} (from {from})")));
            }
            if strips.contains(&from) || strips.contains(&to) {
                return Err(Error::InvalidRuleset(format!("{from}->{to} overlaps a strip_final character")));
            }
        }
        Ok(Self { id, rules, maps, strips })
    }

    /// The identity ruleset.
    pub fn empty() -> Self {
        Self::parse(EMPTY_SOURCE).expect("shipped ruleset parses")
    }

    /// Pre-reform Russian spelling: final hard sign dropped, ѣ/і/ѳ replaced.
    pub fn r1918() -> Self {
        Self::parse(R1918_SOURCE).expect("shipped ruleset parses")
    }

    /// Looks up a shipped ruleset by id.
    pub fn builtin(id: &str) -> Option<Self> {
        match id {
            "empty" | "none" => Some(Self::empty()),
            "r1918" => Some(Self::r1918()),
            _ => None,
        }
    }

    pub fn parse(source: &str) -> Result<Self> {
        let mut id = None;
        let mut rules = Vec::new();
        for (lineno, line) in source.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidRuleset(format!("line {}: {line:?}", lineno + 1));
            match fields.as_slice() {
                ["id", name] => id = Some(name.to_string()),
                ["strip_final", c] => rules.push(Rule::StripFinal(single_char(c).ok_or_else(bad)?)),
                ["map", from, to] => rules.push(Rule::MapChar {
                    from: single_char(from).ok_or_else(bad)?,
                    to: single_char(to).ok_or_else(bad)?,
                }),
                _ => return Err(bad()),
            }
        }
        let id = id.ok_or_else(|| Error::InvalidRuleset("missing `id` line".into()))?;
        Self::new(id, rules)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn apply<'a>(&self, token: &'a str) -> Cow<'a, str> {
        normalize_token(token, self)
    }
}

impl Default for NormalizationRuleset {
    fn default() -> Self {
        Self::empty()
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

/// Applies `rules` to `token`, borrowing when nothing changes.
pub fn normalize_token<'a>(token: &'a str, rules: &NormalizationRuleset) -> Cow<'a, str> {
    if rules.rules.is_empty() {
        return Cow::Borrowed(token);
    }
    let needs_map = !rules.maps.is_empty() && token.chars().any(|c| rules.maps.iter().any(|&(f, _)| f == c));
    let mapped: Cow<'a, str> = if needs_map {
        Cow::Owned(token.chars().map(|c| rules.maps.iter().find(|&&(f, _)| f == c).map_or(c, |&(_, t)| t)).collect())
    } else {
        Cow::Borrowed(token)
    };
    if rules.strips.is_empty() {
        return mapped;
    }
    let kept = mapped.trim_end_matches(|c| rules.strips.contains(&c)).len();
    match mapped {
        Cow::Borrowed(s) => Cow::Borrowed(&s[..kept]),
        Cow::Owned(mut s) => {
            s.truncate(kept);
            Cow::Owned(s)
        }
    }
}
