//! Grouped GHZ-W-type states: data model, text and JSON forms.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeff::Coefficient;
use crate::error::{Error, Result};

/// Which rank-two basis a group uses: `{|0..0>, |1..1>}` or `{|0..0>, |W>}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisKind {
    #[serde(rename = "G")]
    Ghz,
    #[serde(rename = "W")]
    W,
}

impl BasisKind {
    pub fn tag(self) -> &'static str {
        match self {
            BasisKind::Ghz => "G",
            BasisKind::W => "W",
        }
    }

    fn describe(self) -> &'static str {
        match self {
            BasisKind::Ghz => "GHZ-type",
            BasisKind::W => "W-type",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub index: usize,
    pub size: usize,
    pub kind: BasisKind,
}

/// A group's basis vector inside one term. `W` is the unnormalized W state
/// (sum of all single-excitation basis vectors).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupSymbol {
    Zero,
    One,
    W,
}

impl GroupSymbol {
    pub fn as_char(self) -> char {
        match self {
            GroupSymbol::Zero => '0',
            GroupSymbol::One => '1',
            GroupSymbol::W => 'W',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(GroupSymbol::Zero),
            '1' => Some(GroupSymbol::One),
            'W' => Some(GroupSymbol::W),
            _ => None,
        }
    }

    pub fn allowed_in(self, kind: BasisKind) -> bool {
        matches!(
            (self, kind),
            (GroupSymbol::Zero, _)
                | (GroupSymbol::One, BasisKind::Ghz)
                | (GroupSymbol::W, BasisKind::W)
        )
    }

    /// True for the non-vacuum symbol (`1` or `W`).
    pub fn is_excited(self) -> bool {
        self != GroupSymbol::Zero
    }

    /// The non-vacuum symbol of a group kind.
    pub fn excited(kind: BasisKind) -> Self {
        match kind {
            BasisKind::Ghz => GroupSymbol::One,
            BasisKind::W => GroupSymbol::W,
        }
    }
}

impl fmt::Display for GroupSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub symbols: Vec<GroupSymbol>,
    pub coeff: Coefficient,
}

impl Term {
    pub fn new(symbols: Vec<GroupSymbol>, coeff: Coefficient) -> Self {
        Term { symbols, coeff }
    }
}

/// Merge identical symbol vectors, drop zero coefficients and sort terms
/// lexicographically by symbol vector.
pub fn normalize_terms(terms: Vec<Term>) -> Result<Vec<Term>> {
    if terms.is_empty() {
        return Err(Error::EmptyState);
    }
    let mut merged: BTreeMap<Vec<GroupSymbol>, Coefficient> = BTreeMap::new();
    for t in terms {
        let slot = merged.entry(t.symbols).or_default();
        *slot = &*slot + &t.coeff;
    }
    let out: Vec<Term> = merged
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(symbols, coeff)| Term { symbols, coeff })
        .collect();
    if out.is_empty() {
        return Err(Error::NullState);
    }
    Ok(out)
}

/// A validated, normalized grouped state. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicState {
    groups: Vec<GroupSpec>,
    terms: Vec<Term>,
}

impl SymbolicState {
    /// Build from `(kind, size)` pairs and raw terms; validates and normalizes.
    pub fn new(groups: &[(BasisKind, usize)], terms: Vec<Term>) -> Result<Self> {
        let specs: Vec<GroupSpec> = groups
            .iter()
            .enumerate()
            .map(|(index, &(kind, size))| GroupSpec { index, size, kind })
            .collect();
        Self::from_specs(specs, terms)
    }

    pub(crate) fn from_specs(mut groups: Vec<GroupSpec>, terms: Vec<Term>) -> Result<Self> {
        if groups.is_empty() {
            return Err(Error::Domain("a state needs at least one group".into()));
        }
        for (i, g) in groups.iter_mut().enumerate() {
            g.index = i;
            if g.size < 2 {
                return Err(Error::GroupTooSmall {
                    index: i,
                    size: g.size,
                });
            }
        }
        for t in &terms {
            check_term(&groups, t, 0)?;
        }
        let terms = normalize_terms(terms)?;
        Ok(SymbolicState { groups, terms })
    }

    pub fn groups(&self) -> &[GroupSpec] {
        &self.groups
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn num_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_qubits(&self) -> usize {
        self.groups.iter().map(|g| g.size).sum()
    }

    pub fn kinds(&self) -> Vec<(BasisKind, usize)> {
        self.groups.iter().map(|g| (g.kind, g.size)).collect()
    }

    pub fn is_all(&self, kind: BasisKind) -> bool {
        self.groups.iter().all(|g| g.kind == kind)
    }

    /// Symbols of one group across all terms.
    pub fn column(&self, group: usize) -> Vec<GroupSymbol> {
        self.terms.iter().map(|t| t.symbols[group]).collect()
    }

    /// Parse the line-based text format.
    pub fn parse(text: &str) -> Result<Self> {
        parse_text(text)
    }

    /// Parse the JSON mirror of the text format.
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: StateDoc = serde_json::from_str(text)
            .map_err(|e| Error::syntax(e.line(), e.column(), e.to_string()))?;
        doc.into_state()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StateDoc::from(self)).expect("state document serializes")
    }
}

fn check_term(groups: &[GroupSpec], t: &Term, line: usize) -> Result<()> {
    if t.symbols.len() != groups.len() {
        return Err(Error::Contract(format!(
            "term has {} symbols but the state has {} groups",
            t.symbols.len(),
            groups.len()
        )));
    }
    for (g, s) in groups.iter().zip(&t.symbols) {
        if !s.allowed_in(g.kind) {
            return Err(Error::IllegalSymbol {
                line,
                group: g.index,
                symbol: s.to_string(),
                kind: g.kind.describe(),
            });
        }
    }
    Ok(())
}

impl fmt::Display for SymbolicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "groups:")?;
        for g in &self.groups {
            write!(f, " {}:{}", g.kind, g.size)?;
        }
        writeln!(f)?;
        for t in &self.terms {
            write!(f, "term: {}", t.coeff)?;
            for s in &t.symbols {
                write!(f, " {s}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for SymbolicState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_text(s)
    }
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &line[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &line[s..]));
    }
    out.into_iter()
        .map(|(b, tok)| (line[..b].chars().count() + 1, tok))
        .collect()
}

fn parse_text(text: &str) -> Result<SymbolicState> {
    let mut groups: Option<Vec<GroupSpec>> = None;
    let mut terms = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks = tokens(line);
        let Some(&(col, head)) = toks.first() else {
            continue;
        };
        match (head, &groups) {
            ("groups:", None) => groups = Some(parse_groups(lineno, &toks[1..])?),
            ("groups:", Some(_)) => {
                return Err(Error::syntax(lineno, col, "duplicate 'groups:' line"))
            }
            ("term:", Some(g)) => terms.push(parse_term(lineno, col, g, &toks[1..])?),
            ("term:", None) => {
                return Err(Error::syntax(
                    lineno,
                    col,
                    "'term:' before the 'groups:' line",
                ))
            }
            _ => {
                return Err(Error::syntax(
                    lineno,
                    col,
                    format!("expected 'groups:' or 'term:', found '{head}'"),
                ))
            }
        }
    }
    let groups = groups.ok_or_else(|| Error::syntax(1, 1, "missing 'groups:' line"))?;
    if terms.is_empty() {
        return Err(Error::EmptyState);
    }
    SymbolicState::from_specs(groups, terms)
}

fn parse_groups(line: usize, toks: &[(usize, &str)]) -> Result<Vec<GroupSpec>> {
    if toks.is_empty() {
        return Err(Error::syntax(line, 8, "no groups listed"));
    }
    toks.iter()
        .enumerate()
        .map(|(index, &(col, tok))| {
            let (kind, size) = tok.split_once(':').ok_or_else(|| {
                Error::syntax(
                    line,
                    col,
                    format!("group entry '{tok}' must look like G:<size> or W:<size>"),
                )
            })?;
            let kind = match kind {
                "G" => BasisKind::Ghz,
                "W" => BasisKind::W,
                _ => {
                    return Err(Error::syntax(
                        line,
                        col,
                        format!("unknown group kind '{kind}'"),
                    ))
                }
            };
            if size.is_empty() || !size.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::syntax(
                    line,
                    col + 2,
                    format!("invalid group size '{size}'"),
                ));
            }
            let size: usize = size.parse().map_err(|_| {
                Error::syntax(line, col + 2, format!("group size '{size}' out of range"))
            })?;
            if size < 2 {
                return Err(Error::GroupTooSmall { index, size });
            }
            Ok(GroupSpec { index, size, kind })
        })
        .collect()
}

fn parse_term(
    line: usize,
    col: usize,
    groups: &[GroupSpec],
    toks: &[(usize, &str)],
) -> Result<Term> {
    let Some(&(ccol, ctok)) = toks.first() else {
        return Err(Error::syntax(line, col, "term has no coefficient"));
    };
    let coeff: Coefficient = ctok.parse().map_err(|e: crate::coeff::CoeffParseError| {
        Error::syntax(line, ccol + e.offset, e.message)
    })?;
    let syms = &toks[1..];
    if syms.len() != groups.len() {
        let at = syms.get(groups.len()).map_or(col, |t| t.0);
        return Err(Error::syntax(
            line,
            at,
            format!("expected {} symbols, found {}", groups.len(), syms.len()),
        ));
    }
    let mut symbols = Vec::with_capacity(syms.len());
    for (g, &(scol, stok)) in groups.iter().zip(syms) {
        let mut chars = stok.chars();
        let sym = match (chars.next().and_then(GroupSymbol::from_char), chars.next()) {
            (Some(s), None) => s,
            _ => {
                return Err(Error::syntax(
                    line,
                    scol,
                    format!("unknown symbol '{stok}'"),
                ))
            }
        };
        if !sym.allowed_in(g.kind) {
            return Err(Error::IllegalSymbol {
                line,
                group: g.index,
                symbol: stok.to_string(),
                kind: g.kind.describe(),
            });
        }
        symbols.push(sym);
    }
    Ok(Term { symbols, coeff })
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDoc {
    kind: BasisKind,
    size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    coeff: String,
    symbols: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateDoc {
    groups: Vec<GroupDoc>,
    terms: Vec<TermDoc>,
}

impl From<&SymbolicState> for StateDoc {
    fn from(s: &SymbolicState) -> Self {
        StateDoc {
            groups: s
                .groups
                .iter()
                .map(|g| GroupDoc {
                    kind: g.kind,
                    size: g.size,
                })
                .collect(),
            terms: s
                .terms
                .iter()
                .map(|t| TermDoc {
                    coeff: t.coeff.to_string(),
                    symbols: t.symbols.iter().map(|s| s.to_string()).collect(),
                })
                .collect(),
        }
    }
}

impl StateDoc {
    fn into_state(self) -> Result<SymbolicState> {
        let groups: Vec<GroupSpec> = self
            .groups
            .into_iter()
            .enumerate()
            .map(|(index, g)| GroupSpec {
                index,
                size: g.size,
                kind: g.kind,
            })
            .collect();
        for g in &groups {
            if g.size < 2 {
                return Err(Error::GroupTooSmall {
                    index: g.index,
                    size: g.size,
                });
            }
        }
        if self.terms.is_empty() {
            return Err(Error::EmptyState);
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (i, t) in self.terms.into_iter().enumerate() {
            let line = i + 1;
            let coeff: Coefficient =
                t.coeff
                    .parse()
                    .map_err(|e: crate::coeff::CoeffParseError| {
                        Error::syntax(line, e.offset + 1, e.message)
                    })?;
            let symbols = t
                .symbols
                .iter()
                .map(|s| {
                    let mut cs = s.chars();
                    match (cs.next().and_then(GroupSymbol::from_char), cs.next()) {
                        (Some(sym), None) => Ok(sym),
                        _ => Err(Error::syntax(line, 1, format!("unknown symbol '{s}'"))),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let term = Term { symbols, coeff };
            if term.symbols.len() != groups.len() {
                return Err(Error::syntax(
                    line,
                    1,
                    format!(
                        "expected {} symbols, found {}",
                        groups.len(),
                        term.symbols.len()
                    ),
                ));
            }
            check_term(&groups, &term, line)?;
            terms.push(term);
        }
        SymbolicState::from_specs(groups, terms)
    }
}
