//! Merging groups until no pair can be absorbed into one larger group.
//!
//! Two GHZ-type groups merge when their columns are equal or complementary.
//! Two W-type groups merge when no term carries `W` in both, and the part of
//! the state attached to `(0, W)` is a nonzero multiple `k` of the part
//! attached to `(W, 0)`. A GHZ-type group never merges with a W-type group.

use std::collections::BTreeMap;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::state::{BasisKind, GroupSpec, GroupSymbol, SymbolicState, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MergeCriterion {
    /// Columns were equal, or complementary when `complemented` is set (the
    /// second group was swapped `|0..0> <-> |1..1>` before merging).
    Ghz { complemented: bool },
    /// The `(0, W)` part equals `factor` times the `(W, 0)` part.
    W { factor: Coefficient },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeStep {
    /// Indices in the state the step was applied to; the merged group takes
    /// index `first` and `second` is removed.
    pub first: usize,
    pub second: usize,
    pub criterion: MergeCriterion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MergeReport {
    pub steps: Vec<MergeStep>,
    pub result: SymbolicState,
}

fn check_kinds(state: &SymbolicState, i: usize, j: usize, kind: BasisKind) -> Result<()> {
    let n = state.num_groups();
    if i >= n || j >= n || i == j {
        return Err(Error::Contract(format!(
            "invalid group pair ({i}, {j}) for {n} groups"
        )));
    }
    for g in [i, j] {
        if state.groups()[g].kind != kind {
            return Err(Error::Contract(format!(
                "group {g} is {}-type, expected {}-type",
                state.groups()[g].kind,
                kind
            )));
        }
    }
    Ok(())
}

/// `Some(complemented)` when the two GHZ-type columns are equal (`false`) or
/// complementary (`true`).
fn ghz_relation(state: &SymbolicState, i: usize, j: usize) -> Option<bool> {
    let equal = state.terms().iter().all(|t| t.symbols[i] == t.symbols[j]);
    let complement = state.terms().iter().all(|t| t.symbols[i] != t.symbols[j]);
    if equal {
        Some(false)
    } else if complement {
        Some(true)
    } else {
        None
    }
}

pub fn ghz_mergeable(state: &SymbolicState, i: usize, j: usize) -> Result<bool> {
    check_kinds(state, i, j, BasisKind::Ghz)?;
    Ok(ghz_relation(state, i, j).is_some())
}

fn rest_key(symbols: &[GroupSymbol], i: usize, j: usize) -> Vec<GroupSymbol> {
    symbols
        .iter()
        .enumerate()
        .filter(|&(g, _)| g != i && g != j)
        .map(|(_, &s)| s)
        .collect()
}

fn w_factor(state: &SymbolicState, i: usize, j: usize) -> Option<Coefficient> {
    use GroupSymbol::{Zero, W};
    let mut zero_w: BTreeMap<Vec<GroupSymbol>, &Coefficient> = BTreeMap::new();
    let mut w_zero: BTreeMap<Vec<GroupSymbol>, &Coefficient> = BTreeMap::new();
    for t in state.terms() {
        match (t.symbols[i], t.symbols[j]) {
            (W, W) => return None,
            (Zero, W) => {
                zero_w.insert(rest_key(&t.symbols, i, j), &t.coeff);
            }
            (W, Zero) => {
                w_zero.insert(rest_key(&t.symbols, i, j), &t.coeff);
            }
            _ => {}
        }
    }
    if zero_w.is_empty() || zero_w.len() != w_zero.len() || !zero_w.keys().eq(w_zero.keys()) {
        return None;
    }
    let mut pairs = zero_w.values().zip(w_zero.values());
    let (a, b) = pairs.next()?;
    let k = *a / *b;
    pairs.all(|(a, b)| **a == &k * *b).then_some(k)
}

pub fn w_mergeable(state: &SymbolicState, i: usize, j: usize) -> Result<Option<Coefficient>> {
    check_kinds(state, i, j, BasisKind::W)?;
    Ok(w_factor(state, i, j))
}

fn merged_groups(state: &SymbolicState, i: usize, j: usize) -> Vec<GroupSpec> {
    let (lo, hi) = (i.min(j), i.max(j));
    let mut groups = state.groups().to_vec();
    groups[lo].size += groups[hi].size;
    groups.remove(hi);
    groups
}

fn merge_symbols(
    symbols: &[GroupSymbol],
    i: usize,
    j: usize,
    merged: GroupSymbol,
) -> Vec<GroupSymbol> {
    let (lo, hi) = (i.min(j), i.max(j));
    let mut out = symbols.to_vec();
    out[lo] = merged;
    out.remove(hi);
    out
}

/// Merge one pair if either criterion applies. The merged group sits at
/// `min(i, j)` with the summed size.
pub fn merge_pair(
    state: &SymbolicState,
    i: usize,
    j: usize,
) -> Result<Option<(SymbolicState, MergeCriterion)>> {
    let kind_i = state.groups()[i].kind;
    if kind_i != state.groups()[j].kind {
        return Ok(None);
    }
    let groups = merged_groups(state, i, j);
    match kind_i {
        BasisKind::Ghz => {
            let Some(complemented) = ghz_relation(state, i, j) else {
                return Ok(None);
            };
            let terms = state
                .terms()
                .iter()
                .map(|t| {
                    Term::new(
                        merge_symbols(&t.symbols, i, j, t.symbols[i]),
                        t.coeff.clone(),
                    )
                })
                .collect();
            let merged = SymbolicState::from_specs(groups, terms)?;
            Ok(Some((merged, MergeCriterion::Ghz { complemented })))
        }
        BasisKind::W => {
            let Some(k) = w_factor(state, i, j) else {
                return Ok(None);
            };
            // rescaling the W branch of group i by k turns (W,0)psi2 + (0,W)k psi2
            // into W_merged (k psi2); keep the (0,W) coefficients
            let terms = state
                .terms()
                .iter()
                .filter(|t| (t.symbols[i], t.symbols[j]) != (GroupSymbol::W, GroupSymbol::Zero))
                .map(|t| {
                    let sym = if t.symbols[j] == GroupSymbol::W {
                        GroupSymbol::W
                    } else {
                        GroupSymbol::Zero
                    };
                    Term::new(merge_symbols(&t.symbols, i, j, sym), t.coeff.clone())
                })
                .collect();
            let merged = SymbolicState::from_specs(groups, terms)?;
            Ok(Some((merged, MergeCriterion::W { factor: k })))
        }
    }
}

/// First mergeable pair in lexicographic `(i, j)` order.
fn first_merge(
    state: &SymbolicState,
) -> Result<Option<(usize, usize, SymbolicState, MergeCriterion)>> {
    let n = state.num_groups();
    for i in 0..n {
        for j in i + 1..n {
            if let Some((s, c)) = merge_pair(state, i, j)? {
                return Ok(Some((i, j, s, c)));
            }
        }
    }
    Ok(None)
}

/// Merge pairs, lowest index pair first, until none qualifies.
pub fn simplify(state: &SymbolicState) -> Result<MergeReport> {
    let mut current = state.clone();
    let mut steps = Vec::new();
    while let Some((first, second, next, criterion)) = first_merge(&current)? {
        steps.push(MergeStep {
            first,
            second,
            criterion,
        });
        current = next;
    }
    Ok(MergeReport {
        steps,
        result: current,
    })
}

pub fn is_simplest(state: &SymbolicState) -> Result<bool> {
    Ok(first_merge(state)?.is_none())
}
