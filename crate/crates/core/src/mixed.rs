//! States with both GHZ-type and W-type groups.

use std::collections::BTreeMap;
use std::fmt;

use crate::canon::{self, Problem};
use crate::error::{Error, Result};
use crate::ghz::{canonicalize_ghz, TermMatrix};
use crate::simplest::is_simplest;
use crate::state::{BasisKind, GroupSymbol, SymbolicState, Term};

/// A GHZ-type part and a W-type part joined term by term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    pub state: SymbolicState,
    /// Name of each coefficient of `state`, in term order: a letter for the
    /// GHZ-type term and an index for the W-type term, such as `b_2`.
    pub slots: Vec<String>,
}

fn slot_name(ghz_term: usize, w_term: usize) -> String {
    if ghz_term < 26 {
        format!("{}_{w_term}", (b'a' + ghz_term as u8) as char)
    } else {
        format!("t{ghz_term}_{w_term}")
    }
}

/// Pair every term of `ghz` with every term of `w`; the product term's
/// coefficient is the product of the two.
pub fn compose(ghz: &SymbolicState, w: &SymbolicState) -> Result<Composition> {
    if !ghz.is_all(BasisKind::Ghz) {
        return Err(Error::Contract(
            "the first part must have only GHZ-type groups".into(),
        ));
    }
    if !w.is_all(BasisKind::W) {
        return Err(Error::Contract(
            "the second part must have only W-type groups".into(),
        ));
    }
    let kinds: Vec<(BasisKind, usize)> = ghz.kinds().into_iter().chain(w.kinds()).collect();
    let mut terms = Vec::new();
    let mut names = BTreeMap::new();
    for (i, tg) in ghz.terms().iter().enumerate() {
        for (j, tw) in w.terms().iter().enumerate() {
            let symbols: Vec<GroupSymbol> = tg.symbols.iter().chain(&tw.symbols).copied().collect();
            names.insert(symbols.clone(), slot_name(i, j));
            terms.push(Term::new(symbols, &tg.coeff * &tw.coeff));
        }
    }
    let state = SymbolicState::new(&kinds, terms)?;
    let slots = state
        .terms()
        .iter()
        .map(|t| names[&t.symbols].clone())
        .collect();
    Ok(Composition { state, slots })
}

/// Main-class label of a mixed state.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MixedLabel {
    /// Largest number of `|W>` factors in any term.
    pub q: usize,
    /// For each nonzero GHZ-type row, the number of its terms with `q`
    /// `|W>` factors, maximized over the symmetries of the GHZ-type rows.
    pub counts: Vec<usize>,
    /// Same count for the all-zero GHZ-type row, when present.
    pub zero_row: Option<usize>,
    /// GHZ-type rows in canonical form, in the order `counts` refers to.
    pub ghz_rows: Vec<String>,
}

impl fmt::Display for MixedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Count the highest W-terms attached to each GHZ-type row and reduce the
/// tuple by the column symmetries of the GHZ-type rows. The state must be
/// in simplest form and contain both kinds of group.
pub fn classify_mixed_main(state: &SymbolicState) -> Result<MixedLabel> {
    let ghz_cols: Vec<usize> = (0..state.num_groups())
        .filter(|&g| state.groups()[g].kind == BasisKind::Ghz)
        .collect();
    let w_cols: Vec<usize> = (0..state.num_groups())
        .filter(|&g| state.groups()[g].kind == BasisKind::W)
        .collect();
    if ghz_cols.is_empty() || w_cols.is_empty() {
        return Err(Error::Domain(
            "a mixed label needs both GHZ-type and W-type groups".into(),
        ));
    }
    if !is_simplest(state)? {
        return Err(Error::Domain(
            "the state is not in simplest form; simplify it first".into(),
        ));
    }
    let w_count = |t: &Term| {
        w_cols
            .iter()
            .filter(|&&g| t.symbols[g] == GroupSymbol::W)
            .count()
    };
    let q = state.terms().iter().map(w_count).max().unwrap_or(0);

    // distinct GHZ-type rows and their highest-term counts
    let mut per_row: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
    for t in state.terms() {
        let row: Vec<bool> = ghz_cols
            .iter()
            .map(|&g| t.symbols[g] == GroupSymbol::One)
            .collect();
        *per_row.entry(row).or_insert(0) += (w_count(t) == q) as usize;
    }
    let rows: Vec<Vec<bool>> = per_row.keys().cloned().collect();
    let matrix = TermMatrix::new(
        rows.clone(),
        ghz_cols.iter().map(|&g| state.groups()[g].size).collect(),
    )?;
    let form = canonicalize_ghz(&matrix, true)?;
    let n = form.sizes.len();

    // canonical rows as masks with canonical column k at bit k
    let masks: Vec<u32> = form
        .bits
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold(0u32, |acc, (k, &b)| acc | (b as u32) << k)
        })
        .collect();
    let count_of: BTreeMap<u32, usize> = masks
        .iter()
        .zip(&form.row_order)
        .map(|(&m, &orig)| (m, per_row[&rows[orig]]))
        .collect();
    let zero_row = count_of.get(&0).copied();

    // nonzero canonical rows, largest mask first
    let mut display: Vec<u32> = masks.iter().copied().filter(|&m| m != 0).collect();
    display.sort_unstable_by(|a, b| b.cmp(a));
    let labels: Vec<u64> = form.sizes.iter().map(|&s| s as u64).collect();
    let autos = canon::automorphisms(
        &Problem {
            rows: &masks,
            ncols: n,
            labels: &labels,
            flippable: &vec![true; n],
        },
        canon::CanonLimits::default().max_cols,
    )?;
    let image = |m: u32, perm: &[usize], flips: &[bool]| -> u32 {
        (0..n).fold(0u32, |acc, c| {
            acc | ((m >> c & 1) ^ flips[c] as u32) << perm[c]
        })
    };
    let counts = autos
        .iter()
        .filter(|(perm, flips)| image(0, perm, flips) == 0 || zero_row.is_none())
        .map(|(perm, flips)| {
            // the row landing on display[i] contributes its count there
            let mut v = vec![0; display.len()];
            for &m in &display {
                let target = image(m, perm, flips);
                if let Some(pos) = display.iter().position(|&d| d == target) {
                    v[pos] = count_of[&m];
                }
            }
            v
        })
        .max()
        .unwrap_or_else(|| display.iter().map(|m| count_of[m]).collect());
    let ghz_rows = display
        .iter()
        .map(|&m| {
            (0..n)
                .map(|k| if m >> k & 1 == 1 { '1' } else { '0' })
                .collect()
        })
        .collect();
    Ok(MixedLabel {
        q,
        counts,
        zero_row,
        ghz_rows,
    })
}
