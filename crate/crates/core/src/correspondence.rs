//! Reduction of a grouped state to its one-qubit-per-group corresponding
//! state, and full-entanglement tests built on it.

use std::collections::HashMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::exact;
use crate::state::{GroupSymbol, SymbolicState, Term};

/// Default cap on the number of groups for the exact bipartition scan.
pub const DEFAULT_MAX_GROUPS: usize = 20;

/// Attempts made by [`find_entangling_coefficients`] before giving up.
pub const SAMPLING_BUDGET: usize = 1000;

/// One qubit per group: `|0..0>` maps to `|0>`, `|1..1>` and `|W>` to `|1>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorrespondingState {
    pub n: usize,
    pub terms: Vec<(Vec<bool>, Coefficient)>,
}

impl CorrespondingState {
    /// Rank of the coefficient matrix across the cut `side | rest`.
    pub fn cut_rank(&self, side: &[usize]) -> usize {
        let rest: Vec<usize> = (0..self.n).filter(|q| !side.contains(q)).collect();
        let mut rows: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut cols: HashMap<Vec<bool>, usize> = HashMap::new();
        let mut entries = Vec::with_capacity(self.terms.len());
        for (bits, c) in &self.terms {
            let rk: Vec<bool> = side.iter().map(|&q| bits[q]).collect();
            let ck: Vec<bool> = rest.iter().map(|&q| bits[q]).collect();
            let nr = rows.len();
            let r = *rows.entry(rk).or_insert(nr);
            let nc = cols.len();
            let c2 = *cols.entry(ck).or_insert(nc);
            entries.push((r, c2, c));
        }
        let mut m = vec![vec![Coefficient::zero(); cols.len()]; rows.len()];
        for (r, c, v) in entries {
            m[r][c] = &m[r][c] + v;
        }
        exact::rank(&m)
    }
}

pub fn concentrate(state: &SymbolicState) -> CorrespondingState {
    CorrespondingState {
        n: state.num_groups(),
        terms: state
            .terms()
            .iter()
            .map(|t| {
                (
                    t.symbols.iter().map(|s| s.is_excited()).collect(),
                    t.coeff.clone(),
                )
            })
            .collect(),
    }
}

/// Verdict of the exact full-entanglement test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entanglement {
    pub fully_entangled: bool,
    /// Groups on one side of a product cut, when one exists. For a single
    /// group state this is `[0]`, meaning the group itself is a product.
    pub witness: Option<Vec<usize>>,
}

/// Bipartitions of `n` qubits up to complement. Each is represented by its
/// smaller side (the side holding qubit 0 on a tie), ordered by size and
/// then lexicographically.
pub fn bipartitions(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n / 2).flat_map(move |k| {
        (0..n)
            .combinations(k)
            .filter(move |s| 2 * k < n || s[0] == 0)
    })
}

pub fn is_fully_entangled(state: &SymbolicState) -> Result<Entanglement> {
    is_fully_entangled_capped(state, DEFAULT_MAX_GROUPS)
}

pub fn is_fully_entangled_capped(state: &SymbolicState, max_groups: usize) -> Result<Entanglement> {
    let n = state.num_groups();
    if n > max_groups {
        return Err(Error::Resource(format!(
            "{n} groups exceed the exact bipartition cap of {max_groups}"
        )));
    }
    if n == 1 {
        let t = state.terms();
        let entangled = t.len() == 2 || t[0].symbols[0] == GroupSymbol::W;
        return Ok(Entanglement {
            fully_entangled: entangled,
            witness: (!entangled).then(|| vec![0]),
        });
    }
    let cs = concentrate(state);
    let cuts: Vec<Vec<usize>> = bipartitions(n).collect();
    let failing = cuts
        .into_par_iter()
        .find_first(|side| cs.cut_rank(side) <= 1);
    Ok(Entanglement {
        fully_entangled: failing.is_none(),
        witness: failing,
    })
}

/// Support-only test: could some choice of coefficients make the state fully
/// entangled? Returns the first group whose column is constant otherwise.
pub fn could_be_fully_entangled(state: &SymbolicState) -> (bool, Option<usize>) {
    if state.num_groups() == 1 {
        let ok = state.num_terms() == 2 || state.terms()[0].symbols[0] == GroupSymbol::W;
        return (ok, (!ok).then_some(0));
    }
    let constant = (0..state.num_groups()).find(|&g| {
        let col = state.column(g);
        col.iter().all(|s| s.is_excited() == col[0].is_excited())
    });
    (constant.is_none(), constant)
}

/// Replace the coefficients of `state`, term by term in its stored order.
pub fn with_coefficients(state: &SymbolicState, coeffs: &[Coefficient]) -> Result<SymbolicState> {
    if coeffs.len() != state.num_terms() {
        return Err(Error::Contract(format!(
            "{} coefficients for {} terms",
            coeffs.len(),
            state.num_terms()
        )));
    }
    let terms = state
        .terms()
        .iter()
        .zip(coeffs)
        .map(|(t, c)| Term::new(t.symbols.clone(), c.clone()))
        .collect();
    SymbolicState::new(&state.kinds(), terms)
}

/// Positive rational coefficients that make the state fully entangled,
/// found by seeded rejection sampling.
pub fn find_entangling_coefficients(state: &SymbolicState, seed: u64) -> Result<Vec<Coefficient>> {
    if let (false, Some(g)) = could_be_fully_entangled(state) {
        return Err(Error::Contract(format!(
            "group {g} has a constant column, so no coefficients can entangle the state"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..SAMPLING_BUDGET {
        let coeffs: Vec<Coefficient> = (0..state.num_terms())
            .map(|_| Coefficient::ratio(rng.random_range(1..=9), rng.random_range(1..=9)))
            .collect();
        let candidate = with_coefficients(state, &coeffs)?;
        if is_fully_entangled(&candidate)?.fully_entangled {
            return Ok(coeffs);
        }
    }
    Err(Error::Resource(format!(
        "no entangling coefficients found in {SAMPLING_BUDGET} draws"
    )))
}
