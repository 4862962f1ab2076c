//! Canonical forms of binary matrices under column permutations, optional
//! per-column complements and row reordering.
//!
//! Columns are first colored by invariants that every group element
//! preserves, then a level-by-level search fixes one canonical column at a
//! time. At each level only the partial choices with the smallest sorted
//! row-prefix multiset survive, and partial choices whose remaining
//! sub-problems coincide are merged. The result is the minimum of a fixed
//! total order over the orbit, so equal outputs mean equivalent inputs.

use std::collections::{BTreeMap, HashSet};

use itertools::Itertools;

use crate::error::{Error, Result};

/// Guards for the exhaustive search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CanonLimits {
    pub max_cols: usize,
    pub max_rows: usize,
    /// Partial choices evaluated before the search gives up.
    pub max_nodes: usize,
}

impl Default for CanonLimits {
    fn default() -> Self {
        CanonLimits {
            max_cols: 10,
            max_rows: 24,
            max_nodes: 20_000_000,
        }
    }
}

/// A binary matrix given as row bitmasks (bit `c` is column `c`).
#[derive(Clone, Debug)]
pub(crate) struct Problem<'a> {
    pub rows: &'a [u32],
    pub ncols: usize,
    /// Columns may only be permuted among equal labels.
    pub labels: &'a [u64],
    /// Columns that may be complemented.
    pub flippable: &'a [bool],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Canon {
    /// Canonical rows, sorted ascending; canonical column 0 is the most
    /// significant of the `ncols` low bits.
    pub rows: Vec<u32>,
    /// `order[k]` is the original column placed at canonical position `k`.
    pub order: Vec<usize>,
    /// Complement flag per original column.
    pub flips: Vec<bool>,
    /// `row_order[i]` is the original row that became canonical row `i`.
    pub row_order: Vec<usize>,
}

#[inline]
fn bit(row: u32, c: usize) -> u32 {
    (row >> c) & 1
}

fn orientations(p: &Problem, c: usize) -> Vec<bool> {
    if !p.flippable[c] {
        return vec![false];
    }
    let t = p.rows.len();
    let w = p.rows.iter().filter(|&&r| bit(r, c) == 1).count();
    match (2 * w).cmp(&t) {
        std::cmp::Ordering::Less => vec![false],
        std::cmp::Ordering::Greater => vec![true],
        std::cmp::Ordering::Equal => vec![false, true],
    }
}

/// Invariant coloring of the columns, refined until stable.
fn column_colors(p: &Problem, options: &[Vec<bool>]) -> Vec<usize> {
    let n = p.ncols;
    let t = p.rows.len();
    let weight = |c: usize| p.rows.iter().filter(|&&r| bit(r, c) == 1).count();
    let pair: Vec<Vec<[usize; 4]>> = (0..n)
        .map(|c| {
            (0..n)
                .map(|d| {
                    let mut best = [usize::MAX; 4];
                    for &fc in &options[c] {
                        for &fd in &options[d] {
                            let mut tab = [0usize; 4];
                            for &r in p.rows {
                                let x = (bit(r, c) ^ fc as u32) as usize;
                                let y = (bit(r, d) ^ fd as u32) as usize;
                                tab[2 * x + y] += 1;
                            }
                            best = best.min(tab);
                        }
                    }
                    best
                })
                .collect()
        })
        .collect();
    let initial: Vec<(u64, bool, usize)> = (0..n)
        .map(|c| {
            let w = weight(c);
            let w = if p.flippable[c] { w.min(t - w) } else { w };
            (p.labels[c], p.flippable[c], w)
        })
        .collect();
    let mut colors = rank_signatures(&initial);
    loop {
        let sigs: Vec<(usize, Vec<(usize, [usize; 4])>)> = (0..n)
            .map(|c| {
                let mut around: Vec<(usize, [usize; 4])> = (0..n)
                    .filter(|&d| d != c)
                    .map(|d| (colors[d], pair[c][d]))
                    .collect();
                around.sort_unstable();
                (colors[c], around)
            })
            .collect();
        let next = rank_signatures(&sigs);
        let before = colors.iter().unique().count();
        let after = next.iter().unique().count();
        colors = next;
        if after == before {
            return colors;
        }
    }
}

fn rank_signatures<T: Ord + Clone>(sigs: &[T]) -> Vec<usize> {
    let sorted: Vec<T> = sigs.iter().cloned().sorted().dedup().collect();
    sigs.iter()
        .map(|s| sorted.binary_search(s).expect("present"))
        .collect()
}

#[derive(Clone)]
struct Node {
    used: u32,
    prefix: Vec<u32>,
    choice: Vec<(usize, bool)>,
}

pub(crate) fn canonicalize(p: &Problem, limits: &CanonLimits) -> Result<Canon> {
    let n = p.ncols;
    let t = p.rows.len();
    if n > limits.max_cols {
        return Err(Error::Resource(format!(
            "{n} columns exceed the canonical-form cap of {}",
            limits.max_cols
        )));
    }
    if t > limits.max_rows {
        return Err(Error::Resource(format!(
            "{t} rows exceed the canonical-form cap of {}",
            limits.max_rows
        )));
    }
    assert!(n <= 31, "column count beyond bitmask width");
    let options: Vec<Vec<bool>> = (0..n).map(|c| orientations(p, c)).collect();
    let colors = column_colors(p, &options);
    let slot_colors: Vec<usize> = colors.iter().copied().sorted().collect();

    let mut nodes = vec![Node {
        used: 0,
        prefix: vec![0; t],
        choice: Vec::new(),
    }];
    let mut evaluated = 0usize;
    for &want in slot_colors.iter() {
        let mut best: Option<Vec<u32>> = None;
        let mut next: Vec<Node> = Vec::new();
        let mut seen: HashSet<(u32, Vec<(u32, u32)>)> = HashSet::new();
        for node in &nodes {
            for c in (0..n).filter(|&c| node.used >> c & 1 == 0 && colors[c] == want) {
                for &flip in &options[c] {
                    evaluated += 1;
                    if evaluated > limits.max_nodes {
                        return Err(Error::Resource(format!(
                            "canonical-form search exceeded {} partial choices",
                            limits.max_nodes
                        )));
                    }
                    let prefix: Vec<u32> = node
                        .prefix
                        .iter()
                        .zip(p.rows)
                        .map(|(&pre, &r)| pre << 1 | (bit(r, c) ^ flip as u32))
                        .collect();
                    let key: Vec<u32> = prefix.iter().copied().sorted_unstable().collect();
                    match best.as_ref().map(|b| key.cmp(b)) {
                        Some(std::cmp::Ordering::Greater) => continue,
                        Some(std::cmp::Ordering::Less) | None => {
                            best = Some(key);
                            next.clear();
                            seen.clear();
                        }
                        Some(std::cmp::Ordering::Equal) => {}
                    }
                    let used = node.used | 1 << c;
                    let future: Vec<(u32, u32)> = prefix
                        .iter()
                        .zip(p.rows)
                        .map(|(&pre, &r)| (pre, r & !used))
                        .sorted_unstable()
                        .collect();
                    if !seen.insert((used, future)) {
                        continue;
                    }
                    let mut choice = node.choice.clone();
                    choice.push((c, flip));
                    next.push(Node {
                        used,
                        prefix,
                        choice,
                    });
                }
            }
        }
        nodes = next;
    }

    let leaf = nodes
        .into_iter()
        .next()
        .expect("search keeps at least one leaf");
    let mut flips = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for &(c, f) in &leaf.choice {
        order.push(c);
        flips[c] = f;
    }
    let row_order: Vec<usize> = (0..t).sorted_by_key(|&i| (leaf.prefix[i], i)).collect();
    let rows = row_order.iter().map(|&i| leaf.prefix[i]).collect();
    Ok(Canon {
        rows,
        order,
        flips,
        row_order,
    })
}

/// Apply a column order and flips to row bitmasks, producing canonical-layout
/// rows (position 0 is the most significant bit), sorted.
#[cfg(test)]
fn relabel(rows: &[u32], order: &[usize], flips: &[bool]) -> Vec<u32> {
    rows.iter()
        .map(|&r| {
            order
                .iter()
                .fold(0u32, |acc, &c| acc << 1 | (bit(r, c) ^ flips[c] as u32))
        })
        .sorted_unstable()
        .collect()
}

/// All column permutations (with allowed flips) that map the row multiset
/// onto itself. Each entry is `(perm, flips)` with `perm[c]` the image of
/// column `c`. Brute force; intended for small matrices.
pub(crate) fn automorphisms(p: &Problem, max_cols: usize) -> Result<Vec<(Vec<usize>, Vec<bool>)>> {
    let n = p.ncols;
    if n > max_cols {
        return Err(Error::Resource(format!(
            "{n} columns exceed the automorphism search cap of {max_cols}"
        )));
    }
    let target: BTreeMap<u32, usize> = p.rows.iter().copied().counts().into_iter().collect();
    let flip_sets: Vec<Vec<bool>> = (0..n)
        .map(|c| {
            if p.flippable[c] {
                vec![false, true]
            } else {
                vec![false]
            }
        })
        .multi_cartesian_product()
        .collect();
    let flip_sets = if n == 0 { vec![Vec::new()] } else { flip_sets };
    let mut out = Vec::new();
    for perm in (0..n).permutations(n) {
        if (0..n).any(|c| p.labels[c] != p.labels[perm[c]]) {
            continue;
        }
        for flips in &flip_sets {
            let image: BTreeMap<u32, usize> = p
                .rows
                .iter()
                .map(|&r| {
                    (0..n).fold(0u32, |acc, c| {
                        acc | (bit(r, c) ^ flips[c] as u32) << perm[c]
                    })
                })
                .counts()
                .into_iter()
                .collect();
            if image == target {
                out.push((perm.clone(), flips.clone()));
            }
        }
    }
    Ok(out)
}
