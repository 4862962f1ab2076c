//! GHZ-type states: support matrices, their canonical forms, block
//! decomposition by column weight, and class enumeration.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use num_integer::binomial;

use crate::canon::{self, CanonLimits, Problem};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::exact;
use crate::state::{BasisKind, GroupSymbol, SymbolicState, Term};

/// Binary terms-by-groups matrix: entry `(r, c)` is set when term `r` has
/// `|1..1>` in group `c`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermMatrix {
    pub bits: Vec<Vec<bool>>,
    /// Group size attached to each column.
    pub sizes: Vec<usize>,
}

impl TermMatrix {
    pub fn new(bits: Vec<Vec<bool>>, sizes: Vec<usize>) -> Result<Self> {
        if let Some(r) = bits.iter().position(|r| r.len() != sizes.len()) {
            return Err(Error::Contract(format!(
                "row {r} has {} entries but there are {} columns",
                bits[r].len(),
                sizes.len()
            )));
        }
        Ok(TermMatrix { bits, sizes })
    }

    /// Parse rows such as `["1110", "1001"]`.
    pub fn from_rows(rows: &[&str], sizes: Vec<usize>) -> Result<Self> {
        let bits = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        _ => Err(Error::Contract(format!("bad matrix row '{r}'"))),
                    })
                    .collect::<Result<Vec<bool>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits, sizes)
    }

    pub fn nrows(&self) -> usize {
        self.bits.len()
    }

    pub fn ncols(&self) -> usize {
        self.sizes.len()
    }

    pub fn column_weight(&self, c: usize) -> usize {
        self.bits.iter().filter(|r| r[c]).count()
    }

    pub(crate) fn masks(&self) -> Vec<u32> {
        self.bits
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .fold(0u32, |acc, (c, &b)| acc | (b as u32) << c)
            })
            .collect()
    }

    /// The all-GHZ state with these rows as terms, every coefficient one.
    pub fn to_state(&self) -> Result<SymbolicState> {
        let groups: Vec<(BasisKind, usize)> =
            self.sizes.iter().map(|&s| (BasisKind::Ghz, s)).collect();
        let terms = self
            .bits
            .iter()
            .map(|r| {
                Term::new(
                    r.iter()
                        .map(|&b| {
                            if b {
                                GroupSymbol::One
                            } else {
                                GroupSymbol::Zero
                            }
                        })
                        .collect(),
                    Coefficient::one(),
                )
            })
            .collect();
        SymbolicState::new(&groups, terms)
    }
}

pub fn support_matrix(state: &SymbolicState) -> Result<TermMatrix> {
    if let Some(g) = state.groups().iter().find(|g| g.kind != BasisKind::Ghz) {
        return Err(Error::Contract(format!(
            "group {} is W-type; expected only GHZ-type groups",
            g.index
        )));
    }
    TermMatrix::new(
        state
            .terms()
            .iter()
            .map(|t| t.symbols.iter().map(|&s| s == GroupSymbol::One).collect())
            .collect(),
        state.groups().iter().map(|g| g.size).collect(),
    )
}

/// The two shapes of local operator that map `{|0..0>, |1..1>}` onto itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GhzIloKind {
    /// `diag(1, a_i)` on each qubit: `|1..1>` picks up `prod a_i`.
    IdentityLike,
    /// `[[0, b_i], [1, 0]]` on each qubit: `|0..0> -> |1..1>`,
    /// `|1..1> -> prod b_i |0..0>`.
    SwapLike,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhzRelativeIlo {
    pub kind: GhzIloKind,
    pub scalars: Vec<Coefficient>,
}

pub fn relative_ilo_ghz(kind: GhzIloKind, scalars: Vec<Coefficient>) -> Result<GhzRelativeIlo> {
    if let Some(i) = scalars.iter().position(Coefficient::is_zero) {
        return Err(Error::Contract(format!(
            "scalar {i} of a relative operator is zero"
        )));
    }
    Ok(GhzRelativeIlo { kind, scalars })
}

impl GhzRelativeIlo {
    pub fn factor(&self) -> Coefficient {
        self.scalars
            .iter()
            .fold(Coefficient::one(), |acc, s| acc * s)
    }

    /// Per-qubit 2x2 matrices, row-major.
    pub fn operators(&self) -> Vec<[[Coefficient; 2]; 2]> {
        let (z, o) = (Coefficient::zero(), Coefficient::one());
        self.scalars
            .iter()
            .map(|s| match self.kind {
                GhzIloKind::IdentityLike => [[o.clone(), z.clone()], [z.clone(), s.clone()]],
                GhzIloKind::SwapLike => [[z.clone(), s.clone()], [o.clone(), z.clone()]],
            })
            .collect()
    }

    /// Act on one GHZ-type group of a state.
    pub fn apply(&self, state: &SymbolicState, group: usize) -> Result<SymbolicState> {
        let g = state
            .groups()
            .get(group)
            .ok_or_else(|| Error::Contract(format!("no group {group}")))?;
        if g.kind != BasisKind::Ghz {
            return Err(Error::Contract(format!("group {group} is not GHZ-type")));
        }
        if g.size != self.scalars.len() {
            return Err(Error::Contract(format!(
                "operator has {} scalars for a group of {} qubits",
                self.scalars.len(),
                g.size
            )));
        }
        let f = self.factor();
        let terms = state
            .terms()
            .iter()
            .map(|t| {
                let mut t = t.clone();
                let one = t.symbols[group] == GroupSymbol::One;
                match self.kind {
                    GhzIloKind::IdentityLike => {
                        if one {
                            t.coeff = &t.coeff * &f;
                        }
                    }
                    GhzIloKind::SwapLike => {
                        if one {
                            t.coeff = &t.coeff * &f;
                            t.symbols[group] = GroupSymbol::Zero;
                        } else {
                            t.symbols[group] = GroupSymbol::One;
                        }
                    }
                }
                t
            })
            .collect();
        SymbolicState::new(&state.kinds(), terms)
    }
}

/// Columns of equal weight class: `p = min(weight, t - weight)`, `q = t - p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    pub p: usize,
    pub q: usize,
    pub count: usize,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})x{}", self.p, self.q, self.count)
    }
}

pub fn decompose_blocks(m: &TermMatrix) -> Vec<Block> {
    let t = m.nrows();
    (0..m.ncols())
        .map(|c| {
            let w = m.column_weight(c);
            w.min(t - w)
        })
        .sorted()
        .chunk_by(|&p| p)
        .into_iter()
        .map(|(p, g)| Block {
            p,
            q: t - p,
            count: g.count(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhzCanonicalForm {
    /// Canonical rows, sorted; columns in canonical order.
    pub bits: Vec<Vec<bool>>,
    /// Group sizes in canonical column order.
    pub sizes: Vec<usize>,
    pub blocks: Vec<Block>,
    /// `column_order[k]`: input column placed at canonical position `k`.
    pub column_order: Vec<usize>,
    /// Complement flag per input column.
    pub flips: Vec<bool>,
    /// `row_order[i]`: input row that became canonical row `i`.
    pub row_order: Vec<usize>,
}

impl GhzCanonicalForm {
    pub fn matrix(&self) -> TermMatrix {
        TermMatrix {
            bits: self.bits.clone(),
            sizes: self.sizes.clone(),
        }
    }

    pub fn rows_text(&self) -> Vec<String> {
        self.bits
            .iter()
            .map(|r| r.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn blocks_text(&self) -> String {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        format!("blocks: {}", parts.join(" "))
    }
}

impl fmt::Display for GhzCanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.rows_text() {
            writeln!(f, "{r}")?;
        }
        writeln!(f, "{}", self.blocks_text())
    }
}

fn unpack(mask: u32, n: usize) -> Vec<bool> {
    (0..n).map(|k| mask >> (n - 1 - k) & 1 == 1).collect()
}

/// Canonical form under column permutations (restricted to equal group
/// sizes when `respect_sizes` is set), per-column complements that keep
/// every column weight at most half the row count, and row reordering.
pub fn canonicalize_ghz(m: &TermMatrix, respect_sizes: bool) -> Result<GhzCanonicalForm> {
    canonicalize_ghz_with(m, respect_sizes, &CanonLimits::default())
}

pub fn canonicalize_ghz_with(
    m: &TermMatrix,
    respect_sizes: bool,
    limits: &CanonLimits,
) -> Result<GhzCanonicalForm> {
    let n = m.ncols();
    let masks = m.masks();
    let labels: Vec<u64> = if respect_sizes {
        m.sizes.iter().map(|&s| s as u64).collect()
    } else {
        vec![0; n]
    };
    let flippable = vec![true; n];
    let c = canon::canonicalize(
        &Problem {
            rows: &masks,
            ncols: n,
            labels: &labels,
            flippable: &flippable,
        },
        limits,
    )?;
    let bits: Vec<Vec<bool>> = c.rows.iter().map(|&r| unpack(r, n)).collect();
    let sizes: Vec<usize> = c.order.iter().map(|&k| m.sizes[k]).collect();
    let matrix = TermMatrix {
        bits: bits.clone(),
        sizes: sizes.clone(),
    };
    Ok(GhzCanonicalForm {
        blocks: decompose_blocks(&matrix),
        bits,
        sizes,
        column_order: c.order,
        flips: c.flips,
        row_order: c.row_order,
    })
}

/// Smallest `q >= 0` with `binomial(p + q, p) >= n`: the fewest zero entries
/// per column that still leave room for `n` distinct weight-`p` columns.
pub fn q_inf(p: usize, n: usize) -> Result<usize> {
    if p == 0 || n == 0 {
        return Err(Error::Domain("q_inf needs p >= 1 and n >= 1".into()));
    }
    Ok((0..)
        .find(|&q| binomial((p + q) as u128, p as u128) >= n as u128)
        .expect("binomials grow"))
}

/// One equivalence class of weight-`p` column families.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GhzClass {
    pub form: GhzCanonicalForm,
    /// Number of `|1..1>` entries in each nonzero row, descending.
    pub row_sums: Vec<usize>,
    /// Whether the all-zero term is present.
    pub zero_row: bool,
}

impl GhzClass {
    pub fn row_sums_text(&self) -> String {
        let total: usize = self.row_sums.iter().sum();
        let parts: Vec<String> = self.row_sums.iter().map(|s| s.to_string()).collect();
        format!("{total}={}", parts.join("+"))
    }
}

/// Work cap for [`enumerate_ghz_classes`], in candidate column families.
pub const ENUMERATION_BUDGET: u128 = 5_000_000;

/// All classes of `n` distinct columns of weight `p` spread over a region of
/// `p + q` rows, each row nonzero and all rows distinct, optionally followed
/// by one all-zero row. Families with a constant column or with two
/// complementary columns are dropped, and the rest are deduplicated by
/// canonical form with all group sizes treated as equal.
pub fn enumerate_ghz_classes(p: usize, q: usize, n: usize) -> Result<Vec<GhzClass>> {
    enumerate_ghz_classes_with(p, q, n, &CanonLimits::default())
}

pub fn enumerate_ghz_classes_with(
    p: usize,
    q: usize,
    n: usize,
    limits: &CanonLimits,
) -> Result<Vec<GhzClass>> {
    if p == 0 || n == 0 {
        return Err(Error::Domain(
            "class enumeration needs p >= 1 and n >= 1".into(),
        ));
    }
    let region = p + q;
    if region + 1 > limits.max_rows || region > 31 {
        return Err(Error::Resource(format!(
            "{} rows exceed the row cap of {}",
            region + 1,
            limits.max_rows
        )));
    }
    if n > limits.max_cols {
        return Err(Error::Resource(format!(
            "{n} columns exceed the column cap of {}",
            limits.max_cols
        )));
    }
    let masks: Vec<u32> = (0..region)
        .combinations(p)
        .map(|rows| rows.iter().fold(0u32, |acc, &r| acc | 1 << r))
        .collect();
    if masks.len() < n {
        return Ok(Vec::new());
    }
    // any family can be row-permuted so that one of its columns is masks[0]
    let work = binomial(masks.len() as u128 - 1, n as u128 - 1);
    if work > ENUMERATION_BUDGET {
        return Err(Error::Resource(format!(
            "{work} candidate column families exceed the enumeration budget of {ENUMERATION_BUDGET}"
        )));
    }
    let full = (1u32 << region) - 1;
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rest in (1..masks.len()).combinations(n - 1) {
        let cols: Vec<u32> = std::iter::once(masks[0])
            .chain(rest.iter().map(|&i| masks[i]))
            .collect();
        if cols.iter().fold(0, |acc, &c| acc | c) != full {
            continue;
        }
        let rows: Vec<u32> = (0..region)
            .map(|r| {
                cols.iter()
                    .enumerate()
                    .fold(0u32, |acc, (c, &m)| acc | (m >> r & 1) << c)
            })
            .collect();
        if !rows.iter().all_unique() {
            continue;
        }
        for zero_row in [false, true] {
            let t = region + zero_row as usize;
            if p == t {
                continue;
            }
            if !zero_row
                && cols
                    .iter()
                    .tuple_combinations()
                    .any(|(&a, &b)| a ^ b == full)
            {
                continue;
            }
            let mut bits: Vec<Vec<bool>> = rows
                .iter()
                .map(|&r| (0..n).map(|c| r >> c & 1 == 1).collect())
                .collect();
            if zero_row {
                bits.push(vec![false; n]);
            }
            let m = TermMatrix {
                bits,
                sizes: vec![2; n],
            };
            let form = canonicalize_ghz_with(&m, false, limits)?;
            if !seen.insert(form.bits.clone()) {
                continue;
            }
            let row_sums = rows
                .iter()
                .map(|r| r.count_ones() as usize)
                .sorted_by(|a, b| b.cmp(a))
                .collect();
            out.push(GhzClass {
                form,
                row_sums,
                zero_row,
            });
        }
    }
    out.sort_by(|a, b| a.form.bits.cmp(&b.form.bits));
    Ok(out)
}

/// Instantiate a class with group sizes: one state per assignment of
/// `sizes` to columns, up to the symmetries of the class.
pub fn assign_sizes(form: &GhzCanonicalForm, sizes: &[usize]) -> Result<Vec<SymbolicState>> {
    let n = form.sizes.len();
    if sizes.len() != n {
        return Err(Error::Contract(format!(
            "{} sizes for {n} columns",
            sizes.len()
        )));
    }
    if let Some(&s) = sizes.iter().find(|&&s| s < 2) {
        return Err(Error::Domain(format!("group size {s} is below 2")));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for perm in (0..n).permutations(n) {
        let assigned: Vec<usize> = perm.iter().map(|&i| sizes[i]).collect();
        let m = TermMatrix {
            bits: form.bits.clone(),
            sizes: assigned,
        };
        let c = canonicalize_ghz(&m, true)?;
        if seen.insert((c.bits, c.sizes)) {
            out.push(m.to_state()?);
        }
    }
    Ok(out)
}

/// Result of fixing coefficients with identity-like relative operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhzNormalization {
    pub state: SymbolicState,
    /// Factor applied to every term.
    pub global: Coefficient,
    /// Factor applied to the `|1..1>` branch of each group.
    pub column_factors: Vec<Coefficient>,
    /// Terms (by index) whose coefficient was set to one.
    pub fixed_terms: Vec<usize>,
    /// Coefficients that could not be fixed.
    pub residual: usize,
}

/// Set as many coefficients as possible to one using a global scalar and
/// one identity-like relative operator per group.
pub fn normalize_coefficients_ghz(state: &SymbolicState) -> Result<GhzNormalization> {
    let m = support_matrix(state)?;
    let incidence: Vec<Vec<bool>> = m
        .bits
        .iter()
        .map(|r| std::iter::once(true).chain(r.iter().copied()).collect())
        .collect();
    let coeffs: Vec<Coefficient> = state.terms().iter().map(|t| t.coeff.clone()).collect();
    let scaling = exact::normalize_monomials(&incidence, &coeffs);
    let terms = state
        .terms()
        .iter()
        .zip(&incidence)
        .map(|(t, inc)| {
            let f = inc
                .iter()
                .zip(&scaling.vars)
                .filter(|(&b, _)| b)
                .fold(Coefficient::one(), |acc, (_, v)| acc * v);
            Term::new(t.symbols.clone(), &t.coeff * &f)
        })
        .collect();
    let out = SymbolicState::new(&state.kinds(), terms)?;
    Ok(GhzNormalization {
        residual: state.num_terms() - scaling.fixed_rows.len(),
        state: out,
        global: scaling.vars[0].clone(),
        column_factors: scaling.vars[1..].to_vec(),
        fixed_terms: scaling.fixed_rows,
    })
}
