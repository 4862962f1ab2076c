//! W-type states: relative operators, the layer of terms with the most
//! `|W>` factors, its canonical form, and elimination of lower terms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::binomial;

use crate::canon::{self, CanonLimits, Problem};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::exact::{self, Added, AffineSystem};
use crate::state::{BasisKind, GroupSymbol, SymbolicState, Term};

/// Relative operator for one W-type group: qubit `i` gets
/// `[[1, shifts[i]], [0, scale]]`, so `|0..0>` is fixed and
/// `|W> -> scale |W> + (sum shifts) |0..0>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WRelativeIlo {
    pub shifts: Vec<Coefficient>,
    pub scale: Coefficient,
}

pub fn relative_ilo_w(shifts: Vec<Coefficient>, scale: Coefficient) -> Result<WRelativeIlo> {
    if scale.is_zero() {
        return Err(Error::Contract(
            "the scale of a relative operator is zero".into(),
        ));
    }
    if shifts.is_empty() {
        return Err(Error::Contract(
            "a relative operator needs at least one qubit".into(),
        ));
    }
    Ok(WRelativeIlo { shifts, scale })
}

impl WRelativeIlo {
    /// Coefficient of `|0..0>` in the image of `|W>`.
    pub fn shift(&self) -> Coefficient {
        self.shifts.iter().cloned().sum()
    }

    pub fn operators(&self) -> Vec<[[Coefficient; 2]; 2]> {
        self.shifts
            .iter()
            .map(|b| {
                [
                    [Coefficient::one(), b.clone()],
                    [Coefficient::zero(), self.scale.clone()],
                ]
            })
            .collect()
    }

    pub fn apply(&self, state: &SymbolicState, group: usize) -> Result<SymbolicState> {
        let g = state
            .groups()
            .get(group)
            .ok_or_else(|| Error::Contract(format!("no group {group}")))?;
        if g.kind != BasisKind::W {
            return Err(Error::Contract(format!("group {group} is not W-type")));
        }
        if g.size != self.shifts.len() {
            return Err(Error::Contract(format!(
                "operator has {} qubits for a group of {} qubits",
                self.shifts.len(),
                g.size
            )));
        }
        let alpha = self.shift();
        let mut terms = Vec::with_capacity(state.num_terms() * 2);
        for t in state.terms() {
            if t.symbols[group] != GroupSymbol::W {
                terms.push(t.clone());
                continue;
            }
            terms.push(Term::new(t.symbols.clone(), &t.coeff * &self.scale));
            if !alpha.is_zero() {
                let mut s = t.symbols.clone();
                s[group] = GroupSymbol::Zero;
                terms.push(Term::new(s, &t.coeff * &alpha));
            }
        }
        SymbolicState::new(&state.kinds(), terms)
    }
}

fn w_masks(state: &SymbolicState) -> Result<Vec<(u32, Coefficient)>> {
    if let Some(g) = state.groups().iter().find(|g| g.kind != BasisKind::W) {
        return Err(Error::Contract(format!(
            "group {} is GHZ-type; expected only W-type groups",
            g.index
        )));
    }
    if state.num_groups() > 31 {
        return Err(Error::Resource(format!(
            "{} groups exceed the limit of 31",
            state.num_groups()
        )));
    }
    Ok(state
        .terms()
        .iter()
        .map(|t| {
            let m = t.symbols.iter().enumerate().fold(0u32, |acc, (g, &s)| {
                acc | ((s == GroupSymbol::W) as u32) << g
            });
            (m, t.coeff.clone())
        })
        .collect())
}

fn mask_row(m: u32, n: usize) -> Vec<bool> {
    (0..n).map(|g| m >> g & 1 == 1).collect()
}

/// Terms carrying the largest number `q` of `|W>` factors, as indicator
/// rows over the groups. There are `p = rows.len()` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WHighestLayer {
    pub q: usize,
    pub rows: Vec<Vec<bool>>,
    pub sizes: Vec<usize>,
}

impl WHighestLayer {
    pub fn p(&self) -> usize {
        self.rows.len()
    }
}

pub fn highest_layer(state: &SymbolicState) -> Result<WHighestLayer> {
    let masks = w_masks(state)?;
    let q = masks.iter().map(|(m, _)| m.count_ones()).max().unwrap_or(0) as usize;
    if q < 2 {
        return Err(Error::Domain(format!(
            "the highest terms carry {q} W factors; at least 2 are needed"
        )));
    }
    let n = state.num_groups();
    Ok(WHighestLayer {
        q,
        rows: masks
            .iter()
            .filter(|(m, _)| m.count_ones() as usize == q)
            .map(|(m, _)| mask_row(*m, n))
            .collect(),
        sizes: state.groups().iter().map(|g| g.size).collect(),
    })
}

/// Number of ways to pick the highest W-count of a state on `n` groups
/// together with which groups may carry `|W>`: `2^n - n - 1`.
pub fn count_w_main_classes(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 groups, got {n}")));
    }
    Ok((BigUint::from(1u32) << n) - BigUint::from(n) - BigUint::from(1u32))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WCanonicalLayer {
    pub q: usize,
    /// Canonical rows, sorted; columns in canonical order.
    pub rows: Vec<Vec<bool>>,
    pub sizes: Vec<usize>,
    /// `column_order[k]`: input group placed at canonical position `k`.
    pub column_order: Vec<usize>,
    pub row_order: Vec<usize>,
}

impl WCanonicalLayer {
    pub fn p(&self) -> usize {
        self.rows.len()
    }

    pub fn rows_text(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&b| if b { 'W' } else { '0' }).collect())
            .collect()
    }

    pub fn label(&self) -> String {
        format!("W-main(p={},q={})", self.p(), self.q)
    }
}

impl fmt::Display for WCanonicalLayer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.label())?;
        for r in self.rows_text() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Canonical form of a layer under group permutations (restricted to equal
/// sizes when `respect_sizes` is set) and row reordering.
pub fn canonicalize_w_layer(layer: &WHighestLayer, respect_sizes: bool) -> Result<WCanonicalLayer> {
    canonicalize_w_layer_with(layer, respect_sizes, &CanonLimits::default())
}

pub fn canonicalize_w_layer_with(
    layer: &WHighestLayer,
    respect_sizes: bool,
    limits: &CanonLimits,
) -> Result<WCanonicalLayer> {
    let n = layer.sizes.len();
    let masks: Vec<u32> = layer
        .rows
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .fold(0u32, |acc, (c, &b)| acc | (b as u32) << c)
        })
        .collect();
    let labels: Vec<u64> = if respect_sizes {
        layer.sizes.iter().map(|&s| s as u64).collect()
    } else {
        vec![0; n]
    };
    let c = canon::canonicalize(
        &Problem {
            rows: &masks,
            ncols: n,
            labels: &labels,
            flippable: &vec![false; n],
        },
        limits,
    )?;
    Ok(WCanonicalLayer {
        q: layer.q,
        rows: c
            .rows
            .iter()
            .map(|&r| (0..n).map(|k| r >> (n - 1 - k) & 1 == 1).collect())
            .collect(),
        sizes: c.order.iter().map(|&k| layer.sizes[k]).collect(),
        column_order: c.order,
        row_order: c.row_order,
    })
}

/// Cap on candidate layers examined by [`enumerate_w_layers`].
pub const LAYER_BUDGET: u128 = 5_000_000;

/// Distinct highest layers of `p` terms with `q` W factors each on `n`
/// groups, up to group permutations.
pub fn enumerate_w_layers(n: usize, q: usize, p: usize) -> Result<Vec<WCanonicalLayer>> {
    enumerate_w_layers_with(n, q, p, &CanonLimits::default())
}

pub fn enumerate_w_layers_with(
    n: usize,
    q: usize,
    p: usize,
    limits: &CanonLimits,
) -> Result<Vec<WCanonicalLayer>> {
    if n < 2 || q < 2 || q > n || p == 0 {
        return Err(Error::Domain(format!(
            "need n >= 2, 2 <= q <= n and p >= 1; got n={n}, q={q}, p={p}"
        )));
    }
    if n > limits.max_cols {
        return Err(Error::Resource(format!(
            "{n} groups exceed the column cap of {}",
            limits.max_cols
        )));
    }
    let subsets: Vec<Vec<bool>> = (0..n)
        .combinations(q)
        .map(|s| (0..n).map(|g| s.contains(&g)).collect())
        .collect();
    let work = binomial(subsets.len() as u128, p as u128);
    if work > LAYER_BUDGET || p > limits.max_rows {
        return Err(Error::Resource(format!(
            "{work} candidate layers exceed the enumeration budget of {LAYER_BUDGET}"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for pick in (0..subsets.len()).combinations(p) {
        let layer = WHighestLayer {
            q,
            rows: pick.iter().map(|&i| subsets[i].clone()).collect(),
            sizes: vec![2; n],
        };
        let c = canonicalize_w_layer_with(&layer, false, limits)?;
        if seen.insert(c.rows.clone()) {
            out.push(c);
        }
    }
    out.sort_by(|a, b| a.rows.cmp(&b.rows));
    Ok(out)
}

/// Polynomial in the free parameters, keyed by exponent vectors.
type Poly = BTreeMap<Vec<u32>, Coefficient>;

fn poly_add(a: &mut Poly, key: Vec<u32>, c: Coefficient) {
    let sum = a.get(&key).map_or(c.clone(), |v| v + &c);
    if sum.is_zero() {
        a.remove(&key);
    } else {
        a.insert(key, sum);
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let k: Vec<u32> = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            poly_add(&mut out, k, ca * cb);
        }
    }
    out
}

fn degree(p: &Poly) -> Option<u32> {
    p.keys().map(|k| k.iter().sum()).max()
}

/// `alpha_i = base[i] + sum_k basis[i][k] z_k`.
struct Parametrization {
    base: Vec<Coefficient>,
    basis: Vec<Vec<Coefficient>>,
}

impl Parametrization {
    fn free(&self) -> usize {
        self.basis.first().map_or(0, Vec::len)
    }

    fn affine(&self, i: usize) -> Poly {
        let m = self.free();
        let mut p = Poly::new();
        poly_add(&mut p, vec![0; m], self.base[i].clone());
        for k in 0..m {
            let mut e = vec![0; m];
            e[k] = 1;
            poly_add(&mut p, e, self.basis[i][k].clone());
        }
        p
    }

    /// Restrict to the solutions of `g . z + b = 0`.
    fn constrain(&mut self, g: &[Coefficient], b: &Coefficient) -> bool {
        let m = self.free();
        let mut sys = AffineSystem::new(m);
        if sys.add(g, &-b) != Added::Independent {
            return false;
        }
        let (z0, kernel) = sys.solution();
        let n = self.base.len();
        for i in 0..n {
            let shift: Coefficient = (0..m).map(|k| &self.basis[i][k] * &z0[k]).sum();
            self.base[i] = &self.base[i] + &shift;
        }
        self.basis = (0..n)
            .map(|i| {
                kernel
                    .iter()
                    .map(|kv| (0..m).map(|k| &self.basis[i][k] * &kv[k]).sum())
                    .collect()
            })
            .collect();
        true
    }
}

/// Outcome of [`eliminate_lower_terms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WElimination {
    pub state: SymbolicState,
    /// Total shift `alpha_i` applied to each group.
    pub shifts: Vec<Coefficient>,
    /// Scale `x_i` applied to the `|W>` branch of each group.
    pub scales: Vec<Coefficient>,
    pub global: Coefficient,
    /// Lower terms whose coefficient the shifts forced to zero.
    pub eliminated: Vec<Vec<GroupSymbol>>,
    /// Terms of the output whose coefficient could not be set to one.
    pub residual: Vec<Term>,
}

impl WElimination {
    /// One relative operator per group; the whole shift sits on the group's
    /// first qubit.
    pub fn operators(&self, sizes: &[usize]) -> Result<Vec<WRelativeIlo>> {
        self.shifts
            .iter()
            .zip(&self.scales)
            .zip(sizes)
            .map(|((a, x), &s)| {
                let mut shifts = vec![Coefficient::zero(); s];
                shifts[0] = a.clone();
                relative_ilo_w(shifts, x.clone())
            })
            .collect()
    }

    /// Apply the recorded operators and global factor to `input`.
    pub fn replay(&self, input: &SymbolicState) -> Result<SymbolicState> {
        let sizes: Vec<usize> = input.groups().iter().map(|g| g.size).collect();
        let mut s = input.clone();
        for (g, op) in self.operators(&sizes)?.iter().enumerate() {
            s = op.apply(&s, g)?;
        }
        scale_all(&s, &self.global)
    }
}

fn scale_all(state: &SymbolicState, f: &Coefficient) -> Result<SymbolicState> {
    let terms = state
        .terms()
        .iter()
        .map(|t| Term::new(t.symbols.clone(), &t.coeff * f))
        .collect();
    SymbolicState::new(&state.kinds(), terms)
}

fn symbols_of(mask: u32, n: usize) -> Vec<GroupSymbol> {
    (0..n)
        .map(|g| {
            if mask >> g & 1 == 1 {
                GroupSymbol::W
            } else {
                GroupSymbol::Zero
            }
        })
        .collect()
}

/// Shift every group's `|W>` by a multiple of `|0..0>` so that as many terms
/// below the highest layer vanish as possible, then rescale to set as many
/// remaining coefficients to one as possible.
///
/// Targets are visited from the layer just below the highest downward, and
/// lexicographically within a layer. A target is eliminated when its
/// coefficient is affine in the parameters still free; targets with a
/// nonlinear dependence are skipped. Free parameters left at the end are
/// set to zero.
pub fn eliminate_lower_terms(state: &SymbolicState) -> Result<WElimination> {
    let n = state.num_groups();
    let masks = w_masks(state)?;
    let q = masks.iter().map(|(m, _)| m.count_ones()).max().unwrap_or(0);
    let support: BTreeMap<u32, Coefficient> = masks.into_iter().collect();

    let mut param = Parametrization {
        base: vec![Coefficient::zero(); n],
        basis: (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| Coefficient::from_integer((i == k) as i64))
                    .collect()
            })
            .collect(),
    };
    let mut eliminated = Vec::new();
    for layer in (0..q).rev() {
        let targets: Vec<u32> = (0..n)
            .combinations(layer as usize)
            .map(|s| s.iter().fold(0u32, |acc, &g| acc | 1 << g))
            .sorted_by_key(|&m| symbols_of(m, n))
            .collect();
        for t in targets {
            let m = param.free();
            if m == 0 {
                break;
            }
            let alphas: Vec<Poly> = (0..n).map(|i| param.affine(i)).collect();
            let mut total = Poly::new();
            for (&s, c) in support.range(t..) {
                if s & t != t {
                    continue;
                }
                let mut term = Poly::new();
                poly_add(&mut term, vec![0; m], c.clone());
                for i in (0..n).filter(|&i| (s & !t) >> i & 1 == 1) {
                    term = poly_mul(&term, &alphas[i]);
                }
                for (k, v) in term {
                    poly_add(&mut total, k, v);
                }
            }
            if degree(&total) != Some(1) {
                continue;
            }
            let b = total
                .get(&vec![0; m])
                .cloned()
                .unwrap_or_else(Coefficient::zero);
            let g: Vec<Coefficient> = (0..m)
                .map(|k| {
                    let mut e = vec![0; m];
                    e[k] = 1;
                    total.get(&e).cloned().unwrap_or_else(Coefficient::zero)
                })
                .collect();
            if param.constrain(&g, &b) {
                eliminated.push(symbols_of(t, n));
            }
        }
    }

    let shifts = param.base;
    let mut shifted = state.clone();
    for (g, a) in shifts.iter().enumerate() {
        let mut per_qubit = vec![Coefficient::zero(); state.groups()[g].size];
        per_qubit[0] = a.clone();
        shifted = relative_ilo_w(per_qubit, Coefficient::one())?.apply(&shifted, g)?;
    }

    // highest terms first so they are the ones set to one
    let order: Vec<usize> = (0..shifted.num_terms())
        .sorted_by_key(|&i| {
            let s = &shifted.terms()[i].symbols;
            let w = s.iter().filter(|&&x| x == GroupSymbol::W).count();
            (std::cmp::Reverse(w), std::cmp::Reverse(s.clone()))
        })
        .collect();
    let incidence: Vec<Vec<bool>> = order
        .iter()
        .map(|&i| {
            std::iter::once(true)
                .chain(
                    shifted.terms()[i]
                        .symbols
                        .iter()
                        .map(|&s| s == GroupSymbol::W),
                )
                .collect()
        })
        .collect();
    let coeffs: Vec<Coefficient> = order
        .iter()
        .map(|&i| shifted.terms()[i].coeff.clone())
        .collect();
    let scaling = exact::normalize_monomials(&incidence, &coeffs);
    let global = scaling.vars[0].clone();
    let scales = scaling.vars[1..].to_vec();

    let mut out = WElimination {
        state: state.clone(),
        shifts,
        scales,
        global,
        eliminated,
        residual: Vec::new(),
    };
    out.state = out.replay(state)?;
    let fixed: BTreeSet<Vec<GroupSymbol>> = scaling
        .fixed_rows
        .iter()
        .map(|&r| shifted.terms()[order[r]].symbols.clone())
        .collect();
    out.residual = out
        .state
        .terms()
        .iter()
        .filter(|t| !fixed.contains(&t.symbols))
        .cloned()
        .collect();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SymbolicState {
        SymbolicState::parse(s).unwrap()
    }

    #[test]
    fn operator_action() {
        let s = st("groups: W:2 W:3\nterm: 1 W 0\nterm: 1 0 W");
        let op = relative_ilo_w(
            vec![Coefficient::one(), Coefficient::from_integer(2)],
            Coefficient::from_integer(5),
        )
        .unwrap();
        assert_eq!(
            op.apply(&s, 0).unwrap(),
            st("groups: W:2 W:3\nterm: 5 W 0\nterm: 1 0 W\nterm: 3 0 0")
        );
        assert!(relative_ilo_w(vec![Coefficient::one()], Coefficient::zero()).is_err());
    }

    #[test]
    fn main_class_counts() {
        assert_eq!(count_w_main_classes(4).unwrap(), BigUint::from(11u32));
        assert_eq!(count_w_main_classes(2).unwrap(), BigUint::from(1u32));
        assert!(count_w_main_classes(1).is_err());
    }

    #[test]
    fn four_group_pair_layers() {
        assert_eq!(enumerate_w_layers(4, 2, 2).unwrap().len(), 2);
        assert_eq!(enumerate_w_layers(4, 2, 3).unwrap().len(), 3);
    }

    #[test]
    fn two_group_state_loses_all_parameters() {
        let s = st("groups: W:2 W:2\nterm: 1 W W\nterm: 2 W 0\nterm: 3 0 W\nterm: 7 0 0");
        let e = eliminate_lower_terms(&s).unwrap();
        assert_eq!(e.state, st("groups: W:2 W:2\nterm: 1 W W\nterm: 1 0 0"));
        assert!(e.residual.is_empty());
        assert_eq!(e.replay(&s).unwrap(), e.state);
    }

    #[test]
    fn highest_layer_needs_two_w() {
        assert!(matches!(
            highest_layer(&st("groups: W:2 W:2\nterm: 1 W 0")),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            highest_layer(&st("groups: G:2 W:2\nterm: 1 1 W")),
            Err(Error::Contract(_))
        ));
    }
}
