use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::coeff::Coefficient;
use crate::correspondence::bipartitions;
use crate::error::{Error, Result};
use crate::state::{GroupSymbol, SymbolicState};

pub const DEFAULT_MAX_QUBITS: usize = 14;

/// Relative singular-value threshold for numeric ranks.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Qubit cap for dense expansion; `GHZW_MAX_QUBITS` overrides the default.
pub fn max_qubits() -> usize {
    std::env::var("GHZW_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
}

/// Amplitudes over the computational basis. Qubit 0 is the most significant
/// bit of the index; groups occupy consecutive qubits in group order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if n >= usize::BITS as usize || amps.len() != 1usize << n {
            return Err(Error::Contract(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        let s = DenseState { n, amps };
        if s.norm() == 0.0 {
            return Err(Error::NullState);
        }
        Ok(s)
    }

    pub fn ghz(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        amps[(1 << n) - 1] = Complex64::new(1.0, 0.0);
        DenseState { n, amps }
    }

    pub fn w(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for q in 0..n {
            amps[1 << q] = Complex64::new(1.0, 0.0);
        }
        DenseState { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn normalized(mut self) -> Self {
        let k = self.norm();
        self.amps.iter_mut().for_each(|a| *a /= k);
        self
    }

    fn nonzero(&self) -> Vec<(usize, Complex64)> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(i, &a)| (i, a))
            .collect()
    }

    /// Bit of `index` holding qubit `q`.
    fn shift(&self, q: usize) -> usize {
        self.n - 1 - q
    }

    /// Coefficient matrix across `side | rest`, keeping only the rows and
    /// columns that carry a nonzero entry.
    pub(crate) fn cut_matrix(&self, side: &[usize]) -> DMatrix<Complex64> {
        let in_side: Vec<bool> = (0..self.n).map(|q| side.contains(&q)).collect();
        let (mut rows, mut cols) = (HashMap::new(), HashMap::new());
        let mut entries = Vec::new();
        for (idx, a) in self.nonzero() {
            let (mut r, mut c) = (0usize, 0usize);
            for q in 0..self.n {
                let b = idx >> self.shift(q) & 1;
                if in_side[q] {
                    r = r << 1 | b;
                } else {
                    c = c << 1 | b;
                }
            }
            let nr = rows.len();
            let r = *rows.entry(r).or_insert(nr);
            let nc = cols.len();
            let c = *cols.entry(c).or_insert(nc);
            entries.push((r, c, a));
        }
        let mut m = DMatrix::zeros(rows.len().max(1), cols.len().max(1));
        for (r, c, a) in entries {
            m[(r, c)] += a;
        }
        m
    }
}

/// Real `2m x 2n` form `[[Re, -Im], [Im, Re]]` of a complex matrix. Each
/// complex singular value appears twice among its singular values. The
/// complex SVD routine loses accuracy on some inputs, the real one does not.
fn real_embedding(m: &DMatrix<Complex64>) -> DMatrix<f64> {
    let (r, c) = m.shape();
    DMatrix::from_fn(2 * r, 2 * c, |i, j| {
        let z = m[(i % r, j % c)];
        match (i < r, j < c) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    })
}

/// Singular values in descending order.
pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = real_embedding(m)
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s.into_iter().step_by(2).collect()
}

/// Orthonormal basis of the column space, keeping singular values above
/// `tol` times the largest.
pub(crate) fn range_basis(m: &DMatrix<Complex64>, tol: f64) -> Vec<DVector<Complex64>> {
    let r = m.nrows();
    let svd = real_embedding(m).svd(true, false);
    let u = svd.u.expect("left vectors requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let top = svd.singular_values[order[0]];
    if top == 0.0 {
        return Vec::new();
    }
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for &k in order
        .iter()
        .take_while(|&&k| svd.singular_values[k] > tol * top)
    {
        let mut z = DVector::from_fn(r, |i, _| Complex64::new(u[(i, k)], u[(i + r, k)]));
        for b in &basis {
            let proj = b.dotc(&z);
            z -= b * proj;
        }
        let norm = z.norm();
        if norm > 1e-6 {
            basis.push(z / Complex64::new(norm, 0.0));
        }
    }
    basis
}

pub(crate) fn numeric_rank(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let s = singular_values(m);
    match s.first() {
        Some(&top) if top > 0.0 => s.iter().filter(|&&x| x > tol * top).count(),
        _ => 0,
    }
}

/// Whether `m` is numerically of rank at most one: the residual after
/// removing the rank-one part through the largest entry is within `tol`
/// of the Frobenius norm. Any rank-one residual bounds the second singular
/// value, so a pass here implies rank one at the same tolerance.
pub(crate) fn at_most_rank_one(m: &DMatrix<Complex64>, tol: f64) -> bool {
    let (mut best, mut at) = (0.0, (0, 0));
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let v = m[(i, j)].norm_sqr();
            if v > best {
                best = v;
                at = (i, j);
            }
        }
    }
    if best == 0.0 {
        return true;
    }
    let pivot = m[at];
    let mut resid = 0.0;
    let mut total = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let approx = m[(i, at.1)] * m[(at.0, j)] / pivot;
            resid += (m[(i, j)] - approx).norm_sqr();
            total += m[(i, j)].norm_sqr();
        }
    }
    resid.sqrt() <= tol * total.sqrt()
}

/// Local ranks across every bipartition of the qubits, each keyed by its
/// smaller side (the side holding qubit 0 on a tie).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankFingerprint {
    pub n: usize,
    pub ranks: BTreeMap<Vec<usize>, usize>,
}

impl RankFingerprint {
    pub fn fully_entangled(&self) -> bool {
        self.ranks.values().all(|&r| r > 1)
    }

    pub fn product_cut(&self) -> Option<&Vec<usize>> {
        self.ranks.iter().find(|(_, &r)| r <= 1).map(|(k, _)| k)
    }
}

pub fn rank_fingerprint(dense: &DenseState, tol: f64) -> RankFingerprint {
    let cuts: Vec<Vec<usize>> = bipartitions(dense.n).collect();
    let ranks = cuts
        .into_par_iter()
        .map(|side| {
            let r = numeric_rank(&dense.cut_matrix(&side), tol);
            (side, r)
        })
        .collect();
    RankFingerprint { n: dense.n, ranks }
}

impl DenseState {
    /// Full-entanglement verdict over all qubit bipartitions, with the first
    /// product cut as witness. Uses the rank-one residual test.
    pub fn product_cut(&self, tol: f64) -> Option<Vec<usize>> {
        if self.n < 2 {
            return None;
        }
        let cuts: Vec<Vec<usize>> = bipartitions(self.n).collect();
        cuts.into_par_iter()
            .find_first(|side| at_most_rank_one(&self.cut_matrix(side), tol))
    }

    pub fn fully_entangled(&self, tol: f64) -> bool {
        self.n >= 2 && self.product_cut(tol).is_none()
    }
}

fn group_patterns(symbol: GroupSymbol, size: usize) -> Vec<usize> {
    match symbol {
        GroupSymbol::Zero => vec![0],
        GroupSymbol::One => vec![(1 << size) - 1],
        GroupSymbol::W => (0..size).map(|k| 1 << k).collect(),
    }
}

/// Exact expansion into computational basis amplitudes, zero entries
/// dropped.
pub fn expand_exact(state: &SymbolicState) -> Result<BTreeMap<usize, Coefficient>> {
    let n = state.total_qubits();
    if n >= usize::BITS as usize {
        return Err(Error::Resource(format!(
            "{n} qubits exceed the index width"
        )));
    }
    let mut out: BTreeMap<usize, Coefficient> = BTreeMap::new();
    for t in state.terms() {
        let mut partial = vec![0usize];
        for (g, &s) in state.groups().iter().zip(&t.symbols) {
            let pats = group_patterns(s, g.size);
            partial = partial
                .iter()
                .flat_map(|&p| pats.iter().map(move |&x| p << g.size | x))
                .collect();
        }
        for idx in partial {
            let e = out.entry(idx).or_insert_with(Coefficient::zero);
            *e = &*e + &t.coeff;
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

pub fn expand(state: &SymbolicState) -> Result<DenseState> {
    expand_capped(state, max_qubits())
}

pub fn expand_capped(state: &SymbolicState, cap: usize) -> Result<DenseState> {
    let n = state.total_qubits();
    if n > cap {
        return Err(Error::Resource(format!(
            "{n} qubits exceed the dense cap of {cap}"
        )));
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (idx, c) in expand_exact(state)? {
        amps[idx] = c.to_complex64();
    }
    DenseState::new(n, amps)
}
