use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, Vector4};
use num_complex::Complex64;
use rayon::prelude::*;

use super::dense::{expand_exact, range_basis, DenseState};
use crate::coeff::Coefficient;
use crate::error::{Error, Result};
use crate::exact;
use crate::state::SymbolicState;

/// Discriminants at most this large mean a double root.
const DOUBLE_ROOT: f64 = 1e-10;
/// Discriminants above this mean two distinct roots; values in between are
/// left undecided.
const DISTINCT_ROOTS: f64 = 1e-8;

/// How many product vectors the range of a two-qubit reduced state holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RangeType {
    /// Exactly one product vector.
    WLike,
    /// Exactly two product vectors.
    GhzLike,
    /// Range not two-dimensional, infinitely many product vectors, or a
    /// numerically undecided discriminant.
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GhzWClass {
    Ghz,
    W,
    Neither,
}

impl std::fmt::Display for RangeType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RangeType::WLike => "W-like",
            RangeType::GhzLike => "GHZ-like",
            RangeType::Other => "other",
        })
    }
}

impl std::fmt::Display for GhzWClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            GhzWClass::Ghz => "GHZ",
            GhzWClass::W => "W",
            GhzWClass::Neither => "neither",
        })
    }
}

/// Rows are the pair's basis states `00, 01, 10, 11`; columns are the
/// nonzero patterns of the other qubits.
fn pair_matrix(dense: &DenseState, (a, b): (usize, usize)) -> DMatrix<Complex64> {
    let n = dense.num_qubits();
    let (sa, sb) = (n - 1 - a, n - 1 - b);
    let mut cols: HashMap<usize, usize> = HashMap::new();
    let mut entries = Vec::new();
    for (idx, &amp) in dense.amplitudes().iter().enumerate() {
        if amp.norm_sqr() == 0.0 {
            continue;
        }
        let row = (idx >> sa & 1) << 1 | (idx >> sb & 1);
        let rest = idx & !(1 << sa) & !(1 << sb);
        let nc = cols.len();
        let c = *cols.entry(rest).or_insert(nc);
        entries.push((row, c, amp));
    }
    let mut m = DMatrix::zeros(4, cols.len().max(1));
    for (r, c, v) in entries {
        m[(r, c)] += v;
    }
    m
}

/// Coefficients `(A, B, C)` of `det(x U + y V) = A x^2 + B x y + C y^2`,
/// where a 4-vector is read as the 2x2 matrix `[[v00, v01], [v10, v11]]`.
/// Its roots `x : y` are the product vectors of `span{U, V}`.
pub fn product_vector_quadratic(
    u: &Vector4<Complex64>,
    v: &Vector4<Complex64>,
) -> (Complex64, Complex64, Complex64) {
    let a = u[0] * u[3] - u[1] * u[2];
    let b = u[0] * v[3] + v[0] * u[3] - u[1] * v[2] - v[1] * u[2];
    let c = v[0] * v[3] - v[1] * v[2];
    (a, b, c)
}

fn classify_quadratic(a: Complex64, b: Complex64, c: Complex64) -> RangeType {
    let scale = a.norm().max(b.norm()).max(c.norm());
    if scale <= DOUBLE_ROOT {
        return RangeType::Other;
    }
    let d = (b * b - 4.0 * a * c).norm();
    if d <= DOUBLE_ROOT {
        RangeType::WLike
    } else if d > DISTINCT_ROOTS {
        RangeType::GhzLike
    } else {
        RangeType::Other
    }
}

pub fn two_qubit_range_type(
    dense: &DenseState,
    pair: (usize, usize),
    tol: f64,
) -> Result<RangeType> {
    let n = dense.num_qubits();
    if pair.0 >= n || pair.1 >= n || pair.0 == pair.1 {
        return Err(Error::Contract(format!(
            "invalid qubit pair {pair:?} for {n} qubits"
        )));
    }
    let basis = range_basis(&pair_matrix(dense, pair), tol);
    if basis.len() != 2 {
        return Ok(RangeType::Other);
    }
    let col = |k: usize| Vector4::from_iterator(basis[k].iter().copied());
    let (a, b, c) = product_vector_quadratic(&col(0), &col(1));
    Ok(classify_quadratic(a, b, c))
}

/// Exact version for symbolic states: the discriminant is decided over the
/// Gaussian rationals.
pub fn two_qubit_range_type_exact(
    state: &SymbolicState,
    pair: (usize, usize),
) -> Result<RangeType> {
    let n = state.total_qubits();
    if pair.0 >= n || pair.1 >= n || pair.0 == pair.1 {
        return Err(Error::Contract(format!(
            "invalid qubit pair {pair:?} for {n} qubits"
        )));
    }
    let (sa, sb) = (n - 1 - pair.0, n - 1 - pair.1);
    let mut cols: BTreeMap<usize, [Coefficient; 4]> = BTreeMap::new();
    for (idx, c) in expand_exact(state)? {
        let row = (idx >> sa & 1) << 1 | (idx >> sb & 1);
        let rest = idx & !(1 << sa) & !(1 << sb);
        let e = cols
            .entry(rest)
            .or_insert_with(|| std::array::from_fn(|_| Coefficient::zero()));
        e[row] = &e[row] + &c;
    }
    let vectors: Vec<Vec<Coefficient>> = cols.into_values().map(|v| v.to_vec()).collect();
    if exact::rank(&vectors) != 2 {
        return Ok(RangeType::Other);
    }
    let first = vectors
        .iter()
        .find(|v| v.iter().any(|x| !x.is_zero()))
        .expect("rank 2");
    let second = vectors
        .iter()
        .find(|v| exact::rank(&[first.clone(), v.to_vec()]) == 2)
        .expect("rank 2");
    let (u, v) = (first, second);
    let a = &u[0] * &u[3] - &u[1] * &u[2];
    let b = &u[0] * &v[3] + &v[0] * &u[3] - &u[1] * &v[2] - &v[1] * &u[2];
    let c = &v[0] * &v[3] - &v[1] * &v[2];
    if a.is_zero() && b.is_zero() && c.is_zero() {
        return Ok(RangeType::Other);
    }
    let d = &b * &b - &(&Coefficient::from_integer(4) * &(&a * &c));
    Ok(if d.is_zero() {
        RangeType::WLike
    } else {
        RangeType::GhzLike
    })
}

/// GHZ class when every qubit pair is GHZ-like, W class when every pair is
/// W-like, neither otherwise (including states that are not fully
/// entangled).
pub fn classify_ghz_w(dense: &DenseState, tol: f64) -> GhzWClass {
    let n = dense.num_qubits();
    if n < 3 || !dense.fully_entangled(tol) {
        return GhzWClass::Neither;
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let types: Vec<RangeType> = pairs
        .par_iter()
        .map(|&p| two_qubit_range_type(dense, p, tol).expect("valid pair"))
        .collect();
    if types.iter().all(|&t| t == RangeType::GhzLike) {
        GhzWClass::Ghz
    } else if types.iter().all(|&t| t == RangeType::WLike) {
        GhzWClass::W
    } else {
        GhzWClass::Neither
    }
}
