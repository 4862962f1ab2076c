use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::dense::DenseState;
use crate::error::{Error, Result};
use crate::state::{BasisKind, GroupSpec};

/// Operators with a larger condition number are redrawn.
pub const MAX_CONDITION: f64 = 1e4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IloKind {
    General,
    /// Diagonal or anti-diagonal.
    RelativeGhz,
    /// `[[1, b], [0, x]]`.
    RelativeW,
}

pub fn condition_number(m: &Matrix2<Complex64>) -> f64 {
    let fro2: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    let det = (m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]).norm();
    if det == 0.0 {
        return f64::INFINITY;
    }
    // s1^2 + s2^2 = fro2 and s1 s2 = det
    let disc = (fro2 * fro2 - 4.0 * det * det).max(0.0).sqrt();
    let s1 = ((fro2 + disc) / 2.0).sqrt();
    let s2 = det / s1;
    s1 / s2
}

fn entry(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

fn nonzero_entry(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let z = entry(rng);
        if z.norm() > 0.1 {
            return z;
        }
    }
}

fn draw(
    rng: &mut ChaCha8Rng,
    kind: IloKind,
    scale: Option<Complex64>,
    swap: Option<bool>,
) -> Matrix2<Complex64> {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    loop {
        let m = match kind {
            IloKind::General => Matrix2::new(entry(rng), entry(rng), entry(rng), entry(rng)),
            IloKind::RelativeGhz => {
                let (a, b) = (nonzero_entry(rng), nonzero_entry(rng));
                if swap.unwrap_or_else(|| rng.random_bool(0.5)) {
                    Matrix2::new(zero, a, b, zero)
                } else {
                    Matrix2::new(a, zero, zero, b)
                }
            }
            IloKind::RelativeW => {
                let x = scale.unwrap_or_else(|| nonzero_entry(rng));
                Matrix2::new(one, entry(rng), zero, x)
            }
        };
        if condition_number(&m) <= MAX_CONDITION {
            return m;
        }
    }
}

/// One operator per qubit, drawn deterministically from `seed`.
pub fn random_ops(n: usize, seed: u64, kind: IloKind) -> Vec<Matrix2<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw(&mut rng, kind, None, None)).collect()
}

/// Apply `ops[q]` to qubit `q`.
pub fn apply_ops(dense: &DenseState, ops: &[Matrix2<Complex64>]) -> Result<DenseState> {
    let n = dense.num_qubits();
    if ops.len() != n {
        return Err(Error::Contract(format!(
            "{} operators for {n} qubits",
            ops.len()
        )));
    }
    let mut out = dense.clone();
    let amps = out.amplitudes_mut();
    for (q, m) in ops.iter().enumerate() {
        let bit = 1usize << (n - 1 - q);
        for i in 0..amps.len() {
            if i & bit != 0 {
                continue;
            }
            let (a0, a1) = (amps[i], amps[i | bit]);
            amps[i] = m[(0, 0)] * a0 + m[(0, 1)] * a1;
            amps[i | bit] = m[(1, 0)] * a0 + m[(1, 1)] * a1;
        }
    }
    Ok(out.normalized())
}

/// Random invertible local operators of one kind on every qubit; the result
/// is renormalized.
pub fn apply_random_ilo(dense: &DenseState, seed: u64, kind: IloKind) -> DenseState {
    apply_ops(dense, &random_ops(dense.num_qubits(), seed, kind)).expect("one operator per qubit")
}

/// Random relative operators that respect each group's basis: every qubit
/// of a GHZ-type group gets the same shape (both diagonal or both
/// anti-diagonal), and every qubit of a W-type group shares its scale.
pub fn apply_random_grouped_ilo(
    dense: &DenseState,
    groups: &[GroupSpec],
    seed: u64,
) -> Result<DenseState> {
    let total: usize = groups.iter().map(|g| g.size).sum();
    if total != dense.num_qubits() {
        return Err(Error::Contract(format!(
            "groups cover {total} qubits but the state has {}",
            dense.num_qubits()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ops = Vec::with_capacity(total);
    for g in groups {
        match g.kind {
            BasisKind::Ghz => {
                let swap = rng.random_bool(0.5);
                ops.extend(
                    (0..g.size).map(|_| draw(&mut rng, IloKind::RelativeGhz, None, Some(swap))),
                );
            }
            BasisKind::W => {
                let x = loop {
                    let x = nonzero_entry(&mut rng);
                    if x.norm() > 0.3 {
                        break x;
                    }
                };
                ops.extend((0..g.size).map(|_| draw(&mut rng, IloKind::RelativeW, Some(x), None)));
            }
        }
    }
    apply_ops(dense, &ops)
}
