//! Exact linear algebra over the Gaussian rationals.

use itertools::Itertools;
use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coeff::Coefficient;

type GaussInt = Complex<BigInt>;

fn lcm_denominators(row: &[Coefficient]) -> BigInt {
    row.iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()))
}

fn scale_to_int(c: &Coefficient, scale: &BigInt) -> GaussInt {
    let part = |r: &BigRational| -> BigInt {
        let v = r * BigRational::from_integer(scale.clone());
        debug_assert!(v.is_integer());
        v.to_integer()
    };
    let z = c.as_complex();
    Complex::new(part(&z.re), part(&z.im))
}

/// Rank of a matrix of Gaussian rationals, by fraction-free (Bareiss)
/// elimination over the Gaussian integers.
pub fn rank(rows: &[Vec<Coefficient>]) -> usize {
    let mut m: Vec<Vec<GaussInt>> = rows
        .iter()
        .map(|row| {
            let s = lcm_denominators(row);
            row.iter().map(|c| scale_to_int(c, &s)).collect()
        })
        .collect();
    bareiss_rank(&mut m)
}

fn bareiss_rank(m: &mut [Vec<GaussInt>]) -> usize {
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut prev = GaussInt::one();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                // exact: Sylvester's identity guarantees divisibility
                m[i][j] = v / &prev;
            }
            m[i][c] = GaussInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Outcome of adding one equation to an [`AffineSystem`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Added {
    /// The equation cut the solution set down by one dimension.
    Independent,
    /// Already implied by the earlier equations.
    Redundant,
    /// Contradicts the earlier equations; the system is unchanged.
    Inconsistent,
}

/// Incrementally built linear system `A x = b` kept in reduced row echelon form.
#[derive(Debug, Clone)]
pub(crate) struct AffineSystem {
    nvars: usize,
    // each row: (pivot column, coefficients, rhs); pivot coefficient is 1
    rows: Vec<(usize, Vec<Coefficient>, Coefficient)>,
}

impl AffineSystem {
    pub fn new(nvars: usize) -> Self {
        AffineSystem {
            nvars,
            rows: Vec::new(),
        }
    }

    fn reduce(&self, coeffs: &mut [Coefficient], rhs: &mut Coefficient) {
        for (p, row, b) in &self.rows {
            if coeffs[*p].is_zero() {
                continue;
            }
            let f = coeffs[*p].clone();
            for (x, y) in coeffs.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            *rhs = &*rhs - &(&f * b);
        }
    }

    /// Add `coeffs · x = rhs`.
    pub fn add(&mut self, coeffs: &[Coefficient], rhs: &Coefficient) -> Added {
        assert_eq!(coeffs.len(), self.nvars);
        let mut a = coeffs.to_vec();
        let mut b = rhs.clone();
        self.reduce(&mut a, &mut b);
        let Some(p) = a.iter().position(|c| !c.is_zero()) else {
            return if b.is_zero() {
                Added::Redundant
            } else {
                Added::Inconsistent
            };
        };
        let inv = a[p].inv().expect("nonzero pivot");
        for x in a.iter_mut() {
            *x = &*x * &inv;
        }
        b = &b * &inv;
        for (_, row, rb) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&a) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
            *rb = &*rb - &(&f * &b);
        }
        self.rows.push((p, a, b));
        Added::Independent
    }

    /// Solution set as `particular + kernel · z`; `kernel[k]` is one basis vector.
    pub fn solution(&self) -> (Vec<Coefficient>, Vec<Vec<Coefficient>>) {
        let mut particular = vec![Coefficient::zero(); self.nvars];
        let pivots: Vec<usize> = self.rows.iter().map(|r| r.0).collect();
        for (p, _, b) in &self.rows {
            particular[*p] = b.clone();
        }
        let mut kernel = Vec::new();
        for free in (0..self.nvars).filter(|v| !pivots.contains(v)) {
            let mut k = vec![Coefficient::zero(); self.nvars];
            k[free] = Coefficient::one();
            for (p, row, _) in &self.rows {
                k[*p] = -&row[free];
            }
            kernel.push(k);
        }
        (particular, kernel)
    }
}

/// Determinant of a small integer matrix (Bareiss, exact).
pub(crate) fn int_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    prev * sign
}

/// Inverse of a unimodular integer matrix; `None` if it is not unimodular.
pub(crate) fn unimodular_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r
                .iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    for k in 0..n {
        let p = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(p, k);
        let inv = a[k][k].recip();
        for x in a[k].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..n {
            if i != k && !a[i][k].is_zero() {
                let f = a[i][k].clone();
                for j in 0..2 * n {
                    let d = &f * &a[k][j];
                    a[i][j] = &a[i][j] - d;
                }
            }
        }
    }
    a.iter()
        .map(|row| {
            row[n..]
                .iter()
                .map(|v| {
                    if v.is_integer() {
                        v.to_integer().to_i64()
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect()
}

/// Result of a multiplicative normalization: the chosen variable values and
/// which rows were set to one.
#[derive(Debug, Clone)]
pub(crate) struct Scaling {
    pub vars: Vec<Coefficient>,
    pub fixed_rows: Vec<usize>,
}

const ROW_SUBSET_BUDGET: usize = 4096;

/// Choose nonzero values for the variables so that as many coefficients
/// `coeffs[r] * prod_{v : incidence[r][v]} vars[v]` as possible become 1,
/// while keeping every value a Gaussian rational.
///
/// A row set can be normalized exactly when its incidence matrix has a
/// unimodular square minor, because the exponents are then integral.
pub(crate) fn normalize_monomials(incidence: &[Vec<bool>], coeffs: &[Coefficient]) -> Scaling {
    let nvars = incidence.first().map_or(0, Vec::len);
    let as_int = |r: usize| -> Vec<Coefficient> {
        incidence[r]
            .iter()
            .map(|&b| Coefficient::from_integer(b as i64))
            .collect()
    };
    // greedy row basis in row order
    let mut basis = Vec::new();
    for r in 0..incidence.len() {
        let mut cand: Vec<Vec<Coefficient>> = basis.iter().map(|&b| as_int(b)).collect();
        cand.push(as_int(r));
        if rank(&cand) == cand.len() {
            basis.push(r);
        }
    }
    let k = basis.len();

    let try_rows = |rows: &[usize]| -> Option<Scaling> {
        for cols in (0..nvars).combinations(rows.len()) {
            let sub: Vec<Vec<i64>> = rows
                .iter()
                .map(|&r| cols.iter().map(|&c| incidence[r][c] as i64).collect())
                .collect();
            let det = int_det(&sub);
            if det != BigInt::one() && det != -BigInt::one() {
                continue;
            }
            let inv = unimodular_inverse(&sub)?;
            return Some(solve_unimodular(nvars, rows, &cols, &inv, coeffs));
        }
        None
    };

    if let Some(s) = try_rows(&basis) {
        return s;
    }
    let all_rows: Vec<usize> = (0..incidence.len()).collect();
    for rows in all_rows
        .iter()
        .copied()
        .combinations(k)
        .take(ROW_SUBSET_BUDGET)
    {
        if let Some(s) = try_rows(&rows) {
            return s;
        }
    }
    triangular_greedy(incidence, coeffs)
}

fn solve_unimodular(
    nvars: usize,
    rows: &[usize],
    cols: &[usize],
    inv: &[Vec<i64>],
    coeffs: &[Coefficient],
) -> Scaling {
    // A e = -log c  =>  e = -A^{-1} log c  =>  v_j = prod_r c_r^{-inv[j][r]}
    let mut vars = vec![Coefficient::one(); nvars];
    for (j, &col) in cols.iter().enumerate() {
        let mut v = Coefficient::one();
        for (i, &r) in rows.iter().enumerate() {
            if inv[j][i] != 0 {
                v = v * coeffs[r].powi(-inv[j][i]);
            }
        }
        vars[col] = v;
    }
    let mut fixed_rows = rows.to_vec();
    fixed_rows.sort_unstable();
    Scaling { vars, fixed_rows }
}

fn triangular_greedy(incidence: &[Vec<bool>], coeffs: &[Coefficient]) -> Scaling {
    let nvars = incidence.first().map_or(0, Vec::len);
    let mut used_in_rows = vec![false; nvars];
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    for (r, row) in incidence.iter().enumerate() {
        let pivot = (0..nvars)
            .find(|&v| row[v] && !used_in_rows[v] && !chosen.iter().any(|&(_, p)| p == v));
        if let Some(v) = pivot {
            chosen.push((r, v));
            for (u, &b) in row.iter().enumerate() {
                used_in_rows[u] |= b;
            }
        }
    }
    let mut vars = vec![Coefficient::one(); nvars];
    for &(r, v) in &chosen {
        let mut rest = coeffs[r].clone();
        for (u, &b) in incidence[r].iter().enumerate() {
            if b && u != v {
                rest = rest * &vars[u];
            }
        }
        vars[v] = rest.inv().expect("nonzero coefficient");
    }
    let mut fixed_rows: Vec<usize> = chosen.into_iter().map(|(r, _)| r).collect();
    fixed_rows.sort_unstable();
    Scaling { vars, fixed_rows }
}
