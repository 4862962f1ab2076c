//! Counting and listing the ways a qubit total splits into groups.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn gf_cache() -> &'static RwLock<HashMap<(usize, usize), BigUint>> {
    static CACHE: OnceLock<RwLock<HashMap<(usize, usize), BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Coefficient of `y^m` in `prod_{i=1..parts} 1/(1 - y^i)`: the number of
/// partitions of `m` into parts no larger than `parts`.
pub fn gf_coefficient(parts: usize, m: usize) -> BigUint {
    if let Some(v) = gf_cache().read().expect("cache lock").get(&(parts, m)) {
        return v.clone();
    }
    // table[s] = partitions of s using parts 1..=i, built for i = 1..=parts
    let mut table = vec![BigUint::zero(); m + 1];
    table[0] = BigUint::one();
    for i in 1..=parts.min(m) {
        for s in i..=m {
            let add = table[s - i].clone();
            table[s] += add;
        }
    }
    let v = table[m].clone();
    gf_cache()
        .write()
        .expect("cache lock")
        .insert((parts, m), v.clone());
    v
}

/// Partitions of `m` whose parts are all at least 2.
pub fn count_parts_ge2(m: usize) -> BigUint {
    if m == 0 {
        return BigUint::one();
    }
    gf_coefficient(m, m) - gf_coefficient(m - 1, m - 1)
}

/// Number of main partition shells of `n` qubits: mixed splits with both a
/// GHZ-type and a W-type side, plus the pure GHZ-type and pure W-type ones.
pub fn count_main_partitions(n: usize) -> Result<BigUint> {
    if n < 4 {
        return Err(Error::Domain(format!(
            "the shell count needs at least 4 qubits, got {n}"
        )));
    }
    let mixed: BigUint = (2..=n - 2)
        .map(|k| count_parts_ge2(k) * count_parts_ge2(n - k))
        .sum();
    Ok(mixed + count_parts_ge2(n) * 2u32)
}

/// Group sizes of one partition shell, each side sorted descending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionSkeleton {
    pub ghz: Vec<usize>,
    pub w: Vec<usize>,
}

impl PartitionSkeleton {
    pub fn total(&self) -> usize {
        self.ghz.iter().sum::<usize>() + self.w.iter().sum::<usize>()
    }

    pub fn num_groups(&self) -> usize {
        self.ghz.len() + self.w.len()
    }
}

impl fmt::Display for PartitionSkeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |parts: &[usize]| {
            if parts.is_empty() {
                "-".to_string()
            } else {
                parts
                    .iter()
                    .map(|p| p.to_string())
                    .collect::<Vec<_>>()
                    .join("+")
            }
        };
        write!(f, "G:{} | W:{}", side(&self.ghz), side(&self.w))
    }
}

/// Which shells [`enumerate_skeletons`] reports.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SkeletonFilter {
    pub ghz_only: bool,
    pub w_only: bool,
    /// Drop shells consisting of a single group.
    pub multi_group: bool,
}

/// Partitions of `m` into parts `>= 2`, parts descending, listed in
/// reverse-lexicographic order.
fn partitions_ge2(m: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (2..=max.min(rest)).rev() {
            cur.push(part);
            rec(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(m, m, &mut Vec::new(), &mut out);
    out
}

/// Every shell of `n` qubits: the GHZ-type total runs from `n` down to 0,
/// and within one split the GHZ-type parts and then the W-type parts appear
/// in reverse-lexicographic order.
pub fn enumerate_skeletons(n: usize, filter: SkeletonFilter) -> Result<Vec<PartitionSkeleton>> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "a shell needs at least 2 qubits, got {n}"
        )));
    }
    let mut out = Vec::new();
    for m_ghz in (0..=n).rev() {
        let m_w = n - m_ghz;
        if m_ghz == 1 || m_w == 1 {
            continue;
        }
        if (filter.ghz_only && m_w != 0) || (filter.w_only && m_ghz != 0) {
            continue;
        }
        for g in partitions_ge2(m_ghz) {
            for w in partitions_ge2(m_w) {
                let sk = PartitionSkeleton { ghz: g.clone(), w };
                if filter.multi_group && sk.num_groups() < 2 {
                    continue;
                }
                out.push(sk);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generating_function_values() {
        assert_eq!(gf_coefficient(6, 6), BigUint::from(11u32));
        assert_eq!(gf_coefficient(5, 5), BigUint::from(7u32));
        assert_eq!(gf_coefficient(3, 0), BigUint::one());
        assert_eq!(gf_coefficient(2, 4), BigUint::from(3u32));
    }

    #[test]
    fn parts_at_least_two() {
        assert_eq!(count_parts_ge2(6), BigUint::from(4u32));
        assert_eq!(count_parts_ge2(2), BigUint::one());
        assert_eq!(count_parts_ge2(3), BigUint::one());
        assert_eq!(count_parts_ge2(1), BigUint::zero());
    }

    #[test]
    fn main_partition_count() {
        // mixed 2|2, plus pure {4} and {2,2} on either side
        assert_eq!(count_main_partitions(4).unwrap(), BigUint::from(5u32));
        assert!(count_main_partitions(3).is_err());
    }

    #[test]
    fn six_qubit_ghz_shells() {
        let f = SkeletonFilter {
            ghz_only: true,
            multi_group: true,
            ..Default::default()
        };
        let got: Vec<String> = enumerate_skeletons(6, f)
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, vec!["G:4+2 | W:-", "G:3+3 | W:-", "G:2+2+2 | W:-"]);
    }

    #[test]
    fn smallest_shells() {
        let got: Vec<String> = enumerate_skeletons(2, SkeletonFilter::default())
            .unwrap()
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(got, vec!["G:2 | W:-", "G:- | W:2"]);
        let f = SkeletonFilter {
            ghz_only: true,
            ..Default::default()
        };
        assert_eq!(enumerate_skeletons(4, f).unwrap().len(), 2);
    }
}
