//! Reference states shared by the integration tests.
#![allow(dead_code)]

use ghzw::{Coefficient, SymbolicState};

pub fn st(text: &str) -> SymbolicState {
    SymbolicState::parse(text).unwrap_or_else(|e| panic!("{e}\n{text}"))
}

/// Build a state from a group line and `(coefficient, symbols)` pairs.
pub fn build(groups: &str, terms: &[(&str, &str)]) -> SymbolicState {
    let mut s = format!("groups: {groups}\n");
    for (c, syms) in terms {
        let spaced: Vec<String> = syms.chars().map(|c| c.to_string()).collect();
        s.push_str(&format!("term: {c} {}\n", spaced.join(" ")));
    }
    st(&s)
}

/// Three GHZ-type groups of 3 qubits, one excitation per term.
pub fn three_excitations(a: &Coefficient, b: &Coefficient, c: &Coefficient) -> String {
    let mut s = "groups: G:3 G:3 G:3\n".to_string();
    for (coeff, sym) in [(a, "0 0 1"), (b, "0 1 0"), (c, "1 0 0")] {
        if !coeff.is_zero() {
            s.push_str(&format!("term: {coeff} {sym}\n"));
        }
    }
    s
}

/// GHZ-type part and two-group W-type part on equal footing: neither form
/// of its two-qubit ranges is GHZ- or W-like.
pub fn ghz_w_pair() -> SymbolicState {
    build("G:3 W:2", &[("1", "0W"), ("1", "10")])
}

pub fn three_w_groups(alpha: &str, beta: &str) -> SymbolicState {
    build(
        "W:2 W:3 W:4",
        &[("1", "000"), (alpha, "WW0"), (beta, "0WW")],
    )
}

pub fn ghz_w_bracket() -> SymbolicState {
    build("G:2 W:3", &[("1", "00"), ("1", "1W")])
}

pub fn six_group_mixed() -> SymbolicState {
    build(
        "G:2 G:2 G:2 W:2 W:2 W:2",
        &[
            ("1", "000000"),
            ("1", "001W00"),
            ("1", "0100W0"),
            ("1", "10000W"),
        ],
    )
}

pub fn ghz_rows(rows: &[&str]) -> SymbolicState {
    let n = rows[0].len();
    let groups = vec!["G:2"; n].join(" ");
    let terms: Vec<(&str, &str)> = rows.iter().map(|r| ("1", *r)).collect();
    build(&groups, &terms)
}

pub const PSI0: [&str; 5] = ["1111", "1000", "0100", "0010", "0001"];
pub const PSI1: [&str; 5] = ["1110", "1001", "0101", "0010", "0000"];
pub const PSI2: [&str; 5] = ["1100", "1010", "0101", "0011", "0000"];

pub fn w_rows(terms: &[(&str, &str)]) -> SymbolicState {
    let n = terms[0].1.len();
    build(&vec!["W:2"; n].join(" "), terms)
}

/// Two groups with every lower term present.
pub fn two_group_w(a1: &str, a2: &str, a3: &str) -> SymbolicState {
    w_rows(&[("1", "WW"), (a1, "W0"), (a2, "0W"), (a3, "00")])
}

pub const LAYER_STAR: [&str; 3] = ["WW00", "W0W0", "W00W"];
pub const LAYER_PATH: [&str; 3] = ["WW00", "W0W0", "0W0W"];
pub const LAYER_TRIANGLE: [&str; 3] = ["WW00", "0WW0", "W0W0"];

pub fn triangle_with_lower(c0: &str, c2: &str) -> SymbolicState {
    w_rows(&[
        ("1", "WW00"),
        ("1", "0WW0"),
        ("1", "W0W0"),
        (c0, "00W0"),
        ("1", "000W"),
        (c2, "0000"),
    ])
}

pub fn triangle_reduced() -> SymbolicState {
    w_rows(&[("1", "WW00"), ("1", "0WW0"), ("1", "W0W0"), ("1", "000W")])
}

/// GHZ rows `100, 010, 001, 000`, each followed by a bracket over two
/// W-type groups. `picks[i]` selects which of `W0`, `0W` appear in bracket
/// `i` (bit 0 and bit 1); `00` is always present. Coefficients are chosen
/// so that no two W-type groups can merge unless the supports force it.
pub fn bracket_family(picks: [u8; 3]) -> SymbolicState {
    let ghz = ["100", "010", "001"];
    let ratios = ["2", "3", "5"];
    let mut terms: Vec<(String, String)> = Vec::new();
    for i in 0..3 {
        if picks[i] & 1 == 1 {
            terms.push(("1".into(), format!("{}W0", ghz[i])));
        }
        if picks[i] & 2 == 2 {
            terms.push((ratios[i].into(), format!("{}0W", ghz[i])));
        }
        terms.push(("1".into(), format!("{}00", ghz[i])));
    }
    terms.push(("1".into(), "000W0".into()));
    terms.push(("7".into(), "0000W".into()));
    terms.push(("1".into(), "00000".into()));
    let refs: Vec<(&str, &str)> = terms
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    build("G:2 G:2 G:2 W:2 W:2", &refs)
}

use ghzw::{BasisKind, GroupSymbol, Term};
use rand::Rng;

/// Random grouped state with at most `max_qubits` qubits in total. Group
/// sizes are 2 or 3, coefficients small Gaussian rationals.
pub fn random_state<R: Rng>(rng: &mut R, max_qubits: usize) -> SymbolicState {
    loop {
        let mut groups = Vec::new();
        let mut total = 0;
        let want = rng.random_range(1..=5);
        while groups.len() < want {
            let size = rng.random_range(2..=3);
            if total + size > max_qubits {
                break;
            }
            total += size;
            let kind = if rng.random_bool(0.5) {
                BasisKind::Ghz
            } else {
                BasisKind::W
            };
            groups.push((kind, size));
        }
        if groups.is_empty() {
            continue;
        }
        let nterms = rng.random_range(1..=6);
        let terms: Vec<Term> = (0..nterms)
            .map(|_| {
                let symbols = groups
                    .iter()
                    .map(|&(k, _)| {
                        if rng.random_bool(0.5) {
                            GroupSymbol::Zero
                        } else {
                            GroupSymbol::excited(k)
                        }
                    })
                    .collect();
                let re = rng.random_range(-4..=4);
                let im = if rng.random_bool(0.3) {
                    rng.random_range(-3..=3)
                } else {
                    0
                };
                let den = rng.random_range(1..=3);
                let c = &Coefficient::gaussian(re, im) / &Coefficient::from_integer(den);
                Term::new(symbols, c)
            })
            .collect();
        if let Ok(s) = SymbolicState::new(&groups, terms) {
            return s;
        }
    }
}
