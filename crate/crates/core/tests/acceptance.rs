//! One PASS/FAIL line per acceptance criterion. Exits nonzero on failure.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::*;
use ghzw::correspondence::is_fully_entangled;
use ghzw::ghz::{
    assign_sizes, canonicalize_ghz, enumerate_ghz_classes, q_inf, support_matrix, TermMatrix,
};
use ghzw::mixed::classify_mixed_main;
use ghzw::oracle::{
    apply_random_grouped_ilo, apply_random_ilo, classify_ghz_w, expand, rank_fingerprint,
    DenseState, GhzWClass, IloKind,
};
use ghzw::partitions::{
    count_main_partitions, count_parts_ge2, enumerate_skeletons, SkeletonFilter,
};
use ghzw::simplest::{is_simplest, simplify};
use ghzw::w::{
    canonicalize_w_layer, count_w_main_classes, eliminate_lower_terms, enumerate_w_layers,
    highest_layer,
};
use ghzw::{normalize_terms, Coefficient, Error, SymbolicState, Term};
use itertools::Itertools;
use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;
const ENTANGLEMENT_LIMIT: Duration = Duration::from_secs(1);
const TOTAL_LIMIT: Duration = Duration::from_secs(300);

type Outcome = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn nonzero_coeff(rng: &mut ChaCha8Rng) -> Coefficient {
    loop {
        let c = &Coefficient::gaussian(rng.random_range(-9..=9), rng.random_range(-9..=9))
            / &Coefficient::from_integer(rng.random_range(1..=7));
        if !c.is_zero() {
            return c;
        }
    }
}

fn entanglement_detection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let mut slowest = Duration::ZERO;
    let zero = Coefficient::zero();
    for i in 0..50 {
        let abc: Vec<Coefficient> = (0..3).map(|_| nonzero_coeff(&mut rng)).collect();
        let start = Instant::now();
        let v = is_fully_entangled(&st(&three_excitations(&abc[0], &abc[1], &abc[2])))
            .map_err(|e| e.to_string())?;
        slowest = slowest.max(start.elapsed());
        ensure(v.fully_entangled, || {
            format!("sample {i}: not fully entangled")
        })?;
        // every pattern of zeros short of all three
        for mask in 1u8..7 {
            let pick = |k: usize| {
                if mask >> k & 1 == 1 {
                    zero.clone()
                } else {
                    abc[k].clone()
                }
            };
            let start = Instant::now();
            let v = is_fully_entangled(&st(&three_excitations(&pick(0), &pick(1), &pick(2))))
                .map_err(|e| e.to_string())?;
            slowest = slowest.max(start.elapsed());
            ensure(!v.fully_entangled, || {
                format!("sample {i} zeros {mask:03b}: reported fully entangled")
            })?;
        }
    }
    ensure(slowest < ENTANGLEMENT_LIMIT, || {
        format!("slowest check {slowest:?}")
    })?;
    Ok(format!(
        "50 samples x 7 zero patterns, slowest {slowest:?} (limit 1s)"
    ))
}

fn correspondence_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut agree = 0;
    let mut largest = (0, Duration::ZERO);
    for _ in 0..200 {
        let s = random_state(&mut rng, 14);
        let exact = is_fully_entangled(&s)
            .map_err(|e| e.to_string())?
            .fully_entangled;
        let start = Instant::now();
        let dense = expand(&s).map_err(|e| e.to_string())?.fully_entangled(TOL);
        let n = s.total_qubits();
        if n >= largest.0 {
            largest = (n, largest.1.max(start.elapsed()));
        }
        ensure(exact == dense, || format!("disagreement on\n{s}"))?;
        agree += 1;
    }
    Ok(format!(
        "{agree}/200 agree (tol {TOL:e}), largest N={} dense check {:?}",
        largest.0, largest.1
    ))
}

fn ghz_w_characterization() -> Outcome {
    for n in 3..=10 {
        for (base, want) in [
            (DenseState::ghz(n), GhzWClass::Ghz),
            (DenseState::w(n), GhzWClass::W),
        ] {
            ensure(classify_ghz_w(&base, TOL) == want, || {
                format!("N={n} {want} unmoved")
            })?;
            for seed in 0..20 {
                let moved = apply_random_ilo(&base, seed, IloKind::General);
                let got = classify_ghz_w(&moved, TOL);
                ensure(got == want, || {
                    format!("N={n} seed={seed}: {want} classified as {got}")
                })?;
            }
        }
    }
    let got = classify_ghz_w(&expand(&ghz_w_pair()).map_err(|e| e.to_string())?, TOL);
    ensure(got == GhzWClass::Neither, || {
        format!("GHZ/W pair classified as {got}")
    })?;
    Ok(format!(
        "GHZ_N and W_N for N=3..10 with 20 ILOs each, pair state neither (tol {TOL:e})"
    ))
}

fn simplest_form() -> Outcome {
    for (a, b) in [("2", "3"), ("1", "1"), ("-1/2", "5"), ("1+1i", "2-3i")] {
        let r = simplify(&three_w_groups(a, b)).map_err(|e| e.to_string())?;
        let want = build("W:6 W:3", &[("1", "00"), (b, "WW")]);
        ensure(r.result == want, || {
            format!("alpha={a} beta={b}: got\n{}", r.result)
        })?;
    }
    for s in [ghz_w_bracket(), six_group_mixed()] {
        let r = simplify(&s).map_err(|e| e.to_string())?;
        ensure(r.steps.is_empty() && r.result == s, || {
            format!("not a fixed point:\n{s}")
        })?;
    }
    Ok("three W groups merge to 2 groups; bracket and six-group states are fixed points".into())
}

fn partitions_at_least_two(m: usize, max: usize) -> u64 {
    if m == 0 {
        return 1;
    }
    (2..=max.min(m))
        .map(|p| partitions_at_least_two(m - p, p))
        .sum()
}

fn partitions() -> Outcome {
    let f = SkeletonFilter {
        ghz_only: true,
        multi_group: true,
        ..Default::default()
    };
    let got: Vec<Vec<usize>> = enumerate_skeletons(6, f)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|s| s.ghz)
        .collect();
    ensure(got == vec![vec![4, 2], vec![3, 3], vec![2, 2, 2]], || {
        format!("N=6 shells {got:?}")
    })?;
    for m in 0..=30 {
        let brute = BigUint::from(partitions_at_least_two(m, m));
        ensure(count_parts_ge2(m) == brute, || format!("m={m}"))?;
    }
    for n in 4..=14 {
        let listed = enumerate_skeletons(n, SkeletonFilter::default())
            .map_err(|e| e.to_string())?
            .len();
        let counted = count_main_partitions(n).map_err(|e| e.to_string())?;
        ensure(counted == BigUint::from(listed), || {
            format!("N={n}: {counted} vs {listed}")
        })?;
    }
    Ok("N=6 GHZ shells {4+2, 3+3, 2+2+2}; part counts m<=30; shell counts N=4..14".into())
}

fn canon_bits(rows: &[&str]) -> std::result::Result<Vec<Vec<bool>>, String> {
    let m = support_matrix(&ghz_rows(rows)).map_err(|e| e.to_string())?;
    Ok(canonicalize_ghz(&m, false).map_err(|e| e.to_string())?.bits)
}

fn ghz_classes() -> Outcome {
    let classes = enumerate_ghz_classes(2, 2, 4).map_err(|e| e.to_string())?;
    let found: BTreeSet<_> = classes.iter().map(|c| c.form.bits.clone()).collect();
    let want: BTreeSet<_> = [canon_bits(&PSI1)?, canon_bits(&PSI2)?]
        .into_iter()
        .collect();
    ensure(classes.len() == 2 && found == want, || {
        format!("{} classes", classes.len())
    })?;
    let qi = q_inf(2, 4).map_err(|e| e.to_string())?;
    ensure(qi == 2, || format!("q_inf(2,4)={qi}"))?;
    let psi1 = canonicalize_ghz(
        &support_matrix(&ghz_rows(&PSI1)).map_err(|e| e.to_string())?,
        false,
    )
    .map_err(|e| e.to_string())?;
    let sized = assign_sizes(&psi1, &[2, 3, 4, 5])
        .map_err(|e| e.to_string())?
        .len();
    ensure(sized == 12, || format!("{sized} sized states"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(56);
    for trial in 0..1000 {
        let n = rng.random_range(2..=6);
        let t = rng.random_range(2..=8);
        let bits: Vec<Vec<bool>> = (0..t)
            .map(|_| (0..n).map(|_| rng.random_bool(0.4)).collect())
            .collect();
        let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=4)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let flips: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let mut moved: Vec<Vec<bool>> = bits
            .iter()
            .map(|r| perm.iter().map(|&c| r[c] ^ flips[c]).collect())
            .collect();
        moved.shuffle(&mut rng);
        let moved_sizes: Vec<usize> = perm.iter().map(|&c| sizes[c]).collect();
        let a = TermMatrix::new(bits, sizes).map_err(|e| e.to_string())?;
        let b = TermMatrix::new(moved, moved_sizes).map_err(|e| e.to_string())?;
        let ca = canonicalize_ghz(&a, true).map_err(|e| e.to_string())?;
        let cb = canonicalize_ghz(&b, true).map_err(|e| e.to_string())?;
        ensure(ca.bits == cb.bits && ca.sizes == cb.sizes, || {
            format!("perturbation {trial} changed the form")
        })?;
    }
    Ok(
        "(2,2,4) gives the two expected classes; q_inf(2,4)=2; 12 sized states; 1000 perturbations"
            .into(),
    )
}

fn layer_rows(rows: &[&str]) -> std::result::Result<Vec<Vec<bool>>, String> {
    let terms: Vec<(&str, &str)> = rows.iter().map(|r| ("1", *r)).collect();
    let layer = highest_layer(&w_rows(&terms)).map_err(|e| e.to_string())?;
    Ok(canonicalize_w_layer(&layer, false)
        .map_err(|e| e.to_string())?
        .rows)
}

fn w_classes() -> Outcome {
    let two = layer_rows(&["WW00", "00WW", "0000"])?;
    let three = layer_rows(&["WW00", "W0W0", "000W", "00W0"])?;
    ensure(two != three, || {
        "two-term and three-term layers coincide".into()
    })?;
    let layers: BTreeSet<_> = [LAYER_STAR, LAYER_PATH, LAYER_TRIANGLE]
        .iter()
        .map(|r| layer_rows(r))
        .collect::<std::result::Result<_, _>>()?;
    ensure(layers.len() == 3, || "three-row layers coincide".into())?;
    let listed: BTreeSet<_> = enumerate_w_layers(4, 2, 3)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|l| l.rows)
        .collect();
    ensure(layers == listed, || "layer enumeration differs".into())?;

    for (a1, a2, a3) in [("2", "3", "7"), ("1/2", "-1", "0"), ("1+1i", "2", "5")] {
        let s = two_group_w(a1, a2, a3);
        let e = eliminate_lower_terms(&s).map_err(|e| e.to_string())?;
        ensure(e.state == w_rows(&[("1", "WW"), ("1", "00")]), || {
            format!("two groups {a1} {a2} {a3}: {}", e.state)
        })?;
        ensure(e.replay(&s).map_err(|e| e.to_string())? == e.state, || {
            "replay mismatch".into()
        })?;
    }
    for (c0, c2) in [("2", "3"), ("-1/3", "5/7"), ("0", "1")] {
        let s = triangle_with_lower(c0, c2);
        let e = eliminate_lower_terms(&s).map_err(|e| e.to_string())?;
        ensure(e.state == triangle_reduced(), || {
            format!("triangle {c0} {c2}: {}", e.state)
        })?;
        ensure(e.replay(&s).map_err(|e| e.to_string())? == e.state, || {
            "replay mismatch".into()
        })?;
    }
    for n in 2..=20usize {
        let brute = (0u32..1 << n).filter(|m| m.count_ones() >= 2).count();
        let got = count_w_main_classes(n).map_err(|e| e.to_string())?;
        ensure(got == BigUint::from(brute), || {
            format!("n={n}: {got} vs {brute}")
        })?;
    }
    Ok("layers distinct; eliminations reach the reduced forms; main class count n<=20".into())
}

fn mixed_classification() -> Outcome {
    let mut labels = BTreeSet::new();
    for picks in (0..3).map(|_| 0u8..4).multi_cartesian_product() {
        let s = bracket_family([picks[0], picks[1], picks[2]]);
        if picks.iter().all(|&p| p == 0) {
            ensure(!is_simplest(&s).map_err(|e| e.to_string())?, || {
                "empty brackets reported simplest".into()
            })?;
            ensure(
                matches!(classify_mixed_main(&s), Err(Error::Domain(_))),
                || "empty brackets labeled".into(),
            )?;
            continue;
        }
        labels.insert(
            classify_mixed_main(&s)
                .map_err(|e| e.to_string())?
                .to_string(),
        );
    }
    let want: BTreeSet<String> = [
        "(2,2,2)", "(2,2,1)", "(2,2,0)", "(2,1,1)", "(2,1,0)", "(2,0,0)", "(1,1,1)", "(1,1,0)",
        "(1,0,0)",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    ensure(labels == want, || format!("labels {labels:?}"))?;
    Ok(format!("{} labels, (0,0,0) rejected", labels.len()))
}

fn property_suites() -> Outcome {
    let states = [
        ghz_w_pair(),
        ghz_w_bracket(),
        two_group_w("2", "3", "7"),
        ghz_rows(&PSI1),
        triangle_reduced(),
    ];
    let kinds = [IloKind::General, IloKind::RelativeGhz, IloKind::RelativeW];
    for s in &states {
        let d = expand(s).map_err(|e| e.to_string())?;
        let base = rank_fingerprint(&d, TOL);
        for seed in 0..100u64 {
            let moved = apply_random_ilo(&d, seed, kinds[seed as usize % 3]);
            ensure(rank_fingerprint(&moved, TOL) == base, || {
                format!("{s}: seed {seed} changed the fingerprint")
            })?;
            let grouped =
                apply_random_grouped_ilo(&d, s.groups(), seed).map_err(|e| e.to_string())?;
            ensure(rank_fingerprint(&grouped, TOL) == base, || {
                format!("{s}: grouped seed {seed}")
            })?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..1000 {
        let s = random_state(&mut rng, 14);
        let text = SymbolicState::parse(&s.to_text()).map_err(|e| e.to_string())?;
        let json = SymbolicState::from_json(&s.to_json().to_string()).map_err(|e| e.to_string())?;
        ensure(text == s && json == s, || format!("round trip {i} failed"))?;
        let mut terms: Vec<Term> = s.terms().to_vec();
        terms.extend(s.terms().iter().take(2).cloned());
        if let Ok(once) = normalize_terms(terms) {
            let twice = normalize_terms(once.clone()).map_err(|e| e.to_string())?;
            ensure(twice == once, || {
                format!("normalization {i} not idempotent")
            })?;
        }
    }
    Ok(format!(
        "{} states x 100 ILOs (tol {TOL:e}); 1000 round trips; idempotent normalization",
        states.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("entanglement detection", entanglement_detection),
        ("correspondence vs dense", correspondence_agreement),
        ("GHZ/W characterization", ghz_w_characterization),
        ("simplest form", simplest_form),
        ("partitions", partitions),
        ("GHZ classes", ghz_classes),
        ("W classes", w_classes),
        ("mixed classification", mixed_classification),
        ("property suites", property_suites),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{took:.2?}]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{took:.2?}]", i + 1);
            }
        }
    }
    let elapsed = total.elapsed();
    if elapsed > TOTAL_LIMIT {
        failed += 1;
        println!("FAIL total time {elapsed:.2?} exceeds {TOTAL_LIMIT:?}");
    } else {
        println!("total {elapsed:.2?} (limit {TOTAL_LIMIT:?})");
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
