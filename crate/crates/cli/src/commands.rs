use std::fmt::Write;

use ghzw::correspondence::{bipartitions, concentrate, is_fully_entangled};
use ghzw::ghz::{
    canonicalize_ghz_with, enumerate_ghz_classes_with, normalize_coefficients_ghz, support_matrix,
    Block, GhzCanonicalForm,
};
use ghzw::mixed::classify_mixed_main;
use ghzw::oracle::{
    apply_random_grouped_ilo, classify_ghz_w, expand_capped, rank_fingerprint, RankFingerprint,
};
use ghzw::partitions::{enumerate_skeletons, SkeletonFilter};
use ghzw::simplest::{is_simplest, MergeCriterion};
use ghzw::w::{
    canonicalize_w_layer_with, eliminate_lower_terms, enumerate_w_layers_with, highest_layer,
    WCanonicalLayer,
};
use ghzw::{BasisKind, Error, SymbolicState};
use serde_json::{json, Value};

use crate::{Failure, Report, Settings};

type Outcome = Result<Report, Failure>;

fn report(text: String, json: Value) -> Outcome {
    Ok(Report {
        text,
        json,
        ok: true,
    })
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(sep)
}

fn blocks_json(blocks: &[Block]) -> Value {
    blocks
        .iter()
        .map(|b| json!({ "p": b.p, "q": b.q, "count": b.count }))
        .collect()
}

fn ghz_form_json(form: &GhzCanonicalForm, with_sizes: bool) -> Value {
    json!({
        "rows": form.rows_text(),
        "sizes": if with_sizes { json!(form.sizes) } else { Value::Null },
        "blocks": blocks_json(&form.blocks),
    })
}

fn ghz_form_text(out: &mut String, form: &GhzCanonicalForm, with_sizes: bool) {
    if with_sizes {
        let _ = writeln!(out, "sizes: {}", join(&form.sizes, " "));
    }
    let _ = write!(out, "{form}");
}

fn w_layer_json(layer: &WCanonicalLayer, with_sizes: bool) -> Value {
    json!({
        "label": layer.label(),
        "p": layer.p(),
        "q": layer.q,
        "rows": layer.rows_text(),
        "sizes": if with_sizes { json!(layer.sizes) } else { Value::Null },
    })
}

fn w_layer_text(out: &mut String, layer: &WCanonicalLayer, with_sizes: bool) {
    let _ = writeln!(out, "{}", layer.label());
    if with_sizes {
        let _ = writeln!(out, "sizes: {}", join(&layer.sizes, " "));
    }
    for r in layer.rows_text() {
        let _ = writeln!(out, "{r}");
    }
}

pub fn check(state: &SymbolicState) -> Outcome {
    let v = is_fully_entangled(state)?;
    let mut text = format!("fully-entangled: {}\n", v.fully_entangled);
    if let Some(side) = &v.witness {
        let _ = writeln!(text, "product-cut: groups {}", join(side, " "));
    }
    report(
        text,
        json!({
            "command": "check",
            "fully_entangled": v.fully_entangled,
            "witness": v.witness,
        }),
    )
}

pub fn simplify(state: &SymbolicState) -> Outcome {
    let r = ghzw::simplest::simplify(state)?;
    let mut text = String::new();
    let mut steps = Vec::new();
    for s in &r.steps {
        let (kind, detail, j) = match &s.criterion {
            MergeCriterion::Ghz { complemented } => (
                "ghz",
                if *complemented {
                    "complementary".to_string()
                } else {
                    "equal".to_string()
                },
                json!({ "complemented": complemented }),
            ),
            MergeCriterion::W { factor } => (
                "w",
                format!("factor {factor}"),
                json!({ "factor": factor.to_string() }),
            ),
        };
        let _ = writeln!(text, "merge {} {}: {kind} {detail}", s.first, s.second);
        let mut step = json!({ "first": s.first, "second": s.second, "criterion": kind });
        if let (Value::Object(m), Value::Object(extra)) = (&mut step, j) {
            m.extend(extra);
        }
        steps.push(step);
    }
    if r.steps.is_empty() {
        text.push_str("already simplest\n");
    }
    text.push_str(&r.result.to_text());
    report(
        text,
        json!({ "command": "simplify", "steps": steps, "result": r.result.to_json() }),
    )
}

pub fn canon(
    state: &SymbolicState,
    ghz: bool,
    respect_sizes: bool,
    settings: &Settings,
) -> Outcome {
    let mut text = String::new();
    if ghz {
        let form = canonicalize_ghz_with(&support_matrix(state)?, respect_sizes, &settings.limits)?;
        ghz_form_text(&mut text, &form, respect_sizes);
        let mut j = ghz_form_json(&form, respect_sizes);
        j["command"] = json!("canon");
        j["basis"] = json!("ghz");
        report(text, j)
    } else {
        let layer =
            canonicalize_w_layer_with(&highest_layer(state)?, respect_sizes, &settings.limits)?;
        w_layer_text(&mut text, &layer, respect_sizes);
        let mut j = w_layer_json(&layer, respect_sizes);
        j["command"] = json!("canon");
        j["basis"] = json!("w");
        report(text, j)
    }
}

pub fn enum_partitions(n: usize, filter: SkeletonFilter) -> Outcome {
    let shells = enumerate_skeletons(n, filter)?;
    let text: String = shells.iter().map(|s| format!("{s}\n")).collect();
    let list: Vec<Value> = shells
        .iter()
        .map(|s| json!({ "ghz": s.ghz, "w": s.w }))
        .collect();
    report(
        text,
        json!({ "command": "enum-partitions", "n": n, "count": list.len(), "skeletons": list }),
    )
}

pub fn enum_ghz(p: usize, q: usize, n: usize, settings: &Settings) -> Outcome {
    let classes = enumerate_ghz_classes_with(p, q, n, &settings.limits)?;
    let mut text = String::new();
    let mut list = Vec::new();
    for (i, c) in classes.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        let _ = writeln!(text, "class {}: {}", i + 1, c.row_sums_text());
        ghz_form_text(&mut text, &c.form, false);
        let mut j = ghz_form_json(&c.form, false);
        j["row_sums"] = json!(c.row_sums);
        j["zero_row"] = json!(c.zero_row);
        list.push(j);
    }
    report(
        text,
        json!({ "command": "enum-ghz", "p": p, "q": q, "n": n, "count": list.len(), "classes": list }),
    )
}

pub fn enum_w(n: usize, q: usize, p: usize, settings: &Settings) -> Outcome {
    let layers = enumerate_w_layers_with(n, q, p, &settings.limits)?;
    let mut text = String::new();
    for (i, l) in layers.iter().enumerate() {
        if i > 0 {
            text.push('\n');
        }
        w_layer_text(&mut text, l, false);
    }
    let list: Vec<Value> = layers.iter().map(|l| w_layer_json(l, false)).collect();
    report(
        text,
        json!({ "command": "enum-w", "n": n, "q": q, "p": p, "count": list.len(), "layers": list }),
    )
}

pub fn compose(ghz: &SymbolicState, w: &SymbolicState) -> Outcome {
    let c = ghzw::mixed::compose(ghz, w)?;
    let groups: Vec<String> = c
        .state
        .groups()
        .iter()
        .map(|g| format!("{}:{}", g.kind, g.size))
        .collect();
    let mut text = format!("groups: {}\n", groups.join(" "));
    let mut slots = Vec::new();
    for (t, name) in c.state.terms().iter().zip(&c.slots) {
        let _ = writeln!(
            text,
            "term: {name} {}  # {}",
            join(&t.symbols, " "),
            t.coeff
        );
        slots.push(json!({
            "slot": name,
            "symbols": t.symbols.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "coeff": t.coeff.to_string(),
        }));
    }
    report(
        text,
        json!({ "command": "compose", "state": c.state.to_json(), "slots": slots }),
    )
}

pub fn classify(state: &SymbolicState, settings: &Settings) -> Outcome {
    if !is_simplest(state)? {
        return Err(Error::Domain(
            "the state is not in simplest form; run 'simplify' first".into(),
        )
        .into());
    }
    let mut text = String::new();
    if state.is_all(BasisKind::Ghz) {
        let form = canonicalize_ghz_with(&support_matrix(state)?, true, &settings.limits)?;
        let norm = normalize_coefficients_ghz(state)?;
        text.push_str("kind: ghz\n");
        ghz_form_text(&mut text, &form, true);
        let _ = writeln!(text, "free-coefficients: {}", norm.residual);
        let mut j = ghz_form_json(&form, true);
        j["command"] = json!("classify");
        j["kind"] = json!("ghz");
        j["free_coefficients"] = json!(norm.residual);
        j["normalized"] = norm.state.to_json();
        report(text, j)
    } else if state.is_all(BasisKind::W) {
        let layer = canonicalize_w_layer_with(&highest_layer(state)?, true, &settings.limits)?;
        let e = eliminate_lower_terms(state)?;
        text.push_str("kind: w\n");
        w_layer_text(&mut text, &layer, true);
        let _ = writeln!(text, "uneliminated-terms: {}", e.residual.len());
        text.push_str("reduced:\n");
        text.push_str(&e.state.to_text());
        let mut j = w_layer_json(&layer, true);
        j["command"] = json!("classify");
        j["kind"] = json!("w");
        j["uneliminated_terms"] = json!(e.residual.len());
        j["reduced"] = e.state.to_json();
        report(text, j)
    } else {
        let label = classify_mixed_main(state)?;
        text.push_str("kind: mixed\n");
        let _ = writeln!(text, "label: {label}");
        let _ = writeln!(text, "q: {}", label.q);
        for (row, count) in label.ghz_rows.iter().zip(&label.counts) {
            let _ = writeln!(text, "{row}: {count}");
        }
        if let Some(z) = label.zero_row {
            let _ = writeln!(text, "zero-row: {z}");
        }
        report(
            text,
            json!({
                "command": "classify",
                "kind": "mixed",
                "label": label.to_string(),
                "q": label.q,
                "counts": label.counts,
                "ghz_rows": label.ghz_rows,
                "zero_row": label.zero_row,
            }),
        )
    }
}

/// Fingerprint key of the qubits spanned by a set of groups.
fn cut_key(state: &SymbolicState, side: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(state.num_groups());
    let mut acc = 0;
    for g in state.groups() {
        offsets.push(acc);
        acc += g.size;
    }
    let qubits: Vec<usize> = side
        .iter()
        .flat_map(|&g| offsets[g]..offsets[g] + state.groups()[g].size)
        .collect();
    if 2 * qubits.len() > acc || (2 * qubits.len() == acc && qubits[0] != 0) {
        (0..acc).filter(|q| !qubits.contains(q)).collect()
    } else {
        qubits
    }
}

fn fingerprint_json(fp: &RankFingerprint) -> Value {
    fp.ranks
        .iter()
        .map(|(side, r)| json!({ "qubits": side, "rank": r }))
        .collect()
}

pub fn verify(state: &SymbolicState, settings: &Settings) -> Outcome {
    let dense = expand_capped(state, settings.max_qubits)?;
    let fp = rank_fingerprint(&dense, settings.tol);
    let class = classify_ghz_w(&dense, settings.tol);
    let exact = is_fully_entangled(state)?;

    let cs = concentrate(state);
    let group_cuts_ok = bipartitions(state.num_groups())
        .all(|side| fp.ranks.get(&cut_key(state, &side)) == Some(&cs.cut_rank(&side)));
    let moved = apply_random_grouped_ilo(&dense, state.groups(), settings.seed)?;
    let invariant = rank_fingerprint(&moved, settings.tol) == fp;
    let checks = [
        (
            "exact-entanglement",
            exact.fully_entangled == fp.fully_entangled(),
        ),
        ("group-cut-ranks", group_cuts_ok),
        ("local-operator-invariance", invariant),
    ];

    let mut text = String::new();
    let _ = writeln!(text, "qubits: {}", dense.num_qubits());
    let _ = writeln!(text, "range-class: {class}");
    let _ = writeln!(text, "fully-entangled: {}", fp.fully_entangled());
    text.push_str("fingerprint:\n");
    for (side, r) in &fp.ranks {
        let _ = writeln!(text, "  {}: {r}", join(side, " "));
    }
    for (name, ok) in &checks {
        let _ = writeln!(text, "check {name}: {}", if *ok { "pass" } else { "fail" });
    }
    let json = json!({
        "command": "oracle-verify",
        "qubits": dense.num_qubits(),
        "seed": settings.seed,
        "tol": settings.tol,
        "range_class": class.to_string(),
        "fully_entangled": fp.fully_entangled(),
        "fingerprint": fingerprint_json(&fp),
        "checks": checks.iter().map(|(n, ok)| json!({ "name": n, "pass": ok })).collect::<Vec<_>>(),
    });
    Ok(Report {
        text,
        json,
        ok: checks.iter().all(|(_, ok)| *ok),
    })
}
