//! JSON shapes of the reports that have no serde form in the library.

use pcdyn_core::partial_action::{
    indeterminacy_set, index_character, semi_index, word_string, Certificate, GrowthReport, SingularityProfile,
    TransfixReport,
};
use pcdyn_core::solver::{SolveReport, SolveStatus};
use pcdyn_core::{PiecewiseMap, PseudogroupTag};
use serde_json::{json, Value};

fn tag_json(tag: PseudogroupTag) -> Value {
    serde_json::to_value(tag).expect("tags serialize")
}

pub fn growth(r: &GrowthReport, tag: PseudogroupTag) -> Value {
    let rows: Vec<Value> = r.range().map(|n| json!({ "n": n, "ell": r.ell_at(n), "residual": r.residual(n) })).collect();
    json!({
        "tag": tag_json(tag),
        "n_max": r.n_max,
        "verdict": r.verdict.name(),
        "m": r.slope,
        "B": r.bound,
        "sequence": rows,
    })
}

pub fn growth_csv(r: &GrowthReport) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "ell", "residual"])?;
    for n in r.range() {
        w.write_record([n.to_string(), r.ell_at(n).to_string(), r.residual(n).to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv of integers is utf-8"))
}

pub fn indeterminacy(f: &PiecewiseMap, tag: PseudogroupTag) -> Value {
    let (minus, plus) = semi_index(f, tag);
    let profile = SingularityProfile::of(f);
    json!({
        "tag": tag_json(tag),
        "points": indeterminacy_set(f, tag),
        "semi_index": { "minus": minus, "plus": plus },
        "index_character": index_character(f, tag),
        "profile": {
            "k0": profile.count(0),
            "k1": profile.count(1),
            "k2": profile.count(2),
            "points": profile.k,
        },
    })
}

pub fn transfix(r: &TransfixReport) -> Value {
    let certificate = match &r.certificate {
        None => Value::Null,
        Some(Certificate::Structure(nu)) => json!({ "kind": "structure", "structure": nu }),
        Some(Certificate::FiniteGroup { order }) => json!({ "kind": "finite_group", "order": order }),
        Some(Certificate::Escaping { word, element, growth }) => json!({
            "kind": "escaping",
            "word": word_string(word),
            "element": element,
            "verdict": growth.verdict.name(),
            "m": growth.slope,
            "B": growth.bound,
        }),
    };
    json!({
        "radius": r.radius,
        "ball_size": r.ball_size,
        "max_ell": r.max_ell,
        "closed": r.closed,
        "verdict": r.verdict.name(),
        "certificate": certificate,
    })
}

pub fn solve(r: &SolveReport) -> Value {
    let (status, dimension, depth) = match r.status {
        SolveStatus::Unique => ("UNIQUE", Some(0), None),
        SolveStatus::Family(d) => ("FAMILY", Some(d), None),
        SolveStatus::None => ("NONE", None, None),
        SolveStatus::Undecided(d) => ("UNDECIDED", None, Some(d)),
    };
    let mut v = json!({
        "level": r.level,
        "status": status,
        "witness": r.witness,
        "active": r.active,
    });
    let o = v.as_object_mut().expect("object");
    if let Some(d) = dimension {
        o.insert("dimension".into(), json!(d));
    }
    if let Some(d) = depth {
        o.insert("depth".into(), json!(d));
    }
    if let Some(reason) = &r.reason {
        o.insert("reason".into(), json!(reason));
    }
    v
}
