//! Loading maps, generator lists and structure functions from JSON files.
//!
//! A reference is `path` (the file holds one object), `path#name` (an entry of
//! a corpus file) or `@name` (a built-in fixture map such as `@pl` or `@rot13`).

use std::collections::BTreeSet;
use std::fmt;
use std::fs;

use pcdyn_core::corpus;
use pcdyn_core::doubling::DoubledMap;
use pcdyn_core::structure::StructureFunction;
use pcdyn_core::PiecewiseMap;
use serde::de::{Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;

pub const HEADER: &str = "pcdyn/1";

#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn err(msg: impl Into<String>) -> InputError {
    InputError(msg.into())
}

pub type Result<T> = std::result::Result<T, InputError>;

/// Object entries in file order; duplicate names are an error.
#[derive(Debug, Default)]
struct Named(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for Named {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Named;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an object of named entries")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<Named, A::Error> {
                let mut seen = BTreeSet::new();
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, Value>()? {
                    if !seen.insert(k.clone()) {
                        return Err(serde::de::Error::custom(format!("duplicate name {k:?}")));
                    }
                    out.push((k, v));
                }
                Ok(Named(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorpusFile {
    #[serde(default)]
    maps: Named,
    #[serde(default)]
    generators: Named,
    #[serde(default)]
    structures: Named,
}

fn read_text(path: &str) -> Result<String> {
    let text = fs::read_to_string(path).map_err(|e| err(format!("{path}: {e}")))?;
    // outputs carry a version line; accept them back as inputs
    let body = match text.split_once('\n') {
        Some((first, rest)) if first.trim() == HEADER => rest.to_string(),
        _ if text.trim() == HEADER => String::new(),
        _ => text,
    };
    Ok(body)
}

fn split_ref(r: &str) -> (&str, Option<&str>) {
    match r.rsplit_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (r, None),
    }
}

fn is_corpus(v: &Value) -> bool {
    v.as_object().is_some_and(|o| !o.is_empty() && o.keys().all(|k| k == "maps" || k == "generators" || k == "structures"))
}

/// Parsed from the text: going through a `Value` would merge duplicate names.
fn parse_corpus(path: &str, doc: &Doc) -> Result<CorpusFile> {
    serde_json::from_str(&doc.text).map_err(|e| err(format!("{path}: {e}")))
}

fn parse<T: serde::de::DeserializeOwned>(what: &str, v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| err(format!("{what}: {e}")))
}

fn builtin(name: &str) -> Result<PiecewiseMap> {
    corpus::full_corpus()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, f)| f)
        .ok_or_else(|| {
            let names: Vec<&str> = corpus::full_corpus().into_iter().map(|(n, _)| n).collect();
            err(format!("unknown built-in map @{name}; known: {}", names.join(", ")))
        })
}

struct Doc {
    text: String,
    value: Value,
}

fn read_doc(path: &str) -> Result<Doc> {
    let text = read_text(path)?;
    let value = serde_json::from_str(&text).map_err(|e| err(format!("{path}: {e}")))?;
    Ok(Doc { text, value })
}

fn entry(entries: &Named, path: &str, kind: &str, name: &str) -> Result<Value> {
    entries
        .0
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, v)| v.clone())
        .ok_or_else(|| err(format!("{path}: no {kind} named {name:?}")))
}

pub fn load_map(r: &str) -> Result<PiecewiseMap> {
    if let Some(name) = r.strip_prefix('@') {
        return builtin(name);
    }
    let (path, name) = split_ref(r);
    let doc = read_doc(path)?;
    match name {
        None if is_corpus(&doc.value) => Err(err(format!("{path} is a corpus file; name an entry with {path}#name"))),
        None => parse(path, doc.value),
        Some(n) => {
            let c = parse_corpus(path, &doc)?;
            parse(&format!("{path}#{n}"), entry(&c.maps, path, "map", n)?)
        }
    }
}

fn map_or_name(c: &CorpusFile, path: &str, v: Value) -> Result<PiecewiseMap> {
    match v {
        Value::String(s) if s.starts_with('@') => builtin(&s[1..]),
        Value::String(s) => parse(&format!("{path}#{s}"), entry(&c.maps, path, "map", &s)?),
        other => parse(path, other),
    }
}

/// One map, an array of maps, or a named generator list of a corpus file.
pub fn load_generators(r: &str) -> Result<Vec<PiecewiseMap>> {
    if r.starts_with('@') {
        return Ok(vec![load_map(r)?]);
    }
    let (path, name) = split_ref(r);
    let doc = read_doc(path)?;
    let c = if is_corpus(&doc.value) { parse_corpus(path, &doc)? } else { CorpusFile::default() };
    let list = match name {
        Some(n) => match entry(&c.generators, path, "generator list", n) {
            Ok(l) => l,
            Err(_) => entry(&c.maps, path, "map or generator list", n)?,
        },
        None => doc.value,
    };
    match list {
        Value::Array(items) => items.into_iter().map(|x| map_or_name(&c, path, x)).collect(),
        other => Ok(vec![map_or_name(&c, path, other)?]),
    }
}

pub fn load_structure(r: &str) -> Result<StructureFunction> {
    let (path, name) = split_ref(r);
    let doc = read_doc(path)?;
    match name {
        None => parse(path, doc.value),
        Some(n) => {
            let c = parse_corpus(path, &doc)?;
            parse(&format!("{path}#{n}"), entry(&c.structures, path, "structure", n)?)
        }
    }
}

/// What a validated file contained.
pub enum Validated {
    Map(PiecewiseMap),
    Doubled(DoubledMap),
    Structure(StructureFunction),
    Corpus { maps: usize, generators: usize, structures: usize },
}

/// Loads and validates a file or reference of any kind.
pub fn validate(r: &str) -> Result<Validated> {
    if r.starts_with('@') {
        return load_map(r).map(Validated::Map);
    }
    let (path, name) = split_ref(r);
    if let Some(n) = name {
        let c = parse_corpus(path, &read_doc(path)?)?;
        if c.structures.0.iter().any(|(k, _)| k == n) {
            return load_structure(r).map(Validated::Structure);
        }
        if c.maps.0.iter().any(|(k, _)| k == n) {
            return load_map(r).map(Validated::Map);
        }
        load_generators(r)?;
        return Ok(Validated::Corpus { maps: 0, generators: 1, structures: 0 });
    }
    let doc = read_doc(path)?;
    let v = &doc.value;
    if is_corpus(v) {
        let c = parse_corpus(path, &doc)?;
        for (n, m) in &c.maps.0 {
            parse::<PiecewiseMap>(&format!("{path}#{n}"), m.clone())?;
        }
        for (n, _) in &c.generators.0 {
            load_generators(&format!("{path}#{n}"))?;
        }
        for (n, s) in &c.structures.0 {
            parse::<StructureFunction>(&format!("{path}#{n}"), s.clone())?;
        }
        return Ok(Validated::Corpus { maps: c.maps.0.len(), generators: c.generators.0.len(), structures: c.structures.0.len() });
    }
    if v.get("doubled").and_then(Value::as_bool) == Some(true) {
        return parse(path, doc.value).map(Validated::Doubled);
    }
    if v.get("level").is_some() {
        return parse(path, doc.value).map(Validated::Structure);
    }
    if v.is_array() {
        let n = load_generators(r)?.len();
        return Ok(Validated::Corpus { maps: n, generators: 0, structures: 0 });
    }
    parse(path, doc.value).map(Validated::Map)
}
