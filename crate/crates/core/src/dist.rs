//! Built-in distributions and the JSON model format.
//!
//! A model document looks like
//!
//! ```json
//! {
//!   "truncation": 6,
//!   "alphabet": [
//!     { "name": "c", "family": "C", "star": "c*" },
//!     { "name": "c*", "family": "C", "star": "c" },
//!     { "name": "s", "family": "S", "star": "s" }
//!   ],
//!   "families": {
//!     "C": { "rule": "circular" },
//!     "S": { "kappa": { "s": "0", "s.s": "1" }, "kappa2": { "s|s": "0" } }
//!   }
//! }
//! ```
//!
//! A family carries either a `rule` (with a `rate` for `free_poisson`),
//! cumulant tables `kappa`/`kappa2`, or moment tables `phi`/`phi2`. Words are
//! letters joined by `.`, second-order keys join two words with `|`, and
//! every rational is a `"num/den"` string. Tables must list every word over
//! the family's letters up to the truncation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::cumulants::{
    pairs_up_to, words_up_to, Alphabet, CumulantModel, CumulantTable, FamilyLaw, LetterId, MomentTable, Word,
    DEFAULT_TRUNCATION,
};
use crate::error::{Error, Result};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    HaarUnitary,
    Semicircular,
    Circular,
    FreePoisson(Rational),
}

impl BuiltinKind {
    pub const NAMES: [&'static str; 4] = ["haar_unitary", "semicircular", "circular", "free_poisson"];

    /// Letter names used by [`build`]; the second entry is the adjoint.
    pub fn letters(&self) -> (&'static str, &'static str) {
        match self {
            BuiltinKind::HaarUnitary => ("u", "u*"),
            BuiltinKind::Semicircular => ("s", "s"),
            BuiltinKind::Circular => ("c", "c*"),
            BuiltinKind::FreePoisson(_) => ("p", "p"),
        }
    }
}

impl fmt::Display for BuiltinKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinKind::HaarUnitary => f.write_str("haar_unitary"),
            BuiltinKind::Semicircular => f.write_str("semicircular"),
            BuiltinKind::Circular => f.write_str("circular"),
            BuiltinKind::FreePoisson(r) => write!(f, "free_poisson:{r}"),
        }
    }
}

/// Accepts the names in [`BuiltinKind::NAMES`]; `free_poisson:<rate>` sets a
/// rate other than 1.
impl FromStr for BuiltinKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let kind = match name {
            "haar_unitary" | "haar" => BuiltinKind::HaarUnitary,
            "semicircular" => BuiltinKind::Semicircular,
            "circular" => BuiltinKind::Circular,
            "free_poisson" => {
                let rate = match arg {
                    Some(a) => parse_rational(a).map_err(|m| Error::Invalid(format!("rate: {m}")))?,
                    None => Rational::from_integer(1.into()),
                };
                return free_poisson(rate);
            }
            _ => return Err(Error::Invalid(format!("unknown distribution '{s}'"))),
        };
        if arg.is_some() {
            return Err(Error::Invalid(format!("'{name}' takes no parameter")));
        }
        Ok(kind)
    }
}

fn free_poisson(rate: Rational) -> Result<BuiltinKind> {
    if !rate.is_positive() {
        return Err(Error::Invalid(format!("free Poisson rate must be positive, got {rate}")));
    }
    Ok(BuiltinKind::FreePoisson(rate))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinSpec {
    pub kind: BuiltinKind,
    pub truncation: usize,
}

impl BuiltinSpec {
    pub fn new(kind: BuiltinKind) -> Self {
        BuiltinSpec { kind, truncation: DEFAULT_TRUNCATION }
    }
}

pub fn build(spec: &BuiltinSpec) -> CumulantModel {
    let mut m = CumulantModel::new(spec.truncation);
    add_builtin(&mut m, &spec.kind, None).expect("fresh model has no name clashes");
    m
}

/// Adds a built-in family to an existing model, with letter names suffixed
/// by `tag` when given (`c1`, `c1*`, ...).
pub fn add_builtin(model: &mut CumulantModel, kind: &BuiltinKind, tag: Option<&str>) -> Result<Vec<LetterId>> {
    let (a, b) = kind.letters();
    let tag = tag.unwrap_or("");
    let name = format!("{a}{tag}");
    let star = if a == b { name.clone() } else { format!("{a}{tag}*") };
    let law = match kind {
        BuiltinKind::HaarUnitary => FamilyLaw::HaarUnitary,
        BuiltinKind::Semicircular => FamilyLaw::Semicircular,
        BuiltinKind::Circular => FamilyLaw::Circular,
        BuiltinKind::FreePoisson(r) => FamilyLaw::FreePoisson(r.clone()),
    };
    model.add_family(&name, &[(&name, &star)], law)
}

/// A builtin name or a path to a JSON model.
pub fn resolve_model(reference: &str) -> Result<CumulantModel> {
    match reference.parse::<BuiltinKind>() {
        Ok(kind) => Ok(build(&BuiltinSpec::new(kind))),
        Err(e) => {
            let path = std::path::Path::new(reference);
            if !path.exists() {
                return Err(e);
            }
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))?;
            load_model_str(&text)
        }
    }
}

// ---------------------------------------------------------------------------
// JSON

fn escape(token: &str) -> String {
    token.replace('~', "~0").replace('/', "~1")
}

fn err(pointer: &str, message: impl Into<String>) -> Error {
    Error::Model { pointer: pointer.to_string(), message: message.into() }
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    let r = match s.split_once('/') {
        Some((n, d)) => {
            let n = n.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
            let d: num_bigint::BigInt = d.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in '{s}'"));
            }
            Rational::new(n, d)
        }
        None => Rational::from_integer(s.parse().map_err(|_| format!("not a rational: '{s}'"))?),
    };
    Ok(r)
}

fn rational_at(v: &Value, pointer: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|m| err(pointer, m)),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or_default().into())),
        _ => Err(err(pointer, "expected a rational string \"num/den\"")),
    }
}

fn object<'a>(v: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| err(pointer, "expected an object"))
}

fn string<'a>(v: &'a Value, pointer: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| err(pointer, "expected a string"))
}

pub fn load_model_str(text: &str) -> Result<CumulantModel> {
    let doc: Value = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    load_model(&doc)
}

/// Validates a model document and builds the model.
pub fn load_model(doc: &Value) -> Result<CumulantModel> {
    let root = object(doc, "")?;
    for key in root.keys() {
        if !matches!(key.as_str(), "truncation" | "alphabet" | "families" | "version") {
            return Err(err(&format!("/{}", escape(key)), "unknown field"));
        }
    }
    let truncation = match root.get("truncation") {
        None => DEFAULT_TRUNCATION,
        Some(v) => v.as_u64().filter(|&t| t > 0).ok_or_else(|| err("/truncation", "expected a positive integer"))? as usize,
    };

    // letters grouped by family, in order of first appearance
    let letters = root.get("alphabet").ok_or_else(|| err("/alphabet", "missing"))?;
    let letters = letters.as_array().ok_or_else(|| err("/alphabet", "expected an array"))?;
    let mut entries: Vec<(String, String, String)> = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        let p = format!("/alphabet/{i}");
        let o = object(l, &p)?;
        let name = string(o.get("name").ok_or_else(|| err(&p, "missing name"))?, &format!("{p}/name"))?;
        let family = string(o.get("family").ok_or_else(|| err(&p, "missing family"))?, &format!("{p}/family"))?;
        let star = match o.get("star") {
            None => name,
            Some(v) => string(v, &format!("{p}/star"))?,
        };
        if entries.iter().any(|e| e.0 == name) {
            return Err(err(&format!("{p}/name"), format!("letter '{name}' listed twice")));
        }
        entries.push((name.to_string(), family.to_string(), star.to_string()));
    }
    for (i, (name, family, star)) in entries.iter().enumerate() {
        let p = format!("/alphabet/{i}/star");
        let Some(partner) = entries.iter().find(|e| &e.0 == star) else {
            return Err(err(&p, format!("star '{star}' is not a letter")));
        };
        if &partner.2 != name {
            return Err(err(&p, format!("star is not an involution: {name} -> {star} -> {}", partner.2)));
        }
        if &partner.1 != family {
            return Err(err(&p, format!("'{name}' and its star lie in different families")));
        }
    }
    let mut order: Vec<&str> = Vec::new();
    for e in &entries {
        if !order.contains(&e.1.as_str()) {
            order.push(&e.1);
        }
    }
    let mut grouped: Vec<(&str, Vec<(&str, &str)>)> = Vec::new();
    let mut scratch = Alphabet::new();
    for fam in &order {
        let mut pairs = Vec::new();
        for (name, family, star) in &entries {
            if family != fam || pairs.iter().any(|&(a, b): &(&str, &str)| b == name && a != b) {
                continue;
            }
            pairs.push((name.as_str(), star.as_str()));
            if name == star {
                scratch.add_self_adjoint(name, fam)?;
            } else {
                scratch.add_pair(name, star, fam)?;
            }
        }
        grouped.push((fam, pairs));
    }

    let families = object(root.get("families").ok_or_else(|| err("/families", "missing"))?, "/families")?;
    for key in families.keys() {
        if !order.contains(&key.as_str()) {
            return Err(err(&format!("/families/{}", escape(key)), "family has no letters"));
        }
    }
    let mut model = CumulantModel::new(truncation);
    for (fam, pairs) in grouped {
        let p = format!("/families/{}", escape(fam));
        let spec = families.get(fam).ok_or_else(|| err(&p, "missing law for family"))?;
        let fi = scratch.family_index(fam).expect("registered above");
        let law = parse_law(spec, &p, &scratch, &scratch.family_letters(fi), truncation)?;
        model.add_family(fam, &pairs, law).map_err(|e| err(&p, e.to_string()))?;
    }
    Ok(model)
}

fn parse_law(spec: &Value, p: &str, alphabet: &Alphabet, letters: &[LetterId], truncation: usize) -> Result<FamilyLaw> {
    let o = object(spec, p)?;
    if let Some(rule) = o.get("rule") {
        let rule = string(rule, &format!("{p}/rule"))?;
        for key in o.keys() {
            if key != "rule" && !(key == "rate" && rule == "free_poisson") {
                return Err(err(&format!("{p}/{}", escape(key)), "unexpected field next to a rule"));
            }
        }
        return Ok(match rule {
            "semicircular" => FamilyLaw::Semicircular,
            "circular" => FamilyLaw::Circular,
            "haar_unitary" => FamilyLaw::HaarUnitary,
            "free_poisson" => {
                let rate = match o.get("rate") {
                    Some(v) => rational_at(v, &format!("{p}/rate"))?,
                    None => Rational::from_integer(1.into()),
                };
                if !rate.is_positive() {
                    return Err(err(&format!("{p}/rate"), "rate must be positive"));
                }
                FamilyLaw::FreePoisson(rate)
            }
            other => return Err(err(&format!("{p}/rule"), format!("unknown rule '{other}'"))),
        });
    }
    let cumulants = o.contains_key("kappa") || o.contains_key("kappa2");
    let moments = o.contains_key("phi") || o.contains_key("phi2");
    if cumulants == moments {
        return Err(err(p, "expected a rule, kappa/kappa2 tables, or phi/phi2 tables"));
    }
    let (k1, k2) = if cumulants { ("kappa", "kappa2") } else { ("phi", "phi2") };
    for key in o.keys() {
        if key != k1 && key != k2 {
            return Err(err(&format!("{p}/{}", escape(key)), "unexpected field"));
        }
    }
    let first = parse_first(o.get(k1), &format!("{p}/{k1}"), alphabet, letters, truncation)?;
    let second = parse_second(o.get(k2), &format!("{p}/{k2}"), alphabet, letters, truncation)?;
    Ok(if cumulants {
        FamilyLaw::Cumulants(CumulantTable { first, second, truncation })
    } else {
        FamilyLaw::Moments(MomentTable { first, second, truncation })
    })
}

fn parse_word_in(alphabet: &Alphabet, letters: &[LetterId], s: &str, p: &str) -> Result<Word> {
    let w = alphabet.parse_word(s).map_err(|e| err(p, e.to_string()))?;
    if w.is_empty() {
        return Err(err(p, "empty word"));
    }
    if let Some(l) = w.iter().find(|l| !letters.contains(l)) {
        return Err(err(p, format!("letter '{}' is not in this family", alphabet.name(*l))));
    }
    Ok(w)
}

fn parse_first(
    v: Option<&Value>,
    p: &str,
    alphabet: &Alphabet,
    letters: &[LetterId],
    truncation: usize,
) -> Result<BTreeMap<Word, Rational>> {
    let empty = Map::new();
    let o = match v {
        Some(v) => object(v, p)?,
        None => &empty,
    };
    let mut out = BTreeMap::new();
    for (k, v) in o {
        let kp = format!("{p}/{}", escape(k));
        let w = parse_word_in(alphabet, letters, k, &kp)?;
        if w.len() > truncation {
            return Err(err(&kp, format!("word longer than truncation {truncation}")));
        }
        out.insert(w, rational_at(v, &kp)?);
    }
    for w in words_up_to(letters, truncation) {
        if !out.contains_key(&w) {
            return Err(err(p, format!("missing word '{}'", alphabet.format_word(&w))));
        }
    }
    Ok(out)
}

fn parse_second(
    v: Option<&Value>,
    p: &str,
    alphabet: &Alphabet,
    letters: &[LetterId],
    truncation: usize,
) -> Result<BTreeMap<(Word, Word), Rational>> {
    let empty = Map::new();
    let o = match v {
        Some(v) => object(v, p)?,
        None => &empty,
    };
    let mut out = BTreeMap::new();
    for (k, v) in o {
        let kp = format!("{p}/{}", escape(k));
        let (a, b) = k.split_once('|').ok_or_else(|| err(&kp, "second-order key must be 'word|word'"))?;
        let a = parse_word_in(alphabet, letters, a, &kp)?;
        let b = parse_word_in(alphabet, letters, b, &kp)?;
        if a.len() + b.len() > truncation {
            return Err(err(&kp, format!("total length beyond truncation {truncation}")));
        }
        out.insert((a, b), rational_at(v, &kp)?);
    }
    for (a, b) in pairs_up_to(letters, truncation) {
        if !out.contains_key(&(a.clone(), b.clone())) {
            let key = format!("{}|{}", alphabet.format_word(&a), alphabet.format_word(&b));
            return Err(err(p, format!("missing pair '{key}'")));
        }
    }
    Ok(out)
}

fn emit_first(alphabet: &Alphabet, letters: &[LetterId], truncation: usize, map: &BTreeMap<Word, Rational>) -> Value {
    let o: Map<String, Value> = words_up_to(letters, truncation)
        .into_iter()
        .map(|w| {
            let v = map.get(&w).cloned().unwrap_or_else(Rational::zero);
            (alphabet.format_word(&w), Value::String(v.to_string()))
        })
        .collect();
    Value::Object(o)
}

fn emit_second(
    alphabet: &Alphabet,
    letters: &[LetterId],
    truncation: usize,
    map: &BTreeMap<(Word, Word), Rational>,
) -> Value {
    let o: Map<String, Value> = pairs_up_to(letters, truncation)
        .into_iter()
        .map(|(a, b)| {
            let key = format!("{}|{}", alphabet.format_word(&a), alphabet.format_word(&b));
            let v = map.get(&(a, b)).cloned().unwrap_or_else(Rational::zero);
            (key, Value::String(v.to_string()))
        })
        .collect();
    Value::Object(o)
}

/// The document [`load_model`] reads back to an equal model. Tables are
/// written in full up to their truncation.
pub fn emit_model(model: &CumulantModel) -> Value {
    let a = model.alphabet();
    let alphabet: Vec<Value> = a
        .ids()
        .map(|l| json!({ "name": a.name(l), "family": a.family_name(a.family(l)), "star": a.name(a.star(l)) }))
        .collect();
    let mut families = Map::new();
    for (f, name) in a.families().iter().enumerate() {
        let letters = a.family_letters(f);
        let law = match model.law(f) {
            FamilyLaw::FreePoisson(r) => json!({ "rule": "free_poisson", "rate": r.to_string() }),
            FamilyLaw::Cumulants(t) => json!({
                "kappa": emit_first(a, &letters, t.truncation, &t.first),
                "kappa2": emit_second(a, &letters, t.truncation, &t.second),
            }),
            FamilyLaw::Moments(t) => json!({
                "phi": emit_first(a, &letters, t.truncation, &t.first),
                "phi2": emit_second(a, &letters, t.truncation, &t.second),
            }),
            rule => json!({ "rule": rule.rule_name().unwrap_or_default() }),
        };
        families.insert(name.clone(), law);
    }
    json!({ "truncation": model.truncation(), "alphabet": alphabet, "families": families })
}
