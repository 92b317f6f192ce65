use std::collections::BTreeMap;
use std::io::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use sofree::cumulants::{kappa_from_phi, phi_from_kappa_table, Alphabet, CumulantSource, LetterId, Word};
use sofree::Rational;

use crate::error::Result;
use crate::model;
use crate::output::{print_csv, print_json, Format, Stamp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Moments of the model, inverted to cumulants.
    M2c,
    /// Cumulants of the model, summed to moments.
    C2m,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Level {
    First,
    Second,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    direction: Direction,
    #[arg(value_enum)]
    level: Level,
    /// Builtin name (`semicircular`, `circular`, `haar_unitary`, `free_poisson[:rate]`) or model file.
    #[arg(long)]
    model: String,
    /// Largest total word length in the table.
    #[arg(long, default_value_t = 4)]
    cutoff: usize,
    /// Restrict to these letters (comma separated); all letters by default.
    #[arg(long, value_delimiter = ',')]
    letters: Vec<String>,
    /// Map the table back and compare with the values it came from.
    #[arg(long)]
    verify_roundtrip: bool,
}

struct Table {
    first: BTreeMap<Word, Rational>,
    second: BTreeMap<(Word, Word), Rational>,
}

impl Table {
    /// Keys in canonical order: shorter words first, then letter order.
    fn rows(&self, alphabet: &Alphabet, level: Level) -> Vec<(String, String)> {
        match level {
            Level::First => {
                let mut keys: Vec<&Word> = self.first.keys().collect();
                keys.sort_by_key(|w| (w.len(), w.to_vec()));
                keys.into_iter().map(|w| (alphabet.format_word(w), self.first[w].to_string())).collect()
            }
            Level::Second => {
                let mut keys: Vec<&(Word, Word)> = self.second.keys().collect();
                keys.sort_by_key(|(a, b)| (a.len() + b.len(), a.len(), a.to_vec(), b.to_vec()));
                keys.into_iter()
                    .map(|k| {
                        let key = format!("{}|{}", alphabet.format_word(&k.0), alphabet.format_word(&k.1));
                        (key, self.second[k].to_string())
                    })
                    .collect()
            }
        }
    }
}

/// Entries of `got` that differ from `want`, as readable strings.
fn compare(alphabet: &Alphabet, got: &Table, want: &Table) -> Vec<String> {
    let mut out = Vec::new();
    for (w, v) in &got.first {
        if want.first.get(w) != Some(v) {
            out.push(format!("{}: {v}", alphabet.format_word(w)));
        }
    }
    for ((a, b), v) in &got.second {
        if want.second.get(&(a.clone(), b.clone())) != Some(v) {
            out.push(format!("{}|{}: {v}", alphabet.format_word(a), alphabet.format_word(b)));
        }
    }
    out
}

fn model_cumulants(source: &dyn CumulantSource, letters: &[LetterId], cutoff: usize) -> Result<Table> {
    let mut t = Table { first: BTreeMap::new(), second: BTreeMap::new() };
    for w in sofree::cumulants::words_up_to(letters, cutoff) {
        let v = source.kappa(&w)?;
        t.first.insert(w, v);
    }
    for (a, b) in sofree::cumulants::pairs_up_to(letters, cutoff) {
        let v = source.kappa2(&a, &b)?;
        t.second.insert((a, b), v);
    }
    Ok(t)
}

pub fn run(args: Args, format: Format, out: &mut dyn Write) -> Result<bool> {
    format.require("transform", &[Format::Json, Format::Csv, Format::Text])?;
    let m = model::load(&args.model)?;
    let letters = model::letters(&m, &args.letters)?;
    let alphabet = m.alphabet();
    let direction = args.direction.to_possible_value().expect("no skipped variants");
    let level = args.level.to_possible_value().expect("no skipped variants");
    let stamp = Stamp::new(
        json!({
            "command": "transform",
            "direction": direction.get_name(),
            "order": level.get_name(),
            "model": args.model,
            "cutoff": args.cutoff,
            "letters": letters.iter().map(|&l| alphabet.name(l)).collect::<Vec<_>>(),
            "verify_roundtrip": args.verify_roundtrip,
        }),
        &[&m],
    );

    let moments = phi_from_kappa_table(&m, &letters, args.cutoff)?;
    let (table, mismatches) = match args.direction {
        Direction::C2m => {
            let table = Table { first: moments.first.clone(), second: moments.second.clone() };
            let mismatches = if args.verify_roundtrip {
                let back = kappa_from_phi(&moments, &letters, args.cutoff)?;
                let back = Table { first: back.first, second: back.second };
                Some(compare(alphabet, &back, &model_cumulants(&m, &letters, args.cutoff)?))
            } else {
                None
            };
            (table, mismatches)
        }
        Direction::M2c => {
            let kappa = kappa_from_phi(&moments, &letters, args.cutoff)?;
            let mismatches = if args.verify_roundtrip {
                let back = phi_from_kappa_table(&kappa, &letters, args.cutoff)?;
                let back = Table { first: back.first, second: back.second };
                let want = Table { first: moments.first.clone(), second: moments.second.clone() };
                Some(compare(alphabet, &back, &want))
            } else {
                None
            };
            (Table { first: kappa.first, second: kappa.second }, mismatches)
        }
    };
    let rows = table.rows(alphabet, args.level);
    let passed = mismatches.as_ref().map_or(true, |v| v.is_empty());

    match format {
        Format::Json => {
            let mut body = Map::new();
            body.insert("table".into(), Value::Object(rows.iter().map(|(k, v)| (k.clone(), json!(v))).collect()));
            if let Some(mm) = &mismatches {
                body.insert("roundtrip".into(), json!({ "passed": passed, "mismatches": mm }));
            }
            print_json(out, &stamp.envelope("result", Value::Object(body)))?;
        }
        Format::Csv => print_csv(out, &["word", "value"], rows.into_iter().map(|(k, v)| vec![k, v]))?,
        Format::Text => {
            stamp.text_header(out)?;
            for (k, v) in &rows {
                writeln!(out, "{k} = {v}")?;
            }
            if let Some(mm) = &mismatches {
                writeln!(out, "roundtrip {}", if passed { "PASS" } else { "FAIL" })?;
                for x in mm {
                    writeln!(out, "  mismatch {x}")?;
                }
            }
        }
        Format::Svg => unreachable!("rejected above"),
    }
    Ok(passed)
}
