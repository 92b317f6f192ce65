use std::io::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use sofree::cumulants::{CumulantModel, LetterId};
use sofree::special::{
    determining_from_square, determining_of_even, determining_of_r_diagonal, square_cumulants, square_cumulants_direct,
    SequenceTable,
};

use crate::error::Result;
use crate::model;
use crate::output::{print_csv, print_json, Format, Stamp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Determining sequence first, then the square's cumulants from it.
    Forward,
    /// The square's cumulants from the model, then the determining sequence from them.
    Inverse,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    model: String,
    /// Letters joined by `.`; the model's first letter by default.
    #[arg(long)]
    element: Option<String>,
    #[arg(long, value_enum, default_value_t = Direction::Forward)]
    direction: Direction,
    #[arg(long, default_value_t = 4)]
    cutoff: usize,
    /// Map the result back and compare.
    #[arg(long)]
    verify_roundtrip: bool,
}

/// Determining sequence of `a`: even when self-adjoint, R-diagonal otherwise.
pub fn determining(m: &CumulantModel, a: &[LetterId], order: usize) -> Result<(SequenceTable, &'static str)> {
    let self_adjoint = m.alphabet().adjoint(a) == a;
    Ok(if self_adjoint {
        (determining_of_even(m, a, order)?, "even")
    } else {
        (determining_of_r_diagonal(m, a, order)?, "r-diagonal")
    })
}

pub fn sequence_json(t: &SequenceTable) -> Value {
    let first: Map<String, Value> = t.first.iter().map(|(n, v)| (n.to_string(), json!(v.to_string()))).collect();
    let second: Map<String, Value> =
        t.second.iter().map(|((p, q), v)| (format!("{p},{q}"), json!(v.to_string()))).collect();
    json!({ "first": first, "second": second })
}

/// `(table, p, q, value)` rows, `q` empty at first order.
fn sequence_rows(name: &str, t: &SequenceTable) -> Vec<Vec<String>> {
    let first = t.first.iter().map(|(n, v)| vec![name.into(), n.to_string(), String::new(), v.to_string()]);
    let second = t.second.iter().map(|((p, q), v)| vec![name.into(), p.to_string(), q.to_string(), v.to_string()]);
    first.chain(second).collect()
}

pub fn run(args: Args, format: Format, out: &mut dyn Write) -> Result<bool> {
    format.require("square", &[Format::Json, Format::Csv, Format::Text])?;
    let m = model::load(&args.model)?;
    let a = model::element(&m, args.element.as_deref())?;
    let word = m.alphabet().format_word(&a);
    let direction = args.direction.to_possible_value().expect("no skipped variants");
    let stamp = Stamp::new(
        json!({
            "command": "square",
            "model": args.model,
            "element": word,
            "direction": direction.get_name(),
            "cutoff": args.cutoff,
            "verify_roundtrip": args.verify_roundtrip,
        }),
        &[&m],
    );

    let (beta, square, kind, roundtrip) = match args.direction {
        Direction::Forward => {
            let (beta, kind) = determining(&m, &a, args.cutoff)?;
            let square = square_cumulants(&beta, args.cutoff)?;
            let rt = if args.verify_roundtrip {
                Some(determining_from_square(&square, args.cutoff)? == beta)
            } else {
                None
            };
            (beta, square, kind, rt)
        }
        Direction::Inverse => {
            let kind = if m.alphabet().adjoint(&a) == a { "even" } else { "r-diagonal" };
            let square = square_cumulants_direct(&m, &a, args.cutoff)?;
            let beta = determining_from_square(&square, args.cutoff)?;
            let rt = if args.verify_roundtrip {
                Some(square_cumulants(&beta, args.cutoff)? == square)
            } else {
                None
            };
            (beta, square, kind, rt)
        }
    };
    let passed = roundtrip.unwrap_or(true);

    match format {
        Format::Json => {
            let mut body = json!({
                "element": word,
                "class": kind,
                "determining": sequence_json(&beta),
                "square": sequence_json(&square),
            });
            if let Some(ok) = roundtrip {
                body["roundtrip"] = json!({ "passed": ok });
            }
            print_json(out, &stamp.envelope("result", body))?;
        }
        Format::Csv => {
            let mut rows = sequence_rows("determining", &beta);
            rows.extend(sequence_rows("square", &square));
            print_csv(out, &["table", "p", "q", "value"], rows)?;
        }
        Format::Text => {
            stamp.text_header(out)?;
            writeln!(out, "element {word} ({kind})")?;
            for (name, t) in [("beta", &beta), ("kappa", &square)] {
                for (n, v) in &t.first {
                    writeln!(out, "{name}_{n} = {v}")?;
                }
                for ((p, q), v) in &t.second {
                    writeln!(out, "{name}_{p},{q} = {v}")?;
                }
            }
            if let Some(ok) = roundtrip {
                writeln!(out, "roundtrip {}", if ok { "PASS" } else { "FAIL" })?;
            }
        }
        Format::Svg => unreachable!("rejected above"),
    }
    Ok(passed)
}
