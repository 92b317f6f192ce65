use std::io::Write;

use clap::Subcommand;
use serde_json::{json, Value};
use sofree::examples::run_examples;
use sofree::series::{check_first_order_relation, check_second_order_relation};
use sofree::special::{check_mt1, square_cumulants, verify_even, verify_r_diagonal, Verdict};

use crate::error::{usage, Result};
use crate::model;
use crate::output::{print_json, Format, Stamp};
use crate::square::determining;

#[derive(clap::Args)]
pub struct Args {
    #[command(subcommand)]
    target: Target,
}

#[derive(Subcommand)]
enum Target {
    /// Generating-function identities between the square's cumulants and the determining sequence.
    Series {
        #[arg(long)]
        model: String,
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
    },
    /// Only alternating *-cumulants of the element survive.
    Rdiag {
        #[arg(long)]
        model: String,
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// Odd cumulants of the self-adjoint element vanish.
    Even {
        #[arg(long)]
        model: String,
        #[arg(long)]
        element: Option<String>,
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
    /// `r b` is R-diagonal for R-diagonal `r` free from `b`.
    ///
    /// Without `--model`, `--r` and `--b` are comma-separated builtin names
    /// multiplied in order; with it, they are words of the model.
    Mt1 {
        #[arg(long)]
        r: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = 6)]
        order: usize,
        /// Largest `p + q` expanded over partitioned permutations; `--order` by default.
        #[arg(long)]
        expansion_order: Option<usize>,
    },
    /// Every worked value for the standard distributions.
    Examples {
        /// Order of the product checks.
        #[arg(long, default_value_t = 6)]
        order: usize,
    },
}

struct Report {
    stamp: Stamp,
    passed: bool,
    body: Value,
    lines: Vec<String>,
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "checked": v.checked,
        "violation": v.violation.as_ref().map(|x| json!({ "cumulant": x.what, "value": x.value.to_string() })),
    })
}

fn verdict_lines(v: &Verdict) -> Vec<String> {
    let mut out = vec![format!("{} cumulants checked", v.checked)];
    if let Some(x) = &v.violation {
        out.push(format!("violation: {} = {}", x.what, x.value));
    }
    out
}

fn series(model_ref: String, element: Option<String>, cutoff: usize) -> Result<Report> {
    if cutoff < 4 {
        return Err(usage("check series needs --cutoff at least 4"));
    }
    let m = model::load(&model_ref)?;
    let a = model::element(&m, element.as_deref())?;
    let word = m.alphabet().format_word(&a);
    let stamp = Stamp::new(json!({ "command": "check series", "model": model_ref, "element": word, "cutoff": cutoff }), &[&m]);
    let (beta, _) = determining(&m, &a, cutoff)?;
    let kappa = square_cumulants(&beta, cutoff)?;
    let first = check_first_order_relation(&kappa, &beta, cutoff)?;
    let second = check_second_order_relation(&kappa, &beta, cutoff)?;
    let passed = first.is_zero() && second.is_zero();
    Ok(Report {
        stamp,
        passed,
        body: json!({ "first_order_residual": first.to_json(), "second_order_residual": second.to_json() }),
        lines: vec![format!("first-order residual: {first}"), format!("second-order residual: {second}")],
    })
}

fn pattern_check(name: &str, model_ref: String, element: Option<String>, order: usize, even: bool) -> Result<Report> {
    let m = model::load(&model_ref)?;
    let a = model::element(&m, element.as_deref())?;
    let word = m.alphabet().format_word(&a);
    let stamp = Stamp::new(json!({ "command": name, "model": model_ref, "element": word, "order": order }), &[&m]);
    let v = if even { verify_even(&m, &a, order)? } else { verify_r_diagonal(&m, &a, order)? };
    Ok(Report { stamp, passed: v.holds, body: verdict_json(&v), lines: verdict_lines(&v) })
}

fn mt1(r: String, b: String, model_ref: Option<String>, order: usize, expansion: Option<usize>) -> Result<Report> {
    let (m, rw, bw) = match &model_ref {
        Some(reference) => {
            let m = model::load(reference)?;
            let rw = m.alphabet().parse_word(&r)?;
            let bw = m.alphabet().parse_word(&b)?;
            (m, rw, bw)
        }
        None => {
            let (m, words) = model::builtin_products(&[&r, &b])?;
            let (rw, bw) = (words[0].clone(), words[1].clone());
            (m, rw, bw)
        }
    };
    if rw.is_empty() || bw.is_empty() {
        return Err(usage("--r and --b must name at least one letter each"));
    }
    let expansion = expansion.unwrap_or(order);
    let alpha = m.alphabet();
    let stamp = Stamp::new(
        json!({
            "command": "check mt1",
            "r": alpha.format_word(&rw),
            "b": alpha.format_word(&bw),
            "model": model_ref,
            "order": order,
            "expansion_order": expansion,
        }),
        &[&m],
    );
    let rep = check_mt1(&m, &rw, &bw, order, expansion)?;
    let mut lines = vec![
        format!("{} cumulants of r b checked", rep.cumulants_checked),
        format!("{} nonvanishing expansion terms", rep.expansion_terms),
    ];
    let problems = [("violation", &rep.violations), ("lemma violation", &rep.lemma_violations), ("mismatch", &rep.expansion_mismatches)];
    for (label, list) in problems {
        lines.extend(list.iter().map(|x| format!("{label}: {x}")));
    }
    let body = serde_json::to_value(&rep).expect("report serializes");
    Ok(Report { stamp, passed: rep.passed(), body, lines })
}

fn examples(order: usize) -> Result<Report> {
    let stamp = Stamp::new(json!({ "command": "check examples", "order": order }), &[]);
    let checks = run_examples(order)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let lines = checks
        .iter()
        .map(|c| {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            format!("{tag} [{}] {}: expected {}, got {}", c.group, c.name, c.expected, c.actual)
        })
        .chain(std::iter::once(format!("{} of {} checks passed", checks.len() - failed, checks.len())))
        .collect();
    let body = json!({ "total": checks.len(), "failed": failed, "checks": checks });
    Ok(Report { stamp, passed: failed == 0, body, lines })
}

pub fn run(args: Args, format: Format, out: &mut dyn Write) -> Result<bool> {
    format.require("check", &[Format::Json, Format::Text])?;
    let report = match args.target {
        Target::Series { model, element, cutoff } => series(model, element, cutoff)?,
        Target::Rdiag { model, element, order } => pattern_check("check rdiag", model, element, order, false)?,
        Target::Even { model, element, order } => pattern_check("check even", model, element, order, true)?,
        Target::Mt1 { r, b, model, order, expansion_order } => mt1(r, b, model, order, expansion_order)?,
        Target::Examples { order } => examples(order)?,
    };
    match format {
        Format::Json => {
            let mut body = report.body;
            body["passed"] = json!(report.passed);
            print_json(out, &report.stamp.envelope("report", body))?;
        }
        _ => {
            report.stamp.text_header(out)?;
            for l in &report.lines {
                writeln!(out, "{l}")?;
            }
            writeln!(out, "{}", if report.passed { "PASS" } else { "FAIL" })?;
        }
    }
    Ok(report.passed)
}
