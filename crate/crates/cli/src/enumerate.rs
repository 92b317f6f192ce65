use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde_json::json;
use sofree::annular::{
    enumerate_annular_pairings, enumerate_nc, enumerate_nc_pairings, enumerate_ps_nc, enumerate_snc,
    enumerate_snc_k_alt, is_annular_nc, is_noncrossing_disc,
};
use sofree::perm::{AnnulusShape, PartitionedPermutation, Permutation};

use crate::cache::Cache;
use crate::error::{usage, Result};
use crate::output::{print_csv, Format, Stamp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// Non-crossing permutations of `--n` points on a disc.
    Nc,
    /// Annular non-crossing permutations on `--shape`.
    Snc,
    /// Annular non-crossing partitioned permutations on `--shape`.
    Psnc,
    /// Non-crossing pairings, on a disc with `--n` or an annulus with `--shape`.
    Pairings,
    /// Annular permutations on `k p, k q` points stepping `i -> i + 1 (mod k)`; `--shape p,q`.
    SncKAlt,
}

#[derive(clap::Args)]
pub struct Args {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    shape: Option<AnnulusShape>,
    #[arg(long)]
    k: Option<usize>,
    /// Print only the number of elements.
    #[arg(long)]
    count_only: bool,
}

enum Target {
    Disc(usize),
    Annulus(AnnulusShape),
    Alternating(AnnulusShape, usize),
}

impl Args {
    fn target(&self) -> Result<Target> {
        let shape = || self.shape.ok_or_else(|| usage("this kind needs --shape m,n"));
        Ok(match (self.kind, self.n) {
            (Kind::Nc, Some(n)) | (Kind::Pairings, Some(n)) if self.shape.is_none() => Target::Disc(n),
            (Kind::Nc, _) => return Err(usage("nc needs --n and no --shape")),
            (Kind::Pairings, Some(_)) => return Err(usage("pairings takes either --n or --shape")),
            (Kind::SncKAlt, _) => {
                let k = self.k.ok_or_else(|| usage("snc-k-alt needs --k"))?;
                Target::Alternating(shape()?, k)
            }
            (_, Some(_)) => return Err(usage("this kind takes --shape, not --n")),
            _ => Target::Annulus(shape()?),
        })
    }
}

impl Target {
    fn key(&self, kind: Kind) -> String {
        let name = kind.to_possible_value().expect("no skipped variants").get_name().to_string();
        match self {
            Target::Disc(n) => format!("{name}-n{n}"),
            Target::Annulus(s) => format!("{name}-{}x{}", s.outer, s.inner),
            Target::Alternating(s, k) => format!("{name}-{}x{}-k{k}", s.outer, s.inner),
        }
    }

    fn points(&self) -> usize {
        match self {
            Target::Disc(n) => *n,
            Target::Annulus(s) => s.total(),
            Target::Alternating(s, k) => k * s.total(),
        }
    }

    fn annulus(&self) -> Option<AnnulusShape> {
        match self {
            Target::Disc(_) => None,
            Target::Annulus(s) => Some(*s),
            Target::Alternating(s, k) => Some(s.scaled(*k)),
        }
    }
}

fn compute(kind: Kind, target: &Target) -> Result<Vec<String>> {
    let show = |v: &[Permutation]| v.iter().map(|p| p.to_string()).collect();
    Ok(match (kind, target) {
        (Kind::Nc, Target::Disc(n)) => show(&enumerate_nc(*n)?),
        (Kind::Pairings, Target::Disc(n)) => show(&enumerate_nc_pairings(*n)?),
        (Kind::Snc, Target::Annulus(s)) => show(&enumerate_snc(*s)?),
        (Kind::Pairings, Target::Annulus(s)) => show(&enumerate_annular_pairings(*s)?),
        (Kind::Psnc, Target::Annulus(s)) => enumerate_ps_nc(*s)?.iter().map(|x| x.to_string()).collect(),
        (Kind::SncKAlt, Target::Alternating(s, k)) => show(&enumerate_snc_k_alt(s.outer, s.inner, *k)?),
        _ => unreachable!("targets are built per kind"),
    })
}

/// Whether a cached line is a member of the enumerated set (up to the
/// per-kind rule, which the count and checksum guard).
fn member(kind: Kind, target: &Target, line: &str) -> bool {
    let n = target.points();
    if kind == Kind::Psnc {
        return PartitionedPermutation::parse_sized(line, n).is_ok();
    }
    let Ok(p) = Permutation::parse_sized(line, n) else {
        return false;
    };
    match target.annulus() {
        None => is_noncrossing_disc(&p),
        Some(shape) if kind == Kind::Pairings => p.cycles().iter().all(|c| c.len() == 2) && is_annular_nc(&p, shape),
        Some(shape) => is_annular_nc(&p, shape),
    }
}

fn elements(kind: Kind, target: &Target, cache: Option<&Path>) -> Result<Vec<String>> {
    let Some(dir) = cache else {
        return compute(kind, target);
    };
    let cache = Cache::new(dir);
    let key = target.key(kind);
    if let Some(hit) = cache.load(&key, |line| member(kind, target, line)) {
        return Ok(hit);
    }
    let fresh = compute(kind, target)?;
    if let Err(e) = cache.store(&key, &fresh) {
        eprintln!("warning: could not write cache entry {}: {e}", cache.path(&key).display());
    }
    Ok(fresh)
}

pub fn run(args: Args, format: Format, cache: Option<&Path>, out: &mut dyn Write) -> Result<bool> {
    format.require("enumerate", &[Format::Json, Format::Csv, Format::Text])?;
    let target = args.target()?;
    let key = target.key(args.kind);
    let stamp = Stamp::new(
        json!({
            "command": "enumerate",
            "kind": args.kind.to_possible_value().expect("no skipped variants").get_name(),
            "n": args.n,
            "shape": args.shape.map(|s| s.to_string()),
            "k": args.k,
        }),
        &[],
    );
    let items = elements(args.kind, &target, cache)?;
    match format {
        Format::Json => {
            let mut head = stamp.envelope("count", json!(items.len()));
            head["key"] = json!(key);
            writeln!(out, "{head}")?;
            if !args.count_only {
                for (i, e) in items.iter().enumerate() {
                    writeln!(out, "{}", json!({ "index": i, "element": e }))?;
                }
            }
        }
        Format::Text => {
            stamp.text_header(out)?;
            if args.count_only {
                writeln!(out, "{}", items.len())?;
            } else {
                for e in &items {
                    writeln!(out, "{e}")?;
                }
            }
        }
        Format::Csv if args.count_only => print_csv(out, &["count"], [vec![items.len().to_string()]])?,
        Format::Csv => print_csv(
            out,
            &["index", "element"],
            items.iter().enumerate().map(|(i, e)| vec![i.to_string(), e.clone()]),
        )?,
        Format::Svg => unreachable!("rejected above"),
    }
    Ok(true)
}
