use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use sofree::annular::enumerate_snc;
use sofree::dist::{build, emit_model, BuiltinKind, BuiltinSpec};
use sofree::perm::AnnulusShape;

fn sofree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sofree"))
        .args(args)
        .env_remove("SOFREE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout(out).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn binom(n: usize, k: usize) -> usize {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

#[test]
fn enumeration_counts() {
    for (args, want) in [
        (vec!["enumerate", "nc", "--n", "4", "--count-only"], 14),
        (vec!["enumerate", "snc", "--shape", "2,2", "--count-only"], 18),
        (vec!["enumerate", "psnc", "--shape", "1,1", "--count-only"], 2),
        (vec!["enumerate", "pairings", "--n", "6", "--count-only"], 5),
        (vec!["enumerate", "pairings", "--shape", "2,2", "--count-only"], 2),
    ] {
        let out = sofree(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        let lines = json_lines(&out);
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0]["count"], want, "{args:?}");
        assert_eq!(lines[0]["version"], env!("CARGO_PKG_VERSION"));
        assert_eq!(lines[0]["digest"].as_str().unwrap().len(), 64);
    }
    let text = sofree(&["enumerate", "nc", "--n", "4", "--count-only", "--format", "text"]);
    assert_eq!(stdout(&text).lines().last(), Some("14"));
}

#[test]
fn enumeration_stream_is_canonical() {
    let out = sofree(&["enumerate", "snc", "--shape", "2,3"]);
    let lines = json_lines(&out);
    let want: Vec<String> = enumerate_snc(AnnulusShape::new(2, 3)).unwrap().iter().map(|p| p.to_string()).collect();
    assert_eq!(lines[0]["count"], want.len());
    let got: Vec<&str> = lines[1..].iter().map(|l| l["element"].as_str().unwrap()).collect();
    assert_eq!(got, want);
    for (i, l) in lines[1..].iter().enumerate() {
        assert_eq!(l["index"], i);
    }

    let csv = stdout(&sofree(&["enumerate", "snc", "--shape", "2,3", "--format", "csv"]));
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("index,element"));
    assert_eq!(rows.next().unwrap(), format!("0,\"{}\"", want[0]));
}

#[test]
fn snc_k_alt_matches_library() {
    let out = sofree(&["enumerate", "snc-k-alt", "--shape", "2,1", "--k", "2", "--count-only"]);
    let want = sofree::annular::enumerate_snc_k_alt(2, 1, 2).unwrap().len();
    assert_eq!(json_lines(&out)[0]["count"], want);
    assert_eq!(code(&sofree(&["enumerate", "snc-k-alt", "--shape", "2,1"])), 2);
}

fn cached_run(dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sofree"))
        .args(["enumerate", "psnc", "--shape", "2,2"])
        .env("SOFREE_CACHE_DIR", dir)
        .output()
        .unwrap()
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let cold = sofree(&["enumerate", "psnc", "--shape", "2,2"]);
    let first = cached_run(dir.path());
    let entries: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(entries.len(), 1);
    let entry = entries[0].clone();
    assert!(entry.to_string_lossy().ends_with(".jsonl.gz"));
    let warm = cached_run(dir.path());
    assert_eq!(cold.stdout, first.stdout);
    assert_eq!(cold.stdout, warm.stdout);

    let flag = Command::new(env!("CARGO_BIN_EXE_sofree"))
        .args(["enumerate", "psnc", "--shape", "2,2", "--cache-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(cold.stdout, flag.stdout);

    // garbage, then a well-formed entry with a wrong element
    fs::write(&entry, b"not gzip at all").unwrap();
    assert_eq!(cached_run(dir.path()).stdout, cold.stdout);
    let good = fs::read(&entry).unwrap();
    assert!(good.starts_with(&[0x1f, 0x8b]), "corrupt entry was rewritten");

    let mut text = String::new();
    std::io::Read::read_to_string(&mut flate2::read::GzDecoder::new(&good[..]), &mut text).unwrap();
    let tampered = text.replacen("(1,2)", "(1,3)", 1);
    assert_ne!(tampered, text);
    let mut gz = flate2::write::GzEncoder::new(Vec::new(), flate2::Compression::default());
    gz.write_all(tampered.as_bytes()).unwrap();
    fs::write(&entry, gz.finish().unwrap()).unwrap();
    assert_eq!(cached_run(dir.path()).stdout, cold.stdout);
}

#[test]
fn exit_codes() {
    let cap = sofree(&["enumerate", "snc", "--shape", "9,9", "--count-only"]);
    assert_eq!(code(&cap), 3);
    assert!(String::from_utf8_lossy(&cap.stderr).contains("cap"));
    assert_eq!(json(&cap)["exit_code"], 3);

    assert_eq!(code(&sofree(&["enumerate", "nc", "--shape", "1,2"])), 2);
    assert_eq!(code(&sofree(&["enumerate", "snc", "--shape", "1"])), 2);
    assert_eq!(code(&sofree(&["frobnicate"])), 2);
    assert_eq!(code(&sofree(&["transform", "c2m", "first", "--model", "gaussian"])), 2);
    assert_eq!(code(&sofree(&["check", "series", "--model", "semicircular", "--format", "csv"])), 2);
    assert_eq!(code(&sofree(&["render", "--shape", "1,1", "--perm", "(1,2)", "--format", "json"])), 2);
}

#[test]
fn haar_fluctuations_are_diagonal() {
    let out = sofree(&["transform", "c2m", "second", "--model", "haar_unitary", "--cutoff", "6"]);
    assert_eq!(code(&out), 0);
    let table = &json(&out)["result"]["table"];
    for k in 1..=3 {
        let up = vec!["u"; k].join(".");
        let down = vec!["u*"; k].join(".");
        assert_eq!(table[format!("{up}|{down}")], k.to_string());
        assert_eq!(table[format!("{down}|{up}")], k.to_string());
        for l in 1..=3 {
            if l != k && k + l <= 6 {
                assert_eq!(table[format!("{up}|{}", vec!["u*"; l].join("."))], "0");
            }
        }
    }
}

#[test]
fn semicircle_has_only_variance() {
    let out = sofree(&["transform", "m2c", "first", "--model", "semicircular", "--cutoff", "8"]);
    let table = json(&out)["result"]["table"].as_object().unwrap().clone();
    assert_eq!(table.len(), 8);
    for (k, v) in &table {
        assert_eq!(v, if k == "s.s" { "1" } else { "0" }, "{k}");
    }
}

#[test]
fn transforms_round_trip() {
    for model in ["semicircular", "circular", "haar_unitary", "free_poisson:2"] {
        for dir in ["m2c", "c2m"] {
            for level in ["first", "second"] {
                let out = sofree(&["transform", dir, level, "--model", model, "--cutoff", "5", "--verify-roundtrip"]);
                assert_eq!(code(&out), 0, "{model} {dir} {level}");
                assert_eq!(json(&out)["result"]["roundtrip"]["passed"], true);
            }
        }
    }
}

#[test]
fn model_files_match_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("circular.json");
    let m = build(&BuiltinSpec { kind: BuiltinKind::Circular, truncation: 8 });
    fs::write(&path, emit_model(&m).to_string()).unwrap();
    let from_file = sofree(&["transform", "c2m", "first", "--model", path.to_str().unwrap(), "--format", "csv"]);
    let builtin = sofree(&["transform", "c2m", "first", "--model", "circular", "--format", "csv"]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(from_file.stdout, builtin.stdout);

    fs::write(&path, r#"{"alphabet": [], "families": {"X": {}}}"#).unwrap();
    let bad = sofree(&["transform", "c2m", "first", "--model", path.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
}

#[test]
fn squares_of_standard_elements() {
    let semi = json(&sofree(&["square", "--model", "semicircular", "--cutoff", "4"]));
    let second = &semi["result"]["square"]["second"];
    assert_eq!(second["2,2"], "6");
    for p in 1..4 {
        for q in 1..=4 - p {
            assert_eq!(second[format!("{p},{q}")], (p * binom(p + q - 1, p)).to_string());
        }
    }
    let circ = json(&sofree(&["square", "--model", "circular", "--cutoff", "4"]));
    let second = circ["result"]["square"]["second"].as_object().unwrap();
    assert!(!second.is_empty());
    assert!(second.values().all(|v| v == "0"));
}

#[test]
fn square_directions_agree() {
    for model in ["semicircular", "circular", "haar_unitary"] {
        let fwd = json(&sofree(&["square", "--model", model, "--cutoff", "4", "--verify-roundtrip"]));
        let inv = json(&sofree(&["square", "--model", model, "--cutoff", "4", "--direction", "inverse", "--verify-roundtrip"]));
        assert_eq!(fwd["result"]["roundtrip"]["passed"], true, "{model}");
        assert_eq!(inv["result"]["roundtrip"]["passed"], true, "{model}");
        assert_eq!(fwd["result"]["determining"], inv["result"]["determining"], "{model}");
        assert_eq!(fwd["result"]["square"], inv["result"]["square"], "{model}");
    }
}

#[test]
fn checks_pass_and_fail() {
    let series = sofree(&["check", "series", "--model", "semicircular", "--cutoff", "8"]);
    assert_eq!(code(&series), 0);
    let report = &json(&series)["report"];
    assert_eq!(report["passed"], true);
    assert_eq!(report["first_order_residual"], serde_json::json!({}));
    assert_eq!(report["second_order_residual"], serde_json::json!({}));

    assert_eq!(code(&sofree(&["check", "series", "--model", "haar_unitary", "--cutoff", "6"])), 0);
    assert_eq!(code(&sofree(&["check", "rdiag", "--model", "circular"])), 0);
    assert_eq!(code(&sofree(&["check", "even", "--model", "semicircular"])), 0);

    let poisson = sofree(&["check", "even", "--model", "free_poisson"]);
    assert_eq!(code(&poisson), 1);
    let report = &json(&poisson)["report"];
    assert_eq!(report["passed"], false);
    assert_eq!(report["violation"]["value"], "1");

    assert_eq!(code(&sofree(&["check", "rdiag", "--model", "semicircular", "--format", "text"])), 1);
}

#[test]
fn mt1_products() {
    let out = sofree(&["check", "mt1", "--r", "circular", "--b", "free_poisson", "--order", "6"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let report = &json(&out)["report"];
    assert_eq!(report["passed"], true);
    assert!(report["expansion_terms"].as_u64().unwrap() > 0);

    let two = sofree(&["check", "mt1", "--r", "circular,circular", "--b", "free_poisson", "--order", "4"]);
    assert_eq!(code(&two), 0);
    assert_eq!(json(&two)["inputs"]["r"], "c1.c2");
    // not R-diagonal
    assert_eq!(code(&sofree(&["check", "mt1", "--r", "semicircular", "--b", "circular", "--order", "4"])), 2);
}

#[test]
fn worked_examples_report() {
    let out = sofree(&["check", "examples"]);
    assert_eq!(code(&out), 0);
    let report = &json(&out)["report"];
    assert_eq!(report["passed"], true);
    assert_eq!(report["failed"], 0);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len() as u64, report["total"].as_u64().unwrap());
    for c in checks {
        assert_eq!(c["expected"], c["actual"], "{c}");
    }
    let groups: std::collections::BTreeSet<&str> = checks.iter().map(|c| c["group"].as_str().unwrap()).collect();
    for g in ["counting", "hh*", "h3", "squares", "products", "haar", "conjugation", "series", "hermitization"] {
        assert!(groups.contains(g), "{g}");
    }
}

#[test]
fn render_draws_one_path_per_cycle() {
    let args = ["render", "--shape", "5,3", "--perm", "(1,5)(2,6)(3,4,7,8)"];
    let a = sofree(&args);
    let b = sofree(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches(r#"class="cycle""#).count(), 3);
    assert_eq!(svg.matches(r#"class="boundary""#).count(), 2);
    assert_eq!(svg.matches(r#"class="point""#).count(), 8);
    // two through cycles, each with curved segments
    assert_eq!(svg.lines().filter(|l| l.contains(r#"class="cycle""#) && l.contains(" Q ")).count(), 2);
    for i in 1..=8 {
        assert!(svg.contains(&format!(">{i}</text>")));
    }

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.svg");
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert_eq!(code(&sofree(&with_file)), 0);
    assert_eq!(fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn render_rejects_non_annular_input() {
    assert_eq!(code(&sofree(&["render", "--shape", "2,2", "--perm", "()"])), 2);
    assert_eq!(code(&sofree(&["render", "--shape", "2,2", "--perm", "(1,2)(3,4)"])), 2);
    assert_eq!(code(&sofree(&["render", "--shape", "2,2", "--perm", "(1,9)"])), 2);
}

#[test]
fn digests_track_inputs() {
    let d = |args: &[&str]| json(&sofree(args))["digest"].as_str().unwrap().to_string();
    let a = d(&["square", "--model", "semicircular", "--cutoff", "3"]);
    assert_eq!(a, d(&["square", "--model", "semicircular", "--cutoff", "3"]));
    assert_ne!(a, d(&["square", "--model", "semicircular", "--cutoff", "4"]));
    assert_ne!(a, d(&["square", "--model", "circular", "--cutoff", "3"]));
}
