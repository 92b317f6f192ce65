use std::io::Write;

use clap::ValueEnum;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use sofree::cumulants::CumulantModel;
use sofree::dist::emit_model;

use crate::error::{usage, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
    Svg,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
            Format::Svg => "svg",
        }
    }

    pub fn require(self, command: &str, allowed: &[Format]) -> Result<()> {
        if allowed.contains(&self) {
            Ok(())
        } else {
            Err(usage(format!("{command} does not support --format {}", self.name())))
        }
    }
}

/// The inputs of a run and their digest.
///
/// Models enter the digest through their full document, so a model file
/// edited in place changes the digest even though its path does not.
pub struct Stamp {
    pub inputs: Value,
    pub digest: String,
}

impl Stamp {
    pub fn new(inputs: Value, models: &[&CumulantModel]) -> Self {
        let docs: Vec<Value> = models.iter().map(|m| emit_model(m)).collect();
        let canonical = json!({ "inputs": inputs, "models": docs });
        let bytes = serde_json::to_vec(&canonical).expect("values always serialize");
        Stamp { inputs, digest: format!("{:x}", Sha256::digest(bytes)) }
    }

    /// `{"tool", "version", "digest", "inputs", <key>: body}` with sorted keys.
    pub fn envelope(&self, key: &str, body: Value) -> Value {
        let mut doc = Map::new();
        doc.insert("tool".into(), json!("sofree"));
        doc.insert("version".into(), json!(VERSION));
        doc.insert("digest".into(), json!(self.digest));
        doc.insert("inputs".into(), self.inputs.clone());
        doc.insert(key.into(), body);
        Value::Object(doc)
    }

    pub fn text_header(&self, out: &mut dyn Write) -> Result<()> {
        writeln!(out, "# sofree {VERSION} digest {}", self.digest)?;
        Ok(())
    }
}

pub fn print_json(out: &mut dyn Write, doc: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc).expect("values always serialize");
    writeln!(out)?;
    Ok(())
}

pub fn print_csv(out: &mut dyn Write, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}
