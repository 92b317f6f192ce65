//! Enumeration results stored as gzip-compressed JSON lines.
//!
//! The first line is a header with the key, tool version, element count and
//! a SHA-256 of the elements; each further line is one element. An entry that
//! fails to decompress, parse or match its header is ignored and rewritten.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::output::VERSION;

pub struct Cache {
    dir: PathBuf,
}

fn checksum(elements: &[String]) -> String {
    let mut h = Sha256::new();
    for e in elements {
        h.update(e.as_bytes());
        h.update(b"\n");
    }
    format!("{:x}", h.finalize())
}

fn header(key: &str, elements: &[String]) -> Value {
    json!({ "key": key, "version": VERSION, "count": elements.len(), "sha256": checksum(elements) })
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf() }
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}-v{VERSION}.jsonl.gz"))
    }

    /// Cached elements for `key`, or `None` when absent or unusable.
    /// `valid` rejects lines that are not elements of the right kind.
    pub fn load(&self, key: &str, valid: impl Fn(&str) -> bool) -> Option<Vec<String>> {
        let file = File::open(self.path(key)).ok()?;
        let mut lines = BufReader::new(GzDecoder::new(file)).lines();
        let head: Value = serde_json::from_str(&lines.next()?.ok()?).ok()?;
        let mut out = Vec::new();
        for line in lines {
            let s: String = serde_json::from_str(&line.ok()?).ok()?;
            if !valid(&s) {
                return None;
            }
            out.push(s);
        }
        (head == header(key, &out)).then_some(out)
    }

    /// Writes through a temporary file so readers never see a partial entry.
    pub fn store(&self, key: &str, elements: &[String]) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let target = self.path(key);
        let tmp = target.with_extension(format!("tmp{}", std::process::id()));
        let mut gz = GzEncoder::new(File::create(&tmp)?, Compression::default());
        writeln!(gz, "{}", header(key, elements))?;
        for e in elements {
            writeln!(gz, "{}", Value::String(e.clone()))?;
        }
        gz.finish()?.sync_all()?;
        fs::rename(&tmp, &target)
    }
}
