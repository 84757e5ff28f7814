//! Append-only JSONL result cache keyed by a hash of the operation, the
//! normalized instance, the parameters and the code version.

use std::fs::OpenOptions;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Line {
    Result { key: String, op: String, version: String, output: Value },
    Hit { key: String, op: String },
}

pub struct Cache {
    path: PathBuf,
}

/// `instance` must already be normalized (hypergraph JSON in canonical edge
/// order), so equivalent specs share a key.
pub fn cache_key(op: &str, instance: &Value, params: &Value) -> String {
    let canonical = json!({
        "op": op,
        "instance": instance,
        "params": params,
        "version": VERSION,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

impl Cache {
    pub fn new(path: impl AsRef<Path>) -> Self {
        Cache {
            path: path.as_ref().to_path_buf(),
        }
    }

    pub fn lookup(&self, key: &str) -> Result<Option<Value>> {
        let file = match std::fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e).with_context(|| format!("opening cache {}", self.path.display())),
        };
        for line in BufReader::new(file).lines() {
            let line = line?;
            // a torn or foreign line is skipped, not fatal
            if let Ok(Line::Result { key: k, output, .. }) = serde_json::from_str(&line) {
                if k == key {
                    return Ok(Some(output));
                }
            }
        }
        Ok(None)
    }

    /// One `write` per line so concurrent appenders never interleave.
    pub fn append(&self, line: &Line) -> Result<()> {
        let mut text = serde_json::to_string(line)?;
        text.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .with_context(|| format!("opening cache {}", self.path.display()))?;
        file.write_all(text.as_bytes())?;
        Ok(())
    }
}

/// Drops every `timings_ms` field, the only nondeterministic part of a
/// report.
pub fn without_timings(v: &Value) -> Value {
    match v {
        Value::Object(map) => Value::Object(
            map.iter()
                .filter(|(k, _)| k.as_str() != "timings_ms")
                .map(|(k, v)| (k.clone(), without_timings(v)))
                .collect(),
        ),
        Value::Array(items) => Value::Array(items.iter().map(without_timings).collect()),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_hits() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("c.jsonl"));
        let key = cache_key("bound", &json!({"n": 3}), &json!({"r": 2}));
        assert_eq!(cache.lookup(&key).unwrap(), None);
        let output = json!({"chi": 3});
        cache
            .append(&Line::Result {
                key: key.clone(),
                op: "bound".into(),
                version: VERSION.into(),
                output: output.clone(),
            })
            .unwrap();
        cache
            .append(&Line::Hit {
                key: key.clone(),
                op: "bound".into(),
            })
            .unwrap();
        assert_eq!(cache.lookup(&key).unwrap(), Some(output));
        let text = std::fs::read_to_string(dir.path().join("c.jsonl")).unwrap();
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn keys_separate_parameters() {
        let a = cache_key("bound", &json!({"n": 3}), &json!({"r": 2}));
        let b = cache_key("bound", &json!({"n": 3}), &json!({"r": 3}));
        let c = cache_key("defect", &json!({"n": 3}), &json!({"r": 2}));
        assert_ne!(a, b);
        assert_ne!(a, c);
        assert_eq!(a, cache_key("bound", &json!({"n": 3}), &json!({"r": 2})));
    }

    #[test]
    fn timings_are_ignored() {
        let a = json!({"chi": 2, "timings_ms": {"chi": 1.0}, "factors": [{"timings_ms": 3}]});
        let b = json!({"chi": 2, "timings_ms": {"chi": 9.0}, "factors": [{"timings_ms": 4}]});
        assert_eq!(without_timings(&a), without_timings(&b));
    }
}
