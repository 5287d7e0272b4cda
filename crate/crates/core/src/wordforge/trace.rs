use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

/// One pipeline step: what was certified, with which constants, and the
/// word lengths involved.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub step: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relation: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub constants: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub word_lengths: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "serde_json::Value::is_null", default)]
    pub detail: serde_json::Value,
}

impl TraceRecord {
    pub fn new(step: &str) -> Self {
        TraceRecord {
            step: step.to_string(),
            ..Default::default()
        }
    }

    pub fn relation(mut self, r: impl Into<String>) -> Self {
        self.relation = Some(r.into());
        self
    }

    pub fn constant(mut self, k: &str, v: impl ToString) -> Self {
        self.constants.insert(k.to_string(), v.to_string());
        self
    }

    pub fn lengths(mut self, l: &[usize]) -> Self {
        self.word_lengths = l.to_vec();
        self
    }

    pub fn flag(mut self, f: &str) -> Self {
        self.flags.push(f.to_string());
        self
    }

    pub fn detail<T: Serialize>(mut self, d: &T) -> Self {
        self.detail = serde_json::to_value(d).unwrap_or(serde_json::Value::Null);
        self
    }
}

/// Writes one JSON object per line.
pub fn write_json_lines<W: Write>(records: &[TraceRecord], mut w: W) -> io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
