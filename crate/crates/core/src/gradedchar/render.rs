use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{GradedCharacter, Truncation};

#[derive(Debug, Error)]
pub enum CharacterJsonError {
    #[error("malformed character JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("coefficient at (z={z}, u={u}, q={q}) lies outside the declared truncation")]
    OutsideWindow { z: i64, u: i64, q: i64 },
    #[error("duplicate coefficient at (z={z}, u={u}, q={q})")]
    Duplicate { z: i64, u: i64, q: i64 },
}

#[derive(Serialize, Deserialize)]
struct Record {
    z: i64,
    u: i64,
    q: i64,
    dim: u64,
}

#[derive(Serialize, Deserialize)]
struct Document {
    truncation: Truncation,
    coefficients: Vec<Record>,
}

impl GradedCharacter {
    /// JSON object with a `truncation` record and `coefficients` sorted by
    /// `(z, u, q)`.
    pub fn to_json_value(&self) -> serde_json::Value {
        let doc = Document {
            truncation: self.truncation,
            coefficients: self.iter().map(|((z, u, q), dim)| Record { z, u, q, dim }).collect(),
        };
        serde_json::to_value(doc).expect("character serializes")
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("character serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Self, CharacterJsonError> {
        let doc: Document = serde_json::from_str(s)?;
        let mut out = GradedCharacter::zero(doc.truncation);
        for r in doc.coefficients {
            if !doc.truncation.contains((r.z, r.u, r.q)) {
                return Err(CharacterJsonError::OutsideWindow { z: r.z, u: r.u, q: r.q });
            }
            if out.get((r.z, r.u, r.q)) != 0 {
                return Err(CharacterJsonError::Duplicate { z: r.z, u: r.u, q: r.q });
            }
            out.add_term((r.z, r.u, r.q), r.dim);
        }
        Ok(out)
    }

    /// Plain-text table: one row per q-degree, one column per `(z, u)` pair
    /// occurring in the support.
    pub fn render_table(&self) -> String {
        let columns: BTreeSet<(i64, i64)> = self.iter().map(|((z, u, _), _)| (z, u)).collect();
        let q_lo = self.iter().map(|((_, _, q), _)| q).min().unwrap_or(0).min(0);
        let headers: Vec<String> = columns.iter().map(|(z, u)| format!("z{z}u{u}")).collect();
        let width = headers.iter().map(String::len).max().unwrap_or(1).max(self.iter().map(|(_, v)| v.to_string().len()).max().unwrap_or(1));
        let mut out = String::new();
        let _ = writeln!(out, "# truncation: {}", self.truncation);
        let _ = write!(out, "{:>4}", "q");
        for h in &headers {
            let _ = write!(out, " {h:>width$}");
        }
        out.push('\n');
        for q in q_lo..=self.truncation.q_max {
            let _ = write!(out, "{q:>4}");
            for (z, u) in &columns {
                let _ = write!(out, " {:>width$}", self.get((*z, *u, q)));
            }
            out.push('\n');
        }
        out
    }
}
