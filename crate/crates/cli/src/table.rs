//! Result tables and their CSV / JSON encodings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    pub tool_version: String,
    pub command: String,
    pub seed: Option<u64>,
    /// SHA-256 of the resolved configuration.
    pub config_digest: String,
    /// Free-form annotations: curve labels, optimum summaries.
    #[serde(default)]
    pub notes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

impl ResultTable {
    pub fn new(metadata: Metadata, columns: &[&str]) -> Self {
        Self {
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.notes.insert(key.into(), value.to_string());
    }

    pub fn to_csv(&self) -> String {
        let m = &self.metadata;
        let mut out = String::new();
        let _ = writeln!(out, "# tool_version={}", m.tool_version);
        let _ = writeln!(out, "# command={}", m.command);
        if let Some(seed) = m.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        let _ = writeln!(out, "# config_digest={}", m.config_digest);
        for (k, v) in &m.notes {
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table is serializable");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// Writes the table, creating missing parent directories.
pub fn emit(table: &ResultTable, format: Format, path: &Path) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, table.render(format)).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultTable {
        let mut t = ResultTable::new(
            Metadata {
                tool_version: "0.1.0".into(),
                command: "demo".into(),
                seed: Some(3),
                config_digest: "ab".into(),
                notes: BTreeMap::new(),
            },
            &["x", "y"],
        );
        t.push(vec![0.1, 1.0 / 3.0]);
        t.push(vec![2.0, -0.0]);
        t.note("curve.0", "demo curve");
        t
    }

    #[test]
    fn csv_layout() {
        let csv = sample().to_csv();
        assert_eq!(
            csv,
            "# tool_version=0.1.0\n# command=demo\n# seed=3\n# config_digest=ab\n# curve.0=demo curve\nx,y\n0.1,0.3333333333333333\n2,-0\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let t = sample();
        assert_eq!(ResultTable::from_json(&t.to_json()).unwrap(), t);
    }

    #[test]
    #[should_panic(expected = "row width")]
    fn ragged_rows_rejected() {
        sample().push(vec![1.0]);
    }
}
