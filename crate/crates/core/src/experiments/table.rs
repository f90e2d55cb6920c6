use serde::Serialize;

use crate::{GgError, Result};

/// A small result table with Markdown and CSV renderings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub title: String,
    /// Short tag naming the checked statement, e.g. `delta-ij`.
    pub tag: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, tag: impl Into<String>, headers: &[&str]) -> Self {
        Self { title: title.into(), tag: tag.into(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("### {} [{}]\n\n", self.title, self.tag);
        s += &format!("| {} |\n", self.headers.join(" | "));
        s += &format!("|{}\n", "---|".repeat(self.headers.len()));
        for r in &self.rows {
            s += &format!("| {} |\n", r.join(" | "));
        }
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| GgError::Io(e.to_string());
        w.write_record(&self.headers).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| GgError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| GgError::Io(e.to_string()))
    }
}

pub(crate) fn fmt(x: f64) -> String {
    format!("{x:.6}")
}
