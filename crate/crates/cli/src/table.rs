//! Tabular output shared by the CSV and JSON writers, and the reader used
//! by `validate`.

use std::io::Write;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// Ordered `(key, value)` metadata; `kind` names the producing command.
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(kind: &str, columns: &[&str]) -> Self {
        Table {
            meta: vec![("kind".into(), kind.into())],
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.meta.push((key.into(), value.to_string()));
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn get_meta(&self, key: &str) -> Option<&str> {
        self.meta.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn kind(&self) -> &str {
        self.get_meta("kind").unwrap_or("")
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }

    pub fn render(&self, format: Format) -> anyhow::Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            Format::Csv => {
                let mut out = Vec::new();
                for (k, v) in &self.meta {
                    writeln!(out, "# {k}: {v}")?;
                }
                let mut w = csv::Writer::from_writer(&mut out);
                w.write_record(&self.columns)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
                drop(w);
                Ok(String::from_utf8(out)?)
            }
        }
    }

    pub fn parse(text: &str) -> anyhow::Result<Self> {
        if text.trim_start().starts_with('{') {
            return serde_json::from_str(text).context("malformed JSON table");
        }
        let mut meta = Vec::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let (k, v) = line[1..]
                .trim()
                .split_once(": ")
                .with_context(|| format!("malformed comment line {line:?}"))?;
            meta.push((k.to_string(), v.to_string()));
        }
        let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
        let columns: Vec<String> = r.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec?;
            if rec.len() != columns.len() {
                bail!("row with {} fields under {} columns", rec.len(), columns.len());
            }
            rows.push(rec.iter().map(String::from).collect());
        }
        Ok(Table { meta, columns, rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut t = Table::new("perm", &["k", "q"]);
        t.meta("n", 2);
        t.push(vec!["1".into(), "0.5".into()]);
        t.push(vec!["2".into(), "0.5".into()]);
        for f in [Format::Csv, Format::Json] {
            assert_eq!(Table::parse(&t.render(f).unwrap()).unwrap(), t);
        }
    }
}
