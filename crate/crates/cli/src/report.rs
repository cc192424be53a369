use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// Everything a subcommand prints: the canonical JSON document and its
/// flattened CSV table.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs: Value,
    pub results: Value,
    pub timing_ms: f64,
    #[serde(skip)]
    pub table: Table,
}

#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

impl Report {
    pub fn new(inputs: Value, results: Value, timing_ms: f64, table: Table) -> Self {
        Self { command: Vec::new(), inputs, results, timing_ms, table }
    }

    pub fn with_command(mut self, argv: Vec<String>) -> Self {
        self.command = argv;
        self
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> anyhow::Result<()> {
        serde_json::to_writer_pretty(&mut out, self)?;
        writeln!(out)?;
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> anyhow::Result<()> {
        for row in std::iter::once(&self.table.header).chain(&self.table.rows) {
            let cells: Vec<String> = row.iter().map(|c| quote(c)).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

fn quote(cell: &str) -> String {
    if cell.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_owned()
    }
}
