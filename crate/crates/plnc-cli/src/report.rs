//! Deterministic CSV/JSON report emission.
//!
//! Identical invocations must produce byte-identical output: floats are
//! formatted with 9 significant digits, columns have a fixed order, and
//! the resolved configuration is embedded in the header. CSV quoting is
//! RFC-4180 style (quote when a field contains a comma, quote or newline),
//! lines end with LF.

use std::io::Write;

/// One report cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Text(String),
    Bool(bool),
    /// Missing value: empty CSV field, JSON null.
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }
}

/// A finished report: resolved configuration plus tabular rows.
#[derive(Debug, Clone)]
pub struct Report {
    /// Resolved configuration in emission order.
    pub config: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Nine significant digits, scientific; the one float format used in CSV.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{x:.8e}")
    }
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn cell_to_csv(cell: &Cell) -> String {
    match cell {
        Cell::Float(x) => fmt_float(*x),
        Cell::Text(s) => csv_escape(s),
        Cell::Bool(b) => b.to_string(),
        Cell::Empty => String::new(),
    }
}

fn cell_to_json(cell: &Cell) -> serde_json::Value {
    match cell {
        Cell::Float(x) => serde_json::Number::from_f64(*x)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null),
        Cell::Text(s) => serde_json::Value::String(s.clone()),
        Cell::Bool(b) => serde_json::Value::Bool(*b),
        Cell::Empty => serde_json::Value::Null,
    }
}

impl Report {
    pub fn write_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let config = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(out, "# {config}")?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            debug_assert_eq!(row.len(), self.columns.len());
            let line = row.iter().map(cell_to_csv).collect::<Vec<_>>().join(",");
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn write_json(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let config: serde_json::Map<String, serde_json::Value> = self
            .config
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
            .collect();
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(row.iter())
                    .map(|(col, cell)| (col.to_string(), cell_to_json(cell)))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        let doc = serde_json::json!({ "config": config, "rows": rows });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        Ok(())
    }
}
