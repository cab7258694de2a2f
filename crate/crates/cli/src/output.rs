//! Output formats: JSON, CSV, aligned text and SVG.
//!
//! Floats are written as `{:.16e}` (17 significant digits, lowercase `e`) in
//! every format so that identical runs produce identical bytes.

use std::fmt::Write;
use std::str::FromStr;

use serde_json::{Map, Number, Value};
use so4lab::oplab::report::{fmt_float, SymmetryReport, SCHEMA};

/// Output selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Svg,
    Text,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
            Self::Svg => "svg",
            Self::Text => "text",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            "svg" => Ok(Self::Svg),
            "text" => Ok(Self::Text),
            _ => Err("expected json, csv, svg or text".into()),
        }
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Self::Int(i) => i.to_string(),
            Self::Float(x) => fmt_float(*x),
            Self::Text(s) => s.clone(),
            Self::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Self::Int(i) => Value::from(*i),
            Self::Float(x) => number(*x),
            Self::Text(s) => Value::from(s.as_str()),
            Self::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Float(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Self::Int(i64::from(x))
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Self::Int(i64::from(x))
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Self::Bool(b)
    }
}

/// JSON number carrying the fixed textual form; non-finite values become `null`.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&fmt_float(x)).expect("formatted float is a valid JSON number"))
}

/// Named columns with rows of cells, plus trailing `key=value` notes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub notes: Vec<(&'static str, Cell)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), ..Self::default() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn note(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.notes.push((key, value.into()));
    }

    /// Header line, one line per row, then `# key=value` footer lines.
    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        for (k, v) in &self.notes {
            let _ = writeln!(s, "# {k}={}", v.render());
        }
        s
    }

    /// Space-padded columns.
    pub fn to_text(&self) -> String {
        let rendered: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(Cell::render).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|c| rendered.iter().map(|r| r[c].len()).chain([self.columns[c].len()]).max().unwrap_or(0))
            .collect();
        let line = |cells: Vec<&str>| -> String {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut s = line(self.columns.clone());
        for r in &rendered {
            s.push_str(&line(r.iter().map(String::as_str).collect()));
        }
        for (k, v) in &self.notes {
            let _ = writeln!(s, "{k} = {}", v.render());
        }
        s
    }

    /// `{"schema", "command", notes..., "rows": [{column: value}]}`.
    pub fn to_json(&self, command: &str) -> String {
        let mut doc = Map::new();
        doc.insert("schema".into(), SCHEMA.into());
        doc.insert("command".into(), command.into());
        for (k, v) in &self.notes {
            doc.insert((*k).into(), v.json());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| ((*c).to_string(), v.json())).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        pretty(Value::Object(doc))
    }
}

fn pretty(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// JSON form of a symmetry report.
pub fn report_json(rep: &SymmetryReport, command: &str) -> String {
    let mut doc = Map::new();
    doc.insert("schema".into(), SCHEMA.into());
    doc.insert("command".into(), command.into());
    doc.insert("report".into(), rep.name.as_str().into());
    let meta: Map<String, Value> = rep.metadata.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
    doc.insert("meta".into(), Value::Object(meta));
    let entries = rep
        .entries
        .iter()
        .map(|e| {
            let mut m = Map::new();
            m.insert("label".into(), e.label.as_str().into());
            m.insert("kind".into(), e.kind.as_str().into());
            m.insert("norm".into(), e.norm.as_str().into());
            m.insert("residual".into(), number(e.residual));
            m.insert("tolerance".into(), number(e.tolerance));
            m.insert("order".into(), e.order.map_or(Value::Null, number));
            m.insert("pass".into(), e.pass.into());
            m.insert("grid".into(), e.grid.as_str().into());
            Value::Object(m)
        })
        .collect();
    doc.insert("entries".into(), Value::Array(entries));
    let excluded = rep
        .excluded
        .iter()
        .map(|x| {
            let mut m = Map::new();
            m.insert("label".into(), x.label.to_string().into());
            m.insert("energy".into(), number(x.energy));
            m.insert("reason".into(), x.reason.as_str().into());
            Value::Object(m)
        })
        .collect();
    doc.insert("excluded".into(), Value::Array(excluded));
    let failed = rep.failed().count();
    let mut summary = Map::new();
    summary.insert("pass".into(), (failed == 0).into());
    summary.insert("entries".into(), rep.entries.len().into());
    summary.insert("failed".into(), failed.into());
    doc.insert("summary".into(), Value::Object(summary));
    pretty(Value::Object(doc))
}

/// CSV form of a symmetry report: one row per entry.
pub fn report_csv(rep: &SymmetryReport) -> String {
    let mut t = Table::new(&["label", "kind", "norm", "residual", "tolerance", "order", "pass", "grid"]);
    for e in &rep.entries {
        t.push(vec![
            e.label.clone().into(),
            e.kind.as_str().to_string().into(),
            e.norm.as_str().to_string().into(),
            e.residual.into(),
            e.tolerance.into(),
            e.order.map_or_else(|| Cell::Text("n/a".into()), Cell::Float),
            e.pass.into(),
            Cell::Text(e.grid.replace(',', ";")),
        ]);
    }
    t.to_csv()
}
