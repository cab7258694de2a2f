//! Symmetry reports and their key-value text form.
//!
//! ```text
//! schema=so4lab/1
//! report=<name>
//! meta <key>=<value>
//! entry label=<id> kind=<structural|algebra|converging|detection> norm=<max_entry|spectral|relative|count|ratio> residual=<x> tolerance=<x> order=<x|n/a> pass=<true|false> grid=<text>
//! excluded label=<id> energy=<x> reason="<text>"
//! summary pass=<true|false> entries=<n> failed=<n>
//! ```
//!
//! Floats use 17 significant digits in lowercase exponent form. A detection
//! entry passes when its value reaches the tolerance; every other entry passes
//! when its residual stays at or below it.

use std::fmt::Write as _;

use super::bound::Exclusion;

/// Schema tag written at the top of every report.
pub const SCHEMA: &str = "so4lab/1";

/// How a residual is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormKind {
    /// Largest entry modulus of a full operator.
    MaxEntry,
    /// Largest singular value of a compressed operator.
    Spectral,
    /// Relative deviation of a scalar.
    Relative,
    /// Integer count.
    Count,
    /// Quotient of two norms.
    Ratio,
}

impl NormKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MaxEntry => "max_entry",
            Self::Spectral => "spectral",
            Self::Relative => "relative",
            Self::Count => "count",
            Self::Ratio => "ratio",
        }
    }
}

/// Exact-by-construction identity, subspace algebra, grid-limited identity,
/// or a detection that passes when the value reaches its threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntryKind {
    Structural,
    Algebra,
    Converging,
    Detection,
}

impl EntryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Structural => "structural",
            Self::Algebra => "algebra",
            Self::Converging => "converging",
            Self::Detection => "detection",
        }
    }
}

/// Accepted band for a measured convergence order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderBand {
    pub min: f64,
    pub max: f64,
}

impl Default for OrderBand {
    fn default() -> Self {
        Self { min: 1.6, max: 2.4 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportEntry {
    pub label: String,
    pub kind: EntryKind,
    pub norm: NormKind,
    pub residual: f64,
    pub tolerance: f64,
    pub order: Option<f64>,
    pub pass: bool,
    pub grid: String,
}

fn clean(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.abs().min(f64::MAX)
    }
}

impl ReportEntry {
    /// Entry passing when `residual <= tolerance`, or `residual >= tolerance`
    /// for [`EntryKind::Detection`].
    pub fn fixed(label: impl Into<String>, kind: EntryKind, norm: NormKind, residual: f64, tolerance: f64, grid: impl Into<String>) -> Self {
        let residual = clean(residual);
        let pass = match kind {
            EntryKind::Detection => residual >= tolerance,
            _ => residual <= tolerance,
        };
        Self { label: label.into(), kind, norm, residual, tolerance, order: None, pass, grid: grid.into() }
    }

    /// Grid-limited entry measured on a coarse and a fine grid; the fine value is
    /// recorded. With `band` set, the order must also fall inside it.
    pub fn converging(
        label: impl Into<String>,
        norm: NormKind,
        (coarse, fine): (f64, f64),
        refinement: f64,
        tolerance: f64,
        band: Option<OrderBand>,
        grid: impl Into<String>,
    ) -> Self {
        let (coarse, fine) = (clean(coarse), clean(fine));
        let order = (coarse / fine).ln() / refinement.ln();
        let order_ok = band.is_none_or(|b| order.is_finite() && (b.min..=b.max).contains(&order));
        Self {
            label: label.into(),
            kind: EntryKind::Converging,
            norm,
            residual: fine,
            tolerance,
            order: order.is_finite().then_some(order),
            pass: fine <= tolerance && order_ok,
            grid: grid.into(),
        }
    }
}

/// Named identity checks with grid metadata and excluded states.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SymmetryReport {
    pub name: String,
    pub metadata: Vec<(String, String)>,
    pub entries: Vec<ReportEntry>,
    pub excluded: Vec<Exclusion>,
}

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl SymmetryReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), ..Self::default() }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.metadata.push((key.into(), value.into()));
    }

    pub fn push(&mut self, entry: ReportEntry) {
        self.entries.push(entry);
    }

    pub fn entry(&self, label: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn failed(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    /// Appends `other`'s entries with labels prefixed by `prefix`.
    pub fn absorb(&mut self, prefix: &str, other: SymmetryReport) {
        for mut e in other.entries {
            e.label = format!("{prefix}{}", e.label);
            self.entries.push(e);
        }
        for mut x in other.excluded {
            x.label = format!("{prefix}{}", x.label);
            self.excluded.push(x);
        }
    }

    /// Key-value text form (see module docs).
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema={SCHEMA}");
        let _ = writeln!(s, "report={}", self.name);
        for (k, v) in &self.metadata {
            let _ = writeln!(s, "meta {k}={v}");
        }
        for e in &self.entries {
            let order = e.order.map_or_else(|| "n/a".to_string(), fmt_float);
            let _ = writeln!(
                s,
                "entry label={} kind={} norm={} residual={} tolerance={} order={} pass={} grid={}",
                e.label,
                e.kind.as_str(),
                e.norm.as_str(),
                fmt_float(e.residual),
                fmt_float(e.tolerance),
                order,
                e.pass,
                e.grid
            );
        }
        for x in &self.excluded {
            let _ = writeln!(s, "excluded label={} energy={} reason=\"{}\"", x.label.replace(' ', "_"), fmt_float(x.energy), x.reason);
        }
        let failed = self.failed().count();
        let _ = writeln!(s, "summary pass={} entries={} failed={failed}", failed == 0, self.entries.len());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn converging_entry_checks_order() {
        let e = ReportEntry::converging("x", NormKind::Spectral, (4e-8, 1e-8), 2.0, 1e-6, Some(OrderBand::default()), "g");
        assert!(e.pass);
        assert!((e.order.unwrap() - 2.0).abs() < 1e-12);
        let slow = ReportEntry::converging("x", NormKind::Spectral, (2e-8, 1e-8), 2.0, 1e-6, Some(OrderBand::default()), "g");
        assert!(!slow.pass);
    }

    #[test]
    fn text_form_is_line_oriented() {
        let mut r = SymmetryReport::new("demo");
        r.meta("grid", "N=10");
        r.push(ReportEntry::fixed("a", EntryKind::Structural, NormKind::MaxEntry, 0.0, 1e-12, "N=10"));
        r.push(ReportEntry::fixed("b", EntryKind::Structural, NormKind::MaxEntry, f64::NAN, 1e-12, "N=10"));
        let t = r.to_text();
        assert!(t.starts_with("schema=so4lab/1\nreport=demo\n"));
        assert!(t.contains("entry label=a kind=structural norm=max_entry residual=0.0000000000000000e0 tolerance=9.9999999999999998e-13 order=n/a pass=true"));
        assert!(t.ends_with("summary pass=false entries=2 failed=1\n"));
    }
}
