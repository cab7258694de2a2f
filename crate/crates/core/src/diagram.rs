//! Depression tables and the two-column level diagram.
//!
//! The diagram is not drawn to scale: levels occupy rank-ordered slots in each
//! column and carry their exact values in the labels.

use std::fmt::Write;

use crate::angular::HalfInteger;
use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::spectra::{depression, monopolar_energy, sommerfeld_binding, sommerfeld_energy, KappaSign, MonopoleQuantumNumbers, QuantumNumbers};

/// One `(n, j)` level and its monopolar partner.
#[derive(Debug, Clone, PartialEq)]
pub struct DepressionRow {
    pub n: u32,
    pub j: HalfInteger,
    /// Spectroscopic label of the `l = j - 1/2` member, e.g. `2S1/2`.
    pub label: String,
    /// `E/M` without the monopole.
    pub energy: f64,
    /// `E'/M` of the partner level.
    pub energy_primed: f64,
    /// Binding energy `E/M - 1` in Hz.
    pub binding_hz: f64,
    /// `E - E'` in Hz.
    pub depression_hz: f64,
}

/// Levels with `n <= n_max` paired with monopolar levels of charge `q`,
/// ordered by `(n, j)`. Levels with `j + 1/2 <= |q|` have no partner and are skipped.
pub fn depression_table(n_max: u32, q: HalfInteger, c: &PhysicalConstants) -> Result<Vec<DepressionRow>> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    let mut rows = Vec::new();
    for n in 1..=n_max {
        for k in 1..=n as i32 {
            let j = HalfInteger::from_twice(2 * k - 1);
            if j.twice() + 1 <= q.twice().abs() {
                continue;
            }
            let qn = QuantumNumbers::new(n, j, KappaSign::Negative)?;
            let primed = MonopoleQuantumNumbers::new(qn.n_radial(), j, q)?;
            rows.push(DepressionRow {
                n,
                j,
                label: qn.label(),
                energy: sommerfeld_energy(&qn, c)?,
                energy_primed: monopolar_energy(&primed, c)?,
                binding_hz: c.to_frequency(sommerfeld_binding(&qn, c)?),
                depression_hz: depression(n, j, q, c)?,
            });
        }
    }
    if rows.is_empty() {
        return Err(Error::Domain(format!("no level with n <= {n_max} admits q = {q}")));
    }
    Ok(rows)
}

const WIDTH: f64 = 640.0;
const SLOT: f64 = 44.0;
const MARGIN: f64 = 56.0;
const LEFT: (f64, f64) = (60.0, 220.0);
const RIGHT: (f64, f64) = (380.0, 540.0);

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Rank of each value in ascending order; ties share the lower rank.
fn ranks(values: &[f64]) -> Vec<usize> {
    values.iter().map(|v| values.iter().filter(|w| *w < v).count()).collect()
}

/// SVG document with the unperturbed levels on the left, the monopolar levels
/// on the right and the depression of each pair in between. Every level is a
/// single `<line class="level">` element.
pub fn level_diagram_svg(n_max: u32, q: HalfInteger, c: &PhysicalConstants) -> Result<String> {
    let rows = depression_table(n_max, q, c)?;
    let left: Vec<f64> = rows.iter().map(|r| r.energy).collect();
    let right: Vec<f64> = rows.iter().map(|r| r.energy_primed).collect();
    let (rank_l, rank_r) = (ranks(&left), ranks(&right));
    let slots = rank_l.iter().chain(&rank_r).max().copied().unwrap_or(0) + 1;
    let height = 2.0 * MARGIN + SLOT * slots as f64;
    let y = |rank: usize| height - MARGIN - SLOT * rank as f64;

    let mut s = String::new();
    let _ = writeln!(s, r##"<?xml version="1.0" encoding="UTF-8"?>"##);
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif" font-size="11">"##
    );
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{WIDTH}" height="{height}" fill="white"/>"##);
    let _ = writeln!(s, r##"<text x="{}" y="24" text-anchor="middle" font-size="13">q = 0</text>"##, 0.5 * (LEFT.0 + LEFT.1));
    let _ = writeln!(
        s,
        r##"<text x="{}" y="24" text-anchor="middle" font-size="13">q = {}</text>"##,
        0.5 * (RIGHT.0 + RIGHT.1),
        escape(&q.to_string())
    );
    let _ = writeln!(s, r##"<text x="{}" y="{}" text-anchor="middle" fill="#666">not drawn to scale</text>"##, 0.5 * WIDTH, height - 12.0);
    for (i, row) in rows.iter().enumerate() {
        let (yl, yr) = (y(rank_l[i]), y(rank_r[i]));
        let label = escape(&row.label);
        let _ = writeln!(
            s,
            r##"<line class="level" data-label="{label}" x1="{}" y1="{yl}" x2="{}" y2="{yl}" stroke="black" stroke-width="2"/>"##,
            LEFT.0, LEFT.1
        );
        let _ = writeln!(
            s,
            r##"<line class="level" data-label="{label}&#8242;" x1="{}" y1="{yr}" x2="{}" y2="{yr}" stroke="black" stroke-width="2"/>"##,
            RIGHT.0, RIGHT.1
        );
        let _ = writeln!(s, r##"<text x="{}" y="{}">{label}  E/M = {:.12}</text>"##, LEFT.0, yl - 5.0, row.energy);
        let _ = writeln!(s, r##"<text x="{}" y="{}">{label}&#8242;  E/M = {:.12}</text>"##, RIGHT.0, yr - 5.0, row.energy_primed);
        let _ = writeln!(
            s,
            r##"<line class="pair" x1="{}" y1="{yl}" x2="{}" y2="{yr}" stroke="#999" stroke-dasharray="4 3"/>"##,
            LEFT.1, RIGHT.0
        );
        let _ = writeln!(
            s,
            r##"<text class="depression" x="{}" y="{}" text-anchor="middle" fill="#a00">&#916; = {:.4e} Hz</text>"##,
            0.5 * (LEFT.1 + RIGHT.0),
            0.5 * (yl + yr) - 4.0,
            row.depression_hz
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half(t: i32) -> HalfInteger {
        HalfInteger::from_twice(t)
    }

    #[test]
    fn table_ordering_and_labels() {
        let rows = depression_table(3, half(1), &PhysicalConstants::default()).unwrap();
        let labels: Vec<&str> = rows.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["1S1/2", "2S1/2", "2P3/2", "3S1/2", "3P3/2", "3D5/2"]);
        assert!(rows.iter().all(|r| r.depression_hz > 0.0 && r.energy_primed < r.energy));
    }

    #[test]
    fn zero_charge_has_no_depression() {
        let rows = depression_table(4, half(0), &PhysicalConstants::default()).unwrap();
        assert!(rows.iter().all(|r| r.depression_hz == 0.0 && r.energy == r.energy_primed));
    }

    #[test]
    fn large_charge_skips_low_j() {
        let rows = depression_table(2, half(3), &PhysicalConstants::default()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].label, "2P3/2");
        assert!(depression_table(1, half(3), &PhysicalConstants::default()).is_err());
    }

    #[test]
    fn svg_has_two_lines_per_level() {
        let svg = level_diagram_svg(3, half(1), &PhysicalConstants::default()).unwrap();
        assert_eq!(svg.matches(r#"class="level""#).count(), 12);
        assert_eq!(svg.matches(r#"class="depression""#).count(), 6);
        assert!(svg.contains("not drawn to scale"));
    }
}
