//! Subcommand bodies. Each returns the rendered document and whether its checks passed.

use std::fmt;

use so4lab::breaking::breaking_report;
use so4lab::diagram::{depression_table, level_diagram_svg};
use so4lab::oplab::report::SymmetryReport;
use so4lab::oplab::verify::verify_so4;
use so4lab::radial::build_solution;
use so4lab::spectra::{degeneracy, sommerfeld_binding, sommerfeld_energy};
use so4lab::{Error, HalfInteger, KappaSign, QuantumNumbers};

use crate::config::RunConfig;
use crate::output::{report_csv, report_json, Format, Table};

/// Failure of a subcommand, carrying its process exit code.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad input (exit 2).
    Usage(String),
    /// Numerical breakdown such as eigensolver non-convergence (exit 3).
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::Numerical(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "{m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoConvergence(_) | Error::NonFinite(_) | Error::NotHermitian(_) | Error::EmptyWindow { .. } => Self::Numerical(e.to_string()),
            _ => Self::Usage(e.to_string()),
        }
    }
}

/// Rendered output and the check verdict (always true for plain tables).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub pass: bool,
}

impl Outcome {
    fn table(body: String) -> Self {
        Self { body, pass: true }
    }
}

fn unsupported(command: &str, format: Format) -> CliError {
    CliError::Usage(format!("{command} does not support --format {}", format.as_str()))
}

fn render_table(t: &Table, command: &str, format: Format) -> Result<Outcome, CliError> {
    match format {
        Format::Csv => Ok(Outcome::table(t.to_csv())),
        Format::Json => Ok(Outcome::table(t.to_json(command))),
        Format::Text => Ok(Outcome::table(t.to_text())),
        Format::Svg => Err(unsupported(command, format)),
    }
}

fn render_report(rep: &SymmetryReport, command: &str, format: Format, pass: bool) -> Result<Outcome, CliError> {
    let body = match format {
        Format::Text => rep.to_text(),
        Format::Json => report_json(rep, command),
        Format::Csv => report_csv(rep),
        Format::Svg => return Err(unsupported(command, format)),
    };
    Ok(Outcome { body, pass })
}

/// Sommerfeld levels for `n <= n_max`, optionally restricted to one `j`.
pub fn cmd_spectrum(n_max: u32, j: Option<HalfInteger>, cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("n_max must be >= 1".into()));
    }
    if let Some(j) = j {
        if !j.is_half_odd() || j.twice() < 1 || (j.twice() + 1) / 2 > n_max as i32 {
            return Err(CliError::Usage(format!("j = {j} is not a valid total angular momentum for n <= {n_max}")));
        }
    }
    let c = cfg.constants();
    let mut t = Table::new(&["n", "j", "label", "kappa", "energy", "binding_hz", "degeneracy"]);
    for qn in QuantumNumbers::enumerate(n_max).into_iter().filter(|q| j.map_or(true, |j| q.j() == j)) {
        t.push(vec![
            qn.n().into(),
            qn.j().to_string().into(),
            qn.label().into(),
            qn.kappa().into(),
            sommerfeld_energy(&qn, &c)?.into(),
            c.to_frequency(sommerfeld_binding(&qn, &c)?).into(),
            degeneracy(qn.n(), qn.j())?.into(),
        ]);
    }
    render_table(&t, "spectrum", format)
}

/// Depression of each `(n, j)` level by a monopole of charge `q`; SVG gives the level diagram.
pub fn cmd_depressions(n_max: u32, q: HalfInteger, cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    if format == Format::Svg {
        return cmd_levels_svg(n_max, q, cfg, format);
    }
    let mut t = Table::new(&["n", "j", "label", "energy", "energy_primed", "depression_hz"]);
    for r in depression_table(n_max, q, &cfg.constants())? {
        t.push(vec![r.n.into(), r.j.to_string().into(), r.label.into(), r.energy.into(), r.energy_primed.into(), r.depression_hz.into()]);
    }
    t.note("q", q.to_string());
    render_table(&t, "depressions", format)
}

/// Two-column level diagram.
pub fn cmd_levels_svg(n_max: u32, q: HalfInteger, cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    if format != Format::Svg {
        return Err(unsupported("levels-svg", format));
    }
    Ok(Outcome::table(level_diagram_svg(n_max, q, &cfg.constants())?))
}

/// Sampled closed-form radial pair with its running norm; `b` in the footer.
pub fn cmd_radial(n: u32, j: HalfInteger, sign: i32, cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let qn = QuantumNumbers::new(n, j, KappaSign::from_signum(sign)?)?;
    let sol = build_solution(qn, &cfg.constants(), &cfg.mesh())?;
    let mut t = Table::new(&["r", "f", "g", "cumulative_norm"]);
    for i in 0..sol.r.len() {
        t.push(vec![sol.r[i].into(), sol.f[i].into(), sol.g[i].into(), sol.cumulative_norm[i].into()]);
    }
    t.note("state", qn.label());
    t.note("kappa", qn.kappa());
    t.note("energy", sol.state.energy());
    t.note("norm", sol.norm());
    t.note("b", sol.b());
    render_table(&t, "radial", format)
}

/// Symmetry battery; passes iff every entry passes.
pub fn cmd_verify(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let rep = verify_so4(&cfg.verify())?;
    let pass = rep.all_pass();
    render_report(&rep, "verify", format, pass)
}

/// Entries that decide the breaking verdict: detection plus `K` and `J` conservation.
pub const BREAKING_VERDICT: [&str; 3] = ["breaking_ratio_H_D", "commutator_K_H_lamb", "commutator_J_H_lamb"];

/// Lamb-term breaking report; passes iff breaking is detected and `K`, `J` are conserved.
pub fn cmd_breaking(cfg: &RunConfig, format: Format) -> Result<Outcome, CliError> {
    let rep = breaking_report(&cfg.breaking())?;
    let pass = BREAKING_VERDICT.iter().all(|l| rep.entry(l).is_some_and(|e| e.pass));
    render_report(&rep, "breaking", format, pass)
}
