//! Command-line front end. `run` takes parsed arguments and output streams
//! and returns the exit status, so it is testable without a subprocess.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::catalog::{
    filter_entries, load_catalog, negative_curve_table, render_table, verify_entry, Status, Strictness,
    VerificationReport,
};
use crate::cone::Cone;
use crate::delpezzo::{build_blowup_lattice, enumerate_classes};
use crate::lattice::{DivisorClass, SurfaceLattice};
use crate::pqsurf::hj_expansion;
use crate::rational::{format_rational, parse_rational, to_i64, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassType {
    /// `C² = K·C = -1`
    Minus1,
    /// `C² = -2`, `K·C = 0`
    Minus2,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "conelab", version, about = "Verify negative-curve tables and cone duality on surfaces")]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Reject unknown catalogue fields; `--strict false` only warns.
    #[arg(long, global = true, default_value_t = true, action = clap::ArgAction::Set)]
    pub strict: bool,
    /// Catalogue file; defaults to $CONELAB_CATALOG, then the bundled one.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Glob on entry ids, e.g. `burniat-*`.
    #[arg(long, global = true)]
    pub filter: Option<String>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Replay every check of the selected catalogue entries.
    Verify,
    /// Print the negative-curve table of the selected entries.
    Table,
    /// Extremal rays of the dual of a cone under a Gram matrix.
    Dual {
        /// One generator per line, whitespace-separated rationals.
        #[arg(long)]
        rays: PathBuf,
        /// Symmetric matrix in the same format.
        #[arg(long)]
        gram: PathBuf,
    },
    /// List (-1)- or (-2)-classes on the blow-up of the plane in r points.
    Enumerate {
        #[arg(long)]
        r: usize,
        #[arg(long = "type", value_enum)]
        kind: ClassType,
    },
    /// Hirzebruch-Jung string of the point 1/n(1,k).
    Hj { n: u32, k: u32 },
}

struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

pub fn run(cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cfg.command {
        Command::Verify => verify(cfg, out),
        Command::Table => table(cfg, out, err),
        Command::Dual { rays, gram } => dual(cfg.format, rays, gram, out),
        Command::Enumerate { r, kind } => enumerate(cfg.format, *r, *kind, out),
        Command::Hj { n, k } => hj(cfg.format, *n, *k, out),
    };
    match result {
        Ok(code) => code,
        Err(InputError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT
        }
    }
}

fn strictness(cfg: &CliConfig) -> Strictness {
    if cfg.strict {
        Strictness::Strict
    } else {
        Strictness::Lenient
    }
}

/// Loads, filters and verifies entries, one thread per entry. Reports come
/// back sorted by id whatever the scheduling.
fn verified_reports(cfg: &CliConfig) -> Result<Vec<VerificationReport>, InputError> {
    let entries = load_catalog(cfg.catalog.as_deref(), strictness(cfg))?;
    let entries = filter_entries(entries, cfg.filter.as_deref())?;
    let mut reports: Vec<VerificationReport> = std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || verify_entry(e))).collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread")).collect()
    });
    reports.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(reports)
}

fn verify(cfg: &CliConfig, out: &mut dyn Write) -> Result<i32, InputError> {
    let reports = verified_reports(cfg)?;
    let passed = reports.iter().filter(|r| r.passed()).count();
    match cfg.format {
        Format::Json => {
            let doc = json!({
                "passed": passed == reports.len(),
                "reports": reports.iter().map(VerificationReport::to_json).collect::<Vec<_>>(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
        Format::Text => {
            for r in &reports {
                let verdict = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{} ({}, K^2 = {}): {verdict}", r.id, r.family, r.k2)?;
                for l in &r.lines {
                    writeln!(out, "  [{}] {}: {}", l.status.as_str(), l.name, l.detail)?;
                }
                writeln!(
                    out,
                    "  negatives: {}; b_X = {}",
                    crate::catalog::render_multiset(&r.negatives),
                    format_rational(&r.b_x)
                )?;
                writeln!(out, "  imported: {}", r.imported.join("; "))?;
            }
            let flagged = reports
                .iter()
                .flat_map(|r| &r.lines)
                .filter(|l| l.status == Status::ExpectedDiscrepancy)
                .count();
            writeln!(
                out,
                "{passed}/{} entries pass, {flagged} expected discrepancies",
                reports.len()
            )?;
        }
    }
    Ok(if passed == reports.len() { EXIT_OK } else { EXIT_FAILED })
}

fn table(cfg: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, InputError> {
    let reports = verified_reports(cfg)?;
    let rows = match negative_curve_table(&reports) {
        Ok(rows) => rows,
        Err(e) => {
            writeln!(err, "error: {e}")?;
            return Ok(EXIT_FAILED);
        }
    };
    match cfg.format {
        Format::Text => write!(out, "{}", render_table(&rows))?,
        Format::Json => {
            let doc: Vec<_> = rows
                .iter()
                .zip(rows.iter().map(|row| reports.iter().find(|r| r.id == row.id).expect("same ids")))
                .map(|(row, rep)| {
                    json!({
                        "id": row.id,
                        "family": row.family,
                        "k2": row.k2,
                        "negatives": row.negatives,
                        "multiset": rep.to_json()["negatives"],
                        "count": row.count,
                        "b_x": format_rational(&row.b_x),
                    })
                })
                .collect();
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(EXIT_OK)
}

/// Rows of whitespace-separated rationals; blank lines and `#` comments are
/// skipped.
pub fn read_matrix(path: &Path) -> Result<Vec<Vec<Rational>>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(parse_rational)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| format!("{}:{}: {e}", path.display(), i + 1))?;
        rows.push(row);
    }
    Ok(rows)
}

fn dual(format: Format, rays: &Path, gram: &Path, out: &mut dyn Write) -> Result<i32, InputError> {
    let g = read_matrix(gram)?;
    let names = (1..=g.len()).map(|i| format!("e{i}")).collect();
    let lat = Arc::new(SurfaceLattice::new(g, names)?);
    let gens = read_matrix(rays)?.into_iter().map(DivisorClass::new).collect();
    let d = Cone::new(lat, gens)?.dual_cone()?;
    let fmt_row = |c: &DivisorClass| c.coeffs().iter().map(format_rational).collect::<Vec<_>>();
    match format {
        Format::Text => {
            for r in d.extremal_rays() {
                writeln!(out, "{}", fmt_row(r).join(" "))?;
            }
            for l in d.lineality() {
                writeln!(out, "lineality {}", fmt_row(l).join(" "))?;
            }
        }
        Format::Json => {
            let doc = json!({
                "rays": d.extremal_rays().iter().map(fmt_row).collect::<Vec<_>>(),
                "lineality": d.lineality().iter().map(fmt_row).collect::<Vec<_>>(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn enumerate(format: Format, r: usize, kind: ClassType, out: &mut dyn Write) -> Result<i32, InputError> {
    let bl = build_blowup_lattice(r)?;
    let (s, k) = match kind {
        ClassType::Minus1 => (-1, -1),
        ClassType::Minus2 => (-2, 0),
    };
    let classes = enumerate_classes(&bl, s, k)?;
    let lat = bl.lattice();
    match format {
        Format::Text => {
            for c in &classes {
                writeln!(out, "{}", lat.render(c))?;
            }
        }
        Format::Json => {
            let doc = json!({
                "r": r,
                "self_int": s,
                "k_degree": k,
                "classes": classes.iter().map(|c| json!({
                    "class": lat.render(c),
                    "coefficients": c.coeffs().iter().map(|x| to_i64(x).expect("integral class")).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&doc)?)?;
        }
    }
    Ok(EXIT_OK)
}

fn hj(format: Format, n: u32, k: u32, out: &mut dyn Write) -> Result<i32, InputError> {
    let s = hj_expansion(n, k)?;
    match format {
        Format::Text => writeln!(out, "{:?}", s.coefficients)?,
        Format::Json => writeln!(out, "{}", json!({"n": n, "k": k, "string": s.coefficients}))?,
    }
    Ok(EXIT_OK)
}
