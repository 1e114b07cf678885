//! Flat, line-based scenario files.
//!
//! ```text
//! # comments run to the end of the line
//! name fig3b
//! H1 2 2          # rows cols, followed by `rows` lines of numbers
//! 0.3 2.5
//! 2.2 1.8
//! H2 1 2
//! 1.5 3.9
//! total_power 12  # or: S t t followed by t rows
//! units nats      # optional: nats | bits
//! samples 256     # optional sampling budget
//! splits 33
//! seed 0
//! tol 1e-9        # optional PSD tolerance
//! ```

use std::fmt::Write as _;
use std::path::Path;

use secrecy_core::matcore::{min_eigenvalue, PSD_TOL};
use secrecy_core::{BroadcastScenario, GeneralMatrix, PowerConstraint, Sampling, SymMatrix};

use crate::error::{CliError, Result};

pub const TOL_ENV: &str = "SECRECY_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Units {
    #[default]
    Nats,
    Bits,
}

impl Units {
    pub fn convert(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioFile {
    pub name: String,
    pub h1: GeneralMatrix,
    pub h2: GeneralMatrix,
    pub constraint: PowerConstraint,
    pub units: Units,
    pub sampling: Sampling,
    pub tol: Option<f64>,
}

impl ScenarioFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        parse_scenario(&text)
    }

    /// Tolerance in effect: `SECRECY_TOL`, then the file, then the default.
    pub fn tolerance(&self) -> Result<f64> {
        Ok(env_tolerance()?.or(self.tol).unwrap_or(PSD_TOL))
    }

    pub fn broadcast(&self) -> Result<BroadcastScenario> {
        let tol = self.tolerance()?;
        BroadcastScenario::with_tolerance(
            self.h1.clone(),
            self.h2.clone(),
            self.constraint.clone(),
            tol,
        )
        .map_err(|e| match e {
            secrecy_core::Error::NotPsd { min_eigenvalue } => CliError::validation(
                "S",
                format!("not positive semidefinite (min eigenvalue {min_eigenvalue})"),
            ),
            other => other.into(),
        })
    }
}

pub fn env_tolerance() -> Result<Option<f64>> {
    match std::env::var(TOL_ENV) {
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(Some(t)),
            _ => Err(CliError::validation(TOL_ENV, format!("expected a positive number, got {v:?}"))),
        },
        Err(_) => Ok(None),
    }
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Lines<'a> {
    /// Next non-blank line with comments stripped, with its 1-based number.
    fn next_content(&mut self) -> Option<(usize, &'a str)> {
        for (i, raw) in self.inner.by_ref() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if !line.is_empty() {
                return Some((i + 1, line));
            }
        }
        None
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> CliError {
    CliError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse::<T>()
        .map_err(|_| parse_err(line, format!("{what}: cannot parse {tok:?}")))
}

fn single_arg<'a>(line: usize, key: &str, args: &[&'a str]) -> Result<&'a str> {
    match args {
        [a] => Ok(a),
        _ => Err(parse_err(line, format!("`{key}` takes exactly one value"))),
    }
}

fn read_matrix(lines: &mut Lines, line: usize, key: &str, args: &[&str]) -> Result<GeneralMatrix> {
    let [r, c] = args else {
        return Err(parse_err(line, format!("`{key}` needs a shape: {key} <rows> <cols>")));
    };
    let rows: usize = parse_num(line, r, "row count")?;
    let cols: usize = parse_num(line, c, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(CliError::validation(key, "shape must be at least 1x1"));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for k in 0..rows {
        let Some((ln, text)) = lines.next_content() else {
            return Err(parse_err(line, format!("`{key}` ends after {k} of {rows} rows")));
        };
        let vals = text
            .split_whitespace()
            .map(|t| {
                let v: f64 = parse_num(ln, t, key)?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(parse_err(ln, format!("{key}: non-finite entry {t:?}")))
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() != cols {
            return Err(CliError::validation(
                key,
                format!("row {} has {} entries, declared {cols} (line {ln})", k + 1, vals.len()),
            ));
        }
        data.extend(vals);
    }
    Ok(GeneralMatrix::from_vec(rows, cols, data)?)
}

pub fn parse_scenario(text: &str) -> Result<ScenarioFile> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
    };
    let mut name = None;
    let mut h1 = None;
    let mut h2 = None;
    let mut s: Option<GeneralMatrix> = None;
    let mut power = None;
    let mut units = None;
    let mut samples = None;
    let mut splits = None;
    let mut seed = None;
    let mut tol = None;

    fn set<T>(slot: &mut Option<T>, v: T, line: usize, key: &str) -> Result<()> {
        if slot.is_some() {
            return Err(parse_err(line, format!("duplicate `{key}`")));
        }
        *slot = Some(v);
        Ok(())
    }

    while let Some((ln, content)) = lines.next_content() {
        let mut toks = content.split_whitespace();
        let key = toks.next().unwrap_or_default();
        let args: Vec<&str> = toks.collect();
        match key {
            "name" => {
                if args.is_empty() {
                    return Err(parse_err(ln, "`name` needs a value"));
                }
                set(&mut name, args.join(" "), ln, key)?;
            }
            "H1" => {
                let m = read_matrix(&mut lines, ln, key, &args)?;
                set(&mut h1, m, ln, key)?;
            }
            "H2" => {
                let m = read_matrix(&mut lines, ln, key, &args)?;
                set(&mut h2, m, ln, key)?;
            }
            "S" => {
                let m = read_matrix(&mut lines, ln, key, &args)?;
                set(&mut s, m, ln, key)?;
            }
            "total_power" => {
                let p: f64 = parse_num(ln, single_arg(ln, key, &args)?, key)?;
                set(&mut power, p, ln, key)?;
            }
            "units" => {
                let u = match single_arg(ln, key, &args)? {
                    "nats" => Units::Nats,
                    "bits" => Units::Bits,
                    other => return Err(parse_err(ln, format!("unknown units {other:?}"))),
                };
                set(&mut units, u, ln, key)?;
            }
            "samples" => set(&mut samples, parse_num(ln, single_arg(ln, key, &args)?, key)?, ln, key)?,
            "splits" => set(&mut splits, parse_num(ln, single_arg(ln, key, &args)?, key)?, ln, key)?,
            "seed" => set(&mut seed, parse_num(ln, single_arg(ln, key, &args)?, key)?, ln, key)?,
            "tol" => set(&mut tol, parse_num(ln, single_arg(ln, key, &args)?, key)?, ln, key)?,
            other => return Err(parse_err(ln, format!("unknown key {other:?}"))),
        }
    }

    let h1 = h1.ok_or_else(|| CliError::validation("H1", "missing"))?;
    let h2 = h2.ok_or_else(|| CliError::validation("H2", "missing"))?;
    if h2.cols() != h1.cols() {
        return Err(CliError::validation(
            "H2",
            format!("has {} columns but H1 has {}", h2.cols(), h1.cols()),
        ));
    }
    let constraint = match (s, power) {
        (Some(s), None) => {
            let t = h1.cols();
            if s.rows() != t || s.cols() != t {
                return Err(CliError::validation(
                    "S",
                    format!("must be {t}x{t} to match the channels, got {}x{}", s.rows(), s.cols()),
                ));
            }
            let scale = s.max_abs().max(1.0);
            for i in 0..t {
                for j in 0..i {
                    if (s[(i, j)] - s[(j, i)]).abs() > 1e-12 * scale {
                        return Err(CliError::validation(
                            "S",
                            format!("not symmetric at ({}, {})", i + 1, j + 1),
                        ));
                    }
                }
            }
            let s = SymMatrix::from_general(&s)?;
            let lmin = min_eigenvalue(&s)?;
            let ptol = env_tolerance()?.or(tol).unwrap_or(PSD_TOL);
            if lmin < -ptol * s.frobenius_norm().max(1.0) {
                return Err(CliError::validation(
                    "S",
                    format!("not positive semidefinite (min eigenvalue {lmin})"),
                ));
            }
            PowerConstraint::Matrix(s)
        }
        (None, Some(p)) => {
            if !(p.is_finite() && p > 0.0) {
                return Err(CliError::validation("total_power", format!("must be positive, got {p}")));
            }
            PowerConstraint::TotalPower(p)
        }
        (Some(_), Some(_)) => {
            return Err(CliError::validation(
                "constraint",
                "give exactly one of `S` and `total_power`, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::validation("constraint", "missing `S` or `total_power`"))
        }
    };
    if let Some(t) = tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::validation("tol", format!("must be positive, got {t}")));
        }
    }
    let defaults = Sampling::default();
    let sampling = Sampling {
        samples: samples.unwrap_or(defaults.samples),
        splits: splits.unwrap_or(defaults.splits),
        seed: seed.unwrap_or(defaults.seed),
    };
    if sampling.samples == 0 || sampling.splits < 2 {
        return Err(CliError::validation(
            "sampling",
            "need samples >= 1 and splits >= 2",
        ));
    }
    Ok(ScenarioFile {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        h1,
        h2,
        constraint,
        units: units.unwrap_or_default(),
        sampling,
        tol,
    })
}

fn write_matrix(out: &mut String, key: &str, m: &GeneralMatrix) {
    let _ = writeln!(out, "{key} {} {}", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
}

/// Canonical text form; `parse_scenario(&serialize_scenario(s)) == s`.
pub fn serialize_scenario(sf: &ScenarioFile) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "name {}", sf.name);
    let _ = writeln!(out, "units {}", sf.units.label());
    write_matrix(&mut out, "H1", &sf.h1);
    write_matrix(&mut out, "H2", &sf.h2);
    match &sf.constraint {
        PowerConstraint::Matrix(s) => write_matrix(&mut out, "S", s.as_general()),
        PowerConstraint::TotalPower(p) => {
            let _ = writeln!(out, "total_power {p}");
        }
    }
    let _ = writeln!(out, "samples {}", sf.sampling.samples);
    let _ = writeln!(out, "splits {}", sf.sampling.splits);
    let _ = writeln!(out, "seed {}", sf.sampling.seed);
    if let Some(t) = sf.tol {
        let _ = writeln!(out, "tol {t}");
    }
    out
}
