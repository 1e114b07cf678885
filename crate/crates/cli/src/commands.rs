//! The four subcommands as library functions returning text or rows, so the
//! binary stays a thin dispatcher and tests can call them directly.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use secrecy_core::bcregion::{
    dpc_region, mi_identities, rectangle_corner, region_total_power, sdpc_rates, zf_region,
};
use secrecy_core::enhance::{align, aligned_capacity, aligned_optimum, perturb_to_invertible, verify_enhancement};
use secrecy_core::matcore::{cholesky, psd_sqrt, svd, sym_eig};
use secrecy_core::sampling::{rotations, Halton};
use secrecy_core::wiretap::{grid_maximum, optimal_covariance, secrecy_capacity, Objective};
use secrecy_core::{
    BroadcastScenario, GeneralMatrix, PowerConstraint, RatePair, Sampling, SymMatrix,
};

use crate::error::{CliError, Result};
use crate::output::{sort_rows, to_csv, to_svg, Row, Source};
use crate::scenario::{parse_scenario, ScenarioFile, Units};

const CORNER_TOL: f64 = 1e-8;
const IDENTITY_TOL: f64 = 1e-10;
const ORACLE_TOL: f64 = 2e-3;
const ORACLE_RES: usize = 48;
// the 3-antenna grid is coarse; it only has to land near the closed form
const ORACLE_TOL_3: f64 = 2e-2;
const ORACLE_RES_3: usize = 8;
const LADDER: [f64; 3] = [1e-1, 1e-2, 1e-3];
const LADDER_FINAL_GAP: f64 = 1e-2;
/// Singular values below this fraction of the largest count as zero when
/// deciding whether a channel needs perturbing.
const SINGULAR_RCOND: f64 = 1e-10;

fn require_matrix<'a>(sf: &'a ScenarioFile, command: &str) -> Result<&'a SymMatrix> {
    match &sf.constraint {
        PowerConstraint::Matrix(s) => Ok(s),
        PowerConstraint::TotalPower(_) => Err(CliError::validation(
            "constraint",
            format!("`{command}` needs a matrix constraint `S`, not `total_power`"),
        )),
    }
}

// ---------------------------------------------------------------- capacity

#[derive(Debug, Clone)]
pub struct CapacityReport {
    pub name: String,
    /// Nats.
    pub c1: f64,
    /// Nats.
    pub c2: f64,
    pub phi: Vec<f64>,
    pub rho: usize,
    pub b1: SymMatrix,
    pub b2: SymMatrix,
}

pub fn capacity(sf: &ScenarioFile) -> Result<CapacityReport> {
    require_matrix(sf, "capacity")?;
    let sc = sf.broadcast()?;
    let fwd = secrecy_capacity(&sc.toward_receiver1()?)?;
    let rev = secrecy_capacity(&sc.toward_receiver2()?)?;
    Ok(CapacityReport {
        name: sf.name.clone(),
        c1: fwd.value_nats,
        c2: rev.value_nats,
        phi: fwd.spectrum.phi.clone(),
        rho: fwd.spectrum.rho,
        b1: fwd.b_star,
        b2: rev.b_star,
    })
}

fn write_sym(out: &mut String, label: &str, m: &SymMatrix) {
    let _ = writeln!(out, "{label}:");
    let g = m.as_general();
    for i in 0..g.rows() {
        let row: Vec<String> = g.row(i).iter().map(|v| format!("{v:>12.6}")).collect();
        let _ = writeln!(out, "  {}", row.join(" "));
    }
}

impl CapacityReport {
    pub fn render(&self, units: Units) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario: {}", self.name);
        let _ = writeln!(out, "units: {}", units.label());
        let _ = writeln!(out, "C1: {:.6}", units.convert(self.c1));
        let _ = writeln!(out, "C2: {:.6}", units.convert(self.c2));
        let phi: Vec<String> = self.phi.iter().map(|p| format!("{p:.9}")).collect();
        let _ = writeln!(out, "phi: {}", phi.join(" "));
        let _ = writeln!(out, "rho: {}", self.rho);
        write_sym(&mut out, "B1*", &self.b1);
        write_sym(&mut out, "B2*", &self.b2);
        out
    }
}

// ------------------------------------------------------------------ region

fn push(rows: &mut Vec<Row>, points: &[RatePair], source: Source, units: Units) {
    rows.extend(points.iter().map(|p| Row {
        r1: units.convert(p.r1),
        r2: units.convert(p.r2),
        source,
    }));
}

/// Frontier rows for every applicable source, sorted for output.
pub fn region_rows(sf: &ScenarioFile, sampling: &Sampling) -> Result<Vec<Row>> {
    let sc = sf.broadcast()?;
    let mut rows = Vec::new();
    let units = sf.units;
    match sc.constraint() {
        PowerConstraint::Matrix(s) => {
            let corner = rectangle_corner(sc.h1(), sc.h2(), s)?.clamped();
            push(&mut rows, &[corner], Source::Capacity, units);
            push(&mut rows, &zf_region(&sc, sampling)?.points(), Source::Zf, units);
            push(&mut rows, &dpc_region(&sc, sampling)?.points(), Source::Dpc, units);
            let b = optimal_covariance(&sc.toward_receiver1()?)?;
            let at_b = sdpc_rates(&sc, &b)?.clamped();
            push(&mut rows, &[at_b], Source::SdpcCorner, units);
        }
        PowerConstraint::TotalPower(_) => {
            let cap = region_total_power(&sc, sampling)?;
            push(&mut rows, &cap.points(), Source::Capacity, units);
            push(&mut rows, &zf_region(&sc, sampling)?.points(), Source::Zf, units);
        }
    }
    sort_rows(&mut rows);
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Svg,
}

impl OutputFormat {
    pub fn from_path(path: &Path) -> Result<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => Ok(OutputFormat::Csv),
            Some("svg") => Ok(OutputFormat::Svg),
            _ => Err(CliError::validation(
                "out",
                format!("{} must end in .csv or .svg", path.display()),
            )),
        }
    }
}

pub fn render_rows(rows: &[Row], format: OutputFormat, title: &str, units: Units) -> String {
    match format {
        OutputFormat::Csv => to_csv(rows),
        OutputFormat::Svg => to_svg(rows, title, units.label()),
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

// ------------------------------------------------------------------ verify

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Number of extra feasible covariances probed against the corner.
    pub seeds: usize,
    pub alpha_ladder: bool,
    /// Fault injection: replace `B*` by `B* + ε·I`, clipped back into
    /// `[0, S]`.
    pub perturb_bstar: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    /// Free-form lines printed before the check lines (the alpha ladder).
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn add(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        for c in &self.checks {
            let _ = writeln!(out, "CHECK {} {} {}", c.name, c.status.as_str(), c.detail);
        }
        let count = |s: Status| self.checks.iter().filter(|c| c.status == s).count();
        let _ = writeln!(
            out,
            "SUMMARY pass={} fail={} skip={}",
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Skip)
        );
        out
    }
}

/// `S½·clamp₀₁(S^{+½}·B·S^{+½})·S½`: the nearest-in-spirit feasible point.
fn clip_to_constraint(b: &SymMatrix, s: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eig(s)?;
    let cutoff = 1e-12 * s.frobenius_norm();
    let inv_root = eig.recompose(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 });
    let root = psd_sqrt(s)?;
    let inner = b.congruence(inv_root.as_general())?;
    let clamped = sym_eig(&inner)?.recompose(|l| l.clamp(0.0, 1.0));
    Ok(clamped.congruence(root.as_general())?)
}

/// Deterministic feasible covariances `S½·Q·diag(c)·Qᵀ·S½`.
fn probe_covariances(s: &SymMatrix, count: usize) -> Result<Vec<SymMatrix>> {
    let t = s.dim();
    let root = psd_sqrt(s)?;
    let qs = rotations(t, count, 1);
    let cs = Halton::new(t, 2).take(count);
    qs.iter()
        .zip(cs)
        .map(|(q, c)| {
            let w = root.matmul(q)?;
            Ok(SymMatrix::diag(&c).sandwich(&w)?)
        })
        .collect()
}

fn scale_of(p: &RatePair) -> f64 {
    p.r1.abs().max(p.r2.abs()).max(1.0)
}

fn check_corner(report: &mut VerifyReport, sc: &BroadcastScenario, b: &SymMatrix, corner: &RatePair) -> Result<()> {
    match sc.toward_receiver1()?.check_feasible(b) {
        Ok(()) => report.add("feasibility", Status::Pass, "0 <= B* <= S"),
        Err(e) => {
            report.add("feasibility", Status::Fail, e.to_string());
            return Ok(());
        }
    }
    let at_b = sdpc_rates(sc, b)?;
    let gap = (at_b.r1 - corner.r1).abs().max((at_b.r2 - corner.r2).abs());
    report.add(
        "sdpc-corner",
        Status::from_bool(gap <= CORNER_TOL * scale_of(corner)),
        format!(
            "R=({:.12}, {:.12}) corner=({:.12}, {:.12}) gap={gap:.3e}",
            at_b.r1, at_b.r2, corner.r1, corner.r2
        ),
    );
    let mi = mi_identities(sc, b)?.rates();
    let gap = (mi.r1 - at_b.r1).abs().max((mi.r2 - at_b.r2).abs());
    report.add(
        "mi-chain",
        Status::from_bool(gap <= IDENTITY_TOL * scale_of(corner)),
        format!("gap={gap:.3e}"),
    );
    Ok(())
}

fn check_reciprocity(report: &mut VerifyReport, sc: &BroadcastScenario) -> Result<()> {
    let fwd = secrecy_capacity(&sc.toward_receiver1()?)?;
    let rev = secrecy_capacity(&sc.toward_receiver2()?)?;
    let total: f64 = 0.5 * fwd.spectrum.phi.iter().map(|p| p.ln().abs()).sum::<f64>();
    let gap = (fwd.value_nats + rev.value_nats - total).abs();
    report.add(
        "reciprocity",
        Status::from_bool(gap <= IDENTITY_TOL * total.max(1.0)),
        format!("C1+C2={:.12} half-sum|log phi|={total:.12} gap={gap:.3e}", fwd.value_nats + rev.value_nats),
    );
    Ok(())
}

fn check_characterization(report: &mut VerifyReport, sc: &BroadcastScenario) -> Result<()> {
    let t = sc.transmit_dim();
    let (res, tol) = match t {
        1 | 2 => (ORACLE_RES, ORACLE_TOL),
        3 => (ORACLE_RES_3, ORACLE_TOL_3),
        _ => {
            report.add("characterization", Status::Skip, format!("grid oracle needs t <= 3, t = {t}"));
            return Ok(());
        }
    };
    for (name, wt) in [
        ("characterization-1", sc.toward_receiver1()?),
        ("characterization-2", sc.toward_receiver2()?),
    ] {
        let c = secrecy_capacity(&wt)?.value_nats;
        let np = grid_maximum(&wt, res, Objective::NoPrefix)?.value;
        let an = grid_maximum(&wt, res, Objective::ArtificialNoise)?.value;
        // grid maxima are lower bounds
        let ok = (c - np).abs() <= tol && (c - an).abs() <= tol && (np - an).abs() <= tol;
        report.add(
            name,
            Status::from_bool(ok),
            format!("closed={c:.9} no-prefix={np:.9} artificial-noise={an:.9} res={res} tol={tol:e}"),
        );
    }
    Ok(())
}

fn check_probes(report: &mut VerifyReport, sc: &BroadcastScenario, s: &SymMatrix, corner: &RatePair, n: usize) -> Result<()> {
    if n == 0 {
        report.add("sdpc-probes", Status::Skip, "no probes requested (--seeds 0)");
        return Ok(());
    }
    let mut worst = f64::NEG_INFINITY;
    let mut chain = 0.0_f64;
    for b in probe_covariances(s, n)? {
        let r = sdpc_rates(sc, &b)?;
        worst = worst.max(r.r1 - corner.r1).max(r.r2 - corner.r2);
        let mi = mi_identities(sc, &b)?.rates();
        chain = chain.max((mi.r1 - r.r1).abs()).max((mi.r2 - r.r2).abs());
    }
    let ok = worst <= CORNER_TOL * scale_of(corner) && chain <= IDENTITY_TOL * scale_of(corner);
    report.add(
        "sdpc-probes",
        Status::from_bool(ok),
        format!("n={n} max-excess-over-corner={worst:.3e} chain-gap={chain:.3e}"),
    );
    Ok(())
}

/// `(HᵀH)^½`: a square channel with the same Gram matrix, hence the same
/// rates for every input covariance.
fn square_equivalent(h: &GeneralMatrix) -> Result<GeneralMatrix> {
    Ok(psd_sqrt(&h.gram())?.into_general())
}

fn is_singular(h: &GeneralMatrix) -> Result<bool> {
    let sv = svd(h)?.singular_values;
    let smax = sv.first().copied().unwrap_or(0.0);
    Ok(sv.last().copied().unwrap_or(0.0) <= SINGULAR_RCOND * smax.max(f64::MIN_POSITIVE))
}

fn enhancement_checks(
    report: &mut VerifyReport,
    g1: &GeneralMatrix,
    g2: &GeneralMatrix,
    s: &SymMatrix,
    bstar_fault: Option<f64>,
    label: &str,
) -> Result<bool> {
    let al = align(g1, g2, s)?;
    let mut b = aligned_optimum(&al)?;
    if let Some(eps) = bstar_fault {
        b = clip_to_constraint(&b.add(&SymMatrix::identity(s.dim()).scale(eps))?, s)?;
    }
    let r = verify_enhancement(&al, &b)?;
    let entries = [
        ("enhancement-kkt", r.kkt_ok(), format!("residual={:.3e}", r.kkt_residual)),
        ("enhancement-ordering", r.ordering_ok, format!("0 <= N~ <= N1, N~ <= N2; N~ strictly PD: {}", r.n_tilde_positive)),
        ("enhancement-noise-ratio", r.noise_ratio_ok, String::new()),
        ("enhancement-constraint-ratio", r.constraint_ratio_ok, String::new()),
        (
            "enhancement-degraded",
            r.degraded_ok,
            format!("degraded={:.12} capacity={:.12}", r.degraded_value, r.capacity),
        ),
    ];
    let mut all = true;
    for (name, ok, detail) in entries {
        all &= ok;
        let detail = format!("{label}tol={:e} {detail}", r.tolerance);
        report.add(name, Status::from_bool(ok), detail.trim_end().to_string());
    }
    Ok(all)
}

fn check_enhancement(
    report: &mut VerifyReport,
    sc: &BroadcastScenario,
    s: &SymMatrix,
    opts: &VerifyOptions,
    c2: f64,
) -> Result<()> {
    if cholesky(s).is_err() {
        report.add("enhancement", Status::Skip, "S is singular; enhancement needs S > 0");
        return Ok(());
    }
    let g1 = square_equivalent(sc.h1())?;
    let g2 = square_equivalent(sc.h2())?;
    let singular = is_singular(&g1)? || is_singular(&g2)?;
    if !singular {
        enhancement_checks(report, &g1, &g2, s, opts.perturb_bstar, "")?;
    } else {
        let alpha = LADDER[LADDER.len() - 1];
        let p1 = perturb_to_invertible(&g1, alpha)?;
        let p2 = perturb_to_invertible(&g2, alpha)?;
        enhancement_checks(report, &p1, &p2, s, opts.perturb_bstar, &format!("perturbed alpha={alpha:e} "))?;
    }

    if opts.alpha_ladder {
        report.notes.push("ALPHA       C2(perturbed)        gap".to_string());
        let mut gaps = Vec::new();
        for alpha in LADDER {
            let p1 = perturb_to_invertible(&g1, alpha)?;
            let p2 = perturb_to_invertible(&g2, alpha)?;
            let c = aligned_capacity(&align(&p1, &p2, s)?)?;
            let gap = (c - c2).abs();
            report.notes.push(format!("{alpha:<9.0e} {c:>16.12} {gap:>12.3e}"));
            gaps.push(gap);
        }
        // the sign of the gap can flip along the ladder, so only the limit is
        // checked; monotonicity is reported
        let monotone = gaps.windows(2).all(|w| w[1] <= w[0] + IDENTITY_TOL);
        let last = gaps[gaps.len() - 1];
        report.add(
            "alpha-continuity",
            Status::from_bool(last < LADDER_FINAL_GAP),
            format!("final-gap={last:.3e} limit={LADDER_FINAL_GAP:e} monotone={monotone}"),
        );
    }
    Ok(())
}

pub fn verify(sf: &ScenarioFile, opts: &VerifyOptions) -> Result<VerifyReport> {
    let s = require_matrix(sf, "verify")?.clone();
    let sc = sf.broadcast()?;
    let mut report = VerifyReport::default();

    let corner = rectangle_corner(sc.h1(), sc.h2(), &s)?;
    let mut b = optimal_covariance(&sc.toward_receiver1()?)?;
    if let Some(eps) = opts.perturb_bstar {
        b = clip_to_constraint(&b.add(&SymMatrix::identity(s.dim()).scale(eps))?, &s)?;
    }
    check_corner(&mut report, &sc, &b, &corner)?;
    check_reciprocity(&mut report, &sc)?;
    check_characterization(&mut report, &sc)?;
    check_probes(&mut report, &sc, &s, &corner, opts.seeds)?;
    check_enhancement(&mut report, &sc, &s, opts, corner.r2)?;
    Ok(report)
}

// --------------------------------------------------------------- reproduce

pub const FIGURES: [&str; 5] = ["fig3a", "fig3b", "fig3c", "fig3d", "fig4"];

/// Bundled scenario text by name.
pub fn bundled(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig3a" => include_str!("../scenarios/fig3a.scenario"),
        "fig3b" => include_str!("../scenarios/fig3b.scenario"),
        "fig3c" => include_str!("../scenarios/fig3c.scenario"),
        "fig3d" => include_str!("../scenarios/fig3d.scenario"),
        "fig4" => include_str!("../scenarios/fig4.scenario"),
        "scalar" => include_str!("../scenarios/scalar.scenario"),
        "identical" => include_str!("../scenarios/identical.scenario"),
        _ => return None,
    })
}

/// Writes `<figure>.csv` and `<figure>.svg` into `outdir`.
pub fn reproduce(figure: &str, outdir: &Path) -> Result<Vec<PathBuf>> {
    let text = bundled(figure)
        .filter(|_| FIGURES.contains(&figure))
        .ok_or_else(|| CliError::validation("figure", format!("unknown figure {figure:?}")))?;
    let sf = parse_scenario(text)?;
    let rows = region_rows(&sf, &sf.sampling)?;
    std::fs::create_dir_all(outdir).map_err(|e| CliError::io(outdir, e))?;
    let mut written = Vec::new();
    for format in [OutputFormat::Csv, OutputFormat::Svg] {
        let ext = match format {
            OutputFormat::Csv => "csv",
            OutputFormat::Svg => "svg",
        };
        let path = outdir.join(format!("{figure}.{ext}"));
        write_file(&path, &render_rows(&rows, format, &sf.name, sf.units))?;
        written.push(path);
    }
    Ok(written)
}
