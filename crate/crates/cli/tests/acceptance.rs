//! End-to-end acceptance run. Prints one `PASS`/`FAIL` line per criterion and
//! exits nonzero if any fails.

use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secrecy_cli::commands::{reproduce, FIGURES};
use secrecy_cli::output::{parse_csv, Row, Source};
use secrecy_core::bcregion::{rectangle_corner, sdpc_rates, zf_points};
use secrecy_core::enhance::{align, aligned_optimum, perturb_to_invertible, verify_enhancement};
use secrecy_core::matcore::{logdet, lu_det, svd, GeneralMatrix, SymMatrix};
use secrecy_core::random::{gaussian_matrix, positive_definite, psd_of_rank, singular_square};
use secrecy_core::wiretap::{
    brute_force_capacity, grid_maximum, optimal_covariance, reverse_capacity_from_spectrum,
    secrecy_capacity, Objective, WiretapScenario,
};
use secrecy_core::{BroadcastScenario, PowerConstraint, RatePair, RateRegion};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wiretap_sample(rng: &mut ChaCha8Rng, t: usize, rl: usize, re: usize) -> WiretapScenario {
    WiretapScenario::new(
        gaussian_matrix(rng, rl, t),
        gaussian_matrix(rng, re, t),
        positive_definite(rng, t, 0.2),
    )
    .unwrap()
}

/// The 200 small scenarios shared by the first two criteria.
fn small_scenarios() -> Vec<WiretapScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..200)
        .map(|_| {
            let t = rng.gen_range(1..=2);
            let rl = rng.gen_range(1..=2);
            let re = rng.gen_range(1..=2);
            wiretap_sample(&mut rng, t, rl, re)
        })
        .collect()
}

fn closed_form_vs_oracle() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    for sc in small_scenarios() {
        let c = secrecy_capacity(&sc).map_err(|e| e.to_string())?.value_nats;
        let g = brute_force_capacity(&sc, 64).map_err(|e| e.to_string())?;
        worst = worst.max((c - g).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(worst <= 2e-3, || format!("max gap {worst:.3e} > 2e-3"))?;
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("200 scenarios, max gap {worst:.2e} nats, {secs:.1}s"))
}

fn characterization_equivalence() -> Outcome {
    let mut worst = 0.0_f64;
    for sc in small_scenarios() {
        let c = secrecy_capacity(&sc).map_err(|e| e.to_string())?.value_nats;
        let np = grid_maximum(&sc, 64, Objective::NoPrefix).map_err(|e| e.to_string())?.value;
        let an = grid_maximum(&sc, 64, Objective::ArtificialNoise).map_err(|e| e.to_string())?.value;
        worst = worst.max((np - an).abs()).max((np - c).abs()).max((an - c).abs());
    }
    ensure(worst <= 2e-3, || format!("max disagreement {worst:.3e} > 2e-3"))?;
    Ok(format!("200 scenarios, max disagreement {worst:.2e} nats"))
}

/// 200 broadcast scenarios with `t ≤ 4` under matrix constraints; every
/// fourth constraint is rank deficient.
fn broadcast_scenarios() -> Vec<BroadcastScenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    (0..200)
        .map(|k| {
            let t = rng.gen_range(1..=4);
            let r1 = rng.gen_range(1..=3);
            let r2 = rng.gen_range(1..=3);
            let s = if k % 4 == 3 && t > 1 {
                let rank = rng.gen_range(1..t);
                psd_of_rank(&mut rng, t, rank)
            } else {
                positive_definite(&mut rng, t, 0.1)
            };
            BroadcastScenario::new(
                gaussian_matrix(&mut rng, r1, t),
                gaussian_matrix(&mut rng, r2, t),
                PowerConstraint::Matrix(s),
            )
            .unwrap()
        })
        .collect()
}

fn corner_achievability() -> Outcome {
    let mut worst = 0.0_f64;
    for sc in broadcast_scenarios() {
        let s = sc.matrix_constraint().unwrap();
        let corner = rectangle_corner(sc.h1(), sc.h2(), s).map_err(|e| e.to_string())?;
        let b = optimal_covariance(&sc.toward_receiver1().unwrap()).map_err(|e| e.to_string())?;
        let r = sdpc_rates(&sc, &b).map_err(|e| e.to_string())?;
        worst = worst.max((r.r1 - corner.r1).abs()).max((r.r2 - corner.r2).abs());
    }
    ensure(worst <= 1e-8, || format!("max gap {worst:.3e} > 1e-8"))?;
    Ok(format!("200 scenarios (t <= 4), max gap {worst:.2e}"))
}

fn pencil_reciprocity() -> Outcome {
    let mut worst = 0.0_f64;
    for sc in broadcast_scenarios() {
        let fwd = secrecy_capacity(&sc.toward_receiver1().unwrap()).map_err(|e| e.to_string())?;
        let rev = secrecy_capacity(&sc.toward_receiver2().unwrap()).map_err(|e| e.to_string())?;
        let phi = &fwd.spectrum.phi;
        let c1: f64 = 0.5 * phi.iter().filter(|&&p| p > 1.0).map(|p| p.ln()).sum::<f64>();
        let c2: f64 = 0.5 * phi.iter().filter(|&&p| p <= 1.0).map(|p| (1.0 / p).ln()).sum::<f64>();
        let total: f64 = 0.5 * phi.iter().map(|p| p.ln().abs()).sum::<f64>();
        worst = worst
            .max((fwd.value_nats - c1).abs())
            .max((rev.value_nats - c2).abs())
            .max((reverse_capacity_from_spectrum(&fwd.spectrum) - c2).abs())
            .max((fwd.value_nats + rev.value_nats - total).abs());
    }
    ensure(worst <= 1e-10, || format!("max gap {worst:.3e} > 1e-10"))?;
    Ok(format!("200 scenarios, max gap {worst:.2e}"))
}

fn enhancement_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    let mut worst_kkt = 0.0_f64;
    let mut failures = Vec::new();
    for k in 0..100 {
        let h1 = gaussian_matrix(&mut rng, 2, 2);
        let h2 = gaussian_matrix(&mut rng, 2, 2);
        let s = positive_definite(&mut rng, 2, 0.2);
        let al = align(&h1, &h2, &s).map_err(|e| format!("case {k}: {e}"))?;
        let b = aligned_optimum(&al).map_err(|e| e.to_string())?;
        let rep = verify_enhancement(&al, &b).map_err(|e| e.to_string())?;
        worst_kkt = worst_kkt.max(rep.kkt_residual);
        if !rep.passed() {
            failures.push(k);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(failures.is_empty(), || format!("failed cases {failures:?}"))?;
    ensure(secs < 30.0, || format!("took {secs:.1}s"))?;
    Ok(format!("100 aligned 2x2 cases, max KKT residual {worst_kkt:.2e}, {secs:.1}s"))
}

fn determinant_lemma() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut worst = 0.0_f64;
    for _ in 0..500 {
        let t = rng.gen_range(1..=5);
        let h = gaussian_matrix(&mut rng, t, t);
        let rank = rng.gen_range(1..=t);
        let b = psd_of_rank(&mut rng, t, rank);
        let lhs = logdet(&b.sandwich(&h).unwrap().add_identity()).map_err(|e| e.to_string())?.exp();
        let hthb = h.gram().matmul(b.as_general()).unwrap();
        let rhs = lu_det(&hthb.add(&GeneralMatrix::identity(t)).unwrap()).map_err(|e| e.to_string())?;
        worst = worst.max((lhs - rhs).abs() / lhs.abs());
    }
    ensure(worst <= 1e-8, || format!("max relative gap {worst:.3e} > 1e-8"))?;
    Ok(format!("500 pairs (t <= 5), max relative gap {worst:.2e}"))
}

fn zf_null_rank() -> Outcome {
    // full column rank at the unintended receiver leaves no null space
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    for _ in 0..20 {
        let t = rng.gen_range(1..=3);
        let r1 = rng.gen_range(1..=3);
        let sc = BroadcastScenario::new(
            gaussian_matrix(&mut rng, r1, t),
            gaussian_matrix(&mut rng, t, t),
            PowerConstraint::TotalPower(rng.gen_range(0.5..20.0)),
        )
        .unwrap();
        let pts = zf_points(&sc, 17).map_err(|e| e.to_string())?;
        ensure(pts.iter().all(|p| p.rates.r1 == 0.0), || "nonzero ZF rate for message 1".into())?;
    }
    let h11 = [0.3, 2.5];
    let h22 = [1.5, 3.9];
    let sc = BroadcastScenario::new(
        GeneralMatrix::from_rows(&[h11]).unwrap(),
        GeneralMatrix::from_rows(&[h22]).unwrap(),
        PowerConstraint::TotalPower(12.0),
    )
    .unwrap();
    let best = zf_points(&sc, 33)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|p| p.rates.r1)
        .fold(0.0, f64::max);
    let n = h22[0].hypot(h22[1]);
    let proj = (h11[0] * h22[1] - h11[1] * h22[0]) / n;
    let expect = 0.5 * (1.0 + 12.0 * proj * proj).ln();
    ensure((best - expect).abs() < 1e-10, || format!("{best} vs projection {expect}"))?;
    ensure((best - 0.859).abs() <= 2e-3, || format!("{best} not within 0.859 ± 0.002"))?;
    Ok(format!("20 trivial-null cases give R1 = 0; MISO all-power R1 = {best:.6} nats"))
}

fn region_of(rows: &[Row], source: Source) -> RateRegion {
    RateRegion::frontier(
        rows.iter()
            .filter(|r| r.source == source)
            .map(|r| RatePair::new(r.r1, r.r2))
            .collect(),
    )
}

/// Largest `λ` with `λ·(cos θ, sin θ)` in the region.
fn ray_extent(region: &RateRegion, theta: f64) -> f64 {
    let (c, s) = (theta.cos(), theta.sin());
    region
        .points()
        .iter()
        .map(|p| {
            let a = if c > 1e-15 { p.r1 / c } else { f64::INFINITY };
            let b = if s > 1e-15 { p.r2 / s } else { f64::INFINITY };
            a.min(b)
        })
        .fold(0.0, f64::max)
}

fn check_figure(fig: &str, dir_a: &Path, dir_b: &Path) -> Result<String, String> {
    reproduce(fig, dir_a).map_err(|e| e.to_string())?;
    reproduce(fig, dir_b).map_err(|e| e.to_string())?;
    for ext in ["csv", "svg"] {
        let a = std::fs::read(dir_a.join(format!("{fig}.{ext}"))).unwrap();
        let b = std::fs::read(dir_b.join(format!("{fig}.{ext}"))).unwrap();
        ensure(a == b, || format!("{fig}.{ext} differs between runs"))?;
    }
    let text = std::fs::read_to_string(dir_a.join(format!("{fig}.csv"))).unwrap();
    let rows = parse_csv(&text).ok_or_else(|| format!("{fig}.csv does not parse"))?;

    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("tests/golden/{fig}.csv"));
    let golden = parse_csv(&std::fs::read_to_string(&golden_path).unwrap()).unwrap();
    ensure(golden.len() == rows.len(), || format!("{fig}: {} rows, golden {}", rows.len(), golden.len()))?;
    for (g, r) in golden.iter().zip(&rows) {
        let close = g.source == r.source && (g.r1 - r.r1).abs() <= 1e-9 && (g.r2 - r.r2).abs() <= 1e-9;
        ensure(close, || format!("{fig}: row {r:?} differs from golden {g:?}"))?;
    }

    let tol = 1e-6;
    let zf = region_of(&rows, Source::Zf);
    let cap = region_of(&rows, Source::Capacity);
    ensure(zf.is_subset_of(&cap, tol), || format!("{fig}: ZF not inside capacity"))?;
    // ZF strictly inside: some capacity point is out of ZF's reach
    ensure(cap.points().iter().any(|p| !zf.contains(p, 1e-3)), || format!("{fig}: ZF not strictly inside"))?;
    let mut chain = vec![&zf, &cap];
    let dpc = region_of(&rows, Source::Dpc);
    let has_dpc = !dpc.points().is_empty();
    if has_dpc {
        ensure(cap.is_subset_of(&dpc, tol), || format!("{fig}: capacity not inside DPC"))?;
        chain.push(&dpc);
    }
    for k in 0..=90 {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / 90.0;
        let ext: Vec<f64> = chain.iter().map(|r| ray_extent(r, theta)).collect();
        ensure(ext.windows(2).all(|w| w[0] <= w[1] + tol), || {
            format!("{fig}: chain broken at angle {theta:.4}: {ext:?}")
        })?;
    }
    Ok(format!("{fig}: {} rows{}", rows.len(), if has_dpc { " incl. DPC" } else { "" }))
}

fn figure_reproduction() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let details: Vec<String> = FIGURES
        .iter()
        .map(|f| check_figure(f, a.path(), b.path()))
        .collect::<Result<_, _>>()?;
    Ok(details.join("; "))
}

fn rank_deficient_constraint() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let v = [rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5];
        let power = rng.gen_range(0.5..5.0);
        let s = SymMatrix::from_fn(2, |i, j| power * v[i] * v[j]);
        let rl = rng.gen_range(1..=2);
        let re = rng.gen_range(1..=2);
        let (hl, he) = (gaussian_matrix(&mut rng, rl, 2), gaussian_matrix(&mut rng, re, 2));
        let c = secrecy_capacity(&WiretapScenario::new(hl.clone(), he.clone(), s).unwrap())
            .map_err(|e| e.to_string())?
            .value_nats;
        // the input is confined to the line through v: a scalar channel with
        // gains ‖H·v‖²
        let gain = |h: &GeneralMatrix| {
            (0..h.rows())
                .map(|i| (h[(i, 0)] * v[0] + h[(i, 1)] * v[1]).powi(2))
                .sum::<f64>()
        };
        let (gl, ge) = (gain(&hl), gain(&he));
        let oracle = (0..=1000)
            .map(|i| {
                let x = power * i as f64 / 1000.0;
                0.5 * ((1.0 + x * gl) / (1.0 + x * ge)).ln()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((c - oracle).abs());
    }
    ensure(worst <= 1e-3, || format!("max gap {worst:.3e} > 1e-3"))?;
    Ok(format!("50 rank-1 constraints, max gap {worst:.2e} nats"))
}

fn perturbation_continuity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst_final = 0.0_f64;
    for k in 0..20 {
        let h1 = singular_square(&mut rng, 2, 1);
        let h2 = singular_square(&mut rng, 2, 1);
        let s = positive_definite(&mut rng, 2, 0.2);
        for h in [&h1, &h2] {
            let sv = svd(h).unwrap().singular_values;
            ensure(sv[1] <= 1e-6 * sv[0], || format!("case {k}: channel not singular"))?;
        }
        let cap = |a: &GeneralMatrix, b: &GeneralMatrix| {
            secrecy_capacity(&WiretapScenario::new(a.clone(), b.clone(), s.clone()).unwrap())
                .unwrap()
                .value_nats
        };
        let base = cap(&h1, &h2);
        let gaps: Vec<f64> = [1e-1, 1e-2, 1e-3]
            .iter()
            .map(|&alpha| {
                let p1 = perturb_to_invertible(&h1, alpha).unwrap();
                let p2 = perturb_to_invertible(&h2, alpha).unwrap();
                (cap(&p1, &p2) - base).abs()
            })
            .collect();
        ensure(gaps.windows(2).all(|w| w[1] <= w[0]), || format!("case {k}: gaps {gaps:?} not shrinking"))?;
        worst_final = worst_final.max(gaps[2]);
    }
    ensure(worst_final < 1e-2, || format!("final gap {worst_final:.3e}"))?;
    Ok(format!("20 singular 2x2 pairs, largest final gap {worst_final:.2e} nats"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("closed form vs grid oracle", closed_form_vs_oracle),
        ("characterization equivalence", characterization_equivalence),
        ("rectangle corner achievability", corner_achievability),
        ("pencil reciprocity", pencil_reciprocity),
        ("enhancement suite", enhancement_suite),
        ("determinant lemma", determinant_lemma),
        ("ZF null-rank", zf_null_rank),
        ("figure reproduction", figure_reproduction),
        ("rank-deficient constraint", rank_deficient_constraint),
        ("perturbation continuity", perturbation_continuity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
