//! Sampled-union regions: the total-power secrecy region and the
//! non-secret dirty-paper region.

use crate::error::Result;
use crate::matcore::{logdet, psd_sqrt, GeneralMatrix, SymMatrix};
use crate::sampling::{covariance, rotations, simplex_divisions, simplex_grid, Sampling};
use crate::wiretap::optimal_covariance;

use super::zf::zf_points;
use super::{corner_of, BroadcastScenario, RatePair, RateRegion};

/// Secrecy capacity region under `tr S ≤ P`, as the Pareto front of the
/// rectangle corners over sampled `S = R·diag(P·p)·Rᵀ`.
///
/// The zero-forcing covariance sums and the isotropic `(P/t)·I` are always
/// included among the samples, so the result contains the zero-forcing
/// region. It is a lower bound on the true region.
pub fn region_total_power(sc: &BroadcastScenario, sampling: &Sampling) -> Result<RateRegion> {
    let p = sc.require_total_power()?;
    let t = sc.transmit_dim();
    let mut constraints: Vec<SymMatrix> = Vec::new();
    let grid = simplex_grid(t, simplex_divisions(t, sampling.splits));
    for r in rotations(t, sampling.samples, sampling.seed) {
        for fractions in &grid {
            let powers: Vec<f64> = fractions.iter().map(|f| f * p).collect();
            constraints.push(covariance(&r, &powers));
        }
    }
    constraints.push(SymMatrix::identity(t).scale(p / t as f64));
    for z in zf_points(sc, sampling.splits)? {
        constraints.push(z.b1.add(&z.b2)?);
    }

    let mut corners = Vec::with_capacity(constraints.len());
    for s in constraints {
        corners.push(corner_of(&sc.with_matrix(s)?.toward_receiver1()?)?.clamped());
    }
    Ok(RateRegion::frontier(corners))
}

/// `log|base + K·diag(sign·c)·Kᵀ|`.
fn logdet_shifted(base: &SymMatrix, k: &GeneralMatrix, c: &[f64], sign: f64) -> Result<f64> {
    let r = k.rows();
    let m = SymMatrix::from_fn(r, |i, j| {
        base[(i, j)]
            + sign
                * (0..c.len())
                    .map(|l| k[(i, l)] * c[l] * k[(j, l)])
                    .sum::<f64>()
    });
    logdet(&m)
}

/// Per-axis power-fraction levels so that the product grid has at most
/// `splits²` points.
fn axis_levels(t: usize, splits: usize) -> usize {
    let budget = (splits * splits) as f64;
    let mut m = splits.max(2);
    while m > 2 && (m as f64).powi(t as i32) > budget {
        m -= 1;
    }
    m
}

/// Non-secret dirty-paper region under the matrix constraint, over splits
/// `B1 + B2 = S` and both encoding orders.
///
/// Splits are `B2 = S½·Q·diag(c)·Qᵀ·S½` with sampled rotations `Q`. The
/// covariances optimal for the two secrecy problems are always included, so
/// the result contains the secrecy rectangle.
pub fn dpc_region(sc: &BroadcastScenario, sampling: &Sampling) -> Result<RateRegion> {
    let s = sc.require_matrix()?.clone();
    let t = sc.transmit_dim();
    let (h1, h2) = (sc.h1(), sc.h2());
    let i1 = SymMatrix::identity(h1.rows());
    let i2 = SymMatrix::identity(h2.rows());
    let k1s = s.sandwich(h1)?.add_identity();
    let k2s = s.sandwich(h2)?.add_identity();
    let (l1s, l2s) = (logdet(&k1s)?, logdet(&k2s)?);

    let mut points = Vec::new();
    // B2 = W·diag(c)·Wᵀ, B1 = S − B2
    let mut push_split = |w: &GeneralMatrix, c: &[f64]| -> Result<()> {
        let k1 = h1.matmul(w)?;
        let k2 = h2.matmul(w)?;
        let l1_b1 = logdet_shifted(&k1s, &k1, c, -1.0)?;
        let l2_b1 = logdet_shifted(&k2s, &k2, c, -1.0)?;
        let l1_b2 = logdet_shifted(&i1, &k1, c, 1.0)?;
        let l2_b2 = logdet_shifted(&i2, &k2, c, 1.0)?;
        // message 1 encoded last (sees no interference from message 2)
        points.push(RatePair::new(0.5 * l1_b1, 0.5 * (l2s - l2_b1)).clamped());
        // message 2 encoded last
        points.push(RatePair::new(0.5 * (l1s - l1_b2), 0.5 * l2_b2).clamped());
        Ok(())
    };

    let root = psd_sqrt(&s)?;
    let m = axis_levels(t, sampling.splits);
    let levels: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let mut c = vec![0.0; t];
    for q in rotations(t, sampling.samples, sampling.seed) {
        let w = root.matmul(&q)?;
        let mut idx = vec![0usize; t];
        'grid: loop {
            for (ci, &i) in c.iter_mut().zip(&idx) {
                *ci = levels[i];
            }
            push_split(&w, &c)?;
            for d in 0..t {
                idx[d] += 1;
                if idx[d] < m {
                    continue 'grid;
                }
                idx[d] = 0;
            }
            break;
        }
    }

    // anchors: B1 = B*(1→2) with message 1 last, B2 = B*(2→1) with message 2 last
    let fwd = sc.toward_receiver1()?;
    let b1 = optimal_covariance(&fwd)?;
    let b2 = optimal_covariance(&fwd.swapped())?;
    let ld = |h: &GeneralMatrix, b: &SymMatrix| -> Result<f64> { logdet(&b.sandwich(h)?.add_identity()) };
    points.push(RatePair::new(0.5 * ld(h1, &b1)?, 0.5 * (l2s - ld(h2, &b1)?)).clamped());
    points.push(RatePair::new(0.5 * (l1s - ld(h1, &b2)?), 0.5 * ld(h2, &b2)?).clamped());
    points.push(RatePair::new(0.5 * l1s, 0.0));
    points.push(RatePair::new(0.0, 0.5 * l2s));
    Ok(RateRegion::frontier(points))
}
