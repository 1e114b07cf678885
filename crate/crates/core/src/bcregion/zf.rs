//! Zero-forcing: each message is confined to the null space of the other
//! receiver's channel, so nothing leaks by construction.

use crate::error::Result;
use crate::matcore::{logdet, null_space, spd_inverse, svd, sym_eig, GeneralMatrix, SymMatrix};
use crate::sampling::Sampling;

use super::{BroadcastScenario, PowerConstraint, RatePair, RateRegion};

/// Eigenvalues of `HᵀH` below this fraction of the largest span the null space.
const NULL_TOL: f64 = 1e-10;
/// Relative eigenvalue cutoff for the range of a constraint matrix.
const RANGE_TOL: f64 = 1e-10;

/// One zero-forcing operating point and the covariances achieving it.
#[derive(Debug, Clone)]
pub struct ZfPoint {
    pub rates: RatePair,
    pub b1: SymMatrix,
    pub b2: SymMatrix,
}

/// Capacity-achieving input covariance of `y = Hx + z` under `tr Q ≤ power`.
/// Returns `(Q, ½log|I + HQHᵀ|)`.
pub fn water_filling(h: &GeneralMatrix, power: f64) -> Result<(SymMatrix, f64)> {
    let n = h.cols();
    if n == 0 || power <= 0.0 {
        return Ok((SymMatrix::zeros(n), 0.0));
    }
    let dec = svd(h)?;
    let smax = dec.singular_values.first().copied().unwrap_or(0.0);
    let gains: Vec<f64> = dec
        .singular_values
        .iter()
        .take_while(|&&s| s > 1e-12 * smax.max(f64::MIN_POSITIVE))
        .map(|s| s * s)
        .collect();
    if gains.is_empty() {
        return Ok((SymMatrix::zeros(n), 0.0));
    }
    // gains are descending; find the largest active set with a valid level
    let mut level = 0.0;
    let mut active = 0;
    let mut inv_sum = 0.0;
    for (k, g) in gains.iter().enumerate() {
        inv_sum += 1.0 / g;
        let mu = (power + inv_sum) / (k + 1) as f64;
        if mu > 1.0 / g {
            level = mu;
            active = k + 1;
        } else {
            break;
        }
    }
    let mut powers = vec![0.0; n];
    let mut rate = 0.0;
    for k in 0..active {
        powers[k] = level - 1.0 / gains[k];
        rate += 0.5 * (1.0 + gains[k] * powers[k]).ln();
    }
    Ok((SymMatrix::diag(&powers).sandwich(&dec.v)?, rate))
}

/// Largest PSD matrix whose range lies in `span(n)` and which is `⪯ c`.
///
/// `n` must have orthonormal columns; `c` is PSD (tiny negative eigenvalues
/// are treated as zero). The result is `N'·(N'ᵀ·C⁺·N')⁻¹·N'ᵀ`, where `N'`
/// spans `span(n) ∩ range(c)`.
pub fn largest_supported_below(c: &SymMatrix, n: &GeneralMatrix) -> Result<SymMatrix> {
    let t = c.dim();
    if n.cols() == 0 {
        return Ok(SymMatrix::zeros(t));
    }
    let eig = sym_eig(c)?;
    let lmax = eig.values.first().copied().unwrap_or(0.0);
    let keep: Vec<usize> = (0..t)
        .filter(|&i| eig.values[i] > RANGE_TOL * lmax.max(0.0))
        .collect();
    if keep.is_empty() {
        return Ok(SymMatrix::zeros(t));
    }
    let q = eig.vectors.select_columns(&keep);
    // part of span(n) outside range(c)
    let outside = n.sub(&q.matmul(&q.transpose().matmul(n)?)?)?;
    let oe = sym_eig(&outside.gram())?;
    let inside: Vec<usize> = (0..n.cols()).filter(|&i| oe.values[i] <= 1e-12).collect();
    if inside.is_empty() {
        return Ok(SymMatrix::zeros(t));
    }
    let np = n.matmul(&oe.vectors.select_columns(&inside))?;
    let pinv = SymMatrix::diag(&keep.iter().map(|&i| 1.0 / eig.values[i]).collect::<Vec<_>>())
        .sandwich(&q)?;
    let m = pinv.congruence(&np)?;
    spd_inverse(&m)?.sandwich(&np)
}

fn half_logdet_i_plus(h: &GeneralMatrix, b: &SymMatrix) -> Result<f64> {
    Ok(0.5 * logdet(&b.sandwich(h)?.add_identity())?)
}

fn point(sc: &BroadcastScenario, b1: SymMatrix, b2: SymMatrix) -> Result<ZfPoint> {
    let rates = RatePair::new(
        half_logdet_i_plus(sc.h1(), &b1)?,
        half_logdet_i_plus(sc.h2(), &b2)?,
    )
    .clamped();
    Ok(ZfPoint { rates, b1, b2 })
}

/// Zero-forcing operating points over `splits` power splits (total power) or
/// `splits` scalings of one user's largest admissible covariance (matrix
/// constraint, both roles).
pub fn zf_points(sc: &BroadcastScenario, splits: usize) -> Result<Vec<ZfPoint>> {
    let n2 = null_space(sc.h2(), NULL_TOL)?; // support for message 1
    let n1 = null_space(sc.h1(), NULL_TOL)?; // support for message 2
    let levels = splits.max(2);
    let frac = |k: usize| k as f64 / (levels - 1) as f64;
    let mut out = Vec::with_capacity(2 * levels);
    match sc.constraint() {
        PowerConstraint::TotalPower(p) => {
            let e1 = sc.h1().matmul(&n2)?;
            let e2 = sc.h2().matmul(&n1)?;
            for k in 0..levels {
                let p1 = p * frac(k);
                let (q1, _) = water_filling(&e1, p1)?;
                let (q2, _) = water_filling(&e2, p - p1)?;
                out.push(point(sc, q1.sandwich(&n2)?, q2.sandwich(&n1)?)?);
            }
        }
        PowerConstraint::Matrix(s) => {
            let b1max = largest_supported_below(s, &n2)?;
            let b2max = largest_supported_below(s, &n1)?;
            for k in 0..levels {
                let a = frac(k);
                let b1 = b1max.scale(a);
                let b2 = largest_supported_below(&s.sub(&b1)?, &n1)?;
                out.push(point(sc, b1, b2)?);
                let b2 = b2max.scale(a);
                let b1 = largest_supported_below(&s.sub(&b2)?, &n2)?;
                out.push(point(sc, b1, b2)?);
            }
        }
    }
    Ok(out)
}

/// Zero-forcing secrecy rate region. Under a matrix constraint this is an
/// inner bound built from scaled maximal null-space covariances.
pub fn zf_region(sc: &BroadcastScenario, sampling: &Sampling) -> Result<RateRegion> {
    let pts = zf_points(sc, sampling.splits)?;
    Ok(RateRegion::frontier(pts.into_iter().map(|p| p.rates).collect()))
}
