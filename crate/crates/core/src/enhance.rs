//! Channel-enhancement certificates for the aligned (square, invertible)
//! channel.
//!
//! With `N_k = (H_kᵀH_k)⁻¹` the channel `y_k = H_k x + z_k` is equivalent to
//! `y_k = x + n_k`, `n_k ~ N(0, N_k)`. At the optimal covariance the KKT
//! multipliers `M1`, `M2` are recovered by least squares on null-space
//! parameterizations, the enhanced noise `Ñ₁ = ((B*+N1)⁻¹ + M1)⁻¹ − B*` is
//! built from them, and the ordering and determinant identities that make
//! the enhanced channel degraded are checked numerically.

use crate::error::{Error, Result};
use crate::matcore::{
    cholesky, logdet, lstsq, min_eigenvalue, psd_clamp, psd_order_leq, spd_inverse, svd, sym_eig,
    GeneralMatrix, SymMatrix,
};
use crate::wiretap::{optimal_covariance, secrecy_capacity, WiretapScenario};

/// Eigenvalues of `B*` (or `S − B*`) below this fraction of `tr S` span the
/// null spaces carrying the multipliers.
pub const NULL_RANK_CUTOFF: f64 = 1e-8;
/// Relative tolerance for every check in [`verify_enhancement`].
pub const CHECK_TOL: f64 = 1e-6;
/// Smallest admissible `σ_min/σ_max` of a channel passed to [`align`].
const INVERTIBLE_RCOND: f64 = 1e-10;

/// Noise-side description of an aligned wiretap channel.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedScenario {
    pub n1: SymMatrix,
    pub n2: SymMatrix,
    pub s: SymMatrix,
}

impl AlignedScenario {
    pub fn new(n1: SymMatrix, n2: SymMatrix, s: SymMatrix) -> Result<Self> {
        let t = s.dim();
        if n1.dim() != t || n2.dim() != t {
            return Err(Error::Shape(format!(
                "noise covariances are {}x{} and {}x{} but S is {t}x{t}",
                n1.dim(),
                n1.dim(),
                n2.dim(),
                n2.dim()
            )));
        }
        for m in [&n1, &n2, &s] {
            cholesky(m)?;
        }
        Ok(Self { n1, n2, s })
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// Channel form with `H_k = N_k^{-½}`; receiver `legit` is legitimate.
    pub fn wiretap(&self, legit: Receiver) -> Result<WiretapScenario> {
        let h1 = inverse_sqrt(&self.n1)?;
        let h2 = inverse_sqrt(&self.n2)?;
        match legit {
            Receiver::One => WiretapScenario::new(h1, h2, self.s.clone()),
            Receiver::Two => WiretapScenario::new(h2, h1, self.s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    One,
    Two,
}

fn inverse_sqrt(n: &SymMatrix) -> Result<GeneralMatrix> {
    let eig = sym_eig(n)?;
    Ok(eig.recompose(|l| 1.0 / l.sqrt()).into_general())
}

/// `N_k = H_k⁻¹·H_k⁻ᵀ` for square invertible channels.
pub fn align(h1: &GeneralMatrix, h2: &GeneralMatrix, s: &SymMatrix) -> Result<AlignedScenario> {
    let noise = |h: &GeneralMatrix, name: &str| -> Result<SymMatrix> {
        if !h.is_square() || h.rows() != s.dim() {
            return Err(Error::Shape(format!(
                "{name} must be {0}x{0} for alignment, got {1}x{2}",
                s.dim(),
                h.rows(),
                h.cols()
            )));
        }
        let sv = svd(h)?.singular_values;
        let smax = sv.first().copied().unwrap_or(0.0);
        let smin = sv.last().copied().unwrap_or(0.0);
        if !(smin > INVERTIBLE_RCOND * smax) {
            return Err(Error::Singular(format!(
                "{name} is not invertible (σ_min = {smin:e}); apply perturb_to_invertible first"
            )));
        }
        spd_inverse(&h.gram())
    };
    AlignedScenario::new(noise(h1, "H1")?, noise(h2, "H2")?, s.clone())
}

/// Optimal covariance of
/// `½log(|S+N2|/|B+N2|) − ½log(|S+N1|/|B+N1|)` over `0 ⪯ B ⪯ S`.
///
/// This artificial-noise objective for receiver 2 is maximized by the
/// no-prefix optimum for receiver 1.
pub fn aligned_optimum(al: &AlignedScenario) -> Result<SymMatrix> {
    optimal_covariance(&al.wiretap(Receiver::One)?)
}

/// Secrecy capacity of receiver 2 against receiver 1, i.e. the optimal value
/// of the objective in [`aligned_optimum`].
pub fn aligned_capacity(al: &AlignedScenario) -> Result<f64> {
    Ok(secrecy_capacity(&al.wiretap(Receiver::Two)?)?.value_nats)
}

/// Recovered KKT multipliers.
#[derive(Debug, Clone)]
pub struct KktSolution {
    /// PSD multiplier of `B ⪰ 0`, supported on `null(B*)`.
    pub m1: SymMatrix,
    /// PSD multiplier of `B ⪯ S`, supported on `null(S − B*)`.
    pub m2: SymMatrix,
    /// Frobenius norm of the stationarity gap after clamping, plus the clamped
    /// magnitude.
    pub residual: f64,
    /// Part of `residual` due to projecting `M1`, `M2` onto the PSD cone.
    pub clamped: f64,
    pub null_dim_b: usize,
    pub null_dim_gap: usize,
}

fn null_basis(a: &SymMatrix, cutoff: f64) -> Result<GeneralMatrix> {
    let eig = sym_eig(a)?;
    let idx: Vec<usize> = (0..a.dim()).filter(|&i| eig.values[i] <= cutoff).collect();
    Ok(eig.vectors.select_columns(&idx))
}

/// Symmetric `U·E·Uᵀ` for the symmetric unit matrix `E` at `(a, b)`.
fn unit_image(u: &GeneralMatrix, a: usize, b: usize) -> SymMatrix {
    let t = u.rows();
    SymMatrix::from_fn(t, |i, j| {
        if a == b {
            u[(i, a)] * u[(j, a)]
        } else {
            u[(i, a)] * u[(j, b)] + u[(i, b)] * u[(j, a)]
        }
    })
}

/// Solves `(B*+N1)⁻¹ + M1 = (B*+N2)⁻¹ + M2` with `M1 = U₀XU₀ᵀ`,
/// `M2 = UₛYUₛᵀ`, where `U₀` spans `null(B*)` and `Uₛ` spans `null(S − B*)`,
/// so complementary slackness holds by construction.
pub fn kkt_solve(
    b_star: &SymMatrix,
    n1: &SymMatrix,
    n2: &SymMatrix,
    s: &SymMatrix,
) -> Result<KktSolution> {
    let t = s.dim();
    let cutoff = NULL_RANK_CUTOFF * s.trace();
    let u0 = null_basis(b_star, cutoff)?;
    let us = null_basis(&s.sub(b_star)?, cutoff)?;
    // M1 − M2 = (B*+N2)⁻¹ − (B*+N1)⁻¹
    let target = spd_inverse(&b_star.add(n2)?)?.sub(&spd_inverse(&b_star.add(n1)?)?)?;

    let mut columns: Vec<(usize, usize, usize, SymMatrix)> = Vec::new();
    for (which, u, sign) in [(0usize, &u0, 1.0), (1, &us, -1.0)] {
        for a in 0..u.cols() {
            for b in a..u.cols() {
                columns.push((which, a, b, unit_image(u, a, b).scale(sign)));
            }
        }
    }
    let rows: Vec<(usize, usize)> = (0..t).flat_map(|i| (i..t).map(move |j| (i, j))).collect();
    let design = GeneralMatrix::from_fn(rows.len(), columns.len(), |r, c| {
        let (i, j) = rows[r];
        columns[c].3[(i, j)]
    });
    let rhs: Vec<f64> = rows.iter().map(|&(i, j)| target[(i, j)]).collect();
    let x = lstsq(&design, &rhs)?;

    let mut x_mat = GeneralMatrix::zeros(u0.cols(), u0.cols());
    let mut y_mat = GeneralMatrix::zeros(us.cols(), us.cols());
    for (coef, (which, a, b, _)) in x.iter().zip(&columns) {
        let m = if *which == 0 { &mut x_mat } else { &mut y_mat };
        m[(*a, *b)] = *coef;
        m[(*b, *a)] = *coef;
    }
    let (m1, c1) = psd_clamp(&SymMatrix::from_general(&x_mat)?.sandwich(&u0)?)?;
    let (m2, c2) = psd_clamp(&SymMatrix::from_general(&y_mat)?.sandwich(&us)?)?;
    let gap = m1.sub(&m2)?.sub(&target)?.frobenius_norm();
    Ok(KktSolution {
        m1,
        m2,
        residual: gap + c1 + c2,
        clamped: c1 + c2,
        null_dim_b: u0.cols(),
        null_dim_gap: us.cols(),
    })
}

/// `Ñ₁ = ((B*+N1)⁻¹ + M1)⁻¹ − B*`.
pub fn enhanced_noise(b_star: &SymMatrix, n1: &SymMatrix, m1: &SymMatrix) -> Result<SymMatrix> {
    let inner = spd_inverse(&b_star.add(n1)?)?.add(m1)?;
    if cholesky(&inner).is_err() {
        let eig = sym_eig(&inner)?;
        return Err(Error::Numerical(format!(
            "(B*+N1)⁻¹ + M1 is not positive definite (eigenvalues {:e} .. {:e})",
            eig.min_value(),
            eig.values.first().copied().unwrap_or(0.0)
        )));
    }
    spd_inverse(&inner)?.sub(b_star)
}

#[derive(Debug, Clone)]
pub struct EnhancementReport {
    pub kkt_residual: f64,
    pub m1: SymMatrix,
    pub m2: SymMatrix,
    pub n_tilde: SymMatrix,
    /// `0 ⪯ Ñ₁ ⪯ N1` and `Ñ₁ ⪯ N2`.
    pub ordering_ok: bool,
    /// `Ñ₁ ≻ 0` strictly; degenerate boundary cases only flag this.
    pub n_tilde_positive: bool,
    /// `|B*+Ñ₁|/|Ñ₁| = |B*+N1|/|N1|`.
    pub noise_ratio_ok: bool,
    /// `|S+Ñ₁|/|B*+Ñ₁| = |S+N2|/|B*+N2|`.
    pub constraint_ratio_ok: bool,
    /// `½log(|S+Ñ₁|/|Ñ₁|) − ½log(|S+N1|/|N1|)`.
    pub degraded_value: f64,
    /// Closed-form capacity the degraded value must match.
    pub capacity: f64,
    pub degraded_ok: bool,
    pub tolerance: f64,
    pub rank_cutoff: f64,
}

impl EnhancementReport {
    pub fn kkt_ok(&self) -> bool {
        self.kkt_residual < self.tolerance
    }

    pub fn passed(&self) -> bool {
        self.kkt_ok()
            && self.ordering_ok
            && self.noise_ratio_ok
            && self.constraint_ratio_ok
            && self.degraded_ok
    }
}

fn log_ratio(num: &SymMatrix, den: &SymMatrix) -> Option<f64> {
    Some(logdet(num).ok()? - logdet(den).ok()?)
}

fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        // log-ratios: an absolute gap is a relative gap on the ratio
        (Some(a), Some(b)) => (a - b).abs() <= tol,
        _ => false,
    }
}

/// Runs the whole enhancement argument at `b_star`. Failures are reported in
/// the returned booleans, not as errors.
pub fn verify_enhancement(al: &AlignedScenario, b_star: &SymMatrix) -> Result<EnhancementReport> {
    let tol = CHECK_TOL;
    let (n1, n2, s) = (&al.n1, &al.n2, &al.s);
    let kkt = kkt_solve(b_star, n1, n2, s)?;
    let n_tilde = match enhanced_noise(b_star, n1, &kkt.m1) {
        Ok(n) => n,
        Err(Error::Numerical(_)) => SymMatrix::zeros(al.dim()).scale(f64::NAN),
        Err(e) => return Err(e),
    };
    let finite = n_tilde.as_general().as_slice().iter().all(|x| x.is_finite());
    let zero = SymMatrix::zeros(al.dim());

    let ordering_ok = finite
        && psd_order_leq(&zero, &n_tilde, tol)?
        && psd_order_leq(&n_tilde, n1, tol)?
        && psd_order_leq(&n_tilde, n2, tol)?;
    let n_tilde_positive = finite && cholesky(&n_tilde).is_ok() && min_eigenvalue(&n_tilde)? > 0.0;

    let bt = b_star.add(&n_tilde)?;
    let noise_ratio_ok = close(
        log_ratio(&bt, &n_tilde),
        log_ratio(&b_star.add(n1)?, n1),
        tol,
    );
    let constraint_ratio_ok = close(
        log_ratio(&s.add(&n_tilde)?, &bt),
        log_ratio(&s.add(n2)?, &b_star.add(n2)?),
        tol,
    );
    let capacity = aligned_capacity(al)?;
    let degraded = log_ratio(&s.add(&n_tilde)?, &n_tilde)
        .zip(log_ratio(&s.add(n1)?, n1))
        .map(|(a, b)| 0.5 * (a - b));
    let degraded_ok = degraded.is_some_and(|d| (d - capacity).abs() <= tol * capacity.abs().max(1.0));

    Ok(EnhancementReport {
        kkt_residual: kkt.residual,
        m1: kkt.m1,
        m2: kkt.m2,
        n_tilde,
        ordering_ok,
        n_tilde_positive,
        noise_ratio_ok,
        constraint_ratio_ok,
        degraded_value: degraded.unwrap_or(f64::NAN),
        capacity,
        degraded_ok,
        tolerance: tol,
        rank_cutoff: NULL_RANK_CUTOFF * s.trace(),
    })
}

/// `H̄ = U·(Λ + αI)·Vᵀ`: every singular value shifted up by `alpha`.
pub fn perturb_to_invertible(h: &GeneralMatrix, alpha: f64) -> Result<GeneralMatrix> {
    if !h.is_square() {
        return Err(Error::Shape(format!(
            "perturbation needs a square channel, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    let dec = svd(h)?;
    let shifted: Vec<f64> = dec.singular_values.iter().map(|s| s + alpha).collect();
    let scaled = GeneralMatrix::from_fn(h.rows(), h.cols(), |i, j| dec.u[(i, j)] * shifted[j]);
    scaled.matmul(&dec.v.transpose())
}
