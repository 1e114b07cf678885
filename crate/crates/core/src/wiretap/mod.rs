//! MIMO Gaussian wiretap channel under a matrix power constraint.
//!
//! A transmitter with `t` antennas talks to a legitimate receiver through
//! `H_L` while an eavesdropper listens through `H_E`; the input covariance
//! must satisfy `E[XXᵀ] ⪯ S`. The secrecy capacity is
//! `½·Σ log φⱼ` over the generalized eigenvalues `φⱼ > 1` of the pencil
//! `(I + S½H_LᵀH_LS½, I + S½H_EᵀH_ES½)`, and the covariance
//! `S½·G₁(G₁ᵀG₁)⁻¹G₁ᵀ·S½` built from the matching eigenvectors attains it.

mod oracle;

pub use oracle::{brute_force_capacity, grid_maximum, GridOptimum, Objective};

use crate::error::{Bound, Error, Result};
use crate::matcore::{
    gen_eig_pencil, logdet, min_eigenvalue, psd_order_margin, psd_sqrt, spd_inverse, sym_eig,
    GeneralMatrix, PencilSpectrum, SymMatrix, PSD_TOL,
};

/// Eigenvalues of `S` below this fraction of `‖S‖` count as zero when the
/// constraint is reduced to its range.
const RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WiretapScenario {
    h_legit: GeneralMatrix,
    h_eaves: GeneralMatrix,
    s: SymMatrix,
    tol: f64,
}

impl WiretapScenario {
    /// Validates shapes and that `S` is PSD within the default tolerance.
    pub fn new(h_legit: GeneralMatrix, h_eaves: GeneralMatrix, s: SymMatrix) -> Result<Self> {
        Self::with_tolerance(h_legit, h_eaves, s, PSD_TOL)
    }

    pub fn with_tolerance(
        h_legit: GeneralMatrix,
        h_eaves: GeneralMatrix,
        s: SymMatrix,
        tol: f64,
    ) -> Result<Self> {
        let t = s.dim();
        if t == 0 {
            return Err(Error::shape("power constraint must be at least 1x1"));
        }
        if h_legit.cols() != t || h_eaves.cols() != t {
            return Err(Error::shape(format!(
                "channels have {} and {} columns but S is {t}x{t}",
                h_legit.cols(),
                h_eaves.cols()
            )));
        }
        if h_legit.rows() == 0 || h_eaves.rows() == 0 {
            return Err(Error::shape("channel matrices need at least one row"));
        }
        let lmin = min_eigenvalue(&s)?;
        if lmin < -tol * s.frobenius_norm().max(1.0) {
            return Err(Error::NotPsd {
                min_eigenvalue: lmin,
            });
        }
        Ok(Self {
            h_legit,
            h_eaves,
            s,
            tol,
        })
    }

    pub fn h_legit(&self) -> &GeneralMatrix {
        &self.h_legit
    }

    pub fn h_eaves(&self) -> &GeneralMatrix {
        &self.h_eaves
    }

    pub fn s(&self) -> &SymMatrix {
        &self.s
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn transmit_dim(&self) -> usize {
        self.s.dim()
    }

    /// Same channel with the legitimate receiver and eavesdropper exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            h_legit: self.h_eaves.clone(),
            h_eaves: self.h_legit.clone(),
            s: self.s.clone(),
            tol: self.tol,
        }
    }

    /// Same channels under a different constraint matrix.
    pub fn with_constraint(&self, s: SymMatrix) -> Result<Self> {
        Self::with_tolerance(self.h_legit.clone(), self.h_eaves.clone(), s, self.tol)
    }

    /// Checks `0 ⪯ B ⪯ S` at the scenario tolerance.
    pub fn check_feasible(&self, b: &SymMatrix) -> Result<()> {
        if b.dim() != self.transmit_dim() {
            return Err(Error::shape(format!(
                "covariance is {0}x{0} but S is {1}x{1}",
                b.dim(),
                self.transmit_dim()
            )));
        }
        let lower = psd_order_margin(&SymMatrix::zeros(b.dim()), b, self.tol)?;
        if lower < 0.0 {
            return Err(Error::ConstraintViolation {
                side: Bound::Lower,
                margin: lower,
            });
        }
        let upper = psd_order_margin(b, &self.s, self.tol)?;
        if upper < 0.0 {
            return Err(Error::ConstraintViolation {
                side: Bound::Upper,
                margin: upper,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct CapacityResult {
    pub value_nats: f64,
    /// Spectrum of the pencil; lives in the reduced space when `S` is singular.
    pub spectrum: PencilSpectrum,
    pub b_star: SymMatrix,
}

/// `(I + S½H_LᵀH_LS½, I + S½H_EᵀH_ES½)`.
pub fn build_pencil(sc: &WiretapScenario) -> Result<(SymMatrix, SymMatrix)> {
    let root = psd_sqrt(&sc.s)?;
    let member = |h: &GeneralMatrix| -> Result<SymMatrix> {
        Ok(h.gram().congruence(root.as_general())?.add_identity())
    };
    Ok((member(&sc.h_legit)?, member(&sc.h_eaves)?))
}

/// `½·Σ_{φⱼ>1} log φⱼ` for a pencil spectrum.
pub fn capacity_from_spectrum(spectrum: &PencilSpectrum) -> f64 {
    // `+ 0.0` turns the −0.0 of an empty sum into +0.0
    0.5 * spectrum.phi[..spectrum.rho].iter().map(|p| p.ln()).sum::<f64>() + 0.0
}

/// `½·Σ_{φⱼ≤1} log(1/φⱼ)`, the capacity with the roles exchanged.
pub fn reverse_capacity_from_spectrum(spectrum: &PencilSpectrum) -> f64 {
    -0.5 * spectrum.phi[spectrum.rho..].iter().map(|p| p.ln()).sum::<f64>() + 0.0
}

/// `S` restricted to its range: `S = Q_θ·diag(s)·Q_θᵀ` with the null
/// directions dropped.
#[derive(Debug, Clone)]
pub struct RankReduction {
    /// `t × θ` orthonormal basis of `range(S)`.
    pub basis: GeneralMatrix,
    /// `θ`-dimensional scenario with `S̄ = diag(s) ≻ 0`; `None` when `S = 0`.
    pub reduced: Option<WiretapScenario>,
    pub full_rank: bool,
}

impl RankReduction {
    /// Maps a reduced-space covariance back to `Q_θ·B̄·Q_θᵀ`.
    pub fn embed(&self, b: &SymMatrix) -> Result<SymMatrix> {
        b.sandwich(&self.basis)
    }
}

/// Drops the null space of `S`. Inputs are forced into `range(S)` by the
/// constraint, so only `H·Q_θ` matters. Full-rank `S` passes through.
pub fn reduce_rank_deficient(sc: &WiretapScenario) -> Result<RankReduction> {
    let t = sc.transmit_dim();
    let eig = sym_eig(&sc.s)?;
    let cutoff = RANK_TOL * sc.s.frobenius_norm();
    let keep: Vec<usize> = (0..t).filter(|&i| eig.values[i] > cutoff).collect();
    if keep.len() == t {
        return Ok(RankReduction {
            basis: GeneralMatrix::identity(t),
            reduced: Some(sc.clone()),
            full_rank: true,
        });
    }
    let basis = eig.vectors.select_columns(&keep);
    let reduced = if keep.is_empty() {
        None
    } else {
        let s_bar = SymMatrix::diag(&keep.iter().map(|&i| eig.values[i]).collect::<Vec<_>>());
        Some(WiretapScenario::with_tolerance(
            sc.h_legit.matmul(&basis)?,
            sc.h_eaves.matmul(&basis)?,
            s_bar,
            sc.tol,
        )?)
    };
    Ok(RankReduction {
        basis,
        reduced,
        full_rank: false,
    })
}

/// Closed-form secrecy capacity with its spectrum and an optimal covariance.
pub fn secrecy_capacity(sc: &WiretapScenario) -> Result<CapacityResult> {
    let red = reduce_rank_deficient(sc)?;
    let Some(inner) = &red.reduced else {
        return Ok(CapacityResult {
            value_nats: 0.0,
            spectrum: PencilSpectrum::empty(),
            b_star: SymMatrix::zeros(sc.transmit_dim()),
        });
    };
    let (a, b) = build_pencil(inner)?;
    let spectrum = gen_eig_pencil(&a, &b)?;
    let b_inner = covariance_from_spectrum(inner, &spectrum)?;
    let b_star = if red.full_rank {
        b_inner
    } else {
        red.embed(&b_inner)?
    };
    Ok(CapacityResult {
        value_nats: capacity_from_spectrum(&spectrum),
        spectrum,
        b_star,
    })
}

/// `S½·G₁·(G₁ᵀG₁)⁻¹·G₁ᵀ·S½` where `G₁` holds the eigenvectors with `φ > 1`.
/// Requires `S ≻ 0`.
fn covariance_from_spectrum(sc: &WiretapScenario, spectrum: &PencilSpectrum) -> Result<SymMatrix> {
    let t = sc.transmit_dim();
    if spectrum.rho == 0 {
        return Ok(SymMatrix::zeros(t));
    }
    let g1 = spectrum
        .g
        .select_columns(&(0..spectrum.rho).collect::<Vec<_>>());
    let inner = spd_inverse(&g1.gram())?;
    let proj = inner.sandwich(&g1)?;
    let root = psd_sqrt(&sc.s)?;
    proj.congruence(root.as_general())
}

/// Optimal covariance of the no-prefix program (zero matrix when no `φ > 1`).
pub fn optimal_covariance(sc: &WiretapScenario) -> Result<SymMatrix> {
    Ok(secrecy_capacity(sc)?.b_star)
}

fn half_logdet_i_plus(h: &GeneralMatrix, b: &SymMatrix) -> Result<f64> {
    Ok(0.5 * logdet(&b.sandwich(h)?.add_identity())?)
}

/// `½log|I + H_L·B·H_Lᵀ| − ½log|I + H_E·B·H_Eᵀ|`. Not clamped; may be negative.
pub fn rate_no_prefix(sc: &WiretapScenario, b: &SymMatrix) -> Result<f64> {
    sc.check_feasible(b)?;
    Ok(half_logdet_i_plus(&sc.h_legit, b)? - half_logdet_i_plus(&sc.h_eaves, b)?)
}

/// Secrecy rate with artificial noise of covariance `B` added to a signal of
/// covariance `S − B`:
/// `½log(|I+H_LSH_Lᵀ|/|I+H_LBH_Lᵀ|) − ½log(|I+H_ESH_Eᵀ|/|I+H_EBH_Eᵀ|)`.
pub fn rate_artificial_noise(sc: &WiretapScenario, b: &SymMatrix) -> Result<f64> {
    sc.check_feasible(b)?;
    let legit = half_logdet_i_plus(&sc.h_legit, &sc.s)? - half_logdet_i_plus(&sc.h_legit, b)?;
    let eaves = half_logdet_i_plus(&sc.h_eaves, &sc.s)? - half_logdet_i_plus(&sc.h_eaves, b)?;
    Ok(legit - eaves)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[f64]) -> GeneralMatrix {
        GeneralMatrix::from_rows(&[v]).unwrap()
    }

    fn scalar(hl: f64, he: f64, s: f64) -> WiretapScenario {
        WiretapScenario::new(row(&[hl]), row(&[he]), SymMatrix::diag(&[s])).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_indefinite_s() {
        let err = WiretapScenario::new(row(&[1.0, 2.0]), row(&[1.0]), SymMatrix::identity(2));
        assert!(matches!(err, Err(Error::Shape(_))));
        let err = WiretapScenario::new(row(&[1.0, 2.0]), row(&[1.0, 0.0]), SymMatrix::diag(&[1.0, -0.5]));
        assert!(matches!(err, Err(Error::NotPsd { .. })));
    }

    #[test]
    fn pencil_trivial_cases() {
        let z = GeneralMatrix::zeros(1, 2);
        let sc = WiretapScenario::new(z.clone(), z, SymMatrix::identity(2)).unwrap();
        let (a, b) = build_pencil(&sc).unwrap();
        assert_eq!(a, SymMatrix::identity(2));
        assert_eq!(b, SymMatrix::identity(2));

        let (a, b) = build_pencil(&scalar(2.0, 1.0, 1.0)).unwrap();
        assert!((a[(0, 0)] - 5.0).abs() < 1e-14 && (b[(0, 0)] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn scalar_capacity() {
        let r = secrecy_capacity(&scalar(2.0, 1.0, 1.0)).unwrap();
        assert!((r.value_nats - 0.5 * (5.0f64 / 2.0).ln()).abs() < 1e-14);
        assert!((r.b_star[(0, 0)] - 1.0).abs() < 1e-12);
        assert_eq!(r.spectrum.rho, 1);
    }

    #[test]
    fn identical_channels_have_zero_capacity() {
        let h = GeneralMatrix::from_rows(&[[1.0, -0.4], [0.3, 2.0]]).unwrap();
        let sc = WiretapScenario::new(h.clone(), h, SymMatrix::diag(&[2.0, 1.0])).unwrap();
        let r = secrecy_capacity(&sc).unwrap();
        assert!(r.value_nats.abs() < 1e-12);
        assert!(r.b_star.frobenius_norm() < 1e-6);
    }

    #[test]
    fn eavesdropper_dominant_gives_zero_covariance() {
        let r = secrecy_capacity(&scalar(1.0, 2.0, 3.0)).unwrap();
        assert_eq!(r.value_nats, 0.0);
        assert_eq!(r.b_star, SymMatrix::zeros(1));
    }

    #[test]
    fn rate_evaluators_scalar() {
        let sc = scalar(2.0, 1.0, 1.0);
        assert_eq!(rate_no_prefix(&sc, &SymMatrix::zeros(1)).unwrap(), 0.0);
        let r = rate_no_prefix(&sc, &SymMatrix::identity(1)).unwrap();
        assert!((r - 0.5 * (5f64.ln() - 2f64.ln())).abs() < 1e-14);
        assert_eq!(rate_artificial_noise(&sc, &SymMatrix::identity(1)).unwrap(), 0.0);
    }

    #[test]
    fn artificial_noise_without_eavesdropper() {
        let hl = GeneralMatrix::from_rows(&[[1.0, 0.5], [0.0, 2.0]]).unwrap();
        let s = SymMatrix::from_rows(&[[2.0, 0.3], [0.3, 1.0]]).unwrap();
        let sc = WiretapScenario::new(hl.clone(), GeneralMatrix::zeros(1, 2), s.clone()).unwrap();
        let r = rate_artificial_noise(&sc, &SymMatrix::zeros(2)).unwrap();
        let full = 0.5 * logdet(&s.sandwich(&hl).unwrap().add_identity()).unwrap();
        assert!((r - full).abs() < 1e-14);
    }

    #[test]
    fn infeasible_covariance_names_the_side() {
        let sc = scalar(2.0, 1.0, 1.0);
        let err = rate_no_prefix(&sc, &SymMatrix::diag(&[-0.5])).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation { side: Bound::Lower, .. }));
        let err = rate_artificial_noise(&sc, &SymMatrix::diag(&[1.5])).unwrap_err();
        assert!(matches!(err, Error::ConstraintViolation { side: Bound::Upper, .. }));
        assert!(matches!(rate_no_prefix(&sc, &SymMatrix::zeros(2)), Err(Error::Shape(_))));
    }

    #[test]
    fn zero_constraint_is_degenerate() {
        let sc = WiretapScenario::new(row(&[1.0, 2.0]), row(&[0.0, 1.0]), SymMatrix::zeros(2)).unwrap();
        let red = reduce_rank_deficient(&sc).unwrap();
        assert!(red.reduced.is_none());
        let r = secrecy_capacity(&sc).unwrap();
        assert_eq!(r.value_nats, 0.0);
        assert_eq!(r.b_star, SymMatrix::zeros(2));
    }

    #[test]
    fn axis_aligned_null_space_reduces_to_second_column() {
        let sc = WiretapScenario::new(
            row(&[0.7, 2.0]),
            row(&[5.0, 1.0]),
            SymMatrix::diag(&[0.0, 4.0]),
        )
        .unwrap();
        let red = reduce_rank_deficient(&sc).unwrap();
        let inner = red.reduced.as_ref().unwrap();
        assert_eq!(inner.transmit_dim(), 1);
        assert!((inner.s()[(0, 0)] - 4.0).abs() < 1e-14);
        // basis vector is ±e₂, so gains are ± the second columns
        assert!((inner.h_legit()[(0, 0)].abs() - 2.0).abs() < 1e-14);
        assert!((inner.h_eaves()[(0, 0)].abs() - 1.0).abs() < 1e-14);
        let c = secrecy_capacity(&sc).unwrap();
        assert!((c.value_nats - 0.5 * (17.0f64 / 5.0).ln()).abs() < 1e-12);
        let expect_b = SymMatrix::diag(&[0.0, 4.0]);
        assert!(c.b_star.sub(&expect_b).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn full_rank_passthrough() {
        let sc = scalar(1.0, 1.0, 2.0);
        let red = reduce_rank_deficient(&sc).unwrap();
        assert!(red.full_rank);
        assert_eq!(red.reduced.unwrap(), sc);
    }
}
