//! Secrecy capacity regions of the two-receiver broadcast channel where each
//! message must stay hidden from the other receiver.
//!
//! Under a matrix constraint the region is a rectangle whose corner comes from
//! a single pencil spectrum. Under a total power constraint it is the union of
//! those rectangles over all admissible `S`, which is sampled here. Zero-forcing
//! and (non-secret) dirty-paper regions are provided for comparison.

mod frontier;
mod sdpc;
mod union;
mod zf;

pub use frontier::{pareto_front, RatePair, RateRegion};
pub use sdpc::{mi_identities, precoder, sdpc_rates, MutualInformation, SdpcChoice};
pub use union::{dpc_region, region_total_power};
pub use zf::{largest_supported_below, water_filling, zf_points, zf_region, ZfPoint};

use crate::error::{Error, Result};
use crate::matcore::{gen_eig_pencil, GeneralMatrix, SymMatrix, PSD_TOL};
use crate::wiretap::{
    build_pencil, capacity_from_spectrum, reduce_rank_deficient, reverse_capacity_from_spectrum,
    WiretapScenario,
};

#[derive(Debug, Clone, PartialEq)]
pub enum PowerConstraint {
    /// `E[XXᵀ] ⪯ S`
    Matrix(SymMatrix),
    /// `tr E[XXᵀ] ≤ P`
    TotalPower(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BroadcastScenario {
    h1: GeneralMatrix,
    h2: GeneralMatrix,
    constraint: PowerConstraint,
    tol: f64,
}

impl BroadcastScenario {
    pub fn new(h1: GeneralMatrix, h2: GeneralMatrix, constraint: PowerConstraint) -> Result<Self> {
        Self::with_tolerance(h1, h2, constraint, PSD_TOL)
    }

    pub fn with_tolerance(
        h1: GeneralMatrix,
        h2: GeneralMatrix,
        constraint: PowerConstraint,
        tol: f64,
    ) -> Result<Self> {
        if h1.cols() != h2.cols() {
            return Err(Error::Shape(format!(
                "H1 has {} columns but H2 has {}",
                h1.cols(),
                h2.cols()
            )));
        }
        if h1.cols() == 0 || h1.rows() == 0 || h2.rows() == 0 {
            return Err(Error::Shape("channel matrices must be non-empty".into()));
        }
        match &constraint {
            PowerConstraint::Matrix(s) => {
                // validates dimension and PSD-ness
                WiretapScenario::with_tolerance(h1.clone(), h2.clone(), s.clone(), tol)?;
            }
            PowerConstraint::TotalPower(p) => {
                if !(p.is_finite() && *p > 0.0) {
                    return Err(Error::Invalid(format!("total power must be positive, got {p}")));
                }
            }
        }
        Ok(Self {
            h1,
            h2,
            constraint,
            tol,
        })
    }

    pub fn h1(&self) -> &GeneralMatrix {
        &self.h1
    }

    pub fn h2(&self) -> &GeneralMatrix {
        &self.h2
    }

    pub fn constraint(&self) -> &PowerConstraint {
        &self.constraint
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn transmit_dim(&self) -> usize {
        self.h1.cols()
    }

    pub fn matrix_constraint(&self) -> Option<&SymMatrix> {
        match &self.constraint {
            PowerConstraint::Matrix(s) => Some(s),
            PowerConstraint::TotalPower(_) => None,
        }
    }

    fn require_matrix(&self) -> Result<&SymMatrix> {
        self.matrix_constraint()
            .ok_or_else(|| Error::Invalid("operation needs a matrix power constraint".into()))
    }

    fn require_total_power(&self) -> Result<f64> {
        match self.constraint {
            PowerConstraint::TotalPower(p) => Ok(p),
            PowerConstraint::Matrix(_) => Err(Error::Invalid(
                "operation needs a total power constraint".into(),
            )),
        }
    }

    /// Wiretap scenario for message 1 (receiver 1 legitimate, receiver 2
    /// eavesdropping).
    pub fn toward_receiver1(&self) -> Result<WiretapScenario> {
        let s = self.require_matrix()?;
        WiretapScenario::with_tolerance(self.h1.clone(), self.h2.clone(), s.clone(), self.tol)
    }

    /// Wiretap scenario for message 2.
    pub fn toward_receiver2(&self) -> Result<WiretapScenario> {
        Ok(self.toward_receiver1()?.swapped())
    }

    /// Same channels under a matrix constraint.
    pub fn with_matrix(&self, s: SymMatrix) -> Result<Self> {
        Self::with_tolerance(
            self.h1.clone(),
            self.h2.clone(),
            PowerConstraint::Matrix(s),
            self.tol,
        )
    }
}

/// Both secrecy capacities under the matrix constraint `s`, read off one
/// pencil spectrum.
pub fn rectangle_corner(h1: &GeneralMatrix, h2: &GeneralMatrix, s: &SymMatrix) -> Result<RatePair> {
    let sc = WiretapScenario::new(h1.clone(), h2.clone(), s.clone())?;
    corner_of(&sc)
}

fn corner_of(sc: &WiretapScenario) -> Result<RatePair> {
    let red = reduce_rank_deficient(sc)?;
    let Some(inner) = red.reduced else {
        return Ok(RatePair::new(0.0, 0.0));
    };
    let (a, b) = build_pencil(&inner)?;
    let spectrum = gen_eig_pencil(&a, &b)?;
    Ok(RatePair::new(
        capacity_from_spectrum(&spectrum),
        reverse_capacity_from_spectrum(&spectrum),
    ))
}

/// Rectangular secrecy capacity region under a matrix constraint.
pub fn region_matrix_constraint(sc: &BroadcastScenario) -> Result<RateRegion> {
    let corner = corner_of(&sc.toward_receiver1()?)?.clamped();
    Ok(RateRegion::Rectangle { corner })
}
