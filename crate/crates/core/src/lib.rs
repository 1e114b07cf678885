//! Secrecy capacity regions of the two-receiver MIMO Gaussian broadcast
//! channel with confidential messages.
//!
//! Under a matrix power constraint `E[XXᵀ] ⪯ S` the region is a rectangle
//! whose corner is read off the generalized eigenvalues of the pencil
//! `(I + S½H₁ᵀH₁S½, I + S½H₂ᵀH₂S½)`. This crate computes that closed form,
//! the optimal covariance that achieves it, total-power regions as sampled
//! unions of rectangles, zero-forcing and dirty-paper comparison regions, and
//! numerical certificates (grid oracles, KKT multipliers, enhanced noise) that
//! cross-check the closed form.
//!
//! All rates are in nats.

pub mod bcregion;
pub mod enhance;
pub mod error;
pub mod matcore;
pub mod random;
pub mod sampling;
pub mod wiretap;

pub use bcregion::{BroadcastScenario, PowerConstraint, RatePair, RateRegion};
pub use error::{Bound, Error, Result};
pub use matcore::{GeneralMatrix, PencilSpectrum, SymMatrix};
pub use sampling::Sampling;
pub use wiretap::{CapacityResult, WiretapScenario};
