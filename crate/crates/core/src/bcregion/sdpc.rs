//! Secret dirty-paper coding with `U1 ~ N(0, B)` carrying message 1 and
//! `U2 ~ N(0, S − B)` carrying message 2; receiver 1's auxiliary is
//! `V1 = U1 + F·U2` with the interference-cancelling precoder `F`.

use crate::error::Result;
use crate::matcore::{logdet, lu_det, spd_inverse, GeneralMatrix, SymMatrix};
use crate::wiretap::{rate_artificial_noise, rate_no_prefix};

use super::{BroadcastScenario, RatePair};

/// A feasible S-DPC covariance split together with its precoder.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpcChoice {
    pub b: SymMatrix,
    pub f: GeneralMatrix,
}

impl SdpcChoice {
    pub fn new(sc: &BroadcastScenario, b: SymMatrix) -> Result<Self> {
        sc.toward_receiver1()?.check_feasible(&b)?;
        let f = precoder(&b, sc.h1())?;
        Ok(Self { b, f })
    }
}

/// `F = B·H1ᵀ·(I + H1·B·H1ᵀ)⁻¹·H1`.
pub fn precoder(b: &SymMatrix, h1: &GeneralMatrix) -> Result<GeneralMatrix> {
    let inner = spd_inverse(&b.sandwich(h1)?.add_identity())?;
    let bh = b.matmul(&h1.transpose())?;
    bh.matmul(inner.as_general())?.matmul(h1)
}

/// Raw S-DPC rate pair for covariance `B` of message 1 (not clamped).
pub fn sdpc_rates(sc: &BroadcastScenario, b: &SymMatrix) -> Result<RatePair> {
    let fwd = sc.toward_receiver1()?;
    let r1 = rate_no_prefix(&fwd, b)?;
    // message 2 sees U1 as artificial noise
    let r2 = rate_artificial_noise(&fwd.swapped(), b)?;
    Ok(RatePair::new(r1, r2))
}

/// The five mutual-information terms behind the S-DPC rates, in nats.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    /// `I(V1;Y1) − I(V1;V2) = ½log|I+H1BH1ᵀ|`
    pub v1_y1_net: f64,
    /// `I(V1;Y2|V2) = ½log|I+H2BH2ᵀ|`
    pub v1_y2_given_v2: f64,
    /// `I(V1,V2;Y1) = ½log|I+H1SH1ᵀ|`
    pub v1v2_y1: f64,
    /// `I(V2;V1,Y1) = ½log(|I+H1SH1ᵀ|/|I+H1BH1ᵀ|)`
    pub v2_v1y1: f64,
    /// `I(V2;Y2) = ½log(|I+H2SH2ᵀ|/|I+H2BH2ᵀ|)`
    pub v2_y2: f64,
}

impl MutualInformation {
    pub fn rates(&self) -> RatePair {
        RatePair::new(
            self.v1_y1_net - self.v1_y2_given_v2,
            self.v2_y2 - self.v2_v1y1,
        )
    }
}

/// `½log det(M₁·M₂⁻¹)` through an LU determinant of the nonsymmetric product.
fn half_log_ratio(num: &SymMatrix, den: &SymMatrix) -> Result<f64> {
    let prod = num.matmul(spd_inverse(den)?.as_general())?;
    Ok(0.5 * lu_det(&prod)?.ln())
}

pub fn mi_identities(sc: &BroadcastScenario, b: &SymMatrix) -> Result<MutualInformation> {
    let fwd = sc.toward_receiver1()?;
    fwd.check_feasible(b)?;
    let s = fwd.s();
    let k1b = b.sandwich(sc.h1())?.add_identity();
    let k2b = b.sandwich(sc.h2())?.add_identity();
    let k1s = s.sandwich(sc.h1())?.add_identity();
    let k2s = s.sandwich(sc.h2())?.add_identity();
    Ok(MutualInformation {
        v1_y1_net: 0.5 * logdet(&k1b)?,
        v1_y2_given_v2: 0.5 * logdet(&k2b)?,
        v1v2_y1: 0.5 * logdet(&k1s)?,
        v2_v1y1: half_log_ratio(&k1s, &k1b)?,
        v2_y2: half_log_ratio(&k2s, &k2b)?,
    })
}
