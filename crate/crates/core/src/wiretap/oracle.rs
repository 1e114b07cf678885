//! Exhaustive grid oracle for the covariance programs.
//!
//! Every feasible `B` (with `0 ⪯ B ⪯ S`) can be written `S½·Q·diag(c)·Qᵀ·S½`
//! with `Q` a rotation and `c ∈ [0,1]^t`. The oracle sweeps a deterministic
//! Givens-angle net for `Q` and a uniform grid for `c`, then zooms in around
//! the best grid point. It evaluates the objectives straight from their
//! log-determinant definitions and never touches the pencil, so it stays an
//! independent check on the closed form. Its value is a lower bound on the
//! true maximum.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::matcore::{psd_sqrt, GeneralMatrix, SymMatrix};

use super::WiretapScenario;

const MAX_ORACLE_DIM: usize = 3;
const ZOOM_ROUNDS: usize = 4;
const ZOOM_HALF_WIDTH: i32 = 2;
const MAX_RECENTRES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `½log|I+H_LBH_Lᵀ| − ½log|I+H_EBH_Eᵀ|`
    NoPrefix,
    /// `½log(|I+H_LSH_Lᵀ|/|I+H_LBH_Lᵀ|) − ½log(|I+H_ESH_Eᵀ|/|I+H_EBH_Eᵀ|)`
    ArtificialNoise,
}

#[derive(Debug, Clone)]
pub struct GridOptimum {
    pub value: f64,
    pub b: SymMatrix,
}

/// `log|I + K·diag(c)·Kᵀ|` by an in-place Cholesky on `buf`.
fn logdet_i_plus(k: &GeneralMatrix, c: &[f64], buf: &mut Vec<f64>) -> f64 {
    let r = k.rows();
    buf.clear();
    buf.resize(r * r, 0.0);
    for i in 0..r {
        let ki = k.row(i);
        for j in 0..=i {
            let kj = k.row(j);
            let mut v = if i == j { 1.0 } else { 0.0 };
            for ((a, b), w) in ki.iter().zip(kj).zip(c) {
                v += a * w * b;
            }
            buf[i * r + j] = v;
        }
    }
    let mut acc = 0.0;
    for j in 0..r {
        let mut d = buf[j * r + j];
        for p in 0..j {
            d -= buf[j * r + p] * buf[j * r + p];
        }
        let d = d.sqrt();
        acc += d.ln();
        buf[j * r + j] = d;
        for i in (j + 1)..r {
            let mut v = buf[i * r + j];
            for p in 0..j {
                v -= buf[i * r + p] * buf[j * r + p];
            }
            buf[i * r + j] = v / d;
        }
    }
    2.0 * acc
}

/// `G₁₂(a₀)·G₁₃(a₁)·G₂₃(a₂)` (only the leading factors for `t < 3`).
fn rotation(t: usize, angles: &[f64]) -> GeneralMatrix {
    let mut q = GeneralMatrix::identity(t);
    let planes: &[(usize, usize)] = match t {
        2 => &[(0, 1)],
        3 => &[(0, 1), (0, 2), (1, 2)],
        _ => &[],
    };
    for (&(i, j), &a) in planes.iter().zip(angles) {
        let (s, c) = a.sin_cos();
        let mut g = GeneralMatrix::identity(t);
        g[(i, i)] = c;
        g[(i, j)] = -s;
        g[(j, i)] = s;
        g[(j, j)] = c;
        q = q.matmul(&g).expect("square factors");
    }
    q
}

/// Angle axes `(start, span, closed)` for each Givens angle; periodic axes
/// are half-open.
fn angle_axes(t: usize) -> Vec<(f64, f64, bool)> {
    match t {
        2 => vec![(0.0, PI, false)],
        3 => vec![(0.0, 2.0 * PI, false), (-0.5 * PI, PI, true), (0.0, PI, false)],
        _ => vec![],
    }
}

struct Evaluator<'a> {
    sc: &'a WiretapScenario,
    root: SymMatrix,
    objective: Objective,
    ld_full_legit: f64,
    ld_full_eaves: f64,
}

impl<'a> Evaluator<'a> {
    fn new(sc: &'a WiretapScenario, objective: Objective) -> Result<Self> {
        let root = psd_sqrt(sc.s())?;
        let t = sc.transmit_dim();
        let ones = vec![1.0; t];
        let mut buf = Vec::new();
        let kl = sc.h_legit().matmul(root.as_general())?;
        let ke = sc.h_eaves().matmul(root.as_general())?;
        Ok(Self {
            ld_full_legit: logdet_i_plus(&kl, &ones, &mut buf),
            ld_full_eaves: logdet_i_plus(&ke, &ones, &mut buf),
            sc,
            root,
            objective,
        })
    }

    /// Channel images `(H_L·S½·Q, H_E·S½·Q)` for a rotation.
    fn images(&self, q: &GeneralMatrix) -> (GeneralMatrix, GeneralMatrix) {
        let w = self.root.matmul(q).expect("t x t");
        (
            self.sc.h_legit().matmul(&w).expect("cols = t"),
            self.sc.h_eaves().matmul(&w).expect("cols = t"),
        )
    }

    fn value(&self, kl: &GeneralMatrix, ke: &GeneralMatrix, c: &[f64], buf: &mut Vec<f64>) -> f64 {
        let ll = logdet_i_plus(kl, c, buf);
        let le = logdet_i_plus(ke, c, buf);
        match self.objective {
            Objective::NoPrefix => 0.5 * (ll - le),
            Objective::ArtificialNoise => {
                0.5 * (self.ld_full_legit - ll) - 0.5 * (self.ld_full_eaves - le)
            }
        }
    }

    fn covariance(&self, angles: &[f64], c: &[f64]) -> SymMatrix {
        let t = c.len();
        let q = rotation(t, angles);
        let w = self.root.matmul(&q).expect("t x t");
        SymMatrix::diag(c).sandwich(&w).expect("t x t")
    }
}

/// Grid maximum of `objective` over `0 ⪯ B ⪯ S`, for `t ≤ 3`.
///
/// `resolution` is the number of grid intervals per unit of power fraction
/// and per π of rotation angle. The coarse grid costs
/// `O(resolution^(t + t(t−1)/2))` objective evaluations.
pub fn grid_maximum(
    sc: &WiretapScenario,
    resolution: usize,
    objective: Objective,
) -> Result<GridOptimum> {
    let t = sc.transmit_dim();
    if t > MAX_ORACLE_DIM {
        return Err(Error::UnsupportedDimension {
            dim: t,
            reason: "the grid oracle handles at most 3 transmit antennas",
        });
    }
    let res = resolution.max(1);
    let eval = Evaluator::new(sc, objective)?;
    let mut buf = Vec::new();

    let axes = angle_axes(t);
    let angle_grids: Vec<Vec<f64>> = axes
        .iter()
        .map(|&(start, span, closed)| {
            let n = ((res as f64) * span / PI).round().max(1.0) as usize;
            let count = if closed { n + 1 } else { n };
            (0..count).map(|i| start + span * i as f64 / n as f64).collect()
        })
        .collect();
    let c_levels: Vec<f64> = (0..=res).map(|i| i as f64 / res as f64).collect();

    let mut best_value = f64::NEG_INFINITY;
    let mut best_angles = vec![0.0; axes.len()];
    let mut best_c = vec![0.0; t];

    let mut angles = vec![0.0; axes.len()];
    let mut c = vec![0.0; t];
    for_each_index(&angle_grids.iter().map(Vec::len).collect::<Vec<_>>(), |ai| {
        for (k, &i) in ai.iter().enumerate() {
            angles[k] = angle_grids[k][i];
        }
        let (kl, ke) = eval.images(&rotation(t, &angles));
        for_each_index(&vec![c_levels.len(); t], |ci| {
            for (k, &i) in ci.iter().enumerate() {
                c[k] = c_levels[i];
            }
            let v = eval.value(&kl, &ke, &c, &mut buf);
            if v > best_value {
                best_value = v;
                best_angles.copy_from_slice(&angles);
                best_c.copy_from_slice(&c);
            }
        });
    });

    // pattern search around the incumbent: recentre while it improves, then
    // halve the step
    let mut step_angle = PI / res as f64 / 2.0;
    let mut step_c = 1.0 / res as f64 / 2.0;
    let n_params = axes.len() + t;
    let width = (2 * ZOOM_HALF_WIDTH + 1) as usize;
    for _ in 0..ZOOM_ROUNDS {
        for _ in 0..MAX_RECENTRES {
            let before = best_value;
            let centre_angles = best_angles.clone();
            let centre_c = best_c.clone();
            for_each_index(&vec![width; n_params], |idx| {
                let off = |i: usize| idx[i] as i32 - ZOOM_HALF_WIDTH;
                for k in 0..axes.len() {
                    angles[k] = centre_angles[k] + off(k) as f64 * step_angle;
                }
                for k in 0..t {
                    c[k] = (centre_c[k] + off(axes.len() + k) as f64 * step_c).clamp(0.0, 1.0);
                }
                let (kl, ke) = eval.images(&rotation(t, &angles));
                let v = eval.value(&kl, &ke, &c, &mut buf);
                if v > best_value {
                    best_value = v;
                    best_angles.copy_from_slice(&angles);
                    best_c.copy_from_slice(&c);
                }
            });
            if best_value <= before {
                break;
            }
        }
        step_angle /= 2.0;
        step_c /= 2.0;
    }

    Ok(GridOptimum {
        value: best_value,
        b: eval.covariance(&best_angles, &best_c),
    })
}

/// Grid lower bound on the secrecy capacity via the no-prefix objective.
pub fn brute_force_capacity(sc: &WiretapScenario, resolution: usize) -> Result<f64> {
    Ok(grid_maximum(sc, resolution, Objective::NoPrefix)?.value)
}

/// Odometer over the Cartesian product `0..dims[0] × 0..dims[1] × …`.
fn for_each_index(dims: &[usize], mut f: impl FnMut(&[usize])) {
    if dims.iter().any(|&d| d == 0) {
        return;
    }
    let mut idx = vec![0usize; dims.len()];
    loop {
        f(&idx);
        let mut k = 0;
        loop {
            if k == dims.len() {
                return;
            }
            idx[k] += 1;
            if idx[k] < dims[k] {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
