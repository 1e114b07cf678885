use crate::error::{Error, Result};

use super::matrix::{GeneralMatrix, SymMatrix};

/// Default relative tolerance for PSD clamping and order tests.
pub const PSD_TOL: f64 = 1e-9;

/// Jacobi stops once the off-diagonal Frobenius norm drops below this
/// fraction of the input norm.
const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Eigenvalues below `-PSD_REJECT_TOL·‖A‖` make a matrix "not PSD" for
/// [`psd_sqrt`]; anything above is clamped to zero.
const PSD_REJECT_TOL: f64 = 1e-6;

/// Eigen-decomposition `A = Q·diag(values)·Qᵀ`, values sorted descending.
#[derive(Debug, Clone)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: GeneralMatrix,
}

impl SymEig {
    pub fn min_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Rebuilds `Q·diag(f(λ))·Qᵀ`.
    pub fn recompose(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let q = &self.vectors;
        let n = q.rows();
        let d: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        SymMatrix::from_fn(n, |i, j| (0..n).map(|k| q[(i, k)] * d[k] * q[(j, k)]).sum())
    }
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
///
/// Sweeps the upper triangle row by row, annihilating each off-diagonal
/// entry with a plane rotation. Deterministic; intended for the small
/// dimensions used here (≲ 10).
pub fn sym_eig(a: &SymMatrix) -> Result<SymEig> {
    let n = a.dim();
    let mut m = a.as_general().clone();
    let mut q = GeneralMatrix::identity(n);
    let scale = a.frobenius_norm();
    let target = JACOBI_REL_TOL * scale;

    let off = |m: &GeneralMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&m) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for r in (p + 1)..n {
                let apq = m[(p, r)];
                if apq == 0.0 {
                    continue;
                }
                let tau = (m[(r, r)] - m[(p, p)]) / (2.0 * apq);
                let t = tau.signum() / (tau.abs() + tau.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                // columns p, r
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkr = m[(k, r)];
                    m[(k, p)] = c * mkp - s * mkr;
                    m[(k, r)] = s * mkp + c * mkr;
                }
                // rows p, r
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mrk = m[(r, k)];
                    m[(p, k)] = c * mpk - s * mrk;
                    m[(r, k)] = s * mpk + c * mrk;
                }
                m[(p, r)] = 0.0;
                m[(r, p)] = 0.0;
                for k in 0..n {
                    let qkp = q[(k, p)];
                    let qkr = q[(k, r)];
                    q[(k, p)] = c * qkp - s * qkr;
                    q[(k, r)] = s * qkp + c * qkr;
                }
            }
        }
    }
    if !converged {
        let residual = off(&m);
        if residual > target {
            return Err(Error::NoConvergence { residual });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = q.select_columns(&order);
    Ok(SymEig { values, vectors })
}

pub fn min_eigenvalue(a: &SymMatrix) -> Result<f64> {
    Ok(sym_eig(a)?.min_value())
}

/// Symmetric PSD square root. Slightly negative eigenvalues are clamped to 0.
pub fn psd_sqrt(a: &SymMatrix) -> Result<SymMatrix> {
    let eig = sym_eig(a)?;
    let lmin = eig.min_value();
    if lmin < -PSD_REJECT_TOL * a.frobenius_norm() {
        return Err(Error::NotPsd {
            min_eigenvalue: lmin,
        });
    }
    Ok(eig.recompose(|l| l.max(0.0).sqrt()))
}

/// Projects onto the PSD cone by zeroing negative eigenvalues. Returns the
/// projection and the Frobenius norm of what was removed.
pub fn psd_clamp(a: &SymMatrix) -> Result<(SymMatrix, f64)> {
    let eig = sym_eig(a)?;
    let removed = eig
        .values
        .iter()
        .filter(|l| **l < 0.0)
        .map(|l| l * l)
        .sum::<f64>()
        .sqrt();
    Ok((eig.recompose(|l| l.max(0.0)), removed))
}

/// Lower-triangular `L` with `L·Lᵀ = A`.
pub fn cholesky(a: &SymMatrix) -> Result<GeneralMatrix> {
    let n = a.dim();
    let floor = 1e-12 * a.frobenius_norm();
    let mut l = GeneralMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > floor) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: d });
        }
        let d = d.sqrt();
        l[(j, j)] = d;
        for i in (j + 1)..n {
            let mut v = a[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / d;
        }
    }
    Ok(l)
}

/// Natural log-determinant of a positive definite matrix, `2·Σ log Lᵢᵢ`.
pub fn logdet(a: &SymMatrix) -> Result<f64> {
    let l = cholesky(a)?;
    Ok(2.0 * (0..a.dim()).map(|i| l[(i, i)].ln()).sum::<f64>())
}

/// Solves `L·X = B` for lower-triangular `L`.
pub fn solve_lower(l: &GeneralMatrix, b: &GeneralMatrix) -> GeneralMatrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in 0..n {
            let mut v = x[(i, c)];
            for k in 0..i {
                v -= l[(i, k)] * x[(k, c)];
            }
            x[(i, c)] = v / l[(i, i)];
        }
    }
    x
}

/// Solves `Lᵀ·X = B` for lower-triangular `L`.
pub fn solve_lower_transpose(l: &GeneralMatrix, b: &GeneralMatrix) -> GeneralMatrix {
    let n = l.rows();
    let mut x = b.clone();
    for c in 0..b.cols() {
        for i in (0..n).rev() {
            let mut v = x[(i, c)];
            for k in (i + 1)..n {
                v -= l[(k, i)] * x[(k, c)];
            }
            x[(i, c)] = v / l[(i, i)];
        }
    }
    x
}

/// Inverse of a positive definite matrix through its Cholesky factor.
pub fn spd_inverse(a: &SymMatrix) -> Result<SymMatrix> {
    let l = cholesky(a)?;
    let linv = solve_lower(&l, &GeneralMatrix::identity(a.dim()));
    Ok(linv.gram())
}

/// Generalized eigen-decomposition of a definite pencil `(A, B)`.
#[derive(Debug, Clone)]
pub struct PencilSpectrum {
    /// Generalized eigenvalues, descending, all positive.
    pub phi: Vec<f64>,
    /// Eigenvector matrix with `Gᵀ·A·G = diag(phi)` and `Gᵀ·B·G = I`.
    pub g: GeneralMatrix,
    /// Number of `phi` strictly greater than 1.
    pub rho: usize,
}

impl PencilSpectrum {
    pub fn empty() -> Self {
        Self {
            phi: Vec::new(),
            g: GeneralMatrix::zeros(0, 0),
            rho: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }
}

/// Solves `A·g = φ·B·g` for positive definite `A`, `B`.
///
/// Reduces through `B = L·Lᵀ` to the standard problem on `L⁻¹·A·L⁻ᵀ`, then
/// maps eigenvectors back with `G = L⁻ᵀ·Q`.
pub fn gen_eig_pencil(a: &SymMatrix, b: &SymMatrix) -> Result<PencilSpectrum> {
    if a.dim() != b.dim() {
        return Err(Error::shape(format!(
            "pencil members have dimensions {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    cholesky(a)?;
    let l = cholesky(b)?;
    let x = solve_lower(&l, a.as_general());
    let c = solve_lower(&l, &x.transpose()).symmetrize()?;
    let eig = sym_eig(&c)?;
    let g = solve_lower_transpose(&l, &eig.vectors);
    let rho = eig.values.iter().filter(|&&p| p > 1.0).count();
    Ok(PencilSpectrum {
        phi: eig.values,
        g,
        rho,
    })
}

/// `A ⪯ B` in the semidefinite order: `λ_min(B − A) ≥ −tol·max(1, ‖B − A‖)`.
pub fn psd_order_leq(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<bool> {
    Ok(psd_order_margin(a, b, tol)? >= 0.0)
}

/// Signed slack of `A ⪯ B`: `λ_min(B − A) + tol·max(1, ‖B − A‖)`.
pub fn psd_order_margin(a: &SymMatrix, b: &SymMatrix, tol: f64) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::shape(format!(
            "cannot order {}x{} against {}x{}",
            a.dim(),
            a.dim(),
            b.dim(),
            b.dim()
        )));
    }
    let d = b.sub(a)?;
    let lmin = min_eigenvalue(&d)?;
    Ok(lmin + tol * d.frobenius_norm().max(1.0))
}

/// LU factorization with partial pivoting, stored compactly.
struct Lu {
    lu: GeneralMatrix,
    perm: Vec<usize>,
    sign: f64,
    singular: bool,
}

fn lu_factor(m: &GeneralMatrix) -> Result<Lu> {
    if !m.is_square() {
        return Err(Error::shape(format!(
            "LU needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let mut singular = false;
    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, lu[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax == 0.0 {
            singular = true;
            continue;
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in (k + 1)..n {
                lu[(i, j)] -= f * lu[(k, j)];
            }
        }
    }
    Ok(Lu {
        lu,
        perm,
        sign,
        singular,
    })
}

/// Determinant of a general square matrix by partial-pivot LU.
pub fn lu_det(m: &GeneralMatrix) -> Result<f64> {
    let f = lu_factor(m)?;
    if f.singular {
        return Ok(0.0);
    }
    Ok(f.sign * (0..m.rows()).map(|i| f.lu[(i, i)]).product::<f64>())
}

/// Inverse of a general square matrix. Fails when a pivot falls below
/// `n·ε·‖M‖`.
pub fn inverse(m: &GeneralMatrix) -> Result<GeneralMatrix> {
    let f = lu_factor(m)?;
    let n = m.rows();
    let floor = n as f64 * f64::EPSILON * m.max_abs();
    if f.singular || (0..n).any(|i| f.lu[(i, i)].abs() <= floor) {
        return Err(Error::Singular("LU pivot below working precision".into()));
    }
    let mut inv = GeneralMatrix::zeros(n, n);
    for c in 0..n {
        let mut x: Vec<f64> = (0..n).map(|i| if f.perm[i] == c { 1.0 } else { 0.0 }).collect();
        for i in 0..n {
            for k in 0..i {
                x[i] -= f.lu[(i, k)] * x[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                x[i] -= f.lu[(i, k)] * x[k];
            }
            x[i] /= f.lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, c)] = x[i];
        }
    }
    Ok(inv)
}

/// Singular value decomposition `H = U·diag(σ)·Vᵀ` with `U` (r×r) and `V`
/// (c×c) orthogonal and `min(r, c)` singular values, descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: GeneralMatrix,
    pub singular_values: Vec<f64>,
    pub v: GeneralMatrix,
}

/// SVD through the eigen-decomposition of `Hᵀ·H`. Left vectors for zero
/// singular values are completed by Gram–Schmidt against the standard basis.
pub fn svd(h: &GeneralMatrix) -> Result<Svd> {
    let (r, c) = h.shape();
    let k = r.min(c);
    let eig = sym_eig(&h.gram())?;
    let v = eig.vectors;
    let sigma: Vec<f64> = eig.values[..k].iter().map(|l| l.max(0.0).sqrt()).collect();
    let cutoff = 1e-12 * sigma.first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);

    let mut ucols: Vec<Vec<f64>> = Vec::with_capacity(r);
    for (j, &s) in sigma.iter().enumerate() {
        if s <= cutoff {
            break;
        }
        let hv = h.matmul(&GeneralMatrix::from_columns(c, &[v.column(j)]))?;
        ucols.push(hv.column(0).iter().map(|x| x / s).collect());
    }
    for e in 0..r {
        if ucols.len() == r {
            break;
        }
        let mut w: Vec<f64> = (0..r).map(|i| if i == e { 1.0 } else { 0.0 }).collect();
        for _ in 0..2 {
            for u in &ucols {
                let d: f64 = u.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= d * ui;
                }
            }
        }
        let nrm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm > 1e-8 {
            ucols.push(w.iter().map(|x| x / nrm).collect());
        }
    }
    Ok(Svd {
        u: GeneralMatrix::from_columns(r, &ucols),
        singular_values: sigma,
        v,
    })
}

/// Orthonormal basis (as columns) of `null(H)`: eigenvectors of `Hᵀ·H` whose
/// eigenvalue is at most `rel_tol·λ_max`.
pub fn null_space(h: &GeneralMatrix, rel_tol: f64) -> Result<GeneralMatrix> {
    let eig = sym_eig(&h.gram())?;
    let lmax = eig.values.first().copied().unwrap_or(0.0).max(0.0);
    let idx: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] <= rel_tol * lmax)
        .collect();
    Ok(eig.vectors.select_columns(&idx))
}

/// Minimum-norm least-squares solution of `A·x ≈ b` via the pseudo-inverse
/// of the normal equations.
pub fn lstsq(a: &GeneralMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if a.rows() != b.len() {
        return Err(Error::shape(format!(
            "{} right-hand entries for {} equations",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    if n == 0 {
        return Ok(Vec::new());
    }
    let ata = a.gram();
    let atb: Vec<f64> = (0..n)
        .map(|j| (0..a.rows()).map(|i| a[(i, j)] * b[i]).sum())
        .collect();
    let eig = sym_eig(&ata)?;
    let cutoff = 1e-13 * eig.values[0].max(f64::MIN_POSITIVE);
    let q = &eig.vectors;
    let mut x = vec![0.0; n];
    for k in 0..n {
        let l = eig.values[k];
        if l <= cutoff {
            continue;
        }
        let coef: f64 = (0..n).map(|i| q[(i, k)] * atb[i]).sum::<f64>() / l;
        for i in 0..n {
            x[i] += coef * q[(i, k)];
        }
    }
    Ok(x)
}
