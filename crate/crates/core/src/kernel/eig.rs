use crate::error::{Error, Result};
use crate::kernel::matrix::{ComplexMatrix, C64, ZERO};

/// Hermiticity tolerance `max |a_ij − conj(a_ji)|` accepted by the eigensolver.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Off-diagonal threshold at which a Jacobi sweep counts as converged.
pub const SWEEP_THRESHOLD: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

/// Eigendecomposition `A = V · diag(λ) · V*` of a Hermitian matrix.
///
/// Eigenvalues are sorted in descending order; column `k` of `vectors` belongs
/// to `values[k]`. Within a degenerate cluster the columns are an arbitrary
/// orthonormal basis of the eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Eigenvector `k` as a column.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V · diag(λ) · V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let v = &self.vectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..self.values.len()).map(|k| v[(r, k)] * self.values[k] * v[(c, k)].conj()).sum()
        })
    }
}

/// Tunable tolerances for the spectral routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigConfig {
    pub hermitian_tol: f64,
    pub sweep_threshold: f64,
    pub max_sweeps: usize,
}

impl Default for EigConfig {
    fn default() -> Self {
        Self { hermitian_tol: HERMITIAN_TOL, sweep_threshold: SWEEP_THRESHOLD, max_sweeps: MAX_SWEEPS }
    }
}

pub fn hermitian_eig(a: &ComplexMatrix) -> Result<Spectrum> {
    hermitian_eig_with(a, &EigConfig::default())
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` with a diagonal
/// unitary and then applies the real symmetric Jacobi rotation, so the
/// combined 2×2 unitary is `[[c, s], [−s·e^{−iφ}, c·e^{−iφ}]]`.
pub fn hermitian_eig_with(a: &ComplexMatrix, cfg: &EigConfig) -> Result<Spectrum> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigensolver needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let deviation = a.hermitian_deviation();
    if deviation > cfg.hermitian_tol {
        return Err(Error::NotHermitian { deviation, tolerance: cfg.hermitian_tol });
    }
    let n = a.dim();
    let mut m = a.hermitian_part();
    for i in 0..n {
        m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);

    let scale = m.frobenius_norm().max(1.0);
    let threshold = cfg.sweep_threshold * scale;
    let mut converged = false;
    for _sweep in 0..cfg.max_sweeps {
        if off_diagonal_max(&m) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_max(&m) > threshold {
        return Err(Error::NoConvergence(cfg.max_sweeps));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable sort keeps the output deterministic for ties
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_max(m: &ComplexMatrix) -> f64 {
    let n = m.dim();
    let mut worst = 0.0_f64;
    for r in 0..n {
        for c in (r + 1)..n {
            worst = worst.max(m[(r, c)].norm());
        }
    }
    worst
}

fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let g = apq.norm();
    if g < f64::MIN_POSITIVE * 1e4 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase = apq / g;

    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let conj_phase = phase.conj();
    let u_pp = C64::new(c, 0.0);
    let u_pq = C64::new(s, 0.0);
    let u_qp = conj_phase * (-s);
    let u_qq = conj_phase * c;

    let n = m.dim();
    // M ← M U
    for r in 0..n {
        let mp = m[(r, p)];
        let mq = m[(r, q)];
        m[(r, p)] = mp * u_pp + mq * u_qp;
        m[(r, q)] = mp * u_pq + mq * u_qq;
    }
    // M ← U* M
    for c in 0..n {
        let mp = m[(p, c)];
        let mq = m[(q, c)];
        m[(p, c)] = u_pp.conj() * mp + u_qp.conj() * mq;
        m[(q, c)] = u_pq.conj() * mp + u_qq.conj() * mq;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    // V ← V U
    for r in 0..n {
        let vp = v[(r, p)];
        let vq = v[(r, q)];
        v[(r, p)] = vp * u_pp + vq * u_qp;
        v[(r, q)] = vp * u_pq + vq * u_qq;
    }
}

/// True iff the smallest eigenvalue of the Hermitian matrix `a` is `≥ −tol`.
pub fn is_psd(a: &ComplexMatrix, tol: f64) -> Result<bool> {
    Ok(hermitian_eig(a)?.min() >= -tol)
}

/// Applies a real function to the spectrum: `V · diag(f(λ)) · V*`.
pub fn spectral_map(spec: &Spectrum, f: impl Fn(f64) -> f64) -> ComplexMatrix {
    Spectrum { values: spec.values.iter().map(|&x| f(x)).collect(), vectors: spec.vectors.clone() }
        .reconstruct()
}
