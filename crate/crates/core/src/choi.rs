//! Representative operators of ucp maps.
//!
//! For a map `T` on `n×n` matrices the matrix elements are
//! `p_(ij)(kl) = (T(e_ij)φ_k, φ_l) = T(e_ij)[l, k]`. The representative
//! operator `ρ_T` on `H ⊗ H` (first factor major) has entries
//!
//! ```text
//! ρ_T[(k,i), (l,j)] = T(e_ij)[k, l] = p_(ij)(lk)
//! ```
//!
//! which is positive exactly when `T` is completely positive, has
//! `partial_trace_second(ρ_T) = T(I)`, and recovers the map through
//! `T(x) = partial_trace_second(ρ_T · (I ⊗ xᵀ))`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{Channel, PSD_TOL, UNITAL_TOL};
use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, kron, partial_trace_second, ComplexMatrix, Spectrum, C64};

/// Eigenvalue cutoff that decides the Kraus rank.
pub const KRAUS_CUTOFF: f64 = 1e-10;
/// Default relative threshold of the Gram-matrix rank test in [`is_extremal_choi`].
pub const EXTREMAL_TOL: f64 = 1e-8;
/// Number of random coefficient draws used for the quadratic-form check.
pub const QUADRATIC_FORM_SAMPLES: usize = 20;
const QUADRATIC_FORM_SEED: u64 = 0x5eed_0fa1;

/// The `n⁴` numbers `p_(ij)(kl)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixElements {
    n: usize,
    values: Vec<C64>,
}

impl MatrixElements {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `p_(ij)(kl)`, zero-based.
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> C64 {
        let n = self.n;
        self.values[((i * n + j) * n + k) * n + l]
    }

    /// `Σ a_i conj(a_j) b_k conj(b_l) p_(ij)(kl)`.
    pub fn quadratic_form(&self, a: &[C64], b: &[C64]) -> C64 {
        let n = self.n;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                let aa = a[i] * a[j].conj();
                for k in 0..n {
                    for l in 0..n {
                        acc += aa * b[k] * b[l].conj() * self.get(i, j, k, l);
                    }
                }
            }
        }
        acc
    }
}

pub fn matrix_elements(t: &Channel) -> Result<MatrixElements> {
    let n = t.dim();
    let mut values = vec![C64::new(0.0, 0.0); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            let image = t.apply(&ComplexMatrix::unit(n, i, j))?;
            for k in 0..n {
                for l in 0..n {
                    values[((i * n + j) * n + k) * n + l] = image[(l, k)];
                }
            }
        }
    }
    Ok(MatrixElements { n, values })
}

/// `ρ_T` together with its positivity and partial-trace diagnostics.
#[derive(Debug, Clone)]
pub struct RepresentativeOperator {
    n: usize,
    matrix: ComplexMatrix,
    spectrum: Spectrum,
    partial_trace_deviation: f64,
}

impl RepresentativeOperator {
    /// Wraps an existing `n²×n²` matrix; it must be Hermitian.
    pub fn from_matrix(n: usize, matrix: ComplexMatrix) -> Result<Self> {
        let pt = partial_trace_second(&matrix, n)?;
        let spectrum = hermitian_eig(&matrix)?;
        let partial_trace_deviation = pt.max_abs_diff(&ComplexMatrix::identity(n));
        Ok(Self { n, matrix, spectrum, partial_trace_deviation })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.spectrum.min())
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `max |partial_trace_second(ρ_T) − I|`.
    pub fn partial_trace_deviation(&self) -> f64 {
        self.partial_trace_deviation
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.spectrum.min() >= -tol
    }

    /// Positive within [`PSD_TOL`] and with partial trace `I` within [`UNITAL_TOL`].
    pub fn is_valid(&self) -> bool {
        self.is_positive(PSD_TOL) && self.partial_trace_deviation < UNITAL_TOL
    }

    /// Kraus operators `A_m` with `T(x) = Σ A_m* x A_m`, one per eigenvalue above `cutoff`.
    ///
    /// An eigenpair `(λ, v)` gives `A[i, k] = conj(√λ · v[(k,i)])`.
    pub fn kraus_operators(&self, cutoff: f64) -> Result<Vec<ComplexMatrix>> {
        let n = self.n;
        let spec = &self.spectrum;
        if spec.min() < -PSD_TOL {
            return Err(Error::NegativeEigenvalue(spec.min()));
        }
        Ok(spec
            .values
            .iter()
            .enumerate()
            .filter(|(_, &lambda)| lambda > cutoff)
            .map(|(m, &lambda)| {
                let root = lambda.sqrt();
                ComplexMatrix::from_fn(n, n, |i, k| (spec.vectors[(k * n + i, m)] * root).conj())
            })
            .collect())
    }
}

pub fn representative_operator(t: &Channel) -> Result<RepresentativeOperator> {
    let n = t.dim();
    let nn = n * n;
    let mut rho = ComplexMatrix::zeros(nn, nn);
    for i in 0..n {
        for j in 0..n {
            let image = t.apply(&ComplexMatrix::unit(n, i, j))?;
            for k in 0..n {
                for l in 0..n {
                    rho[(k * n + i, l * n + j)] = image[(k, l)];
                }
            }
        }
    }
    RepresentativeOperator::from_matrix(n, rho)
}

/// Recovers the channel from its representative operator, in superoperator form.
pub fn reconstruct(rho: &RepresentativeOperator) -> Result<Channel> {
    if rho.partial_trace_deviation >= UNITAL_TOL {
        return Err(Error::Validation(format!(
            "partial trace of the representative operator deviates from I by {:.3e}",
            rho.partial_trace_deviation
        )));
    }
    let n = rho.n;
    let id = ComplexMatrix::identity(n);
    let nn = n * n;
    let mut l = ComplexMatrix::zeros(nn, nn);
    for col in 0..nn {
        let x = ComplexMatrix::unit(n, col % n, col / n);
        let lifted = kron(&id, &x.transpose())?;
        let image = partial_trace_second(&(rho.matrix() * &lifted), n)?.vec_columns();
        for (row, z) in image.into_iter().enumerate() {
            l[(row, col)] = z;
        }
    }
    Channel::superoperator(n, l)
}

/// Outcome of checking the three defining properties of the matrix elements.
#[derive(Debug, Clone, PartialEq)]
pub struct PropertyReport {
    /// Positivity: `ρ_T` is PSD and every sampled quadratic form is non-negative.
    pub a: bool,
    /// Hermitian symmetry `p_(ij)(kl) = conj(p_(ji)(lk))`.
    pub b: bool,
    /// `Σ_i p_(ii)(kl) = δ_kl`.
    pub c: bool,
    /// Literal `p_(ij)(kl) = p_(ji)(lk)` without conjugation; only reported
    /// when every matrix element is real.
    pub b_literal: Option<bool>,
    pub min_eigenvalue: f64,
    pub min_quadratic_form: f64,
    pub b_deviation: f64,
    pub c_deviation: f64,
}

impl PropertyReport {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c
    }
}

pub fn verify_properties(t: &Channel) -> Result<PropertyReport> {
    let elems = matrix_elements(t)?;
    let rho = representative_operator(t)?;
    let n = t.dim();

    let mut rng = ChaCha8Rng::seed_from_u64(QUADRATIC_FORM_SEED);
    let draw = |rng: &mut ChaCha8Rng| -> Vec<C64> {
        (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
    };
    let mut min_quadratic_form = f64::INFINITY;
    let mut forms_ok = true;
    for _ in 0..QUADRATIC_FORM_SAMPLES {
        let a = draw(&mut rng);
        let b = draw(&mut rng);
        let value = elems.quadratic_form(&a, &b);
        min_quadratic_form = min_quadratic_form.min(value.re);
        if value.re < -PSD_TOL || value.im.abs() > PSD_TOL {
            forms_ok = false;
        }
    }

    let mut b_deviation = 0.0_f64;
    let mut literal_deviation = 0.0_f64;
    let mut all_real = true;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let p = elems.get(i, j, k, l);
                    let mirrored = elems.get(j, i, l, k);
                    b_deviation = b_deviation.max((p - mirrored.conj()).norm());
                    literal_deviation = literal_deviation.max((p - mirrored).norm());
                    all_real &= p.im.abs() <= UNITAL_TOL;
                }
            }
        }
    }

    let mut c_deviation = 0.0_f64;
    for k in 0..n {
        for l in 0..n {
            let sum: C64 = (0..n).map(|i| elems.get(i, i, k, l)).sum();
            let delta = if k == l { 1.0 } else { 0.0 };
            c_deviation = c_deviation.max((sum - delta).norm());
        }
    }

    Ok(PropertyReport {
        a: rho.is_positive(PSD_TOL) && forms_ok,
        b: b_deviation < UNITAL_TOL,
        c: c_deviation < UNITAL_TOL,
        b_literal: all_real.then_some(literal_deviation < UNITAL_TOL),
        min_eigenvalue: rho.spectrum().min(),
        min_quadratic_form,
        b_deviation,
        c_deviation,
    })
}

/// Extremality among ucp maps: the products `A_a* A_b` of the Kraus family
/// (eigenvalue cutoff `tol`) must be linearly independent. Independence is
/// decided from the Gram matrix of their vectorizations, whose smallest
/// eigenvalue must exceed `tol` times its largest.
pub fn is_extremal_choi(t: &Channel, tol: f64) -> Result<bool> {
    let rho = representative_operator(t)?;
    let kraus = rho.kraus_operators(tol)?;
    let n = t.dim();
    let r = kraus.len();
    if r == 0 {
        return Ok(false);
    }
    // r² products cannot be independent in an n²-dimensional space
    if r * r > n * n {
        return Ok(false);
    }
    let products: Vec<Vec<C64>> = kraus
        .iter()
        .flat_map(|a| kraus.iter().map(move |b| (&a.adjoint() * b).vec_columns()))
        .collect();
    let m = products.len();
    let gram = ComplexMatrix::from_fn(m, m, |u, v| {
        products[u].iter().zip(&products[v]).map(|(x, y)| x.conj() * y).sum()
    });
    let spec = hermitian_eig(&gram)?;
    Ok(spec.min() > tol * spec.max())
}
