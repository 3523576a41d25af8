//! Unital completely positive maps on `n×n` matrices, in the Heisenberg picture.

use crate::choi::representative_operator;
use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, ComplexMatrix, C64, HERMITIAN_TOL, ZERO};

/// Tolerance for `T(I) = I`.
pub const UNITAL_TOL: f64 = 1e-10;
/// Tolerance for unit row sums of a stochastic matrix.
pub const ROW_SUM_TOL: f64 = 1e-12;
/// Slack allowed below zero when testing positivity.
pub const PSD_TOL: f64 = 1e-9;
/// Tolerance for `Tr θ = 1`.
pub const TRACE_TOL: f64 = 1e-10;

/// Real row-stochastic matrix: entries in `[0, 1]`, every row summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    rows: Vec<Vec<f64>>,
}

impl StochasticMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Dimension("empty stochastic matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if let Some(j) = row.iter().position(|x| !x.is_finite()) {
                return Err(Error::NonFinite { row: i, col: j });
            }
            if let Some(x) = row.iter().find(|x| !(0.0..=1.0).contains(*x)) {
                return Err(Error::Validation(format!("row {i} has entry {x} outside [0, 1]")));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::Validation(format!("row {i} sums to {sum}, not 1")));
            }
        }
        Ok(Self { rows })
    }

    /// The 2×2 matrix `[[p, 1−p], [q, 1−q]]`.
    pub fn binary(p: f64, q: f64) -> Result<Self> {
        Self::new(vec![vec![p, 1.0 - p], vec![q, 1.0 - q]])
    }

    pub fn identity(n: usize) -> Self {
        Self { rows: (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// True when every entry is 0 or 1 within `tol`.
    pub fn is_deterministic(&self, tol: f64) -> bool {
        self.rows.iter().flatten().all(|&x| x <= tol || x >= 1.0 - tol)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim(), "shape mismatch");
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Density operator `θ` of a state `φ(x) = Tr(θx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension("density operator must be square".into()));
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation, tolerance: HERMITIAN_TOL });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!("density operator has trace {tr}, not 1")));
        }
        let min = hermitian_eig(&matrix)?.min();
        if min < -PSD_TOL {
            return Err(Error::NegativeEigenvalue(min));
        }
        Ok(Self { matrix })
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalized first.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if psi.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::Validation("pure state needs a non-zero finite vector".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v))
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n).scale_real(1.0 / n as f64) }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diag(probs))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// `φ(x) = Tr(θx)`.
    pub fn expectation(&self, x: &ComplexMatrix) -> C64 {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.matrix[(i, j)] * x[(j, i)]).sum()
    }
}

/// Storage forms of a channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelForm {
    /// `n²×n²` matrix acting on column-stacked vectorizations.
    Superoperator(ComplexMatrix),
    /// `T(x) = Σ A_i* x A_i`.
    Kraus(Vec<ComplexMatrix>),
    /// Classical channel on the diagonal subalgebra; off-diagonal entries map to zero.
    Stochastic(StochasticMatrix),
    /// `T(x) = Tr(θx)·I`.
    State(DensityOperator),
}

/// A linear map on `n×n` complex matrices.
///
/// Construction validates shapes and the stochastic/density invariants of the
/// respective forms; unitality and complete positivity are checked separately
/// so that non-ucp maps can still be inspected.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    dim: usize,
    form: ChannelForm,
}

impl Channel {
    pub fn superoperator(n: usize, matrix: ComplexMatrix) -> Result<Self> {
        if n == 0 || !matrix.is_square() || matrix.rows() != n * n {
            return Err(Error::Dimension(format!(
                "superoperator for n={n} must be {0}x{0}, got {1}x{2}",
                n * n,
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self { dim: n, form: ChannelForm::Superoperator(matrix) })
    }

    pub fn kraus(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let n = ops.first().ok_or_else(|| Error::Validation("empty Kraus family".into()))?.rows();
        if ops.iter().any(|a| !a.is_square() || a.rows() != n) {
            return Err(Error::Dimension("Kraus operators must all be n×n".into()));
        }
        Ok(Self { dim: n, form: ChannelForm::Kraus(ops) })
    }

    pub fn identity(n: usize) -> Self {
        Self { dim: n, form: ChannelForm::Kraus(vec![ComplexMatrix::identity(n)]) }
    }

    /// The transpose map `x ↦ xᵀ`: unital and positive but not completely positive.
    pub fn transpose_map(n: usize) -> Self {
        let nn = n * n;
        // vec index of (r, c) is c·n + r; transposition swaps the two.
        let l = ComplexMatrix::from_fn(nn, nn, |a, b| {
            let (ra, ca) = (a % n, a / n);
            let (rb, cb) = (b % n, b / n);
            if ra == cb && ca == rb {
                C64::new(1.0, 0.0)
            } else {
                ZERO
            }
        });
        Self { dim: n, form: ChannelForm::Superoperator(l) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &ChannelForm {
        &self.form
    }

    pub fn kind(&self) -> &'static str {
        match self.form {
            ChannelForm::Superoperator(_) => "superop",
            ChannelForm::Kraus(_) => "kraus",
            ChannelForm::Stochastic(_) => "stochastic",
            ChannelForm::State(_) => "state",
        }
    }

    pub fn apply(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.dim;
        if !x.is_square() || x.rows() != n {
            return Err(Error::Dimension(format!(
                "channel acts on {n}x{n} matrices, got {}x{}",
                x.rows(),
                x.cols()
            )));
        }
        Ok(match &self.form {
            ChannelForm::Superoperator(l) => ComplexMatrix::unvec_columns(&l.apply_vec(&x.vec_columns()), n)?,
            ChannelForm::Kraus(ops) => {
                let mut out = ComplexMatrix::zeros(n, n);
                for a in ops {
                    out = &out + &(&(&a.adjoint() * x) * a);
                }
                out
            }
            ChannelForm::Stochastic(s) => ComplexMatrix::from_fn(n, n, |i, k| {
                if i == k {
                    (0..n).map(|j| x[(j, j)] * s.get(i, j)).sum()
                } else {
                    ZERO
                }
            }),
            ChannelForm::State(theta) => ComplexMatrix::identity(n).scale(theta.expectation(x)),
        })
    }

    /// Superoperator matrix whose column `c·n + r` is `vec(T(e_rc))`.
    pub fn superoperator_matrix(&self) -> Result<ComplexMatrix> {
        if let ChannelForm::Superoperator(l) = &self.form {
            return Ok(l.clone());
        }
        let n = self.dim;
        let nn = n * n;
        let mut l = ComplexMatrix::zeros(nn, nn);
        for col in 0..nn {
            let image = self.apply(&ComplexMatrix::unit(n, col % n, col / n))?.vec_columns();
            for (row, z) in image.into_iter().enumerate() {
                l[(row, col)] = z;
            }
        }
        Ok(l)
    }

    pub fn to_superoperator(&self) -> Result<Self> {
        Self::superoperator(self.dim, self.superoperator_matrix()?)
    }

    /// Kraus form obtained from the spectral decomposition of the
    /// representative operator; eigenvalues below `cutoff` are discarded.
    pub fn to_kraus(&self, cutoff: f64) -> Result<Self> {
        let ops = representative_operator(self)?.kraus_operators(cutoff)?;
        if ops.is_empty() {
            return Ok(Self { dim: self.dim, form: ChannelForm::Kraus(vec![ComplexMatrix::zeros(self.dim, self.dim)]) });
        }
        Self::kraus(ops)
    }

    /// Convex (or general linear) combination `Σ w_k T_k`, in superoperator form.
    pub fn combine(parts: &[(f64, &Channel)]) -> Result<Self> {
        let (_, first) = parts.first().ok_or_else(|| Error::Validation("empty combination".into()))?;
        let n = first.dim;
        let mut l = ComplexMatrix::zeros(n * n, n * n);
        for (w, ch) in parts {
            if ch.dim != n {
                return Err(Error::Dimension("combined channels must share a dimension".into()));
            }
            l = &l + &ch.superoperator_matrix()?.scale_real(*w);
        }
        Self::superoperator(n, l)
    }

    /// The stochastic matrix of a classical channel, if this map is one.
    ///
    /// A map is classical when it annihilates off-diagonal matrix units and
    /// sends each `e_jj` to a non-negative real diagonal matrix.
    #[allow(clippy::needless_range_loop)]
    pub fn classical_matrix(&self, tol: f64) -> Option<StochasticMatrix> {
        if let ChannelForm::Stochastic(s) = &self.form {
            return Some(s.clone());
        }
        let n = self.dim;
        let mut rows = vec![vec![0.0; n]; n];
        for j in 0..n {
            for k in 0..n {
                let image = self.apply(&ComplexMatrix::unit(n, j, k)).ok()?;
                if j != k {
                    if image.max_norm() > tol {
                        return None;
                    }
                    continue;
                }
                for r in 0..n {
                    for c in 0..n {
                        let z = image[(r, c)];
                        if r != c && z.norm() > tol {
                            return None;
                        }
                    }
                    let z = image[(r, r)];
                    if z.im.abs() > tol || z.re < -tol || z.re > 1.0 + tol {
                        return None;
                    }
                    rows[r][j] = z.re.clamp(0.0, 1.0);
                }
            }
        }
        // renormalize rows within tolerance so validation accepts float noise
        for row in &mut rows {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > tol {
                return None;
            }
            row.iter_mut().for_each(|x| *x /= sum);
        }
        StochasticMatrix::new(rows).ok()
    }

    /// Largest deviation `max |T(e_ij) − S(e_ij)|` over all matrix units.
    pub fn max_deviation(&self, other: &Channel) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Dimension("channels differ in dimension".into()));
        }
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let e = ComplexMatrix::unit(n, i, j);
                worst = worst.max(self.apply(&e)?.max_abs_diff(&other.apply(&e)?));
            }
        }
        Ok(worst)
    }
}

/// Embeds a row-stochastic matrix as a classical channel.
pub fn classical_embed(s: StochasticMatrix) -> Channel {
    Channel { dim: s.dim(), form: ChannelForm::Stochastic(s) }
}

/// The channel `x ↦ φ(x)·I` of a state.
pub fn state_channel(phi: DensityOperator) -> Channel {
    Channel { dim: phi.dim(), form: ChannelForm::State(phi) }
}

pub fn check_unital(t: &Channel) -> Result<bool> {
    let n = t.dim();
    let id = ComplexMatrix::identity(n);
    Ok(t.apply(&id)?.max_abs_diff(&id) < UNITAL_TOL)
}

/// Complete positivity via positivity of the representative operator.
pub fn check_completely_positive(t: &Channel, tol: f64) -> Result<bool> {
    Ok(representative_operator(t)?.min_eigenvalue()? >= -tol)
}

/// Both `check_unital` and `check_completely_positive` at the default slack.
pub fn is_ucp(t: &Channel) -> Result<bool> {
    Ok(check_unital(t)? && check_completely_positive(t, PSD_TOL)?)
}
