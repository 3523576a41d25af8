//! Channel entropy `H(T)`: the least mixing entropy over decompositions of a
//! channel into extremal channels.
//!
//! For classical channels the extremal points are the deterministic maps and
//! the decompositions form a polytope. The mixing entropy is concave, so its
//! minimum over the polytope is attained at a vertex; [`channel_entropy_classical`]
//! enumerates the vertices exactly.

mod closed_form;
mod polytope;

use serde::Serialize;

pub use closed_form::{binary_f, f_profile, minimize_f_closed_form, BinaryFamily, FProfile, SUM_TOL};
pub use polytope::{DecompositionPolytope, Vertex, MAX_POLYTOPE_DIM};

use crate::channel::{classical_embed, state_channel, Channel, DensityOperator, StochasticMatrix};
use crate::entropy::{choi_entropy, mixing_entropy, spectrum_entropy, EntropyValue};
use crate::error::{Error, Result};
use crate::kernel::hermitian_eig;

/// Largest `n` for which all `n^n` deterministic maps are listed.
pub const MAX_ENUMERATION_DIM: usize = 5;
/// Largest `n` handled by the exact entropy solver.
pub const MAX_SOLVER_DIM: usize = 3;
/// Witness components lighter than this are dropped.
pub const WEIGHT_CUTOFF: f64 = 1e-12;
/// Vertices whose entropies differ by less than this are ties.
pub const TIE_TOL: f64 = 1e-12;
/// Allowed disagreement between the vertex solver and the 2×2 closed form.
pub const CLOSED_FORM_AGREEMENT: f64 = 1e-10;
/// Slack on `d(ρ_T) − H(T) ≥ 0`.
pub const GAP_TOL: f64 = 1e-9;

/// A function `f: {0..n} → {0..n}`, i.e. a 0/1 row-stochastic matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DeterministicMap {
    assignment: Vec<usize>,
}

impl DeterministicMap {
    pub fn new(assignment: Vec<usize>) -> Result<Self> {
        let n = assignment.len();
        if n == 0 {
            return Err(Error::Dimension("empty assignment".into()));
        }
        if let Some(&bad) = assignment.iter().find(|&&j| j >= n) {
            return Err(Error::Validation(format!("assignment target {bad} out of range for n={n}")));
        }
        Ok(Self { assignment })
    }

    pub fn dim(&self) -> usize {
        self.assignment.len()
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Position in [`enumerate_deterministic`]: the assignment read as a
    /// base-`n` number with `f(0)` as the leading digit.
    pub fn index(&self) -> usize {
        let n = self.dim();
        self.assignment.iter().fold(0, |acc, &j| acc * n + j)
    }

    pub fn to_stochastic(&self) -> StochasticMatrix {
        let n = self.dim();
        let rows = self
            .assignment
            .iter()
            .map(|&j| (0..n).map(|c| if c == j { 1.0 } else { 0.0 }).collect())
            .collect();
        StochasticMatrix::new(rows).expect("0/1 rows are stochastic")
    }

    pub fn to_channel(&self) -> Channel {
        classical_embed(self.to_stochastic())
    }
}

/// All `n^n` deterministic maps in lexicographic order of their assignment tables.
pub fn enumerate_deterministic(n: usize) -> Result<Vec<DeterministicMap>> {
    if n == 0 {
        return Err(Error::Dimension("n must be positive".into()));
    }
    if n > MAX_ENUMERATION_DIM {
        return Err(Error::Capacity { what: "deterministic map enumeration", n, max: MAX_ENUMERATION_DIM });
    }
    let total = n.pow(n as u32);
    Ok((0..total)
        .map(|mut idx| {
            let mut assignment = vec![0; n];
            for slot in assignment.iter_mut().rev() {
                *slot = idx % n;
                idx /= n;
            }
            DeterministicMap { assignment }
        })
        .collect())
}

pub fn decomposition_polytope(s: &StochasticMatrix) -> Result<DecompositionPolytope> {
    DecompositionPolytope::new(s)
}

/// `T = Σ λ_k T_k` with deterministic `T_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremalDecomposition {
    pub components: Vec<DeterministicMap>,
    pub weights: Vec<f64>,
}

impl ExtremalDecomposition {
    pub fn entropy(&self) -> EntropyValue {
        EntropyValue::from_nats(mixing_entropy(self.weights.iter().copied()))
    }

    /// `Σ λ_k · matrix(T_k)` as plain rows.
    pub fn mixture(&self) -> Vec<Vec<f64>> {
        let n = self.components.first().map_or(0, DeterministicMap::dim);
        let mut rows = vec![vec![0.0; n]; n];
        for (f, &w) in self.components.iter().zip(&self.weights) {
            for (i, &j) in f.assignment().iter().enumerate() {
                rows[i][j] += w;
            }
        }
        rows
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// `H(T)`, `d(ρ_T)` and the decomposition that attains `H(T)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub h_channel: EntropyValue,
    pub d_choi: EntropyValue,
    pub gap: f64,
    pub witness: ExtremalDecomposition,
}

impl EntropyReport {
    /// `d(ρ_T) − H(T) ≥ −GAP_TOL`.
    pub fn inequality_holds(&self) -> bool {
        self.gap >= -GAP_TOL
    }
}

/// Minimizing vertex of the decomposition polytope, ties broken towards the
/// lexicographically smallest support.
pub fn minimal_entropy_vertex(poly: &DecompositionPolytope) -> Result<(f64, Vertex)> {
    let vertices = poly.vertices()?;
    let scored: Vec<(f64, Vertex)> = vertices
        .into_iter()
        .map(|v| (mixing_entropy(v.weights.iter().copied()), v))
        .collect();
    let best = scored.iter().map(|(h, _)| *h).fold(f64::INFINITY, f64::min);
    // vertices come back ordered by support, so the first tie is the smallest
    scored
        .into_iter()
        .find(|(h, _)| *h <= best + TIE_TOL)
        .ok_or_else(|| Error::Internal("empty vertex set".into()))
}

/// Exact `H(T)` for the classical channel of `s` (n ≤ 3).
pub fn channel_entropy_classical(s: &StochasticMatrix) -> Result<EntropyReport> {
    let n = s.dim();
    if n > MAX_SOLVER_DIM {
        return Err(Error::Capacity { what: "classical entropy solver", n, max: MAX_SOLVER_DIM });
    }
    let poly = decomposition_polytope(s)?;
    let (h, vertex) = minimal_entropy_vertex(&poly)?;

    if n == 2 {
        let (_, closed) = BinaryFamily::from_matrix(s)?.minimum();
        if (closed - h).abs() > CLOSED_FORM_AGREEMENT {
            return Err(Error::Internal(format!(
                "vertex solver ({h}) and closed form ({closed}) disagree"
            )));
        }
    }

    let witness = witness_from(&poly, &vertex);
    let residual = poly.residual(&vertex.weights);
    if residual > 1e-10 {
        return Err(Error::Internal(format!("witness misses the target by {residual:.3e}")));
    }
    let d = choi_entropy(&classical_embed(s.clone()))?;
    let h = EntropyValue::from_nats(h);
    Ok(EntropyReport { h_channel: h, d_choi: d, gap: d.nats() - h.nats(), witness })
}

fn witness_from(poly: &DecompositionPolytope, vertex: &Vertex) -> ExtremalDecomposition {
    let (components, weights) = vertex
        .support
        .iter()
        .filter(|&&idx| vertex.weights[idx] >= WEIGHT_CUTOFF)
        .map(|&idx| (poly.maps()[idx].clone(), vertex.weights[idx]))
        .unzip();
    ExtremalDecomposition { components, weights }
}

/// [`channel_entropy_classical`], failing if `d(ρ_T) < H(T) − GAP_TOL`.
pub fn verify_inequality(s: &StochasticMatrix) -> Result<EntropyReport> {
    let report = channel_entropy_classical(s)?;
    if !report.inequality_holds() {
        return Err(Error::Validation(format!(
            "d(rho_T) = {} < H(T) = {}",
            report.d_choi.nats(),
            report.h_channel.nats()
        )));
    }
    Ok(report)
}

/// Spectral decomposition `T_φ = Σ λ_n T_{φ_n}` of a state channel into
/// channels of pure states.
#[derive(Debug, Clone)]
pub struct StateDecomposition {
    pub weights: Vec<f64>,
    pub states: Vec<DensityOperator>,
}

impl StateDecomposition {
    pub fn entropy(&self) -> EntropyValue {
        EntropyValue::from_nats(mixing_entropy(self.weights.iter().copied()))
    }

    pub fn channels(&self) -> Vec<Channel> {
        self.states.iter().cloned().map(state_channel).collect()
    }

    /// `Σ λ_n T_{φ_n}` in superoperator form.
    pub fn mixture(&self) -> Result<Channel> {
        let channels = self.channels();
        let parts: Vec<(f64, &Channel)> = self.weights.iter().copied().zip(&channels).collect();
        Channel::combine(&parts)
    }
}

pub fn state_channel_decomposition(phi: &DensityOperator) -> Result<StateDecomposition> {
    let spec = hermitian_eig(phi.matrix())?;
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for (k, &lambda) in spec.values.iter().enumerate() {
        if lambda <= WEIGHT_CUTOFF {
            continue;
        }
        weights.push(lambda);
        states.push(DensityOperator::pure(&spec.vector(k))?);
    }
    Ok(StateDecomposition { weights, states })
}

/// Upper bound on `H(T_φ)` from the spectral decomposition of `θ`; it
/// coincides with the Ohya entropy of `φ`.
pub fn state_channel_entropy_upper(phi: &DensityOperator) -> Result<EntropyValue> {
    let spec = hermitian_eig(phi.matrix())?;
    spectrum_entropy(&spec.values)
}
