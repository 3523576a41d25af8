//! Von Neumann entropies of positive operators, states and representative operators.

use std::fmt;

use serde::Serialize;

use crate::channel::{Channel, DensityOperator};
use crate::choi::representative_operator;
use crate::error::{Error, Result};
use crate::kernel::{hermitian_eig, ComplexMatrix};

/// Eigenvalues at or below this are treated as exact zeros.
pub const ZERO_CUTOFF: f64 = 1e-12;
/// Eigenvalues below `-NEGATIVE_TOL` violate positivity.
pub const NEGATIVE_TOL: f64 = 1e-9;

/// An entropy in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub const ZERO: Self = Self(0.0);

    pub fn from_nats(nats: f64) -> Self {
        Self(nats)
    }

    pub fn nats(self) -> f64 {
        self.0
    }

    pub fn bits(self) -> f64 {
        self.0 / std::f64::consts::LN_2
    }
}

impl From<EntropyValue> for f64 {
    fn from(v: EntropyValue) -> f64 {
        v.0
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nats", self.0)
    }
}

/// `−Σ w ln w` over non-negative weights, with `0·ln 0 = 0`.
pub fn mixing_entropy(weights: impl IntoIterator<Item = f64>) -> f64 {
    weights.into_iter().filter(|&w| w > ZERO_CUTOFF).map(|w| -w * w.ln()).sum()
}

/// `−Σ λ ln λ` over a list of eigenvalues, rejecting negative ones.
pub fn spectrum_entropy(values: &[f64]) -> Result<EntropyValue> {
    if let Some(&bad) = values.iter().find(|&&v| v < -NEGATIVE_TOL) {
        return Err(Error::NegativeEigenvalue(bad));
    }
    Ok(EntropyValue(mixing_entropy(values.iter().copied())))
}

pub fn eigen_entropy(a: &ComplexMatrix) -> Result<EntropyValue> {
    spectrum_entropy(&hermitian_eig(a)?.values)
}

/// At finite dimension the infimum over discrete decompositions of `θ` is
/// attained by its spectral decomposition.
pub fn ohya_entropy(phi: &DensityOperator) -> Result<EntropyValue> {
    eigen_entropy(phi.matrix())
}

/// How the representative operator is scaled before taking its entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChoiNormalization {
    /// Entropy of `ρ_T` itself (trace `n`).
    #[default]
    Raw,
    /// Entropy of the unit-trace state `ρ_T / n`.
    UnitTrace,
}

/// `d(ρ_T) = −Tr ρ_T ln ρ_T`.
pub fn choi_entropy(t: &Channel) -> Result<EntropyValue> {
    choi_entropy_with(t, ChoiNormalization::Raw)
}

pub fn choi_entropy_with(t: &Channel, norm: ChoiNormalization) -> Result<EntropyValue> {
    let rho = representative_operator(t)?;
    let values: Vec<f64> = match norm {
        ChoiNormalization::Raw => rho.spectrum().values.clone(),
        ChoiNormalization::UnitTrace => {
            let n = t.dim() as f64;
            rho.spectrum().values.iter().map(|v| v / n).collect()
        }
    };
    spectrum_entropy(&values)
}
