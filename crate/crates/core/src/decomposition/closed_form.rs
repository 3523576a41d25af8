//! Closed-form treatment of 2×2 stochastic matrices.
//!
//! For `S = [[p, 1−p], [q, 1−q]]` the decompositions over the maps
//! `[all→0, identity, swap, all→1]` form the one-parameter family
//! `(d, p−d, q−d, 1−p−q+d)` with `d ∈ [max(0, p+q−1), min(p, q)]`.

use crate::channel::StochasticMatrix;
use crate::entropy::{mixing_entropy, EntropyValue};
use crate::error::{Error, Result};

/// Tolerance on `p + q = 1` for [`minimize_f_closed_form`].
pub const SUM_TOL: f64 = 1e-12;

/// The segment of decompositions of a 2×2 stochastic matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BinaryFamily {
    pub p: f64,
    pub q: f64,
    pub d_min: f64,
    pub d_max: f64,
}

impl BinaryFamily {
    pub fn new(p: f64, q: f64) -> Self {
        Self { p, q, d_min: (p + q - 1.0).max(0.0), d_max: p.min(q) }
    }

    pub fn from_matrix(s: &StochasticMatrix) -> Result<Self> {
        if s.dim() != 2 {
            return Err(Error::Dimension(format!("binary family needs a 2x2 matrix, got n={}", s.dim())));
        }
        Ok(Self::new(s.get(0, 0), s.get(1, 0)))
    }

    /// Weights over the maps in index order `[all→0, identity, swap, all→1]`.
    pub fn weights(&self, d: f64) -> [f64; 4] {
        let (p, q) = (self.p, self.q);
        [d, p - d, q - d, 1.0 - p - q + d]
    }

    pub fn entropy_at(&self, d: f64) -> f64 {
        mixing_entropy(self.weights(d).map(|w| w.max(0.0)))
    }

    /// Minimum over the segment; the entropy is concave in `d`, so it sits at an endpoint.
    pub fn minimum(&self) -> (f64, f64) {
        let lo = self.entropy_at(self.d_min);
        let hi = self.entropy_at(self.d_max);
        if lo <= hi {
            (self.d_min, lo)
        } else {
            (self.d_max, hi)
        }
    }
}

/// `F(x) = −(p−x) ln(p−x) − (q−x) ln(q−x) − 2x ln x`.
pub fn binary_f(p: f64, q: f64, x: f64) -> f64 {
    mixing_entropy([p - x, q - x, x, x])
}

/// Values of `F` at the endpoints of `[0, q]` and at its interior critical point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FProfile {
    pub p: f64,
    pub q: f64,
    pub at_zero: f64,
    pub at_q: f64,
    /// `x* = pq`, where `F′(x) = ln((p−x)(q−x)/x²)` vanishes.
    pub critical_point: f64,
    pub at_critical: f64,
}

impl FProfile {
    pub fn minimum(&self) -> f64 {
        self.at_zero.min(self.at_q)
    }
}

/// Profile of `F` on `[0, q]` for `p + q = 1`, with `p ≥ q` after swapping.
pub fn f_profile(p: f64, q: f64) -> Result<FProfile> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) || (p + q - 1.0).abs() > SUM_TOL {
        return Err(Error::Validation(format!("closed form needs p, q in [0, 1] with p + q = 1, got p={p}, q={q}")));
    }
    let (p, q) = if p >= q { (p, q) } else { (q, p) };
    let critical_point = p * q;
    Ok(FProfile {
        p,
        q,
        at_zero: binary_f(p, q, 0.0),
        at_q: binary_f(p, q, q),
        critical_point,
        at_critical: binary_f(p, q, critical_point),
    })
}

/// `min F = −p ln p − q ln q`, attained at `x = 0`.
pub fn minimize_f_closed_form(p: f64, q: f64) -> Result<EntropyValue> {
    Ok(EntropyValue::from_nats(f_profile(p, q)?.minimum()))
}
