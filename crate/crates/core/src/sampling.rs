//! Seeded random generators for stochastic matrices, states and channels.
//!
//! All samplers draw from a caller-supplied [`rand::Rng`]; the harness uses
//! `ChaCha8Rng::seed_from_u64(seed)` so runs are reproducible.

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::channel::{Channel, DensityOperator, StochasticMatrix};
use crate::error::Result;
use crate::kernel::{hermitian_eig, spectral_map, ComplexMatrix, C64};

/// A point of the probability simplex drawn from Dirichlet(1, …, 1),
/// as normalized standard exponentials.
pub fn dirichlet_flat<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let draws: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x: f64| x / total).collect()
}

/// Row-stochastic matrix with independent Dirichlet(1, …, 1) rows.
pub fn random_stochastic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> StochasticMatrix {
    let rows = (0..n).map(|_| dirichlet_flat(rng, n)).collect();
    StochasticMatrix::new(rows).expect("Dirichlet rows are stochastic")
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    random_matrix(rng, n).hermitian_part()
}

/// Unitary `exp(iH)` of a random Hermitian `H`.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let spec = hermitian_eig(&random_hermitian(rng, n).scale_real(3.0)).expect("Hermitian input");
    let v = &spec.vectors;
    ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n).map(|k| v[(r, k)] * C64::from_polar(1.0, spec.values[k]) * v[(c, k)].conj()).sum()
    })
}

pub fn random_pure_state<R: Rng + ?Sized>(rng: &mut R, n: usize) -> DensityOperator {
    DensityOperator::pure(&random_vector(rng, n)).expect("non-zero Gaussian vector")
}

/// Mixed state `U diag(λ) U*` whose eigenvalues all exceed `floor` (`n·floor < 1`).
pub fn random_mixed_state<R: Rng + ?Sized>(rng: &mut R, n: usize, floor: f64) -> Result<DensityOperator> {
    assert!(floor >= 0.0 && floor * (n as f64) < 1.0, "floor too large for n = {n}");
    // strictly above the floor
    let margin = floor * 1.2;
    let slack = 1.0 - margin * n as f64;
    let weights: Vec<f64> = dirichlet_flat(rng, n).into_iter().map(|w| margin + slack * w).collect();
    let u = random_unitary(rng, n);
    let theta = &(&u * &ComplexMatrix::from_real_diag(&weights)) * &u.adjoint();
    DensityOperator::new(theta.hermitian_part())
}

/// Random density operator: Ginibre `G G* / Tr(G G*)`.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<DensityOperator> {
    let g = random_matrix(rng, n);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityOperator::new(gg.scale_real(1.0 / tr).hermitian_part())
}

/// Unital CP map from `rank` Gaussian Kraus operators `K_i`, completed to
/// `A_i = K_i M^{-1/2}` with `M = Σ K_i* K_i`, so that `Σ A_i* A_i = I`.
pub fn random_ucp_channel<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> Result<Channel> {
    let ks: Vec<ComplexMatrix> = (0..rank).map(|_| random_matrix(rng, n)).collect();
    let mut m = ComplexMatrix::zeros(n, n);
    for k in &ks {
        m = &m + &(&k.adjoint() * k);
    }
    let inv_sqrt = spectral_map(&hermitian_eig(&m.hermitian_part())?, |x| 1.0 / x.sqrt());
    Channel::kraus(ks.iter().map(|k| k * &inv_sqrt).collect())
}
