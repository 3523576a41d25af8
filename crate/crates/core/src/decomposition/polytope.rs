//! The polytope of weight vectors `λ` over deterministic maps whose mixture
//! reproduces a stochastic matrix, and enumeration of its vertices.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::channel::StochasticMatrix;
use crate::decomposition::{enumerate_deterministic, DeterministicMap};
use crate::error::{Error, Result};

/// Largest dimension for which the polytope is materialized.
pub const MAX_POLYTOPE_DIM: usize = 4;

/// Size of the generic perturbation that removes degeneracy during the pivot walk.
const PERTURBATION: f64 = 1e-7;
const PIVOT_TOL: f64 = 1e-9;
const RATIO_TIE_TOL: f64 = 1e-12;
/// Basic solutions more negative than this are infeasible for the unperturbed system.
const FEASIBILITY_TOL: f64 = 1e-11;
const SINGULAR_TOL: f64 = 1e-10;

/// A vertex of the decomposition polytope.
#[derive(Debug, Clone, PartialEq)]
pub struct Vertex {
    /// Indices into [`DecompositionPolytope::maps`] with non-zero weight, ascending.
    pub support: Vec<usize>,
    /// Full weight vector, one entry per deterministic map.
    pub weights: Vec<f64>,
}

/// `{ λ ≥ 0 : Σ_{f: f(i)=j} λ_f = S_ij for all i, j }`.
#[derive(Debug, Clone)]
pub struct DecompositionPolytope {
    target: StochasticMatrix,
    maps: Vec<DeterministicMap>,
}

impl DecompositionPolytope {
    pub fn new(s: &StochasticMatrix) -> Result<Self> {
        let n = s.dim();
        if n > MAX_POLYTOPE_DIM {
            return Err(Error::Capacity { what: "decomposition polytope", n, max: MAX_POLYTOPE_DIM });
        }
        Ok(Self { target: s.clone(), maps: enumerate_deterministic(n)? })
    }

    pub fn dim(&self) -> usize {
        self.target.dim()
    }

    pub fn target(&self) -> &StochasticMatrix {
        &self.target
    }

    pub fn maps(&self) -> &[DeterministicMap] {
        &self.maps
    }

    /// The `n² × n^n` 0/1 constraint matrix; row `i·n + j` selects maps with `f(i) = j`.
    pub fn constraint_matrix(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut a = vec![vec![0.0; self.maps.len()]; n * n];
        for (col, f) in self.maps.iter().enumerate() {
            for (i, &j) in f.assignment().iter().enumerate() {
                a[i * n + j][col] = 1.0;
            }
        }
        a
    }

    /// Right-hand side `S_ij` in row order `i·n + j`.
    pub fn rhs(&self) -> Vec<f64> {
        self.target.rows().iter().flatten().copied().collect()
    }

    /// `max |Σ λ_f [f(i) = j] − S_ij|`.
    pub fn residual(&self, weights: &[f64]) -> f64 {
        let n = self.dim();
        let mut mixed = vec![0.0; n * n];
        for (f, &w) in self.maps.iter().zip(weights) {
            for (i, &j) in f.assignment().iter().enumerate() {
                mixed[i * n + j] += w;
            }
        }
        mixed.iter().zip(self.rhs()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn contains(&self, weights: &[f64], tol: f64) -> bool {
        weights.len() == self.maps.len()
            && weights.iter().all(|&w| w >= -tol)
            && self.residual(weights) <= tol
    }

    /// Rank of the equality system, `n(n−1) + 1`.
    pub fn rank(&self) -> usize {
        independent_rows(&self.constraint_matrix()).len()
    }

    /// Dimension of the polytope as an affine set.
    pub fn dimension(&self) -> usize {
        self.maps.len() - self.rank()
    }

    /// All vertices, ordered by support.
    ///
    /// The walk visits every feasible basis of a generically perturbed copy
    /// of the system, where no basic variable vanishes and each pivot has a
    /// unique leaving column. Each basis is then re-solved against the exact
    /// right-hand side and kept when its basic solution is non-negative, so
    /// the returned weights are exact basic solutions of the original system.
    pub fn vertices(&self) -> Result<Vec<Vertex>> {
        let m = self.maps.len();
        if let Some(v) = self.point_mass() {
            return Ok(vec![v]);
        }

        let full = self.constraint_matrix();
        let rows = independent_rows(&full);
        let a: Vec<Vec<f64>> = rows.iter().map(|&r| full[r].clone()).collect();
        let rhs_full = self.rhs();
        let b: Vec<f64> = rows.iter().map(|&r| rhs_full[r]).collect();
        let rank = a.len();

        let mu = generic_weights(m);
        let bp: Vec<f64> = (0..rank)
            .map(|r| (1.0 - PERTURBATION) * b[r] + PERTURBATION * (0..m).map(|c| a[r][c] * mu[c]).sum::<f64>())
            .collect();
        let perturbed_rows = self.mixed_rows(&mu);

        let start = self.initial_basis(&a, &perturbed_rows)?;
        let column = |c: usize| -> Vec<f64> { a.iter().map(|row| row[c]).collect() };

        let mut found: BTreeMap<Vec<usize>, Vec<f64>> = BTreeMap::new();
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start);

        while let Some(basis) = queue.pop_front() {
            let cols: Vec<Vec<f64>> = basis.iter().map(|&c| column(c)).collect();
            let Some(lu) = Lu::factor(&cols) else { continue };
            let xp = lu.solve(&bp);

            let x = lu.solve(&b);
            if x.iter().all(|&v| v >= -FEASIBILITY_TOL) {
                let mut weights = vec![0.0; m];
                for (&c, &v) in basis.iter().zip(&x) {
                    weights[c] = v.max(0.0);
                }
                let support: Vec<usize> = (0..m).filter(|&c| weights[c] > 0.0).collect();
                found.entry(support).or_insert(weights);
            }

            for entering in (0..m).filter(|c| !basis.contains(c)) {
                let d = lu.solve(&column(entering));
                let mut best = f64::INFINITY;
                let mut leaving = Vec::new();
                for (pos, (&di, &xi)) in d.iter().zip(&xp).enumerate() {
                    if di <= PIVOT_TOL {
                        continue;
                    }
                    let ratio = xi.max(0.0) / di;
                    if ratio < best - RATIO_TIE_TOL {
                        best = ratio;
                        leaving.clear();
                        leaving.push(pos);
                    } else if (ratio - best).abs() <= RATIO_TIE_TOL {
                        leaving.push(pos);
                    }
                }
                for pos in leaving {
                    let mut next = basis.clone();
                    next[pos] = entering;
                    next.sort_unstable();
                    if seen.insert(next.clone()) {
                        queue.push_back(next);
                    }
                }
            }
        }

        if found.is_empty() {
            return Err(Error::Internal("no feasible decomposition found".into()));
        }
        Ok(found.into_iter().map(|(support, weights)| Vertex { support, weights }).collect())
    }

    /// For a 0/1 matrix the polytope is the single point mass on its own map.
    fn point_mass(&self) -> Option<Vertex> {
        if !self.target.is_deterministic(0.0) {
            return None;
        }
        let n = self.dim();
        let assignment: Vec<usize> =
            (0..n).map(|i| (0..n).find(|&j| self.target.get(i, j) == 1.0).unwrap_or(0)).collect();
        let idx = DeterministicMap::new(assignment).ok()?.index();
        let mut weights = vec![0.0; self.maps.len()];
        weights[idx] = 1.0;
        Some(Vertex { support: vec![idx], weights })
    }

    /// Row distributions of `(1−δ)·S + δ·Σ μ_f f`.
    fn mixed_rows(&self, mu: &[f64]) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut rows: Vec<Vec<f64>> =
            self.target.rows().iter().map(|r| r.iter().map(|x| x * (1.0 - PERTURBATION)).collect()).collect();
        for (f, &w) in self.maps.iter().zip(mu) {
            for (i, &j) in f.assignment().iter().enumerate() {
                rows[i][j] += PERTURBATION * w;
            }
        }
        debug_assert_eq!(rows.len(), n);
        rows
    }

    /// Support of the comonotone (quantile) coupling of the rows, padded
    /// with further columns until it forms a basis.
    ///
    /// Along the quantile parameter every new map raises some coordinate to
    /// a value not used before, so the support columns are independent.
    fn initial_basis(&self, a: &[Vec<f64>], rows: &[Vec<f64>]) -> Result<Vec<usize>> {
        let n = self.dim();
        let rank = a.len();
        let mut cuts: Vec<f64> = vec![0.0, 1.0];
        for row in rows {
            let mut acc = 0.0;
            for &x in &row[..n - 1] {
                acc += x;
                cuts.push(acc.min(1.0));
            }
        }
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();

        let mut support: Vec<usize> = Vec::new();
        for w in cuts.windows(2) {
            if w[1] - w[0] <= 0.0 {
                continue;
            }
            let mid = 0.5 * (w[0] + w[1]);
            let assignment: Vec<usize> = rows
                .iter()
                .map(|row| {
                    let mut acc = 0.0;
                    for (j, &x) in row.iter().enumerate() {
                        acc += x;
                        if mid < acc {
                            return j;
                        }
                    }
                    n - 1
                })
                .collect();
            let idx = DeterministicMap::new(assignment)?.index();
            if !support.contains(&idx) {
                support.push(idx);
            }
        }

        let column = |c: usize| -> Vec<f64> { a.iter().map(|row| row[c]).collect() };
        let mut basis: Vec<usize> = Vec::new();
        let mut span: Vec<Vec<f64>> = Vec::new();
        let candidates = support.iter().copied().chain(0..self.maps.len());
        for c in candidates {
            if basis.len() == rank {
                break;
            }
            if basis.contains(&c) {
                continue;
            }
            if let Some(residual) = orthogonal_residual(&span, &column(c)) {
                span.push(residual);
                basis.push(c);
            }
        }
        if basis.len() != rank {
            return Err(Error::Internal("could not complete an initial basis".into()));
        }
        basis.sort_unstable();
        Ok(basis)
    }
}

/// Strictly positive weights over the maps with no arithmetic coincidences.
fn generic_weights(m: usize) -> Vec<f64> {
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let raw: Vec<f64> = (0..m).map(|k| 1.0 + ((k as f64 + 1.0) * golden).fract()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Indices of a maximal independent subset of rows, in order.
fn independent_rows(a: &[Vec<f64>]) -> Vec<usize> {
    let mut span: Vec<Vec<f64>> = Vec::new();
    let mut keep = Vec::new();
    for (r, row) in a.iter().enumerate() {
        if let Some(residual) = orthogonal_residual(&span, row) {
            span.push(residual);
            keep.push(r);
        }
    }
    keep
}

/// Component of `v` orthogonal to the (orthonormal) `span`, normalized, or
/// `None` when `v` lies in the span.
fn orthogonal_residual(span: &[Vec<f64>], v: &[f64]) -> Option<Vec<f64>> {
    let scale = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return None;
    }
    let mut r = v.to_vec();
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for u in span {
            let dot: f64 = r.iter().zip(u).map(|(a, b)| a * b).sum();
            r.iter_mut().zip(u).for_each(|(a, b)| *a -= dot * b);
        }
    }
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm <= 1e-9 * scale {
        return None;
    }
    r.iter_mut().for_each(|x| *x /= norm);
    Some(r)
}

/// LU factorization with partial pivoting of a small dense square matrix.
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    /// Factors the matrix whose columns are `cols`; `None` if singular.
    fn factor(cols: &[Vec<f64>]) -> Option<Self> {
        let n = cols.len();
        let mut lu = vec![0.0; n * n];
        for (c, col) in cols.iter().enumerate() {
            debug_assert_eq!(col.len(), n);
            for (r, &v) in col.iter().enumerate() {
                lu[r * n + c] = v;
            }
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let pivot = (k..n).max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))?;
            if lu[pivot * n + k].abs() < SINGULAR_TOL {
                return None;
            }
            if pivot != k {
                for c in 0..n {
                    lu.swap(k * n + c, pivot * n + c);
                }
                perm.swap(k, pivot);
            }
            let diag = lu[k * n + k];
            for i in (k + 1)..n {
                let factor = lu[i * n + k] / diag;
                lu[i * n + k] = factor;
                if factor != 0.0 {
                    for c in (k + 1)..n {
                        lu[i * n + c] -= factor * lu[k * n + c];
                    }
                }
            }
        }
        Some(Self { n, lu, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                y[i] -= self.lu[i * n + k] * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in (i + 1)..n {
                y[i] -= self.lu[i * n + k] * y[k];
            }
            y[i] /= self.lu[i * n + i];
        }
        y
    }
}
