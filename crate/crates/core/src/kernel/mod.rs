//! Dense complex linear algebra: matrices, Kronecker products, partial
//! traces and a Hermitian eigensolver.

mod eig;
mod matrix;

pub use eig::{
    hermitian_eig, hermitian_eig_with, is_psd, spectral_map, EigConfig, Spectrum, HERMITIAN_TOL,
    MAX_SWEEPS, SWEEP_THRESHOLD,
};
pub use matrix::{kron, partial_trace_second, ComplexMatrix, C64, ONE, ZERO};

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_of_identities() {
        let k = kron(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(k, ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_of_matrix_units() {
        let k = kron(&ComplexMatrix::unit(2, 0, 0), &ComplexMatrix::unit(2, 1, 1)).unwrap();
        assert_eq!(k, ComplexMatrix::unit(4, 1, 1));
    }

    #[test]
    fn kron_of_diagonals() {
        let k = kron(&ComplexMatrix::from_real_diag(&[2.0, 3.0]), &ComplexMatrix::from_real_diag(&[5.0, 7.0]))
            .unwrap();
        assert_eq!(k, ComplexMatrix::from_real_diag(&[10.0, 14.0, 15.0, 21.0]));
    }

    #[test]
    fn kron_rejects_rectangular() {
        assert!(kron(&ComplexMatrix::zeros(2, 3), &ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn partial_trace_of_x_tensor_identity() {
        let x = ComplexMatrix::from_rows(&[
            vec![C64::new(1.0, 0.0), C64::new(2.0, -1.0)],
            vec![C64::new(0.5, 3.0), C64::new(-4.0, 0.0)],
        ])
        .unwrap();
        let pt = partial_trace_second(&kron(&x, &ComplexMatrix::identity(2)).unwrap(), 2).unwrap();
        assert!(pt.max_abs_diff(&x.scale_real(2.0)) < 1e-15);
    }

    #[test]
    fn partial_trace_of_example_representative_is_identity() {
        let (p, q) = (0.3, 0.8);
        let rho = ComplexMatrix::from_real_diag(&[p, 1.0 - p, q, 1.0 - q]);
        let pt = partial_trace_second(&rho, 2).unwrap();
        assert!(pt.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn partial_trace_kills_traceless_second_factor() {
        let e12 = ComplexMatrix::unit(2, 0, 1);
        let pt = partial_trace_second(&kron(&e12, &e12).unwrap(), 2).unwrap();
        assert_eq!(pt, ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn partial_trace_rejects_bad_dimension() {
        assert!(partial_trace_second(&ComplexMatrix::identity(3), 2).is_err());
        assert!(partial_trace_second(&ComplexMatrix::identity(4), 3).is_err());
    }
}
