//! Mixing entropy of unital completely positive maps on matrix algebras.
//!
//! Channels act on `n×n` complex matrices in the Heisenberg picture. The
//! crate builds the representative operator `ρ_T` of a channel, checks its
//! defining properties, computes the channel entropy `H(T)` of classical
//! channels by minimizing over extremal decompositions, and compares it with
//! the von Neumann entropy `d(ρ_T)`.
//!
//! ```
//! use chanent::{channel_entropy_classical, StochasticMatrix};
//!
//! let s = StochasticMatrix::binary(0.5, 0.5).unwrap();
//! let report = channel_entropy_classical(&s).unwrap();
//! assert!((report.h_channel.nats() - std::f64::consts::LN_2).abs() < 1e-12);
//! assert!(report.gap > 0.0);
//! ```

pub mod channel;
pub mod cli;
pub mod choi;
pub mod decomposition;
pub mod entropy;
pub mod error;
pub mod exec;
pub mod harness;
pub mod io;
pub mod kernel;
pub mod sampling;

pub use channel::{
    check_completely_positive, check_unital, classical_embed, is_ucp, state_channel, Channel, ChannelForm,
    DensityOperator, StochasticMatrix,
};
pub use choi::{
    is_extremal_choi, matrix_elements, reconstruct, representative_operator, verify_properties, PropertyReport,
    RepresentativeOperator,
};
pub use decomposition::{
    channel_entropy_classical, enumerate_deterministic, minimize_f_closed_form, state_channel_entropy_upper,
    verify_inequality, DeterministicMap, EntropyReport, ExtremalDecomposition,
};
pub use entropy::{choi_entropy, eigen_entropy, ohya_entropy, EntropyValue};
pub use error::{Error, Result};
pub use exec::Execution;
pub use kernel::{hermitian_eig, kron, partial_trace_second, ComplexMatrix, Spectrum, C64};
