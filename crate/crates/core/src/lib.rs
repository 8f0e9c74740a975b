//! Moments of free Wigner chaos elements, non-crossing partition counts and
//! free Poisson diagnostics.
//!
//! * [`partition`]: non-crossing partitions, Catalan and Riordan numbers.
//! * [`cumulant`]: the free moment-cumulant transform and the free Poisson law.
//! * [`laws`]: semicircle and Marchenko-Pastur densities, moments by quadrature.
//! * [`kernel`]: coefficient tensors with adjoints and contractions.
//! * [`chaos`]: chaos moments by contraction sequences, fourth-moment diagnostics.
//! * [`fock`]: a truncated full Fock space used as an independent moment oracle.

pub mod chaos;
pub mod cumulant;
pub mod error;
pub mod fock;
pub mod kernel;
pub mod kernel_io;
pub mod laws;
pub mod partition;
pub mod quadrature;
pub mod scalar;

pub use chaos::{
    convergence_scan, em_domination_check, enumerate_sequences, fourth_moment_decomposition,
    fourth_moment_statistic, poisson_defect, wigner_moment, wigner_product_expand,
    ContractionSequence, DominationCheck, Family, FourthMomentDecomposition, MomentReport,
    PoissonDefect, ScanRow, SequenceClass, SequenceSet,
};
pub use cumulant::{
    additivity_check, centered_poisson_moment, cumulants_from_moments, free_poisson_cumulants,
    moments_from_cumulants, semicircle_cumulants, CumulantSequence, MomentSequence,
};
pub use error::{Error, Result};
pub use fock::{oracle_moment, wigner_apply, FockVector};
pub use kernel::{poisson_kernel, Kernel};
pub use kernel_io::{format_kernel, parse_kernel, parse_rational, TextCoefficient};
pub use laws::Law;
pub use partition::{
    catalan, enumerate_nc, is_noncrossing, riordan, riordan_refined, CountTable, Partition,
};
pub use scalar::Scalar;

pub use num_bigint::BigUint;
pub use num_complex::Complex64;
pub use num_rational::BigRational;
