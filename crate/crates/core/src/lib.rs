//! Lindblad Liouvillians as dense superoperators, their PT master symmetry,
//! and the spontaneous breaking of the spectral PT symmetry.
//!
//! Operators on an `N`-dimensional Hilbert space are vectorized row-major:
//! `E_{j,k} = |j><k|` sits at index `j*N + k`, so `ρ -> A ρ B` has matrix
//! `kron(A, B^T)`. Everything is generic over the real scalar ([`Real`],
//! implemented for `f32` and `f64`); the aliases below fix `f64`.
//!
//! ```
//! use pt_liouville::{xxz_liouvillian, eig_biortho, classify_cross, Sector, XxzParams};
//!
//! let p = XxzParams::new(4, 0.5, 1.0, 0.02).unwrap();
//! let dec = eig_biortho(&xxz_liouvillian(&p, Sector::DMZ0).unwrap()).unwrap();
//! let cross = classify_cross(&dec, dec.gamma_bar, 1e-8).unwrap();
//! assert_eq!(dec.len(), 70);
//! assert!(cross.off_cross.is_empty());
//! ```

pub mod eigen;
pub mod error;
pub mod expm;
pub mod liouville;
pub mod lu;
pub mod matrix;
pub mod perturbation;
pub mod scalar;
pub mod spectral;
pub mod spin;
pub mod symmetry;
pub mod threshold;
pub mod xxz;

pub use error::{Error, Result};
pub use expm::mat_exp;
pub use liouville::{
    average_damping, build_superoperator, dissipator, dissipator_traceless, hermiticity_residual, identity_vector,
    propagator, sector_restrict, traceless_part, LindbladModel, SuperOperator,
};
pub use matrix::{dagger, hs_inner, kron, CMatrix};
pub use perturbation::{
    degeneracy_report, degeneracy_report_in_blocks, heuristic_gamma_pt, population_matrix, population_matrix_with,
    velocity_check, DegeneracyReport, PerturbationReport, Selection, VelocityReport,
};
pub use scalar::{collinearity_error, Cplx, Real};
pub use spectral::{
    classify_cross, eig_biortho, fastest_mode, pt_partner_check, steady_state, verify_d2, CrossClassification,
    D2Report, SpectralDecomposition,
};
pub use spin::{site_operator, BasisConvention, Pauli};
pub use symmetry::{
    check_inversion, check_pt, check_pt_rows, parity_from_pair, xxz_parity, ParitySuperOp, SymmetryReport,
};
pub use threshold::{
    biased_state, decay_series, find_gamma_pt, find_threshold, is_unbroken, is_unbroken_model, observable_decay,
    scaling_study, DecaySeries, ScalingStudy, ThresholdOutcome, ThresholdResult, XxzFamily,
};
pub use xxz::{hamiltonian, lindblads, spin_current, xxz_liouvillian, xxz_model, Sector, XxzParams};

pub type C64 = Cplx<f64>;
pub type ComplexMatrix = CMatrix<f64>;
pub type SuperOp = SuperOperator<f64>;
pub type Model = LindbladModel<f64>;
pub type Parity = ParitySuperOp<f64>;
pub type Spectrum = SpectralDecomposition<f64>;
pub type XxzParameters = XxzParams<f64>;

pub type ComplexMatrix32 = CMatrix<f32>;
pub type SuperOp32 = SuperOperator<f32>;
