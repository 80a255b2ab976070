//! Reality domain of the 4x4 chain Hamiltonian
//!
//! ```text
//!     | -3   b   0   0 |
//! H = | -b  -1   a   0 |      b = sqrt(c^2 + f^2)
//!     |  0  -a   1   c |
//!     |  0   0  -c   3 |
//! ```
//!
//! [`analytic`] gives the closed-form membership test for the set of
//! couplings with an entirely real spectrum. [`oracle`] computes the spectrum
//! by brute force, along two independent routes, to check it. [`scan`] grids
//! parameter slices and traces the boundary.

pub mod analytic;
pub mod error;
pub mod figures;
mod hqr;
pub mod model;
pub mod oracle;
pub mod par;
pub mod scan;

pub use analytic::{
    b_bounds, c_bounds, critical_points, delta_interval, f_upper, from_reparam,
    membership_analytic, membership_reparam, phi_of, to_reparam, BoundaryBand, CriticalPoints,
    DeltaInterval, Membership, Reason, ReparamPoint, Verdict,
};
pub use error::{ChartConstraint, Error, Result};
pub use figures::{figure1_data, figure2_data, CurveSample};
pub use model::{build_hamiltonian, eval_secular, secular_quartic, Couplings, Matrix4, SecularQuartic};
pub use oracle::{
    classify_reality, matrix_eigenvalues, quartic_roots, root_shift_signs, self_duality_residual,
    RealityClass, RealityTolerance, SpectrumResult,
};
pub use par::Execution;
pub use scan::{scan_slice, trace_boundary, Axis, BoundaryTrace, ClassifiedGrid, SliceSpec};
