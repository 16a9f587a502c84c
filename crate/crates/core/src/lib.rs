//! Subsystem dynamics generated by joint unitary evolution of correlated
//! system-bath initial states.
//!
//! The crate is organised bottom-up:
//!
//! * [`operator`] - dense operators on multipartite spaces (tensor products,
//!   partial traces, Gibbs states, Schatten distances, relative entropy).
//! * [`opspace`] - orthonormalized operator subspaces with numerical rank control.
//! * [`consistency`] - decision procedures for U-consistent and family-consistent
//!   subspaces, the consistent kernel and witness extensions.
//! * [`dynmap`] - synthesis of the induced subsystem map and its analysis
//!   (Choi matrix, CP test, positivity scans, positive domain).
//! * [`dilation`] - representations of a map as subsystem dynamics (SWAP and
//!   Kraus dilations, inverse representation).
//! * [`catalog`] - the worked examples: Gibbs family, controlled-phase map,
//!   transpose, repolarizer/depolarizer, and the distinguishability checks.
//! * [`io`] - JSON documents for operators, subspaces, maps and reports.
//!
//! Conventions: the Pauli matrices are the standard X, Y, Z; tensor products
//! follow the Kronecker convention (row index `i_a * dim_b + i_b`); operators
//! are vectorized by stacking columns.

pub mod catalog;
pub mod consistency;
pub mod dilation;
pub mod dynmap;
pub mod error;
pub mod io;
pub mod operator;
pub mod opspace;
pub mod random;
pub mod tolerance;

mod linalg;

pub use error::{Error, Result};
pub use operator::{Operator, SpaceLayout};
pub use opspace::OperatorSubspace;
pub use tolerance::ToleranceConfig;

pub use num_complex::Complex64 as C64;

/// Dense complex matrix used for all operator storage.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
