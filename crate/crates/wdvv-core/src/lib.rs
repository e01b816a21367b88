//! Exact symbolic computation for the bi-Hamiltonian structure of the WDVV
//! hydrodynamic-type systems: jet-space calculus, matrix differential
//! operators, Hamiltonian-property checks, exact tensor calculus, and the
//! conservation-law machinery that reconstructs the third-order operator from
//! Lax-pair data. All arithmetic is exact rational; every identity check is a
//! decidable zero test.

pub mod cache;
pub mod diffop;
pub mod exact;
pub mod geometry;
pub mod jet;
pub mod lax;
pub mod linalg;
pub mod poisson;
pub mod reconstruct;
pub mod wdvv;

pub use exact::{Expr, Family, Poly, Rx, Scalar, Var};
