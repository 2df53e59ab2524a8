//! Exact 2-loop diagram calculus: canonical theta forms, truncated
//! noncommutative series, formal Gaussian contraction, the clasper surgery
//! formula, the monomial-matrix pipeline with integrality verdicts, and
//! cyclic branched-cover arithmetic.

pub mod contraction;
pub mod covers;
pub mod freealg;
pub mod laurent;
pub mod rozansky;
pub mod surgery;
pub mod theta;

pub use laurent::{LaurentError, LaurentPoly};
pub use theta::{canonical_pair, hair, reduce_dumbbell, RawTriple, ThetaElement, ThetaError};
