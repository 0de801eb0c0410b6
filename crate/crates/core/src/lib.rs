//! Square-ordered monomial bases on finite truncations of `c0`.
//!
//! * [`multiindex`]: multi-indices, the square order, rank and unrank.
//! * [`ordering`]: compatible orderings of doubly indexed families and
//!   their prefix decompositions; the global order on all monomials.
//! * [`polynomial`]: sparse homogeneous polynomials and their length
//!   decomposition.
//! * [`norms`]: polydisc sup-norm brackets and the grid oracle.
//! * [`constants`]: basis-constant estimates and the inductive `3^n` chain.
//! * [`seminorms`]: degree-additive seminorms on truncated Taylor series.
//! * [`suite`]: the seeded property suite behind `verify-all`.

pub mod constants;
pub mod error;
pub mod io;
pub mod multiindex;
pub mod norms;
pub mod ordering;
pub mod polynomial;
pub mod seminorms;
pub mod suite;

pub use error::{Error, Result};
pub use multiindex::MultiIndex;
pub use norms::{NormBracket, Polydisc};
pub use ordering::CompatibleOrdering;
pub use polynomial::{Complex64, ExactPoly, HomogeneousPolynomial, Poly64, Series64, TaylorSeries};
