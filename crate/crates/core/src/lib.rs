//! Quantum statistical mechanics of knot semigroups at desk scale.
//!
//! The crate is split by topic:
//!
//! - [`specfun`]: zeta variants, polylogarithms, Lerch transcendent and the
//!   exact combinatorial families (Stirling, Eulerian, ordered Bell, Möbius sums).
//! - [`catalog`]: prime knot tables and the asymptotic multiplicity model.
//! - [`semigroup`]: connected sums, the Grothendieck group and the weight `f(g)`.
//! - [`partition`]: partition functions, Euler products and convergence thresholds.
//! - [`kms`]: Gibbs/KMS state evaluation.
//! - [`knotgroups`]: Wirtinger presentations, Smith normal form, Alexander
//!   polynomials and de Rham representations.
//! - [`crossed`]: exact `Q/Z` group-ring actions and Bost–Connes normal forms.
//! - [`cli`]: the `knotstat` command line.

pub mod arith;
pub mod catalog;
pub mod cli;
pub mod crossed;
pub mod error;
pub mod kms;
pub mod knotgroups;
pub mod partition;
pub mod qmodz;
pub mod semigroup;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
pub use qmodz::QmodZ;
