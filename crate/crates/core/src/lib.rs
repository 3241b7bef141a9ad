//! Semilattice decomposition of the multiplicative semigroup of finite
//! commutative rings, with a structural route for quotients of Dedekind
//! domains (`Z_n` and `Z[√d]/A`) and a brute-force route for any finite
//! commutative ring with 1.
//!
//! The multiplicative semigroup of such a quotient is a Boolean semilattice
//! of components `R_e`, one per idempotent ideal `e`. Each component is a
//! group (its *base*) extended by finitely many *layers*
//! `R_e^i \ R_e^{i+1}`.
//!
//! * [`ring`]: finite rings, principal ideals, annihilators, units, quotients.
//! * [`lattice`]: ideals of `Z[√d]` in Hermite normal form and their
//!   factorisation into prime ideals.
//! * [`oracle`]: the decomposition computed from ring arithmetic alone.
//! * [`recipe`]: the decomposition computed from a prime factorisation.
//! * [`report`]: reports, DOT rendering and the command-line drivers.

pub mod arith;
pub mod decomposition;
pub mod elemset;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod recipe;
pub mod report;
pub mod ring;

pub use decomposition::{Component, Decomposition, Provenance};
pub use elemset::{Elem, ElemSet};
pub use error::{Error, Result};
pub use lattice::{PrimeFactorization, QuadLattice, Ramification};
pub use ring::{FiniteRing, IdealHandle, RingDescriptor};
