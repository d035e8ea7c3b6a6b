//! Exact verification toolkit for the group-ring identities behind Hecke
//! operators on period polynomials, together with the two indefinite theta
//! series identities that fall out of them.
//!
//! Everything is exact: matrix entries are arbitrary-size integers and ring
//! coefficients are arbitrary-precision rationals.

pub mod error;
pub mod geometry;
pub mod hecke;
pub mod linsolve;
pub mod matrix;
pub mod membership;
pub mod report;
pub mod ring;
pub mod theta;

pub use error::{Error, Result};
pub use matrix::MatN;
pub use membership::{MembershipVerdict, ModuleSpec, Refutation, Witness};
pub use ring::{Rational, RingElt};
