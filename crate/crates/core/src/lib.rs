//! Sturmian morphisms through their faithful 3×3 integer representation.
//!
//! Exact arithmetic in real quadratic fields, mechanical sequences and 2iet
//! codings, the monoid generated by G, G̃, D, D̃, the matrix monoid ℰ with
//! membership and factorization, fixed points via dominant eigenvectors, and
//! square roots of characteristic fixed points.

pub mod dynamics;
pub mod error;
pub mod exactfield;
pub mod morphisms;
pub mod representation;
pub mod sqroot;
pub mod words;

pub use error::{Error, Result};
pub use exactfield::{FieldDescriptor, QuadExt};
pub use morphisms::{compose, BinaryMorphism, GenWord, Generator, IncidenceMatrix};
pub use representation::{decompose, is_in_e, rep, Mat3, Membership};
pub use words::{Boundary, FiniteWord, ParamVector, PrefixStream, SlopeIntercept};
