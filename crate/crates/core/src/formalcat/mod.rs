//! Formal triangulated objects over a context of generators.
//!
//! Objects are terms ([`ObjExpr`]) over generators. Homs are evaluated
//! structurally: generator pairs come from the context's table, sums and
//! shifts by the graded conventions, and cones through the long exact
//! sequence of their triangle. A degree is only reported when the ranks of
//! the bounding maps are forced; otherwise the result is
//! [`Error::Indeterminate`](crate::Error::Indeterminate).
//!
//! Cones stand for the cone of a nonzero map. When the map is not unique up
//! to scalars the term names one fixed choice, so `cone(A -> B)` is only
//! used where `Hom^0(A, B)` is one-dimensional or the map is the
//! coevaluation of a mutation.

pub mod context;
pub mod expr;
pub mod mutation;

pub use context::{Context, ContextBuilder, Triangle};
pub use expr::{Gen, ObjExpr};
pub use mutation::{
    apply_relative_twist, apply_serre_action, check_exceptional, check_semiorthogonal,
    check_spherical, mutate_left, mutate_left_through, mutate_right, mutate_right_through,
    serre_in, LefschetzData, Sod, SphericalReport,
};
