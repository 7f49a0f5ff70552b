//! Exact graded-dimension calculus for the kernels of categorical
//! resolutions of varieties with one nodal point.
//!
//! The crate is organised bottom-up:
//! - [`graded`]: graded dimension vectors and a long-exact-sequence solver;
//! - [`quadric`]: cohomology and Homs of line and spinor bundles on quadrics;
//! - [`formalcat`]: formal triangulated objects, mutations and Serre functors;
//! - [`nodal`]: the blow-up context, the kernel generator and its checks;
//! - [`mukai`]: Chern characters on odd quadrics and the Mukai lattice of a
//!   degree-6 K3 surface;
//! - [`cubic`]: the nodal cubic fourfold replay;
//! - [`cli`]: the command-line front end;
//! - [`report`]: verification reports shared by the suites.

pub mod cli;
pub mod cubic;
pub mod error;
pub mod formalcat;
pub mod graded;
pub mod mukai;
pub mod nodal;
pub mod quadric;
pub mod report;

pub use error::{Error, Result};
pub use graded::GradedDim;
