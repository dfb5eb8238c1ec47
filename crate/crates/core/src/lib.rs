//! Mechanical verification of presentations of Morava K-theory rings
//! `K(s)^*(BG)` for the order-32 groups `G38`–`G41`.
//!
//! The crate builds the relation ideal for any height `s`, computes reduced
//! Gröbner bases and quotient dimensions over F₂, checks derived relations,
//! solves the implicit definitions of `x1`, `y1`, computes the Honda formal
//! group law, and cross-checks the rank bookkeeping in exact arithmetic.

pub mod census;
pub mod groebner;
pub mod honda_fgl;
pub mod nilsolve;
pub mod polyring;
pub mod presentations;
pub mod verify;

pub use groebner::{buchberger, GbBudget, GbError, ReducedGB};
pub use polyring::{Monomial, MonomialOrder, Poly, PolyError, PolyRing, VarTable};
pub use presentations::{build, GroupTag, Presentation};
pub use verify::{verify, verify_all, Phase, VerificationReport, VerifyOptions};

/// Version string written into caches and reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
