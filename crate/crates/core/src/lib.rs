//! Smooth complete toric surfaces as planar lattice fans.
//!
//! * [`lattice`]: primitive rays, unimodular maps, Stern–Brocot depth.
//! * [`fan`]: validated fans with blow-up, blow-down and isomorphism tests.
//! * [`classify`]: minimal models and the invariants `n`, `l`, `l0`.
//! * [`stabilize`]: explicit blow-up sequences to the reference fans `X_j`.
//! * [`polytope`]: moment polygons, lattice-point sums and the Futaki /
//!   Mabuchi obstruction coefficients.
//! * [`poly`]: exact rational polynomials.
//! * [`format`]: the plain-text file formats.

#![allow(clippy::result_large_err)]

pub mod classify;
pub mod exec;
pub mod fan;
pub mod format;
pub mod lattice;
pub mod poly;
pub mod polytope;
pub mod stabilize;

pub use classify::{ClassificationReport, ClassifyError, HirzebruchBase, MinimalModel, ModelTag};
pub use exec::ExecMode;
pub use fan::{BlowupSequence, BlowupStep, Fan2D, FanError};
pub use lattice::{det2, primitive, sb_depth, sb_parents, IntVec2, LatticeError, RayVec, Rational2, UnimodularMap};
pub use format::ParseError;
pub use poly::RationalPoly;
pub use polytope::{LatticeCount, LatticePolytope, ObstructionReport, PolytopeError, SupportHeights};
pub use stabilize::{StabilizeError, Stabilization};
