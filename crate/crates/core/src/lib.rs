//! Constant-mean-curvature-one surfaces in hyperbolic 3-space from a single
//! holomorphic function.
//!
//! A holomorphic `f(τ)` determines a pair of isometric surfaces in ℝ³ and a
//! congruence of spheres centered on one of them. The congruence has two
//! envelopes: the plane `z = 0` and a surface which, read in the upper
//! half-space model, has hyperbolic mean curvature one. This crate
//!
//! * parses `f` and evaluates `(f, f′, f″)` as complex jets ([`holo`]),
//! * builds the sphere congruence and its envelopes ([`congruence`]),
//! * evaluates the closed-form surface ([`bianchi`]) and, independently,
//!   the null-curve construction ([`small`]),
//! * samples both over polar grids ([`grid`]) and checks the results with
//!   finite differences ([`verify`]).

// Negated float comparisons below are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bianchi;
pub mod catalog;
pub mod cli;
pub mod congruence;
pub mod error;
pub mod export;
pub mod grid;
pub mod holo;
pub mod small;
pub mod verify;

pub use bianchi::{bianchi_calo_point, bicalo_denominator, bicalo_via_congruence, HalfSpacePoint};
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use grid::{bicalo_grid, degeneracy_classify, small_grid, Degeneracy, Domain, Method, SurfaceGrid};
pub use holo::{eval_jet, eval_jet_on_sheet, parse, Expr, Jet2};
pub use small::{small_matrix, to_upper_half_space, NullCurveMatrix};
pub use verify::{verify_grid, Stencil, Tolerances, VerificationReport};
