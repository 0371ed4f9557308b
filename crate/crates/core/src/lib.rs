//! Exact algebra on the formal punctured disc over nilpotent extensions of Q.
//!
//! The crate provides
//! * [`nilring`]: finite-dimensional local Q-algebras with monomial relations,
//! * [`laurent`]: truncated Laurent series over them, with composition,
//!   inversion and the canonical factorizations of units and automorphisms,
//! * [`group`]: the semidirect product of the loop group of units with the
//!   automorphisms of the disc, and its Lie algebra,
//! * [`cc`]: the Contou-Carrere symbol,
//! * [`cocycles`]: 1-cocycles, cup-product 2-cocycles and coboundaries,
//! * [`detext`]: the determinant 2-cocycle through finite block windows, and
//!   Lie-level extraction of 2-cocycles.
//!
//! Everything is exact rational arithmetic and works without `std`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod cc;
pub mod cocycles;
pub mod detext;
pub mod error;
pub mod group;
pub mod laurent;
pub mod linalg;
pub mod nilring;
pub mod rational;

pub use cc::{cc, cc_exact, cc_explog, cc_reduced, ProductDecomposition};
pub use cocycles::{cup_cocycle, delta1, delta2, delta2_trivial, eval_one_cocycle, GModule, LoopGm, OneCocycle, OneTag, TrivialGm, TwoCocycle, TwoTag};
pub use detext::{block_window, det_cocycle_d, det_cocycle_d_detailed, lie_extract, lie_trace, reach, reach_bound, solve_direct_sum, Block, BlockWindow, DetValue, Reach};
pub use error::{with_horizon, Error, Result};
pub use group::{Bounds, GroupElem, LieElem, Membership, Sampler, Shape};
pub use laurent::{LaurentSeries, Precision, UnitFactorization};
pub use nilring::{ArithOp, Ideal, Monomial, Ring, RingElem, RingSpec};
pub use rational::Rational;
