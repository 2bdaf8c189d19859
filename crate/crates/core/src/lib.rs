//! Exact simulation and verification toolkit for the splitting sandpile growth
//! model (Zhang toppling rule) on `Z^d`.
//!
//! A pile of mass `n` sits at the origin over a uniform background of mass `h < 1`.
//! Any site holding mass at least 1 may split, emptying itself and sending an
//! equal `1/(2d)` share to each of its `2d` neighbours. The crate provides:
//!
//! * [`numeric`]: rationals and masses affine in the background `h`, so that one
//!   run certifies a whole interval of `h`;
//! * [`lattice`]: sites, sparse configurations and the named regions;
//! * [`engine`]: the splitting dynamics under parallel, lexicographic and random
//!   orders, plus a dense `f64` runner for large robust-regime runs;
//! * [`automata`]: finite-state cellular automata with multiset rules and the
//!   diamond/square/octagon automata with their recurrent patterns;
//! * [`conformance`]: label-to-mass mappings, co-simulation of an automaton
//!   against the splitting automaton and rule interval arithmetic;
//! * [`analysis`]: limiting-shape checks, ball bounds, Green's function,
//!   odometer diagnostics, regime constants and parameter scans.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod analysis;
pub mod automata;
pub mod conformance;
pub mod engine;
pub mod lattice;
pub mod numeric;

pub use lattice::{Region, Site, SparseConfiguration};
pub use numeric::{AffineMass, HInterval, IntervalDecision, Rational};
