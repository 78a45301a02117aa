//! Coinductive process toolkit.
//!
//! Everything in this crate is a finite, exact presentation of some greatest
//! fixpoint: processes are prefix-closed history tries compared by (strong or
//! stuttering) bisimulation, hypersets are pointed graphs identified up to
//! bisimulation, Conway games are polarized graphs ordered by the mutual
//! `leq` recursion or by hyperstrategies, and the extended reals appear twice —
//! as ±-sign strings under an exact dyadic codec, and as the numeric games the
//! codec decorates. Two smaller universes round it out: traced-monoidal
//! relation instances with the free compact (Int) construction over them, and a
//! fuel-bounded untyped lambda calculus acting as a self-interpreting computer
//! with a specializer and recursion-theorem fixpoints.
//!
//! All values are immutable after construction and all operations are pure;
//! memo tables are call-scoped. The `coind` binary exposes each module on the
//! command line with exit code 0 for success/true, 1 for a checked false, and
//! 2 for input errors.

pub mod catcomp;
pub mod digest;
pub mod games;
pub mod hfgraph;
pub mod intcat;
pub mod proc;
pub mod reals;
