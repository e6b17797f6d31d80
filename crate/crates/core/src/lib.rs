//! Exact verification toolkit for knot groups commensurable with the regular
//! ideal dodecahedral tessellation of hyperbolic 3-space.
//!
//! The crate is layered bottom-up:
//!
//! * [`fp`]: words, finite presentations and the built-in catalog.
//! * [`coset`]: Todd–Coxeter coset enumeration.
//! * [`rewrite`]: Reidemeister–Schreier, Tietze simplification, group order.
//! * [`abelian`]: Smith normal form and abelian invariants.
//! * [`field`]: exact arithmetic in Q(u, ω) and PSL(2) matrices over it.
//! * [`representation`]: the concrete matrix data and its checks.
//! * [`census`]: the meridian census, conjugacy classification and audits.
//! * [`cli`]: the `dodeca` command-line front end.

pub mod abelian;
pub mod census;
pub mod cli;
pub mod coset;
pub mod field;
pub mod fp;
pub mod representation;
pub mod rewrite;
