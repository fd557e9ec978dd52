//! Quantum CSS codes built from pairs of circulant matrices over F2, together
//! with the graph and lattice machinery needed to study them.
//!
//! A code `GB(A, B, n)` is defined by two polynomials `A`, `B` in
//! `F2[X]/(X^n - 1)` through the parity-check matrices
//!
//! ```text
//! H_X = [ Circ(A) | Circ(B) ]        H_Z = [ Circ(B)^T | Circ(A)^T ]
//! ```
//!
//! When `A` and `B` are binomials the X-checks are exactly the vertex-edge
//! incidence matrix of a circulant Cayley multigraph and the Z-checks are its
//! face-edge incidence matrix, which turns distance questions into questions
//! about short cycles. The crate provides:
//!
//! * [`f2`]: bit-packed linear algebra over F2 (polynomials, matrices,
//!   row bases, kernels, circulants);
//! * [`code`]: code construction, dimension, kernel/rowspace membership for
//!   codeword pairs, an exhaustive distance oracle, and the named infinite
//!   families;
//! * [`cayley`]: Cayley graphs of `Z/nZ` and of quotients `Z^2/L`, their
//!   incidence matrices, connectivity tests, and canonical forms;
//! * [`lattice`]: the sublattice of `Z^2` attached to a unit-form code, its
//!   minimum Manhattan norm, and staircase codewords;
//! * [`distance`]: the cycle-search distance engine with lattice lower bounds
//!   and staircase upper bounds;
//! * [`equivalence`]: canonical triples and CGP equivalence verdicts;
//! * [`classify`]: enumeration, deduplication, and tabulation of all codes up
//!   to a given circulant size, with a resumable on-disk cache.

pub mod cayley;
pub mod classify;
pub mod code;
pub mod distance;
pub mod equivalence;
pub mod f2;
pub mod lattice;

mod canon;
mod error;

pub use error::{Error, Result};
