//! Finite-field polynomial laboratory for prime-tuple counts over F_q[t].
//!
//! For distinct offsets `a_1, …, a_r` of degree `< n`, the central quantity is
//! the number of monic degree-`n` polynomials `f` over F_q for which every
//! `f + a_i` is irreducible, compared against `q^n / n^r` with errors measured
//! on the `q^{n-1/2}` scale.
//!
//! - [`ffield`]: F_p and F_{p^k} arithmetic, quadratic character.
//! - [`fqpoly`]: dense polynomials, resultants, discriminants, Rabin test,
//!   distinct-degree factor degrees, sharded enumeration.
//! - [`bipoly`]: discriminants in `t` of polynomials whose constant term is a
//!   free variable `U`.
//! - [`hlcount`]: exact and sampled tuple counts, discriminant-density counts.
//! - [`galois_stats`]: joint cycle-type statistics and discriminant parity.
//! - [`expcli`]: sweeps, checkpoints, error-exponent fits, result files.

pub mod bipoly;
pub mod expcli;
pub mod ffield;
pub mod fqpoly;
pub mod galois_stats;
pub mod hlcount;
pub mod numtheory;

pub use ffield::{Field, FieldElem, FieldError};
pub use fqpoly::{Poly, PolyError, Shard};
