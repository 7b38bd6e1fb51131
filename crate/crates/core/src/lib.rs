//! Exact arithmetic for paradoxical Collatz sequences.
//!
//! A sequence `n, T(n), ..., T^j(n)` is *paradoxical* when its coefficient
//! `3^q / 2^j` is below one while its last term is still at least `n`. This
//! crate holds everything that does not need an operating system: the two
//! Collatz maps with their exact linear decomposition, the partial order on
//! parity vectors, the extremal and harmonic bounds, the continued fraction
//! of `log 2 / log 3` with certified interval arithmetic, and the per-start
//! search kernels (stopping times, delays, excursions, paradox scans).
//!
//! Parallel sharding, checkpoints, record-table files and the command line
//! live in the companion `paradox` crate.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod dyadic;
pub mod dynamics;
mod error;
pub mod numtheory;
pub mod poset;
pub mod real;
pub mod records;
pub mod search;

pub use dyadic::Dyadic;
pub use dynamics::{Formalism, LinearForm, Natural, Trajectory};
pub use error::{Error, Result};
pub use poset::{ParityVector, PosetRelation};
pub use search::ParadoxHit;
