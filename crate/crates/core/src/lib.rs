//! Exact steady states of the `n`-species totally asymmetric zero range
//! process on a ring.
//!
//! The crate is `no_std` (it needs `alloc`). The stationary weights of a
//! sector can be obtained in four independent ways:
//!
//! * [`tazrp::steady_state_kernel`]: exact null vector of the Markov generator;
//! * [`projection::steady_state_by_counting`]: fibre sizes of the projection
//!   from the `n`-line process, whose stationary measure is uniform;
//! * [`matrix_product::steady_prob_ctm`]: the crystal corner transfer matrix sum;
//! * [`matrix_product::steady_prob_mp`]: the trace of a product of q=0
//!   oscillator corner transfer matrices.
//!
//! Weights are unnormalized integers summing to `#B(m)`.
#![cfg_attr(not(test), no_std)]

#[macro_use]
extern crate alloc;

pub mod combinatorial_r;
pub mod crystal;
pub mod distribution;
pub mod error;
pub mod linalg;
pub mod matrix_product;
pub mod multiline;
pub mod projection;
pub mod tazrp;

pub use crystal::{Composition, MultiplicityArray};
pub use distribution::{tv_distance, Distribution};
pub use error::{Error, Result};
pub use tazrp::{Configuration, LocalState};
