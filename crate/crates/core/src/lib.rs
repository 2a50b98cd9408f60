//! Deciding secret-key distillability of Pauli and generalized-Pauli
//! channels under prepare-and-measure protocols with two-way advantage
//! distillation.
//!
//! The crate models the channel as seen by the honest parties
//! ([`states`]), the eavesdropper's optimal purification of it ([`eve`]),
//! the block-wise two-way advantage-distillation step ([`cad`]), the key
//! rates of the protocols that follow it ([`keyrate`]), and the security
//! predicates and critical error rates that summarize when any of it can
//! work ([`security`]).
//!
//! All numerics are deterministic `f64`; entropies are in bits. The crate
//! is `no_std`-compatible (with `alloc`); the default `std` feature only
//! switches the float shims and enables the multi-threaded Monte Carlo
//! driver.
#![cfg_attr(not(feature = "std"), no_std)]
#![deny(missing_docs)]
#![warn(clippy::pedantic)]
#![allow(
    clippy::many_single_char_names,
    clippy::similar_names,
    // Index variables mirror the symbols in the documented formulas.
    clippy::needless_range_loop,
    // Counts and indices feeding f64 formulas stay well inside the mantissa.
    clippy::cast_precision_loss,
    clippy::cast_possible_truncation,
    clippy::cast_possible_wrap,
    clippy::cast_lossless,
    clippy::cast_sign_loss,
    clippy::doc_markdown,
    clippy::unreadable_literal,
    // Exact float comparisons in tests pin bit-for-bit contracts.
    clippy::float_cmp,
    // (a+b)/2 spellings mirror the documented eigenvalue formulas.
    clippy::manual_midpoint
)]

extern crate alloc;

pub mod cad;
pub mod error;
pub mod eve;
pub mod keyrate;
pub mod security;
pub mod states;

mod linalg;
mod math;

pub use error::{Error, Result};
