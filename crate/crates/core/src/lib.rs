//! Constructive Artin approximation over truncated power series.
//!
//! The crate is organised bottom-up:
//!
//! - [`series`]: truncated multivariate power series over the rationals
//! - [`weierstrass`]: regularity, Weierstrass division and preparation, pseudo-division
//! - [`linalg`]: series matrices, Jacobians, determinants, adjugates and rank certificates
//! - [`ift`]: Newton lifting for the formal implicit function theorem
//! - [`tougeron`]: certification of approximate solutions and parametric solutions
//! - [`artin`]: extraction, dimension reduction and the recursive solver
//! - [`cli`]: JSON problem documents and reports for the `artin` binary

// index loops mirror the subscripts of the formulas
#![allow(clippy::needless_range_loop)]

pub mod artin;
pub mod cli;
pub mod error;
pub mod ift;
pub mod linalg;
pub mod series;
pub mod tougeron;
pub mod weierstrass;

pub use error::{Error, ErrorKind, Result};
pub use series::{Exponent, Order, Series};
