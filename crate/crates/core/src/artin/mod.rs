//! Strengthened Artin approximation: every formal solution of an analytic system is a
//! specialization `y(x, t(x))` of a parametric family of solutions.
//!
//! The construction inducts on the number of `x` variables. A simple solution whose Jacobian
//! minor vanishes at the origin is replaced by an approximate solution polynomial in `x_n`
//! ([`extract_approximate`]); the coefficients of such polynomials are the solutions of a
//! system in one variable fewer ([`reduce_system`]), which is solved recursively.

mod extract;
mod reduce;
mod solve;

pub use extract::{extract_approximate, ExtractionResult};
pub use reduce::{reduce_system, ReducedSystem};
pub use solve::{
    artin_approximate, artin_approximate_with, corollary1_lift, solve_recursive,
    solve_recursive_with, SolveOptions, StrongSolution,
};

use crate::error::Result;
use crate::ift::{substitute_y, AnalyticSystem};
use crate::linalg::SeriesMatrix;
use crate::series::Series;
use crate::tougeron::tougeron_data;

/// `delta`, the adjugate and `g = M f`, all in the `(x, y)` ring.
pub(crate) fn g_system(f: &AnalyticSystem) -> Result<(Series, SeriesMatrix, Vec<Series>)> {
    let (delta, adj) = tougeron_data(f)?;
    let g = if f.m() == 0 {
        vec![]
    } else {
        adj.mul_vec(f.fs())?
    };
    Ok((delta, adj, g))
}

/// `h(x, y(x))` for a single series.
pub(crate) fn at(h: &Series, n: usize, y: &[Series]) -> Result<Series> {
    Ok(substitute_y(std::slice::from_ref(h), n, y)?.remove(0))
}

#[cfg(test)]
mod tests;
