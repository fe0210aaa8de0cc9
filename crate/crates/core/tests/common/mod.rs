//! Generators shared by the property and acceptance targets.
#![allow(dead_code)]

use artin_core::linalg::SeriesMatrix;
use artin_core::series::Series;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Sparse series with small integer coefficients and terms of degree below `prec`.
pub fn series(nvars: usize, prec: u32, max_terms: usize) -> impl Strategy<Value = Series> {
    let term = (prop::collection::vec(0..prec.max(1), nvars), -4i64..=4);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() < prec)
            .map(|(e, c)| (e, q(c)));
        Series::from_terms(nvars, prec, terms).unwrap()
    })
}

/// Series without constant term.
pub fn series_in_m(nvars: usize, prec: u32, max_terms: usize) -> impl Strategy<Value = Series> {
    series(nvars, prec, max_terms).prop_map(move |s| {
        let c = s.constant_term();
        &s - &Series::constant(nvars, c, prec)
    })
}

/// Unit with constant term in `{-3..3} \ {0}`.
pub fn unit(nvars: usize, prec: u32, max_terms: usize) -> impl Strategy<Value = Series> {
    (
        series_in_m(nvars, prec, max_terms),
        prop_oneof![-3i64..=-1, 1i64..=3],
    )
        .prop_map(move |(s, c)| &s + &Series::constant(nvars, q(c), prec))
}

/// `f = u x_n^k + sum_{i<n} x_i s_i`, regular of order exactly `k` in the last variable.
pub fn regular(nvars: usize, k: u32, prec: u32) -> impl Strategy<Value = Series> {
    (
        unit(nvars, prec, 4),
        prop::collection::vec(series(nvars, prec, 3), nvars - 1),
    )
        .prop_map(move |(u, ss)| {
            let xn = Series::var(nvars, nvars - 1, prec);
            let mut f = &u * &xn.pow(k);
            for (i, s) in ss.iter().enumerate() {
                f = &f + &(&Series::var(nvars, i, prec) * s);
            }
            f
        })
}

/// `(n, k, prec, f regular of order k, h)`.
pub fn division_instance() -> impl Strategy<Value = (usize, u32, u32, Series, Series)> {
    (1usize..=3, 1u32..=3, 4u32..=10).prop_flat_map(|(n, k, prec)| {
        (
            Just(n),
            Just(k),
            Just(prec),
            regular(n, k, prec),
            series(n, prec, 6),
        )
    })
}

pub fn matrix(m: usize, nvars: usize, prec: u32) -> impl Strategy<Value = SeriesMatrix> {
    prop::collection::vec(series(nvars, prec, 3), m * m)
        .prop_map(move |entries| SeriesMatrix::new(m, m, entries).unwrap())
}

/// Draw `count` values from `strategy` with a fixed seed.
pub fn sample<S: Strategy>(strategy: S, count: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|_| strategy.new_tree(&mut runner).unwrap().current())
        .collect()
}

/// Coefficients of `sqrt(1 + z)`.
pub fn sqrt_coeffs(count: usize) -> Vec<BigRational> {
    let half = BigRational::new(1.into(), 2.into());
    let mut out = vec![q(1)];
    for k in 1..count {
        let prev = out[k - 1].clone();
        out.push(prev * (&half - q(k as i64 - 1)) / q(k as i64));
    }
    out
}

/// `x_var * sqrt(1 + x_arg)` in `nvars` variables.
pub fn times_sqrt(nvars: usize, var: usize, arg: usize, prec: u32) -> Series {
    let terms = sqrt_coeffs(prec as usize)
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let mut e = vec![0u32; nvars];
            e[var] += 1;
            e[arg] += k as u32;
            (e, c)
        });
    Series::from_terms(nvars, prec, terms).unwrap()
}

/// `y^2 - x^2 (1 + x)` in `(x, y)`.
pub fn nodal(prec: u32) -> Series {
    Series::from_int_terms(2, prec, &[(&[0, 2], 1), (&[2, 0], -1), (&[3, 0], -1)])
}

/// `y^2 - x2^2 (1 + x1)` in `(x1, x2, y)`.
pub fn cone(prec: u32) -> Series {
    Series::from_int_terms(
        3,
        prec,
        &[(&[0, 0, 2], 1), (&[0, 2, 0], -1), (&[1, 2, 0], -1)],
    )
}

/// `y - x - y^2`, solved by the Catalan generating function.
pub fn catalan(prec: u32) -> Series {
    Series::from_int_terms(2, prec, &[(&[0, 1], 1), (&[1, 0], -1), (&[0, 2], -1)])
}

/// `(n, k, f)` with `f` regular of order `k` and enough precision to prepare.
///
/// A term `x_i` of degree one costs a factor `k` in precision, so `prec > k^2` is needed.
pub fn preparation_instance() -> impl Strategy<Value = (usize, u32, Series)> {
    (1usize..=3, 1u32..=3)
        .prop_flat_map(|(n, k)| (Just(n), Just(k), (k * k + 1).max(4)..=12))
        .prop_flat_map(|(n, k, p)| (Just(n), Just(k), regular(n, k, p)))
}

/// Square matrices of size `1..=4` over one or two variables.
pub fn small_matrix() -> impl Strategy<Value = SeriesMatrix> {
    (1usize..=4, 1usize..=2, 1u32..=5).prop_flat_map(|(m, n, p)| matrix(m, n, p))
}
