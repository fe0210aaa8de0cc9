use num_rational::BigRational;
use num_traits::{One, Zero};

use super::*;
use crate::error::Error;
use crate::ift::{verify_system, AnalyticSystem};
use crate::series::{rat, Series};

/// Taylor coefficients of sqrt(1 + z): binom(1/2, k).
fn sqrt_coeffs(k: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::one()];
    let half = rat(1, 2);
    for i in 1..=k {
        let prev = out[i - 1].clone();
        let num = &half - BigRational::from_integer((i as i64 - 1).into());
        out.push(prev * num / BigRational::from_integer((i as i64).into()));
    }
    out
}

/// `x_{mult} * sqrt(1 + x_{arg})` in `nvars` variables.
fn times_sqrt(nvars: usize, mult: usize, arg: usize, prec: u32) -> Series {
    let coeffs = sqrt_coeffs(prec as usize);
    Series::from_terms(
        nvars,
        prec,
        coeffs.into_iter().enumerate().map(|(k, c)| {
            let mut e = vec![0u32; nvars];
            e[mult] += 1;
            e[arg] += k as u32;
            (e, c)
        }),
    )
    .unwrap()
}

/// y^2 - x^2 (1 + x).
fn nodal(prec: u32) -> AnalyticSystem {
    let f = Series::from_int_terms(2, prec, &[(&[0, 2], 1), (&[2, 0], -1), (&[3, 0], -1)]);
    AnalyticSystem::new(1, 1, vec![f]).unwrap()
}

/// y^2 - x2^2 (1 + x1) in ring (x1, x2, y).
fn cone(prec: u32) -> AnalyticSystem {
    let f = Series::from_int_terms(
        3,
        prec,
        &[(&[0, 0, 2], 1), (&[0, 2, 0], -1), (&[1, 2, 0], -1)],
    );
    AnalyticSystem::new(2, 1, vec![f]).unwrap()
}

/// y - x - y^2.
fn catalan_eq(prec: u32) -> AnalyticSystem {
    let f = Series::from_int_terms(2, prec, &[(&[0, 1], 1), (&[1, 0], -1), (&[0, 2], -1)]);
    AnalyticSystem::new(1, 1, vec![f]).unwrap()
}

#[test]
fn extract_one_variable() {
    let ybar = Series::from_terms(
        1,
        4,
        vec![
            (vec![1], rat(1, 1)),
            (vec![2], rat(1, 2)),
            (vec![3], rat(-1, 8)),
        ],
    )
    .unwrap();
    let ext = extract_approximate(&nodal(12), &[ybar]).unwrap();
    assert_eq!(ext.p, 1);
    assert_eq!(ext.abar.to_series().truncate(3), Series::var(1, 0, 3));
    assert_eq!(ext.constants, vec![rat(1, 1)]);
    assert_eq!(ext.vbar[0].truncate(3), Series::var(1, 0, 3));
    assert_eq!(ext.ubar[0].coeff(&[1]), rat(1, 2));
    assert_eq!(ext.ubar[0].coeff(&[2]), rat(-1, 8));
}

#[test]
fn extract_fixed_point() {
    let f = Series::from_int_terms(2, 10, &[(&[0, 2], 1), (&[2, 0], -1)]);
    let sys = AnalyticSystem::new(1, 1, vec![f]).unwrap();
    let ext = extract_approximate(&sys, &[Series::var(1, 0, 10)]).unwrap();
    assert_eq!(ext.vbar[0].truncate(6), Series::var(1, 0, 6));
    // idempotent
    let again = extract_approximate(&sys, &ext.vbar).unwrap();
    assert_eq!(again.vbar[0].truncate(6), Series::var(1, 0, 6));
}

#[test]
fn extract_needs_regularity() {
    // y^2 - x1^2 with ybar = x1: delta = 2 x1 is not x2-regular
    let f = Series::from_int_terms(3, 10, &[(&[0, 0, 2], 1), (&[2, 0, 0], -1)]);
    let sys = AnalyticSystem::new(2, 1, vec![f]).unwrap();
    assert!(matches!(
        extract_approximate(&sys, &[Series::var(2, 0, 10)]),
        Err(Error::NotRegular { var: 1 })
    ));
}

#[test]
fn reduce_cone_matches_symbolic_division() {
    let c0 = vec![vec![rat(0, 1), rat(1, 1)]];
    let red = reduce_system(&cone(12), &c0, 1, 8).unwrap();
    assert_eq!(red.components, 2);
    assert!(red.mx_condition);
    // ring (x1, V0, V1)
    let w = 7;
    let one_x1 = Series::from_int_terms(3, w, &[(&[0, 0, 0], 1), (&[1, 0, 0], 1)]);
    let v0 = Series::var(3, 1, w);
    let inv = Series::from_int_terms(3, w, &[(&[0, 0, 0], 1), (&[0, 0, 1], 1)])
        .invert_unit()
        .unwrap();
    let r1 = (&one_x1 * &v0).scale_int(2) * &inv;
    let r0 = &(&one_x1 * &(&v0 * &v0)) * &(&inv * &inv);
    let fs = red.system.fs();
    assert!(fs[0].agrees_with(&r0), "{} vs {}", fs[0], r0);
    assert!(fs[1].agrees_with(&r1), "{} vs {}", fs[1], r1);
}

#[test]
fn reduce_rejects_unit_minor() {
    let c0 = vec![vec![rat(0, 1), rat(1, 1)]];
    assert!(matches!(
        reduce_system(&cone(10), &c0, 0, 6),
        Err(Error::UnitJacobian)
    ));
}

#[test]
fn extraction_family_annihilates_reduced_system() {
    let ybar = times_sqrt(2, 1, 0, 14);
    let sys = cone(16);
    let ext = extract_approximate(&sys, &[ybar]).unwrap();
    let width = 2 * ext.p + 1;
    let constants: Vec<Vec<BigRational>> = ext
        .vbar
        .iter()
        .map(|v| {
            (0..width)
                .map(|j| v.coefficient_in(1, j).constant_term())
                .collect()
        })
        .collect();
    assert_eq!(constants[0], vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
    let red = reduce_system(&sys, &constants, ext.p, 8).unwrap();
    assert_eq!(red.components, 2);
    let family: Vec<Series> = (0..width)
        .map(|j| {
            let c = ext.vbar[0].coefficient_in(1, j);
            &c - &Series::constant(1, c.constant_term(), c.prec())
        })
        .collect();
    let report = verify_system(&red.system, &family, 6).unwrap();
    assert!(report.pass, "{report:?}");
}

#[test]
fn solve_zero_variables() {
    let f = Series::from_int_terms(1, 6, &[(&[2], 1), (&[1], -1)]);
    let sys = AnalyticSystem::new(0, 1, vec![f]).unwrap();
    let sol = solve_recursive(&sys, &[Series::zero(0, 6)], 4).unwrap();
    assert_eq!(sol.nparams, 0);
    assert!(sol.y[0].is_zero());
}

#[test]
fn solve_catalan_by_ift() {
    let ybar = Series::from_int_terms(1, 3, &[(&[1], 1), (&[2], 1)]);
    let sol = solve_recursive(&catalan_eq(12), &[ybar], 6).unwrap();
    assert_eq!(sol.nparams, 0);
    let expect = Series::from_int_terms(
        1,
        6,
        &[(&[1], 1), (&[2], 1), (&[3], 2), (&[4], 5), (&[5], 14)],
    );
    assert_eq!(sol.y[0].truncate(6), expect);
}

#[test]
fn solve_nodal_curve() {
    let ybar = times_sqrt(1, 0, 0, 12);
    let sol = solve_recursive(&nodal(20), std::slice::from_ref(&ybar), 5).unwrap();
    let spec = sol.specialize(&sol.params).unwrap();
    assert!(spec[0].truncate(5).agrees_with(&ybar.truncate(5)));
}

#[test]
fn solve_cone_end_to_end() {
    let ybar = times_sqrt(2, 1, 0, 14);
    let sys = cone(20);
    let sol = solve_recursive(&sys, std::slice::from_ref(&ybar), 4).unwrap();
    // the inner system leaves the coefficients of x2 and x2^2 free
    assert_eq!(sol.nparams, 2);
    assert!(sol.agreement[0] >= 4);
    let spec = sol.specialize(&sol.params).unwrap();
    assert!(spec[0].truncate(4).agrees_with(&ybar.truncate(4)));
    // the family solves the equation identically in (x, params)
    let ring = 2 + sol.nparams;
    let mut args: Vec<Series> = (0..2).map(|i| Series::var(ring, i, 4)).collect();
    args.extend(sol.y.iter().cloned());
    assert!(sys.fs()[0].compose(&args).unwrap().truncate(4).is_zero());
}

#[test]
fn artin_examples() {
    let ybar = Series::from_int_terms(1, 3, &[(&[1], 1), (&[2], 1)]);
    let y = artin_approximate(&catalan_eq(12), &[ybar], 6).unwrap();
    assert_eq!(
        y[0],
        Series::from_int_terms(
            1,
            6,
            &[(&[1], 1), (&[2], 1), (&[3], 2), (&[4], 5), (&[5], 14)]
        )
    );

    let f = Series::from_int_terms(2, 10, &[(&[0, 1], 1), (&[1, 0], -1)]);
    let sys = AnalyticSystem::new(1, 1, vec![f]).unwrap();
    let y = artin_approximate(&sys, &[Series::var(1, 0, 10)], 6).unwrap();
    assert_eq!(y[0], Series::var(1, 0, 6));

    let y = artin_approximate(&cone(20), &[times_sqrt(2, 1, 0, 14)], 4).unwrap();
    let expect = Series::from_terms(
        2,
        4,
        vec![
            (vec![0, 1], rat(1, 1)),
            (vec![1, 1], rat(1, 2)),
            (vec![2, 1], rat(-1, 8)),
        ],
    )
    .unwrap();
    assert_eq!(y[0], expect);
}

#[test]
fn corollary_examples() {
    let ybar = Series::from_int_terms(1, 3, &[(&[1], 1), (&[2], 1)]);
    let y = corollary1_lift(&catalan_eq(12), &[ybar], 6).unwrap();
    assert_eq!(y[0].coeff(&[5]), rat(14, 1));

    let f = Series::from_int_terms(2, 10, &[(&[0, 1], 1), (&[1, 0], -1)]);
    let sys = AnalyticSystem::new(1, 1, vec![f]).unwrap();
    assert_eq!(
        corollary1_lift(&sys, &[Series::var(1, 0, 9)], 9).unwrap()[0],
        Series::var(1, 0, 9)
    );

    let f = Series::from_int_terms(2, 10, &[(&[0, 2], 1), (&[1, 0], -1)]);
    let sys = AnalyticSystem::new(1, 1, vec![f]).unwrap();
    assert!(matches!(
        corollary1_lift(&sys, &[Series::zero(1, 4)], 6),
        Err(Error::SingularJacobian)
    ));
}

#[test]
fn non_solution_is_rejected() {
    let ybar = Series::var(1, 0, 8);
    assert!(matches!(
        solve_recursive(&nodal(12), &[ybar], 4),
        Err(Error::NotASolution { .. })
    ));
    let _ = BigRational::zero();
}

#[test]
fn solve_needs_shear() {
    // y^2 - x1^2 (1 + x2): delta(x, ybar) = 2 x1 sqrt(1 + x2) is not x2-regular
    let f = Series::from_int_terms(
        3,
        20,
        &[(&[0, 0, 2], 1), (&[2, 0, 0], -1), (&[2, 1, 0], -1)],
    );
    let sys = AnalyticSystem::new(2, 1, vec![f]).unwrap();
    let ybar = times_sqrt(2, 0, 1, 14);
    let sol = solve_recursive(&sys, std::slice::from_ref(&ybar), 4).unwrap();
    let spec = sol.specialize(&sol.params).unwrap();
    assert!(spec[0].truncate(4).agrees_with(&ybar.truncate(4)));
}

#[test]
fn solve_with_free_unknown() {
    // ring (x1, x2, y1, y2): y2^2 - x2^2 (1 + x1), y1 unconstrained
    let f = Series::from_int_terms(
        4,
        20,
        &[(&[0, 0, 0, 2], 1), (&[0, 2, 0, 0], -1), (&[1, 2, 0, 0], -1)],
    );
    let sys = AnalyticSystem::new(2, 2, vec![f.clone()]).unwrap();
    let y1 = Series::from_int_terms(2, 14, &[(&[1, 0], 1), (&[0, 3], 2)]);
    let ybar = vec![y1.clone(), times_sqrt(2, 1, 0, 14)];
    let sol = solve_recursive(&sys, &ybar, 4).unwrap();
    assert!(sol.nparams >= 1);
    let spec = sol.specialize(&sol.params).unwrap();
    for (a, b) in spec.iter().zip(&ybar) {
        assert!(a.truncate(4).agrees_with(&b.truncate(4)));
    }
    let ring = 2 + sol.nparams;
    let mut args: Vec<Series> = (0..2).map(|i| Series::var(ring, i, 4)).collect();
    args.extend(sol.y.iter().cloned());
    assert!(f.compose(&args).unwrap().truncate(4).is_zero());
}

#[test]
fn solve_two_equations() {
    // ring (x1, x2, y1, y2): y1^2 - x2^2 (1 + x1), y2 - y1
    let f1 = Series::from_int_terms(
        4,
        20,
        &[(&[0, 0, 2, 0], 1), (&[0, 2, 0, 0], -1), (&[1, 2, 0, 0], -1)],
    );
    let f2 = Series::from_int_terms(4, 20, &[(&[0, 0, 0, 1], 1), (&[0, 0, 1, 0], -1)]);
    let sys = AnalyticSystem::new(2, 2, vec![f1, f2]).unwrap();
    let y = times_sqrt(2, 1, 0, 14);
    let ybar = vec![y.clone(), y];
    let sol = solve_recursive(&sys, &ybar, 4).unwrap();
    let spec = sol.specialize(&sol.params).unwrap();
    for (a, b) in spec.iter().zip(&ybar) {
        assert!(a.truncate(4).agrees_with(&b.truncate(4)));
    }
}

#[test]
fn cone_at_criterion_precision() {
    let ybar = times_sqrt(2, 1, 0, 10);
    let sys = cone(40);
    let sol = solve_recursive(&sys, std::slice::from_ref(&ybar), 8).unwrap();
    assert!(sol.agreement[0] >= 8, "{:?}", sol.agreement);
}
