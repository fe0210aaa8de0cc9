use num_rational::BigRational;
use num_traits::Zero;

use super::g_system;
use crate::error::{Error, Result};
use crate::ift::AnalyticSystem;
use crate::series::Series;
use crate::weierstrass::{divide_by_regular, regular_order_in};

/// Conditions on the coefficients of an approximate solution polynomial in `x_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedSystem {
    /// `constants[nu][j]` is the constant part of the coefficient of `x_n^j` in `y_nu`.
    pub constants: Vec<Vec<BigRational>>,
    /// Degree bound `D` of the polynomials.
    pub degree: u32,
    pub p: u32,
    /// `F(x', V)` with unknowns `V_{nu, j}` ordered by `(nu, j)`.
    pub system: AnalyticSystem,
    /// Number of equations, `2 p m`.
    pub components: usize,
    /// Whether every quotient `Q_i` vanishes at the origin, i.e. the base family satisfies
    /// the `m_x` part of the approximate-solution condition.
    pub mx_condition: bool,
}

/// Divide `g_i(x, v)` by `delta(x, v)^2` in `x_n`, where
/// `v_nu = sum_j (c_{nu,j} + V_{nu,j}) x_n^j`, and collect the remainder coefficients.
///
/// All series are computed modulo `m^working_order` in the ring `(x, V)`.
pub fn reduce_system(
    f: &AnalyticSystem,
    constants: &[Vec<BigRational>],
    p: u32,
    working_order: u32,
) -> Result<ReducedSystem> {
    let n = f.n();
    let big_n = f.big_n();
    if n == 0 {
        return Err(Error::NotRegular { var: 0 });
    }
    if p == 0 {
        return Err(Error::UnitJacobian);
    }
    if constants.len() != big_n {
        return Err(Error::Arity {
            expected: big_n,
            got: constants.len(),
        });
    }
    let width = constants.first().map(|c| c.len()).unwrap_or(1);
    if width == 0 || constants.iter().any(|c| c.len() != width) {
        return Err(Error::Arity {
            expected: width.max(1),
            got: 0,
        });
    }
    for (nu, c) in constants.iter().enumerate() {
        if !c[0].is_zero() {
            return Err(Error::ConstantTerm { index: nu });
        }
    }
    let degree = (width - 1) as u32;
    let xn = n - 1;
    let ring = n + big_n * width;
    let w = working_order;

    let xn_pow: Vec<Series> = (0..width)
        .map(|j| Series::var(ring, xn, w).pow(j as u32))
        .collect();
    let mut args: Vec<Series> = (0..n).map(|i| Series::var(ring, i, w)).collect();
    for (nu, c) in constants.iter().enumerate() {
        let mut v = Series::zero(ring, w);
        for (j, cj) in c.iter().enumerate() {
            let coeff =
                &Series::constant(ring, cj.clone(), w) + &Series::var(ring, n + nu * width + j, w);
            v = &v + &(&coeff * &xn_pow[j]);
        }
        args.push(v);
    }

    let (delta, _, g) = g_system(f)?;
    let dv = delta.compose(&args)?.truncate(w);
    match regular_order_in(&dv, xn).finite() {
        Some(k) if k == p => {}
        other => {
            return Err(Error::PropertyFailed {
                context: format!(
                    "delta(0, x_n, base family) has order {:?}, expected {p}",
                    other
                ),
            })
        }
    }
    let dv2 = &dv * &dv;

    let mut fs = Vec::with_capacity(2 * p as usize * g.len());
    let mut mx_condition = true;
    for gi in &g {
        let gv = gi.compose(&args)?.truncate(w);
        let div = divide_by_regular(&gv, &dv2, xn)?;
        if !div.quotient.constant_term().is_zero() {
            mx_condition = false;
        }
        for j in 0..2 * p {
            fs.push(div.remainder.coefficient_in(xn, j));
        }
    }
    for (k, fk) in fs.iter().enumerate() {
        if !fk.constant_term().is_zero() {
            return Err(Error::PropertyFailed {
                context: format!("base family is not an approximate solution (component {k})"),
            });
        }
    }
    let components = fs.len();
    let system = AnalyticSystem::new(n - 1, big_n * width, fs)?;
    Ok(ReducedSystem {
        constants: constants.to_vec(),
        degree,
        p,
        system,
        components,
        mx_condition,
    })
}
