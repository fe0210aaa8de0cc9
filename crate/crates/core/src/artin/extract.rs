use num_rational::BigRational;
use num_traits::Zero;

use super::{at, g_system};
use crate::error::{Error, Result};
use crate::ift::AnalyticSystem;
use crate::series::Series;
use crate::weierstrass::{
    divide_by_regular, prepare_in, regular_order_in, DistinguishedPolynomial, XnPolynomial,
};

/// Approximate solution polynomial in `x_n` to which a formal solution is subordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionResult {
    /// Index of `x_n`.
    pub var: usize,
    pub p: u32,
    /// `delta(x, ybar) = abar * unit`.
    pub abar: DistinguishedPolynomial,
    pub unit: Series,
    pub vbar: Vec<Series>,
    pub constants: Vec<BigRational>,
    /// Cofactors of the free block.
    pub tbar: Vec<Series>,
    /// Cofactors of the solved block.
    pub ubar: Vec<Series>,
}

impl ExtractionResult {
    pub fn vbar_poly(&self, nu: usize) -> XnPolynomial {
        XnPolynomial::from_series(&self.vbar[nu], self.var, 2 * self.p)
    }
}

/// Write `ybar = vbar + abar^2 (c + tbar)` on the free block and `vbar + abar (c + ubar)` on
/// the solved block, and check that `vbar` is an approximate solution with
/// `delta(x, vbar) = abar * unit`.
///
/// `delta(x, ybar)` must be `x_n`-regular of positive order.
pub fn extract_approximate(f: &AnalyticSystem, ybar: &[Series]) -> Result<ExtractionResult> {
    let n = f.n();
    if n == 0 {
        return Err(Error::NotRegular { var: 0 });
    }
    let var = n - 1;
    let free = f.big_n() - f.m();
    let (delta, _, g) = g_system(f)?;
    let dbar = at(&delta, n, ybar)?;
    if dbar.is_unit() {
        return Err(Error::UnitJacobian);
    }
    let p = regular_order_in(&dbar, var)
        .finite()
        .ok_or(Error::NotRegular { var })?;
    let prep = prepare_in(&dbar, var)?;
    let a = prep.poly.to_series();
    let a2 = &a * &a;

    let mut vbar = Vec::with_capacity(ybar.len());
    let mut constants = Vec::with_capacity(ybar.len());
    let mut tbar = Vec::new();
    let mut ubar = Vec::new();
    for (nu, y) in ybar.iter().enumerate() {
        let divisor = if nu < free { &a2 } else { &a };
        let div = divide_by_regular(y, divisor, var)?;
        if div.quotient.prec() == 0 {
            return Err(Error::shortfall("extraction division", p + 1, y.prec()));
        }
        let c = div.quotient.constant_term();
        let rest = &div.quotient - &Series::constant(n, c.clone(), div.quotient.prec());
        let v = &div.remainder + &divisor.scale(&c);
        if nu < free {
            tbar.push(rest);
        } else {
            ubar.push(rest);
        }
        vbar.push(v);
        constants.push(c);
    }

    // Property 1: delta(x, vbar) = abar * unit
    let dv = at(&delta, n, &vbar)?;
    let d1 = divide_by_regular(&dv, &a, var)?;
    if d1.quotient.prec() == 0 || d1.remainder.prec() == 0 {
        return Err(Error::shortfall("property 1", p + 1, dv.prec()));
    }
    if !d1.remainder.is_zero() || !d1.quotient.is_unit() {
        return Err(Error::PropertyFailed {
            context: "delta(x, vbar) is not abar times a unit".into(),
        });
    }
    // Property 2: g(x, vbar) = 0 mod abar^2 m_x
    for (i, gi) in g.iter().enumerate() {
        let gv = at(gi, n, &vbar)?;
        let d2 = divide_by_regular(&gv, &a2, var)?;
        if d2.quotient.prec() == 0 || d2.remainder.prec() == 0 {
            return Err(Error::shortfall("property 2", 2 * p + 1, gv.prec()));
        }
        if !d2.remainder.is_zero() || !d2.quotient.constant_term().is_zero() {
            return Err(Error::PropertyFailed {
                context: format!("g_{}(x, vbar) is not in abar^2 m_x", i + 1),
            });
        }
    }
    Ok(ExtractionResult {
        var,
        p,
        abar: prep.poly,
        unit: prep.unit,
        vbar,
        constants,
        tbar,
        ubar,
    })
}
