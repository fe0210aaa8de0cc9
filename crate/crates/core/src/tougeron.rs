//! Approximate solutions, the parametric solution they determine, and subordinate solutions.
//!
//! For `f(x, y) = 0` with `m <= N` equations, `J` is the Jacobian in the last `m` unknowns,
//! `delta = det J`, `M` its adjugate and `g = M f`. An approximate solution `y0` satisfies
//! `g(x, y0) = 0 mod delta(x, y0)^2 m_x`; it determines the family
//! `y(x, t) = (y0' + delta^2 t, y0'' + delta u(x, t))` of exact solutions.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ift::{newton_solve, substitute_y, AnalyticSystem};
use crate::linalg::{det_and_adjugate, jacobian, SeriesMatrix};
use crate::series::{Order, Series};
use crate::weierstrass::{
    divide_by_regular, divide_exact, regularize_block, RegularizeOptions, DEFAULT_MAX_SHEAR,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproximateSolution {
    pub n: usize,
    pub big_n: usize,
    pub m: usize,
    pub y0: Vec<Series>,
    /// `delta(x, y0(x))`.
    pub delta: Series,
    /// `g_i(x, y0(x))`.
    pub g_residuals: Vec<Series>,
    /// `M(x, y0(x))`.
    pub adjugate: SeriesMatrix,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricSolution {
    pub n: usize,
    pub big_n: usize,
    pub m: usize,
    pub y0: Vec<Series>,
    pub delta: Series,
    /// Solved block `u(x, t)` in the joint ring `(x, t)`.
    pub u: Vec<Series>,
    /// `y(x, t)` in the joint ring `(x, t)`.
    pub y: Vec<Series>,
    pub prec: u32,
}

impl ParametricSolution {
    pub fn free(&self) -> usize {
        self.big_n - self.m
    }

    /// `y(x, t(x))` for parameters given as series in `x`.
    pub fn specialize(&self, t: &[Series]) -> Result<Vec<Series>> {
        let args = x_then(self.n, t, self.prec)?;
        self.y.iter().map(|yi| yi.compose(&args)).collect()
    }
}

/// `(x_1, ..., x_n, rest...)` as substitution arguments in the ring of `rest`.
fn x_then(n: usize, rest: &[Series], prec: u32) -> Result<Vec<Series>> {
    let nvars = rest.first().map(|r| r.nvars()).unwrap_or(n);
    if nvars != n {
        return Err(Error::NvarsMismatch {
            left: n,
            right: nvars,
        });
    }
    let mut args: Vec<Series> = (0..n).map(|i| Series::var(n, i, prec)).collect();
    args.extend(rest.iter().cloned());
    Ok(args)
}

/// Jacobian in the last `m` unknowns, its determinant and adjugate.
pub(crate) fn tougeron_data(f: &AnalyticSystem) -> Result<(Series, SeriesMatrix)> {
    let (n, big_n, m) = (f.n(), f.big_n(), f.m());
    if m > big_n {
        return Err(Error::NotSquare {
            rows: m,
            cols: big_n,
        });
    }
    let vars: Vec<usize> = (n + big_n - m..n + big_n).collect();
    let j = jacobian(f.fs(), &vars)?;
    if m == 0 {
        let nvars = n + big_n;
        return Ok((
            Series::one(nvars, f.prec()),
            SeriesMatrix::new(0, 0, vec![])?,
        ));
    }
    det_and_adjugate(&j)
}

/// `h` in `d * m_x`? `h` and `d` are series in `x` only.
fn in_ideal_times_max(h: &Series, d: &Series, max_shear: u32) -> Result<bool> {
    if h.is_zero() {
        return Ok(true);
    }
    if d.is_unit() {
        return Ok(h.constant_term().is_zero());
    }
    let n = d.nvars();
    let reg = regularize_block(
        std::slice::from_ref(d),
        0,
        n,
        RegularizeOptions {
            max_shear,
            any_var: true,
        },
    )?;
    let div = divide_by_regular(&reg.apply(h), &reg.transformed[0], reg.var)?;
    if div.remainder.prec() == 0 || div.quotient.prec() == 0 {
        return Err(Error::shortfall(
            "approximate solution certificate",
            reg.orders[0] + 1,
            h.prec(),
        ));
    }
    Ok(div.remainder.is_zero() && div.quotient.constant_term().is_zero())
}

pub fn check_approximate(f: &AnalyticSystem, y0: &[Series]) -> Result<ApproximateSolution> {
    check_approximate_with(f, y0, DEFAULT_MAX_SHEAR)
}

pub fn check_approximate_with(
    f: &AnalyticSystem,
    y0: &[Series],
    max_shear: u32,
) -> Result<ApproximateSolution> {
    let (n, big_n, m) = (f.n(), f.big_n(), f.m());
    let (delta_xy, adj_xy) = tougeron_data(f)?;
    let delta = substitute_y(std::slice::from_ref(&delta_xy), n, y0)?.remove(0);
    let adjugate = if m == 0 {
        SeriesMatrix::new(0, 0, vec![])?
    } else {
        SeriesMatrix::new(m, m, substitute_y(adj_xy.entries(), n, y0)?)?
    };
    let f0 = f.substitute(y0)?;
    let g_residuals = if m == 0 {
        vec![]
    } else {
        adjugate.mul_vec(&f0)?
    };
    let certified = if g_residuals.iter().all(|g| g.is_zero()) {
        !delta.is_zero() || m == 0
    } else if n == 0 {
        false
    } else if delta.is_zero() {
        return Err(Error::VanishingMinor { prec: delta.prec() });
    } else {
        let d2 = &delta * &delta;
        let mut ok = true;
        for g in &g_residuals {
            if !in_ideal_times_max(g, &d2, max_shear)? {
                ok = false;
                break;
            }
        }
        ok
    };
    Ok(ApproximateSolution {
        n,
        big_n,
        m,
        y0: y0.to_vec(),
        delta,
        g_residuals,
        adjugate,
        certified,
    })
}

/// Order and distinguished degree of `delta` used by the precision budget.
fn delta_budget(delta: &Series, max_shear: u32) -> Result<(u32, u32)> {
    if delta.is_unit() {
        return Ok((0, 0));
    }
    let o = delta
        .order()
        .finite()
        .ok_or(Error::VanishingMinor { prec: delta.prec() })?;
    let reg = regularize_block(
        std::slice::from_ref(delta),
        0,
        delta.nvars(),
        RegularizeOptions {
            max_shear,
            any_var: true,
        },
    )?;
    Ok((o, reg.orders[0]))
}

/// Construct `y(x, t)` valid modulo `m^c` in the joint ring `(x, t)`.
pub fn parametric_solution(
    cert: &ApproximateSolution,
    f: &AnalyticSystem,
    c: u32,
) -> Result<ParametricSolution> {
    parametric_solution_with(cert, f, c, DEFAULT_MAX_SHEAR)
}

pub fn parametric_solution_with(
    cert: &ApproximateSolution,
    f: &AnalyticSystem,
    c: u32,
    max_shear: u32,
) -> Result<ParametricSolution> {
    if !cert.certified {
        return Err(Error::Uncertified);
    }
    let (n, big_n, m) = (cert.n, cert.big_n, cert.m);
    let free = big_n - m;
    let (o, k) = delta_budget(&cert.delta, max_shear)?;
    let needed = c + 2 * o + k;
    if f.prec() < needed {
        return Err(Error::shortfall("parametric solution", needed, f.prec()));
    }
    // joint ring (x, t, u)
    let total = n + big_n;
    let wide = f.prec();
    let lift = |s: &Series| s.extend_vars(total - n);
    let d = lift(&cert.delta);
    let d2 = &d * &d;
    let mut args: Vec<Series> = (0..n).map(|i| Series::var(total, i, wide)).collect();
    for nu in 0..big_n {
        let shift =
            &if nu < free { d2.clone() } else { d.clone() } * &Series::var(total, n + nu, wide);
        args.push(&lift(&cert.y0[nu]) + &shift);
    }
    let big_f: Vec<Series> = f
        .fs()
        .iter()
        .map(|fi| fi.compose(&args))
        .collect::<Result<_>>()?;
    let m_lift = cert.adjugate.map(|e| Ok(lift(e)))?;
    let h = if m == 0 {
        vec![]
    } else {
        m_lift.mul_vec(&big_f)?
    };
    let g: Vec<Series> = h
        .iter()
        .map(|hi| divide_exact(hi, &d2, 0, n, max_shear))
        .collect::<Result<_>>()?;
    for (i, gi) in g.iter().enumerate() {
        if !gi.constant_term().is_zero() {
            return Err(Error::PropertyFailed {
                context: format!("G_{} does not vanish at the origin", i + 1),
            });
        }
    }
    let u_vars: Vec<usize> = (n + free..total).collect();
    if m > 0 {
        let jg = jacobian(&g, &u_vars)?;
        let at0 = jg.map(|e| Ok(Series::constant(0, e.constant_term(), 1)))?;
        let det0 = det_and_adjugate(&at0)?.0.constant_term();
        if det0 != num_rational::BigRational::from_integer(1.into()) {
            return Err(Error::PropertyFailed {
                context: format!("Jacobian of G at the origin has determinant {det0}"),
            });
        }
    }
    let xt = n + free;
    let u = if m == 0 {
        vec![]
    } else {
        newton_solve(&AnalyticSystem::new(xt, m, g)?, c)?
    };
    let dx = cert.delta.extend_vars(free);
    let d2x = &dx * &dx;
    let y: Vec<Series> = (0..big_n)
        .map(|nu| {
            let base = cert.y0[nu].extend_vars(free);
            let shift = if nu < free {
                &d2x * &Series::var(xt, n + nu, c)
            } else {
                &dx * &u[nu - free]
            };
            (&base + &shift).truncate(c)
        })
        .collect();
    let sol = ParametricSolution {
        n,
        big_n,
        m,
        y0: cert.y0.clone(),
        delta: cert.delta.clone(),
        u,
        y,
        prec: c,
    };
    verify_parametric(&sol, f, c)?;
    Ok(sol)
}

/// `f(x, y(x, t)) = 0 mod m^c` in the joint ring.
pub fn verify_parametric(sol: &ParametricSolution, f: &AnalyticSystem, c: u32) -> Result<()> {
    let xt = sol.n + sol.free();
    let mut args: Vec<Series> = (0..sol.n).map(|i| Series::var(xt, i, c)).collect();
    args.extend(sol.y.iter().cloned());
    for (i, fi) in f.fs().iter().enumerate() {
        let r = fi.compose(&args)?;
        if r.prec() < c {
            return Err(Error::shortfall("parametric solution check", c, r.prec()));
        }
        if let Order::Finite(order) = r.truncate(c).order() {
            return Err(Error::NotASolution { index: i, order });
        }
    }
    Ok(())
}

/// Moduli accepted for the congruences characterizing subordinate solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SubordinationModulus {
    /// Free block modulo `delta^2 m_x^2`, solved block modulo `delta m_x`.
    #[default]
    Strict,
    /// Both blocks modulo `delta^k m_x`; exactly what `t(0) = 0` requires.
    Relaxed,
}

/// Parameters `t(x)` with `y(x, t(x)) = ybar(x)`.
pub fn subordinate_params(
    ps: &ParametricSolution,
    f: &AnalyticSystem,
    ybar: &[Series],
    c: u32,
    modulus: SubordinationModulus,
) -> Result<Vec<Series>> {
    subordinate_params_with(ps, f, ybar, c, modulus, DEFAULT_MAX_SHEAR)
}

pub fn subordinate_params_with(
    ps: &ParametricSolution,
    f: &AnalyticSystem,
    ybar: &[Series],
    c: u32,
    modulus: SubordinationModulus,
    max_shear: u32,
) -> Result<Vec<Series>> {
    let report = crate::ift::verify_system(f, ybar, c)?;
    if let Some((index, o)) = report
        .orders
        .iter()
        .enumerate()
        .find(|(_, o)| !o.is_infinite())
    {
        return Err(Error::NotASolution {
            index,
            order: o.lower_bound(),
        });
    }
    if !report.pass {
        return Err(Error::shortfall(
            "subordinate solution check",
            c,
            report.known_prec,
        ));
    }
    let n = ps.n;
    let free = ps.free();
    let d = &ps.delta;
    let d2 = d * d;
    let mut t = Vec::with_capacity(free);
    let mut ubar = Vec::with_capacity(ps.m);
    for nu in 0..ps.big_n {
        let diff = &ybar[nu] - &ps.y0[nu];
        let divisor = if nu < free { &d2 } else { d };
        let q = divide_exact(&diff, divisor, 0, n, max_shear).map_err(|e| match e {
            Error::InexactDivision { .. } => Error::CongruenceFails { component: nu },
            other => other,
        })?;
        let min_order = match (modulus, nu < free) {
            (SubordinationModulus::Strict, true) => 2,
            _ => 1,
        };
        if q.prec() < min_order {
            return Err(Error::shortfall(
                "subordinate congruence",
                min_order,
                q.prec(),
            ));
        }
        if q.valuation_bound() < min_order {
            return Err(Error::CongruenceFails { component: nu });
        }
        if nu < free {
            t.push(q);
        } else {
            ubar.push(q);
        }
    }
    // uniqueness of u: u(x, tbar) must reproduce ubar
    if ps.m > 0 {
        let args = x_then(n, &t, ps.prec)?;
        for (j, (uj, ub)) in ps.u.iter().zip(&ubar).enumerate() {
            let val = if free == 0 && n == 0 {
                uj.clone()
            } else {
                uj.compose(&args)?
            };
            if !val.agrees_with(ub) {
                return Err(Error::PropertyFailed {
                    context: format!("u(x, tbar) differs from ubar in component {}", free + j),
                });
            }
        }
    }
    Ok(t)
}
