use num_rational::BigRational;
use num_traits::Zero;

use super::{at, extract_approximate, reduce_system};
use crate::error::{Error, Result};
use crate::ift::{newton_solve_from, substitute_y, AnalyticSystem};
use crate::linalg::{det_and_adjugate, jacobian, rank_lower_bound};
use crate::series::Series;
use crate::tougeron::{check_approximate_with, parametric_solution_with, tougeron_data};
use crate::weierstrass::{divide_exact, regularize_block, RegularizeOptions, DEFAULT_MAX_SHEAR};

#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    pub max_shear: u32,
    /// Extra attempts with a larger working order when a recursive step runs short.
    pub max_retries: u32,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_shear: DEFAULT_MAX_SHEAR,
            max_retries: 3,
        }
    }
}

/// `y(x, P)` solving the system identically, with `y(x, Pbar(x)) = ybar(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongSolution {
    pub n: usize,
    pub big_n: usize,
    /// Number of parameters `P`.
    pub nparams: usize,
    /// `y(x, P)`, series in `n + nparams` variables.
    pub y: Vec<Series>,
    /// `Pbar(x)`, series in the `n` variables `x`.
    pub params: Vec<Series>,
    /// `f(x, y(x, P)) = 0 mod m^prec`.
    pub prec: u32,
    /// `y_nu(x, Pbar(x)) = ybar_nu(x) mod m^agreement[nu]`.
    pub agreement: Vec<u32>,
}

impl StrongSolution {
    /// `y(x, P(x))` for parameters given as series in `x`.
    pub fn specialize(&self, params: &[Series]) -> Result<Vec<Series>> {
        if params.len() != self.nparams {
            return Err(Error::Arity {
                expected: self.nparams,
                got: params.len(),
            });
        }
        if self.n == 0 {
            return Ok(self.y.clone());
        }
        let wide = self.y.iter().map(|y| y.prec()).max().unwrap_or(0);
        let mut args: Vec<Series> = (0..self.n).map(|i| Series::var(self.n, i, wide)).collect();
        args.extend(params.iter().cloned());
        self.y.iter().map(|y| y.compose(&args)).collect()
    }
}

/// Solve with `f(x, y) = 0 mod m^c` and agreement with `ybar` modulo `m^c` (or the precision
/// of `ybar`, if smaller).
pub fn solve_recursive(f: &AnalyticSystem, ybar: &[Series], c: u32) -> Result<StrongSolution> {
    solve_recursive_with(f, ybar, c, SolveOptions::default())
}

pub fn solve_recursive_with(
    f: &AnalyticSystem,
    ybar: &[Series],
    c: u32,
    opts: SolveOptions,
) -> Result<StrongSolution> {
    let resid = f.substitute(ybar)?;
    for (index, r) in resid.iter().enumerate() {
        if let Some(order) = r.truncate(c).order().finite() {
            return Err(Error::NotASolution { index, order });
        }
    }
    let targets = vec![c; f.big_n()];
    solve_level(f, ybar, c, &targets, true, opts)
}

fn solve_level(
    f: &AnalyticSystem,
    ybar: &[Series],
    c_sol: u32,
    targets: &[u32],
    top: bool,
    opts: SolveOptions,
) -> Result<StrongSolution> {
    let (n, big_n) = (f.n(), f.big_n());
    if ybar.len() != big_n {
        return Err(Error::Arity {
            expected: big_n,
            got: ybar.len(),
        });
    }
    if n == 0 {
        for (index, fi) in f.fs().iter().enumerate() {
            if !fi.constant_term().is_zero() {
                return Err(Error::NotASolution { index, order: 0 });
            }
        }
        return Ok(StrongSolution {
            n,
            big_n,
            nparams: 0,
            y: ybar.to_vec(),
            params: vec![],
            prec: c_sol,
            agreement: ybar.iter().map(|y| y.prec()).collect(),
        });
    }

    // simplicity: pick a maximal nonvanishing minor of the Jacobian at ybar
    let jac = jacobian(f.fs(), &f.y_vars())?;
    let jac_at = jac.map(|e| at(e, n, ybar))?;
    let cert = rank_lower_bound(&jac_at)?;
    if top && cert.rank < f.m() {
        return Err(Error::NotSimple {
            context: format!(
                "Jacobian rank at the solution is only certified to be {} of {}",
                cert.rank,
                f.m()
            ),
        });
    }
    let order: Vec<usize> = (0..big_n)
        .filter(|nu| !cert.cols.contains(nu))
        .chain(cert.cols.iter().copied())
        .collect();
    let mut pos = vec![0; big_n];
    for (k, &nu) in order.iter().enumerate() {
        pos[nu] = k;
    }
    let map: Vec<usize> = (0..n).chain((0..big_n).map(|nu| n + pos[nu])).collect();
    let permute = |fs: Vec<&Series>| -> Vec<Series> {
        fs.into_iter().map(|fi| fi.embed(n + big_n, &map)).collect()
    };
    let kept = permute(cert.rows.iter().map(|&i| &f.fs()[i]).collect());
    let dropped = permute(
        (0..f.m())
            .filter(|i| !cert.rows.contains(i))
            .map(|i| &f.fs()[i])
            .collect(),
    );
    let sys = AnalyticSystem::new(n, big_n, kept)?;
    let ybar_p: Vec<Series> = order.iter().map(|&nu| ybar[nu].clone()).collect();
    let targets_p: Vec<u32> = order.iter().map(|&nu| targets[nu]).collect();

    let sol = if cert.minor.is_unit() {
        ift_path(&sys, &ybar_p, c_sol, opts)?
    } else {
        reduction_path(&sys, &ybar_p, c_sol, &targets_p, opts)?
    };
    let sol = finish(sol, &ybar_p, &targets_p, &dropped)?;

    let mut y = vec![Series::zero(0, 0); big_n];
    let mut agreement = vec![0; big_n];
    for (k, &nu) in order.iter().enumerate() {
        y[nu] = sol.y[k].clone();
        agreement[nu] = sol.agreement[k];
    }
    Ok(StrongSolution {
        y,
        agreement,
        ..sol
    })
}

/// `delta(0, 0) != 0`: the family through `y0 = 0` with the free block as parameters.
fn ift_path(
    sys: &AnalyticSystem,
    ybar: &[Series],
    c_sol: u32,
    opts: SolveOptions,
) -> Result<StrongSolution> {
    let n = sys.n();
    let free = sys.big_n() - sys.m();
    let y0: Vec<Series> = (0..sys.big_n())
        .map(|_| Series::zero(n, sys.prec()))
        .collect();
    let cert = check_approximate_with(sys, &y0, opts.max_shear)?;
    if !cert.certified {
        return Err(Error::PropertyFailed {
            context: "zero is not an approximate solution".into(),
        });
    }
    let ps = parametric_solution_with(&cert, sys, c_sol, opts.max_shear)?;
    let d2 = &cert.delta * &cert.delta;
    let params = (0..free)
        .map(|nu| divide_exact(&ybar[nu], &d2, 0, n, opts.max_shear))
        .collect::<Result<Vec<_>>>()?;
    Ok(StrongSolution {
        n,
        big_n: sys.big_n(),
        nparams: free,
        y: ps.y,
        params,
        prec: c_sol,
        agreement: vec![],
    })
}

/// `delta(0, 0) = 0`: regularize, extract a polynomial approximate solution, solve the reduced
/// system in one variable fewer, and rebuild.
fn reduction_path(
    sys: &AnalyticSystem,
    ybar: &[Series],
    c_sol: u32,
    targets: &[u32],
    opts: SolveOptions,
) -> Result<StrongSolution> {
    let (n, big_n) = (sys.n(), sys.big_n());
    let free = big_n - sys.m();
    let (delta, _) = tougeron_data(sys)?;
    let dbar = at(&delta, n, ybar)?;
    let reg = regularize_block(
        std::slice::from_ref(&dbar),
        0,
        n,
        RegularizeOptions {
            max_shear: opts.max_shear,
            any_var: false,
        },
    )?;
    let sys_r = AnalyticSystem::new(n, big_n, sys.fs().iter().map(|fi| reg.apply(fi)).collect())?;
    let ybar_r: Vec<Series> = ybar.iter().map(|y| reg.apply(y)).collect();

    let ext = extract_approximate(&sys_r, &ybar_r)?;
    let p = ext.p;
    let width = 2 * p as usize + 1;
    let xn = n - 1;
    let mut constants: Vec<Vec<BigRational>> = Vec::with_capacity(big_n);
    let mut vbar0: Vec<Series> = Vec::with_capacity(big_n * width);
    let mut inner_targets: Vec<u32> = Vec::with_capacity(big_n * width);
    for (nu, v) in ext.vbar.iter().enumerate() {
        let mut row = Vec::with_capacity(width);
        for j in 0..width as u32 {
            let coeff = v.coefficient_in(xn, j);
            let c = coeff.constant_term();
            let rest = &coeff - &Series::constant(n - 1, c.clone(), coeff.prec());
            inner_targets.push((targets[nu] + 2 * p).saturating_sub(j).min(rest.prec()));
            vbar0.push(rest);
            row.push(c);
        }
        constants.push(row);
    }

    let c_inner = c_sol + 3 * p;
    let mut working = c_inner + 2 * p - 1;
    let mut attempt = 0;
    let inner = loop {
        let red = reduce_system(&sys_r, &constants, p, working)?;
        if !red.mx_condition {
            return Err(Error::PropertyFailed {
                context: "reduced system: quotient outside m_x at the base family".into(),
            });
        }
        match solve_level(&red.system, &vbar0, c_inner, &inner_targets, false, opts) {
            Ok(inner) => break inner,
            Err(Error::PrecisionShortfall {
                needed, available, ..
            }) if attempt < opts.max_retries && working < sys_r.prec() => {
                attempt += 1;
                working = (working + needed.saturating_sub(available).max(1)).min(sys_r.prec());
            }
            Err(e) => return Err(e),
        }
    };

    // v(x, s) in the ring (x, s)
    let q = inner.nparams;
    let joint = n + q;
    let inner_map: Vec<usize> = (0..n - 1).chain((0..q).map(|k| n + k)).collect();
    let vprec = inner.y.iter().map(|y| y.prec()).min().unwrap_or(c_inner);
    let xn_pow: Vec<Series> = (0..width)
        .map(|j| Series::var(joint, xn, vprec).pow(j as u32))
        .collect();
    let v: Vec<Series> = (0..big_n)
        .map(|nu| {
            let mut acc = Series::zero(joint, vprec);
            for j in 0..width {
                let coeff = &Series::constant(joint, constants[nu][j].clone(), vprec)
                    + &inner.y[nu * width + j].embed(joint, &inner_map);
                acc = &acc + &(&coeff * &xn_pow[j]);
            }
            acc
        })
        .collect();

    let f_map: Vec<usize> = (0..n).chain((0..big_n).map(|nu| joint + nu)).collect();
    let sys_joint = AnalyticSystem::new(
        joint,
        big_n,
        sys_r
            .fs()
            .iter()
            .map(|fi| fi.embed(joint + big_n, &f_map))
            .collect(),
    )?;
    let cert = check_approximate_with(&sys_joint, &v, opts.max_shear)?;
    if !cert.certified {
        return Err(Error::PropertyFailed {
            context: "reassembled family is not an approximate solution".into(),
        });
    }
    let ps = parametric_solution_with(&cert, &sys_joint, c_sol, opts.max_shear)?;

    let s_map: Vec<usize> = (0..n - 1).collect();
    let mut params: Vec<Series> = inner.params.iter().map(|s| s.embed(n, &s_map)).collect();
    let dv = at(&delta_of(&sys_r)?, n, &ext.vbar)?;
    let dv2 = &dv * &dv;
    for nu in 0..free {
        let diff = &ybar_r[nu] - &ext.vbar[nu];
        params.push(divide_exact(&diff, &dv2, 0, n, opts.max_shear)?);
    }

    Ok(StrongSolution {
        n,
        big_n,
        nparams: q + free,
        y: ps.y.iter().map(|y| reg.undo(y)).collect(),
        params: params.iter().map(|s| reg.undo(s)).collect(),
        prec: c_sol,
        agreement: vec![],
    })
}

fn delta_of(sys: &AnalyticSystem) -> Result<Series> {
    Ok(tougeron_data(sys)?.0)
}

/// Check agreement with `ybar` and that the dropped equations vanish on `y(x, P)`.
fn finish(
    sol: StrongSolution,
    ybar: &[Series],
    targets: &[u32],
    dropped: &[Series],
) -> Result<StrongSolution> {
    let spec = sol.specialize(&sol.params)?;
    let mut agreement = Vec::with_capacity(ybar.len());
    for (nu, (got, want)) in spec.iter().zip(ybar).enumerate() {
        let target = targets[nu].min(want.prec());
        let diff = got - want;
        if let Some(o) = diff.order().finite() {
            if o < target {
                return Err(Error::PropertyFailed {
                    context: format!(
                        "specialized solution differs from the input in component {nu} at degree {o}"
                    ),
                });
            }
        }
        if diff.prec() < target {
            return Err(Error::shortfall("agreement check", target, diff.prec()));
        }
        agreement.push(diff.valuation_bound().min(want.prec()));
    }
    if !dropped.is_empty() {
        let ring = sol.n + sol.nparams;
        let mut args: Vec<Series> = (0..sol.n).map(|i| Series::var(ring, i, sol.prec)).collect();
        args.extend(sol.y.iter().cloned());
        for fi in dropped {
            let r = fi.compose(&args)?.truncate(sol.prec);
            if !r.is_zero() {
                return Err(Error::NotSimple {
                    context: format!(
                        "an equation outside the selected minor has residual of order {}",
                        r.order()
                    ),
                });
            }
        }
    }
    Ok(StrongSolution { agreement, ..sol })
}

/// Artin approximation: a solution `y(x)` modulo `m^c` agreeing with `ybar` modulo `m^c`.
pub fn artin_approximate(f: &AnalyticSystem, ybar: &[Series], c: u32) -> Result<Vec<Series>> {
    artin_approximate_with(f, ybar, c, SolveOptions::default())
}

pub fn artin_approximate_with(
    f: &AnalyticSystem,
    ybar: &[Series],
    c: u32,
    opts: SolveOptions,
) -> Result<Vec<Series>> {
    let sol = solve_recursive_with(f, ybar, c, opts)?;
    let params: Vec<Series> = sol.params.iter().map(|t| t.truncate(c)).collect();
    let y: Vec<Series> = sol
        .specialize(&params)?
        .into_iter()
        .map(|y| y.truncate(c))
        .collect();
    let resid = substitute_y(f.fs(), f.n(), &y)?;
    for (index, r) in resid.iter().enumerate() {
        if let Some(order) = r.truncate(c).order().finite() {
            return Err(Error::NotASolution { index, order });
        }
    }
    Ok(y)
}

/// Lift a truncated solution of a square system with invertible Jacobian at the origin.
pub fn corollary1_lift(f: &AnalyticSystem, ybar: &[Series], c: u32) -> Result<Vec<Series>> {
    if f.m() != f.big_n() {
        return Err(Error::NotSquare {
            rows: f.m(),
            cols: f.big_n(),
        });
    }
    let jac = jacobian(f.fs(), &f.y_vars())?;
    let at0 = jac.map(|e| Ok(Series::constant(0, e.constant_term(), 1)))?;
    if f.m() > 0 && det_and_adjugate(&at0)?.0.constant_term().is_zero() {
        return Err(Error::SingularJacobian);
    }
    let resid = f.substitute(ybar)?;
    for (index, r) in resid.iter().enumerate() {
        if let Some(order) = r.order().finite() {
            return Err(Error::NotASolution { index, order });
        }
    }
    let y = newton_solve_from(f, c, ybar)?;
    for (nu, (a, b)) in y.iter().zip(ybar).enumerate() {
        if !a.agrees_with(b) {
            return Err(Error::PropertyFailed {
                context: format!("lift disagrees with the input in component {nu}"),
            });
        }
    }
    Ok(y)
}
