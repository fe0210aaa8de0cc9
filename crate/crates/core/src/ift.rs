//! Formal implicit function theorem by Newton iteration, and substitution checks.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{det_and_adjugate, jacobian, SeriesMatrix};
use crate::series::{Order, Series};

/// `m` equations in `n + N` variables, `x` first and then `y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnalyticSystem {
    n: usize,
    big_n: usize,
    fs: Vec<Series>,
}

impl AnalyticSystem {
    pub fn new(n: usize, big_n: usize, fs: Vec<Series>) -> Result<Self> {
        for f in &fs {
            if f.nvars() != n + big_n {
                return Err(Error::NvarsMismatch {
                    left: n + big_n,
                    right: f.nvars(),
                });
            }
        }
        Ok(AnalyticSystem { n, big_n, fs })
    }

    pub fn m(&self) -> usize {
        self.fs.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn big_n(&self) -> usize {
        self.big_n
    }

    pub fn fs(&self) -> &[Series] {
        &self.fs
    }

    pub fn prec(&self) -> u32 {
        self.fs.iter().map(|f| f.prec()).min().unwrap_or(0)
    }

    /// Indices of the `y` variables in the ambient ring.
    pub fn y_vars(&self) -> Vec<usize> {
        (self.n..self.n + self.big_n).collect()
    }

    /// `f_i(x, y(x))` for a vector `y` of series in the `x` variables.
    pub fn substitute(&self, y: &[Series]) -> Result<Vec<Series>> {
        substitute_y(&self.fs, self.n, y)
    }
}

/// `f(x, y(x))` where the first `n` variables of every `f` are kept.
pub fn substitute_y(fs: &[Series], n: usize, y: &[Series]) -> Result<Vec<Series>> {
    let big_n = fs.first().map(|f| f.nvars() - n).unwrap_or(y.len());
    if y.len() != big_n {
        return Err(Error::Arity {
            expected: big_n,
            got: y.len(),
        });
    }
    for (i, yi) in y.iter().enumerate() {
        if yi.nvars() != n {
            return Err(Error::NvarsMismatch {
                left: n,
                right: yi.nvars(),
            });
        }
        if !yi.constant_term().is_zero() {
            return Err(Error::ConstantTerm { index: i });
        }
    }
    let prec = fs.iter().map(|f| f.prec()).max().unwrap_or(0);
    let mut args: Vec<Series> = (0..n).map(|i| Series::var(n, i, prec)).collect();
    args.extend(y.iter().cloned());
    fs.iter().map(|f| f.compose(&args)).collect()
}

/// Newton iterates and the residual order certified after each round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonTrace {
    pub solution: Vec<Series>,
    /// `residual_orders[k]` is the certified order of `G(x, u_{k+1})`.
    pub residual_orders: Vec<u32>,
}

fn rounds_for(c: u32) -> u32 {
    if c <= 1 {
        1
    } else {
        32 - (c - 1).leading_zeros() + 1
    }
}

/// Unique `u(x)` with `u(0) = 0` and `G(x, u(x)) = 0 mod m^c`.
///
/// Requires as many unknowns as equations, `G(0, 0) = 0`, and an invertible Jacobian in `u`
/// at the origin.
pub fn newton_solve(g: &AnalyticSystem, c: u32) -> Result<Vec<Series>> {
    Ok(newton_solve_traced(g, c)?.solution)
}

pub fn newton_solve_traced(g: &AnalyticSystem, c: u32) -> Result<NewtonTrace> {
    let init: Vec<Series> = (0..g.big_n).map(|_| Series::zero(g.n, c)).collect();
    newton_iterate(g, c, init, rounds_for(c))
}

/// Newton iteration started from `init`, which must vanish at the origin.
pub fn newton_solve_from(g: &AnalyticSystem, c: u32, init: &[Series]) -> Result<Vec<Series>> {
    let init: Vec<Series> = init
        .iter()
        .map(|u| {
            if !u.constant_term().is_zero() {
                return Err(Error::ConstantTerm { index: 0 });
            }
            Ok(u.truncate(c).with_prec(c))
        })
        .collect::<Result<_>>()?;
    Ok(newton_iterate(g, c, init, rounds_for(c))?.solution)
}

fn newton_iterate(
    g: &AnalyticSystem,
    c: u32,
    mut u: Vec<Series>,
    rounds: u32,
) -> Result<NewtonTrace> {
    if g.m() != g.big_n {
        return Err(Error::NotSquare {
            rows: g.m(),
            cols: g.big_n,
        });
    }
    if u.len() != g.big_n {
        return Err(Error::Arity {
            expected: g.big_n,
            got: u.len(),
        });
    }
    for (i, f) in g.fs.iter().enumerate() {
        if !f.constant_term().is_zero() {
            return Err(Error::NonzeroConstant { index: i });
        }
    }
    if g.prec() < c {
        return Err(Error::shortfall("newton iteration", c, g.prec()));
    }
    let jac = jacobian(&g.fs, &g.y_vars())?;
    let at_origin = jac.map(|e| Ok(Series::constant(0, e.constant_term(), 1)))?;
    if det_and_adjugate(&at_origin)?.0.constant_term().is_zero() {
        return Err(Error::SingularJacobian);
    }
    if g.m() == 0 {
        return Ok(NewtonTrace {
            solution: vec![],
            residual_orders: vec![],
        });
    }
    let x_args: Vec<Series> = (0..g.n).map(|i| Series::var(g.n, i, c)).collect();
    // Jacobian entries lose one degree of precision, but their error only meets the residual,
    // which has positive order, so working at `c` is sound.
    let jac_c = jac.map(|e| Ok(e.clone().with_prec(c)))?;
    let mut residual_orders = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        let mut args = x_args.clone();
        args.extend(u.iter().cloned());
        let resid: Vec<Series> =
            g.fs.iter()
                .map(|f| Ok(f.compose(&args)?.truncate(c)))
                .collect::<Result<_>>()?;
        if resid.iter().all(|r| r.is_zero()) {
            residual_orders.push(c);
            continue;
        }
        let j_at: SeriesMatrix = jac_c.map(|e| Ok(e.compose(&args)?.truncate(c).with_prec(c)))?;
        let (det, adj) = det_and_adjugate(&j_at)?;
        let det_inv = det.invert_unit()?;
        let step = adj.mul_vec(&resid)?;
        u = u
            .iter()
            .zip(&step)
            .map(|(ui, si)| (ui - &(si * &det_inv)).truncate(c))
            .collect();
        let mut args = x_args.clone();
        args.extend(u.iter().cloned());
        let order =
            g.fs.iter()
                .map(|f| Ok(f.compose(&args)?.truncate(c).valuation_bound()))
                .collect::<Result<Vec<u32>>>()?
                .into_iter()
                .min()
                .unwrap_or(c);
        residual_orders.push(order);
    }
    Ok(NewtonTrace {
        solution: u,
        residual_orders,
    })
}

/// Result of substituting a candidate solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemReport {
    pub target: u32,
    /// Order of each residual `f_i(x, y(x))` modulo `m^target`.
    pub orders: Vec<Order>,
    /// Precision at which the residuals are actually known.
    pub known_prec: u32,
    pub pass: bool,
}

pub fn verify_system(f: &AnalyticSystem, y: &[Series], c: u32) -> Result<SystemReport> {
    let resid = f.substitute(y)?;
    let known_prec = resid.iter().map(|r| r.prec()).min().unwrap_or(c);
    let orders: Vec<Order> = resid.iter().map(|r| r.truncate(c).order()).collect();
    let pass = known_prec >= c && orders.iter().all(|o| o.is_infinite());
    Ok(SystemReport {
        target: c,
        orders,
        known_prec,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;
    use num_rational::BigRational;

    fn catalan(k: usize) -> Vec<i64> {
        let mut c = vec![0i64; k + 1];
        c[1] = 1;
        for n in 2..=k {
            c[n] = (1..n).map(|i| c[i] * c[n - i]).sum();
        }
        c
    }

    #[test]
    fn catalan_series() {
        // G = u - x - u^2 in ring (x, u)
        let g = Series::from_int_terms(2, 12, &[(&[0, 1], 1), (&[1, 0], -1), (&[0, 2], -1)]);
        let sys = AnalyticSystem::new(1, 1, vec![g]).unwrap();
        let u = newton_solve(&sys, 10).unwrap();
        let cat = catalan(9);
        for k in 1..10 {
            assert_eq!(u[0].coeff(&[k as u32]), rat(cat[k], 1), "degree {k}");
        }
        assert_eq!(u[0].prec(), 10);
    }

    #[test]
    fn residual_doubles_each_round() {
        let g = Series::from_int_terms(2, 40, &[(&[0, 1], 1), (&[1, 0], -1), (&[0, 2], -1)]);
        let sys = AnalyticSystem::new(1, 1, vec![g]).unwrap();
        let trace = newton_solve_traced(&sys, 32).unwrap();
        for k in 1..=4 {
            assert!(
                trace.residual_orders[k - 1] >= 1 << k,
                "round {k}: {:?}",
                trace
            );
        }
    }

    #[test]
    fn linear_and_triangular_systems() {
        let g = Series::from_int_terms(2, 8, &[(&[0, 1], 1), (&[1, 0], -1)]);
        let u = newton_solve(&AnalyticSystem::new(1, 1, vec![g]).unwrap(), 6).unwrap();
        assert_eq!(u[0], Series::from_int_terms(1, 6, &[(&[1], 1)]));

        // ring (x, u1, u2): u1 - x - u2^2, u2 - x^2
        let g1 = Series::from_int_terms(
            3,
            10,
            &[(&[0, 1, 0], 1), (&[1, 0, 0], -1), (&[0, 0, 2], -1)],
        );
        let g2 = Series::from_int_terms(3, 10, &[(&[0, 0, 1], 1), (&[2, 0, 0], -1)]);
        let u = newton_solve(&AnalyticSystem::new(1, 2, vec![g1, g2]).unwrap(), 8).unwrap();
        assert_eq!(u[0], Series::from_int_terms(1, 8, &[(&[1], 1), (&[4], 1)]));
        assert_eq!(u[1], Series::from_int_terms(1, 8, &[(&[2], 1)]));
    }

    #[test]
    fn preconditions() {
        let g = Series::from_int_terms(2, 8, &[(&[0, 0], 1), (&[0, 1], 1)]);
        assert!(matches!(
            newton_solve(&AnalyticSystem::new(1, 1, vec![g]).unwrap(), 4),
            Err(Error::NonzeroConstant { index: 0 })
        ));
        let g = Series::from_int_terms(2, 8, &[(&[0, 2], 1), (&[1, 0], -1)]);
        assert!(matches!(
            newton_solve(&AnalyticSystem::new(1, 1, vec![g]).unwrap(), 4),
            Err(Error::SingularJacobian)
        ));
    }

    /// Degree-by-degree solve of `u = x + u^2 * k` style single equations by comparing
    /// coefficients: G(x, u) = a u + H(x, u) with H of order >= 2 in u or containing x.
    fn brute_force(g: &Series, c: u32) -> Vec<BigRational> {
        let a = g.coeff(&[0, 1]);
        let mut coeffs = vec![BigRational::zero(); c as usize];
        for d in 1..c as usize {
            let u = Series::from_terms(1, c, (1..d).map(|k| (vec![k as u32], coeffs[k].clone())))
                .unwrap();
            let x = Series::var(1, 0, c);
            let r = g.compose(&[x, u]).unwrap();
            // the degree-d coefficient of G(x, u + t x^d) is r_d + a t
            coeffs[d] = -r.coeff(&[d as u32]) / &a;
        }
        coeffs
    }

    #[test]
    fn matches_coefficient_oracle() {
        let g = Series::from_int_terms(
            2,
            10,
            &[
                (&[0, 1], 3),
                (&[1, 0], -2),
                (&[1, 1], 5),
                (&[0, 3], 1),
                (&[2, 0], 7),
            ],
        );
        let sys = AnalyticSystem::new(1, 1, vec![g.clone()]).unwrap();
        let u = newton_solve(&sys, 8).unwrap();
        let oracle = brute_force(&g, 8);
        for d in 1..8 {
            assert_eq!(u[0].coeff(&[d as u32]), oracle[d]);
        }
    }

    #[test]
    fn uniqueness_across_initializations() {
        let g = Series::from_int_terms(2, 12, &[(&[0, 1], 1), (&[1, 0], -1), (&[0, 2], -1)]);
        let sys = AnalyticSystem::new(1, 1, vec![g]).unwrap();
        let a = newton_solve(&sys, 9).unwrap();
        let init = Series::from_int_terms(1, 9, &[(&[1], 1), (&[3], 4)]);
        let b = newton_solve_from(&sys, 9, &[init]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn verify_examples() {
        let f = Series::from_int_terms(2, 10, &[(&[0, 1], 1), (&[1, 0], -1)]);
        let sys = AnalyticSystem::new(1, 1, vec![f]).unwrap();
        assert!(
            verify_system(&sys, &[Series::var(1, 0, 10)], 8)
                .unwrap()
                .pass
        );

        let f = Series::from_int_terms(2, 10, &[(&[0, 2], 1), (&[2, 0], -1), (&[3, 0], -1)]);
        let sys = AnalyticSystem::new(1, 1, vec![f]).unwrap();
        let r = verify_system(&sys, &[Series::var(1, 0, 10)], 4).unwrap();
        assert!(!r.pass);
        assert_eq!(r.orders[0], Order::Finite(3));

        let y = Series::from_terms(
            1,
            10,
            vec![
                (vec![1], rat(1, 1)),
                (vec![2], rat(1, 2)),
                (vec![3], rat(-1, 8)),
            ],
        )
        .unwrap();
        assert!(verify_system(&sys, &[y], 4).unwrap().pass);
    }
}
