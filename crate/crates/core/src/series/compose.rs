use num_rational::BigRational;
use num_traits::Zero;

use super::arith::mul_truncated;
use super::Series;
use crate::error::{Error, Result};

impl Series {
    /// Substitute `args[i]` for variable `i`.
    ///
    /// Every argument must have zero constant term and precision at least one.
    /// The result precision is `min(f.prec, p_i + d_i - 1)` over arguments, where `p_i` is the
    /// precision of argument `i` and `d_i` the least total degree of a term of `f` involving
    /// variable `i` (arguments that `f` does not use impose no bound).
    pub fn compose(&self, args: &[Series]) -> Result<Series> {
        if args.len() != self.nvars {
            return Err(Error::Arity {
                expected: self.nvars,
                got: args.len(),
            });
        }
        let target_nvars = match args.first() {
            Some(a) => a.nvars(),
            None => 0,
        };
        for (i, a) in args.iter().enumerate() {
            if a.nvars() != target_nvars {
                return Err(Error::NvarsMismatch {
                    left: target_nvars,
                    right: a.nvars(),
                });
            }
            if a.prec() == 0 || !a.constant_term().is_zero() {
                return Err(Error::ConstantTerm { index: i });
            }
        }
        if self.nvars == 0 {
            // A constant. Its precision in zero variables says whether it is known at all.
            return Err(Error::Arity {
                expected: 1,
                got: 0,
            });
        }
        let prec = self.compose_prec(args);
        Ok(self.compose_to(args, prec))
    }

    /// Precision bound used by [`Series::compose`].
    pub fn compose_prec(&self, args: &[Series]) -> u32 {
        let mut prec = self.prec;
        for (i, a) in args.iter().enumerate() {
            let d = self
                .terms
                .keys()
                .filter(|e| e.entries[i] > 0)
                .map(|e| e.degree)
                .min();
            if let Some(d) = d {
                prec = prec.min(a.prec().saturating_add(d - 1));
            }
        }
        prec
    }

    /// Substitution truncated at `prec` without any precision analysis.
    pub(crate) fn compose_to(&self, args: &[Series], prec: u32) -> Series {
        let nvars = args[0].nvars();
        let args: Vec<Series> = args
            .iter()
            .map(|a| a.clone().with_prec_at_least(prec))
            .collect();
        // powers[i][k] = args[i]^k truncated at prec
        let mut powers: Vec<Vec<Series>> = args
            .iter()
            .map(|_| vec![Series::one(nvars, prec)])
            .collect();
        let mut out = Series::zero(nvars, prec);
        for (e, c) in &self.terms {
            if e.degree >= prec {
                break;
            }
            let mut term = Series::constant(nvars, c.clone(), prec);
            for (i, &k) in e.entries.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[i].len() <= k as usize {
                    let next = mul_truncated(powers[i].last().unwrap(), &args[i], prec);
                    powers[i].push(next);
                }
                term = mul_truncated(&term, &powers[i][k as usize], prec);
                if term.is_zero() {
                    break;
                }
            }
            for (te, tc) in term.terms {
                out.accumulate(te, tc);
            }
        }
        out
    }

    /// Relabel to `prec` for the internal truncated evaluation: only lowers nothing, raises the
    /// label so that `mul_truncated` keeps terms up to `prec`. Terms are unchanged.
    fn with_prec_at_least(mut self, prec: u32) -> Series {
        if self.prec < prec {
            self.prec = prec;
        }
        self
    }

    /// Apply the linear change `x_{offset+i} -> sum_j mat[i][j] x_{offset+j}` to a block of
    /// variables, leaving the others fixed. Precision is preserved exactly.
    pub fn linear_substitute(&self, offset: usize, mat: &[Vec<i64>]) -> Series {
        let k = mat.len();
        let args: Vec<Series> = (0..self.nvars)
            .map(|v| {
                if v >= offset && v < offset + k {
                    let row = &mat[v - offset];
                    let mut s = Series::zero(self.nvars, self.prec);
                    for (j, &c) in row.iter().enumerate() {
                        if c != 0 {
                            let mut e = vec![0; self.nvars];
                            e[offset + j] = 1;
                            s.accumulate(
                                super::Exponent::new(e),
                                BigRational::from_integer(c.into()),
                            );
                        }
                    }
                    s
                } else {
                    Series::var(self.nvars, v, self.prec)
                }
            })
            .collect();
        self.compose_to(&args, self.prec)
    }
}
