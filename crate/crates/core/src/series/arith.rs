use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;

use super::{Exponent, Series};
use crate::error::{Error, Result};

fn check_nvars(a: &Series, b: &Series) -> Result<()> {
    if a.nvars != b.nvars {
        return Err(Error::NvarsMismatch {
            left: a.nvars,
            right: b.nvars,
        });
    }
    Ok(())
}

impl Series {
    /// Coefficientwise sum; precision is the minimum of the operands.
    pub fn checked_add(&self, other: &Series) -> Result<Series> {
        check_nvars(self, other)?;
        let prec = self.prec.min(other.prec);
        let mut out = self.truncate(prec);
        for (e, c) in &other.terms {
            out.accumulate(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Series) -> Result<Series> {
        self.checked_add(&-other)
    }

    /// Truncated product; precision is the minimum of the operands.
    pub fn checked_mul(&self, other: &Series) -> Result<Series> {
        check_nvars(self, other)?;
        let prec = self.prec.min(other.prec);
        Ok(mul_truncated(self, other, prec))
    }

    pub fn scale(&self, k: &BigRational) -> Series {
        if k.is_zero() {
            return Series::zero(self.nvars, self.prec);
        }
        Series {
            nvars: self.nvars,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> Series {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn pow(&self, e: u32) -> Series {
        let mut result = Series::one(self.nvars, self.prec);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a unit via the geometric expansion of `1 / (f(0) + h)`.
    pub fn invert_unit(&self) -> Result<Series> {
        let c0 = self.constant_term();
        if c0.is_zero() || self.prec == 0 {
            return Err(Error::NonUnit);
        }
        let inv_c0 = c0.recip();
        // f = c0 (1 + h), 1/f = (1/c0) * sum (-h)^k; h has order >= 1 so prec terms suffice.
        let mut neg_h = self.scale(&-inv_c0.clone());
        neg_h.terms.remove(&Exponent::zero(self.nvars));
        let mut result = Series::one(self.nvars, self.prec);
        let mut power = Series::one(self.nvars, self.prec);
        for _ in 1..self.prec {
            power = &power * &neg_h;
            if power.is_zero() {
                break;
            }
            result = &result + &power;
        }
        Ok(result.scale(&inv_c0))
    }

    /// Formal partial derivative in `var`; precision drops by one.
    pub fn partial(&self, var: usize) -> Result<Series> {
        if var >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: var,
                nvars: self.nvars,
            });
        }
        let prec = self.prec.saturating_sub(1);
        let mut out = Series::zero(self.nvars, prec);
        for (e, c) in &self.terms {
            let k = e.entries[var];
            if k == 0 {
                continue;
            }
            let mut entries = e.entries.clone();
            entries[var] -= 1;
            out.insert(
                Exponent {
                    degree: e.degree - 1,
                    entries,
                },
                c * BigRational::from_integer(k.into()),
            );
        }
        Ok(out)
    }

    /// Re-express in a ring of `nvars` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, nvars: usize, map: &[usize]) -> Series {
        assert_eq!(map.len(), self.nvars);
        let mut out = Series::zero(nvars, self.prec);
        for (e, c) in &self.terms {
            let mut entries = vec![0; nvars];
            for (i, &k) in e.entries.iter().enumerate() {
                entries[map[i]] += k;
            }
            out.accumulate(
                Exponent {
                    degree: e.degree,
                    entries,
                },
                c.clone(),
            );
        }
        out
    }

    /// Append `extra` variables after the existing ones.
    pub fn extend_vars(&self, extra: usize) -> Series {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.embed(self.nvars + extra, &map)
    }

    /// Set every variable not in `keep` to zero; the result lives in `keep.len()` variables.
    pub fn project(&self, keep: &[usize]) -> Series {
        let mut out = Series::zero(keep.len(), self.prec);
        for (e, c) in &self.terms {
            let dropped: u32 = (0..self.nvars)
                .filter(|v| !keep.contains(v))
                .map(|v| e.entries[v])
                .sum();
            if dropped > 0 {
                continue;
            }
            let entries: Vec<u32> = keep.iter().map(|&v| e.entries[v]).collect();
            out.insert(Exponent::new(entries), c.clone());
        }
        out
    }

    /// Variables other than `var`, in order.
    pub fn others(nvars: usize, var: usize) -> Vec<usize> {
        (0..nvars).filter(|&v| v != var).collect()
    }

    /// Coefficient of `x_var^j`, as a series in the remaining variables.
    ///
    /// Known modulo `m^(prec - j)`.
    pub fn coefficient_in(&self, var: usize, j: u32) -> Series {
        let prec = self.prec.saturating_sub(j);
        let mut out = Series::zero(self.nvars - 1, prec);
        for (e, c) in &self.terms {
            if e.entries[var] != j {
                continue;
            }
            let entries: Vec<u32> = e
                .entries
                .iter()
                .enumerate()
                .filter(|(v, _)| *v != var)
                .map(|(_, k)| *k)
                .collect();
            out.insert(Exponent::new(entries), c.clone());
        }
        out
    }

    /// Inverse of [`Series::coefficient_in`] summed over powers: `sum_j coeffs[j] * x_var^j`.
    pub fn from_coefficients_in(nvars: usize, var: usize, coeffs: &[Series], prec: u32) -> Series {
        let mut out = Series::zero(nvars, prec);
        for (j, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut entries = e.entries.clone();
                entries.insert(var, j as u32);
                out.accumulate(Exponent::new(entries), v.clone());
            }
        }
        out
    }

    /// Split as `low + x_var^k * high` where `low` has `x_var`-degree `< k`.
    ///
    /// `low` keeps the precision of `self`; `high` is known modulo `m^(prec - k)`.
    pub fn split_in(&self, var: usize, k: u32) -> (Series, Series) {
        let mut low = Series::zero(self.nvars, self.prec);
        let mut high = Series::zero(self.nvars, self.prec.saturating_sub(k));
        for (e, c) in &self.terms {
            if e.entries[var] < k {
                low.insert(e.clone(), c.clone());
            } else {
                let mut entries = e.entries.clone();
                entries[var] -= k;
                high.insert(
                    Exponent {
                        degree: e.degree - k,
                        entries,
                    },
                    c.clone(),
                );
            }
        }
        (low, high)
    }

    /// Multiply by `x_var^k`; precision grows by `k` since the factor has order `k`.
    pub fn shift_in(&self, var: usize, k: u32) -> Series {
        let mut out = Series::zero(self.nvars, self.prec.saturating_add(k));
        for (e, c) in &self.terms {
            let mut entries = e.entries.clone();
            entries[var] += k;
            out.insert(
                Exponent {
                    degree: e.degree + k,
                    entries,
                },
                c.clone(),
            );
        }
        out
    }

    /// Restrict to the line `x_i = 0 (i != var)`, as a one-variable series.
    pub fn restrict_to_axis(&self, var: usize) -> Series {
        self.project(&[var])
    }
}

/// Product keeping only terms of total degree `< prec`.
pub(crate) fn mul_truncated(a: &Series, b: &Series, prec: u32) -> Series {
    let nvars = a.nvars;
    if a.terms.is_empty() || b.terms.is_empty() {
        return Series::zero(nvars, prec);
    }
    let bt: Vec<(&Exponent, &BigRational)> = b.terms.iter().collect();
    let mut acc: HashMap<Vec<u32>, BigRational> = HashMap::new();
    let mut scratch = vec![0u32; nvars];
    for (ea, ca) in &a.terms {
        if ea.degree >= prec {
            break;
        }
        for (eb, cb) in &bt {
            if ea.degree + eb.degree >= prec {
                break;
            }
            for ((s, x), y) in scratch.iter_mut().zip(&ea.entries).zip(&eb.entries) {
                *s = x + y;
            }
            let prod = ca * *cb;
            match acc.get_mut(scratch.as_slice()) {
                Some(v) => *v += prod,
                None => {
                    acc.insert(scratch.clone(), prod);
                }
            }
        }
    }
    let terms: BTreeMap<Exponent, BigRational> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(e, c)| (Exponent::new(e), c))
        .collect();
    Series { nvars, prec, terms }
}

impl Add for &Series {
    type Output = Series;

    /// Panics on a variable-count mismatch; see [`Series::checked_add`].
    fn add(self, rhs: &Series) -> Series {
        self.checked_add(rhs)
            .expect("series variable counts differ")
    }
}

impl Sub for &Series {
    type Output = Series;

    fn sub(self, rhs: &Series) -> Series {
        self.checked_sub(rhs)
            .expect("series variable counts differ")
    }
}

impl Mul for &Series {
    type Output = Series;

    fn mul(self, rhs: &Series) -> Series {
        self.checked_mul(rhs)
            .expect("series variable counts differ")
    }
}

impl Neg for &Series {
    type Output = Series;

    fn neg(self) -> Series {
        Series {
            nvars: self.nvars,
            prec: self.prec,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

/// Sum of products `sum_i a_i * b_i`, all operands in one ring.
pub fn dot(a: &[Series], b: &[Series]) -> Series {
    assert_eq!(a.len(), b.len());
    let mut it = a.iter().zip(b);
    let (x, y) = it.next().expect("nonempty dot product");
    let mut acc = x * y;
    for (x, y) in it {
        acc = &acc + &(x * y);
    }
    acc
}
