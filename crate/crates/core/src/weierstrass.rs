//! Regularity, Weierstrass division and preparation, and Euclidean pseudo-division.
//!
//! Division by a series `f` that is `x_v`-regular of order `k` runs the fixed-point
//! iteration: split off the part of `x_v`-degree `< k`, peel the `x_v^k` factor, and feed the
//! correction `-(quotient piece) * (low part of f)` back in. Every round raises the order in
//! the other variables by at least one, so at most `prec` rounds are needed.
//!
//! Precision: give `x_v` weight 1 and every other variable weight `lambda >= 1`, the smallest
//! value making the low part of `f` weighted-homogeneous of degree `>= k`. Unknown input terms
//! have weighted degree `>= prec`, so the quotient is known modulo `m^ceil((prec - k)/lambda)`
//! and the remainder modulo `m^ceil(prec/lambda)`. For the common case where each
//! coefficient of `x_v^j` in `f` has order `>= k - j`, `lambda = 1`.

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::{Order, Series};

/// Default bound on the shear coefficients tried by [`regularize`].
pub const DEFAULT_MAX_SHEAR: u32 = 16;

/// `x_v^k + a_1 x_v^(k-1) + ... + a_k` with every `a_j` in the maximal ideal of the other
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinguishedPolynomial {
    nvars: usize,
    var: usize,
    /// `coeffs[j - 1] = a_j`, series in the `nvars - 1` remaining variables.
    coeffs: Vec<Series>,
    prec: u32,
}

impl DistinguishedPolynomial {
    /// Validates that every coefficient vanishes at the origin.
    pub fn new(nvars: usize, var: usize, coeffs: Vec<Series>, prec: u32) -> Result<Self> {
        if var >= nvars {
            return Err(Error::IndexOutOfRange { index: var, nvars });
        }
        for (j, a) in coeffs.iter().enumerate() {
            if a.nvars() != nvars - 1 {
                return Err(Error::NvarsMismatch {
                    left: nvars - 1,
                    right: a.nvars(),
                });
            }
            if !a.constant_term().is_zero() {
                return Err(Error::PropertyFailed {
                    context: format!("distinguished coefficient a_{} does not vanish at 0", j + 1),
                });
            }
        }
        Ok(DistinguishedPolynomial {
            nvars,
            var,
            coeffs,
            prec,
        })
    }

    /// Read `f = x_v^k + lower` back as a distinguished polynomial.
    pub fn from_series(f: &Series, var: usize) -> Result<Self> {
        let k = f
            .degree_in(var)
            .ok_or(Error::ZeroSeries { prec: f.prec() })?;
        let lead = f.coefficient_in(var, k);
        if lead != Series::one(f.nvars() - 1, lead.prec()) {
            return Err(Error::PropertyFailed {
                context: "leading coefficient is not 1".into(),
            });
        }
        let coeffs = (1..=k).map(|j| f.coefficient_in(var, k - j)).collect();
        DistinguishedPolynomial::new(f.nvars(), var, coeffs, f.prec())
    }

    pub fn degree(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    /// Expand to a series in all `nvars` variables.
    pub fn to_series(&self) -> Series {
        let k = self.degree();
        let mut by_power: Vec<Series> = Vec::with_capacity(k as usize + 1);
        for j in 0..=k {
            // power j carries a_{k-j}; power k carries 1
            if j == k {
                by_power.push(Series::one(self.nvars - 1, self.prec));
            } else {
                by_power.push(self.coeffs[(k - j - 1) as usize].clone());
            }
        }
        Series::from_coefficients_in(self.nvars, self.var, &by_power, self.prec)
    }

    /// Product of two distinguished polynomials in the same variable.
    pub fn mul(&self, other: &DistinguishedPolynomial) -> Result<DistinguishedPolynomial> {
        if self.var != other.var || self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let prod = &self.to_series() * &other.to_series();
        DistinguishedPolynomial::from_series(&prod, self.var)
    }
}

/// Polynomial in `x_v` with series coefficients in the other variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XnPolynomial {
    nvars: usize,
    var: usize,
    /// `coeffs[j]` multiplies `x_v^j`.
    coeffs: Vec<Series>,
}

impl XnPolynomial {
    pub fn new(nvars: usize, var: usize, coeffs: Vec<Series>) -> Result<Self> {
        if var >= nvars {
            return Err(Error::IndexOutOfRange { index: var, nvars });
        }
        for c in &coeffs {
            if c.nvars() != nvars - 1 {
                return Err(Error::NvarsMismatch {
                    left: nvars - 1,
                    right: c.nvars(),
                });
            }
        }
        Ok(XnPolynomial { nvars, var, coeffs })
    }

    /// Coefficients `0..=degree_bound` of `f` in `x_v`; terms of higher degree are ignored.
    pub fn from_series(f: &Series, var: usize, degree_bound: u32) -> Self {
        XnPolynomial {
            nvars: f.nvars(),
            var,
            coeffs: (0..=degree_bound)
                .map(|j| f.coefficient_in(var, j))
                .collect(),
        }
    }

    /// Coefficients of `f`, which must be a polynomial in `x_v` at its precision.
    pub fn from_polynomial_series(f: &Series, var: usize) -> Self {
        let d = f.degree_in(var).unwrap_or(0);
        XnPolynomial::from_series(f, var, d)
    }

    pub fn coeffs(&self) -> &[Series] {
        &self.coeffs
    }

    pub fn var(&self) -> usize {
        self.var
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Degree bound `d` (coefficient count minus one).
    pub fn degree_bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Index of the highest coefficient that is nonzero at its precision.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    pub fn prec(&self) -> u32 {
        self.to_series().prec()
    }

    pub fn to_series(&self) -> Series {
        // coefficient j known mod m^(p_j) in x' means the term is known mod m^(p_j + j)
        let prec = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| c.prec() + j as u32)
            .min()
            .unwrap_or(u32::MAX);
        let prec = if prec == u32::MAX { 0 } else { prec };
        Series::from_coefficients_in(self.nvars, self.var, &self.coeffs, prec)
    }

    pub fn mul(&self, other: &XnPolynomial) -> XnPolynomial {
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out: Vec<Option<Series>> = vec![None; n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = a * b;
                out[i + j] = Some(match out[i + j].take() {
                    Some(acc) => &acc + &prod,
                    None => prod,
                });
            }
        }
        XnPolynomial {
            nvars: self.nvars,
            var: self.var,
            coeffs: out.into_iter().map(|c| c.unwrap()).collect(),
        }
    }

    pub fn add(&self, other: &XnPolynomial) -> XnPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero_prec = self
            .coeffs
            .iter()
            .chain(&other.coeffs)
            .map(|c| c.prec())
            .max()
            .unwrap_or(0);
        let coeffs = (0..n)
            .map(|j| match (self.coeffs.get(j), other.coeffs.get(j)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => Series::zero(self.nvars - 1, zero_prec),
            })
            .collect();
        XnPolynomial {
            nvars: self.nvars,
            var: self.var,
            coeffs,
        }
    }

    fn scale_series(&self, c: &Series) -> XnPolynomial {
        XnPolynomial {
            nvars: self.nvars,
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }
}

/// Order of `f(0, ..., 0, x_v)`, the restriction to the `x_v` axis.
pub fn regular_order_in(f: &Series, var: usize) -> Order {
    f.restrict_to_axis(var).order()
}

/// Order of `f(0, ..., 0, x_n)` with `x_n` the last variable.
pub fn xn_regular_order(f: &Series) -> Order {
    match f.nvars() {
        0 => f.order(),
        n => regular_order_in(f, n - 1),
    }
}

/// Result of dividing `h` by a regular series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotient: Series,
    /// Remainder as a series of `x_v`-degree `< k`.
    pub remainder: Series,
    pub var: usize,
    pub degree: u32,
}

impl Division {
    pub fn remainder_poly(&self) -> XnPolynomial {
        XnPolynomial {
            nvars: self.remainder.nvars(),
            var: self.var,
            coeffs: (0..self.degree)
                .map(|j| self.remainder.coefficient_in(self.var, j))
                .collect(),
        }
    }

    /// Precision at which `h = q f + r` is asserted.
    pub fn guaranteed_prec(&self) -> u32 {
        self.quotient.prec().min(self.remainder.prec())
    }
}

/// Weight ratio `lambda = num/den` of the weighted filtration described in the module docs.
fn weight_ratio(low: &Series, var: usize, k: u32) -> (u32, u32) {
    let (mut num, mut den) = (1u32, 1u32);
    for j in 0..k {
        let b = low.coefficient_in(var, j);
        if let Order::Finite(o) = b.order() {
            // need lambda * o >= k - j
            let need = k - j;
            if need * den > num * o {
                num = need;
                den = o;
            }
        }
    }
    (num, den)
}

fn div_ceil(a: u32, b: u32) -> u32 {
    a.div_ceil(b)
}

/// Divide `h` by `f`, where `f` is `x_var`-regular of finite order `k`.
///
/// Returns `h = q f + r` with `deg_{x_var} r < k`.
pub fn divide_by_regular(h: &Series, f: &Series, var: usize) -> Result<Division> {
    if h.nvars() != f.nvars() {
        return Err(Error::NvarsMismatch {
            left: h.nvars(),
            right: f.nvars(),
        });
    }
    if var >= f.nvars() {
        return Err(Error::IndexOutOfRange {
            index: var,
            nvars: f.nvars(),
        });
    }
    let k = regular_order_in(f, var)
        .finite()
        .ok_or(Error::NotRegular { var })?;
    let prec = h.prec().min(f.prec());
    let nvars = f.nvars();
    if k == 0 {
        let q = h.truncate(prec) * f.invert_unit()?.truncate(prec);
        return Ok(Division {
            quotient: q,
            remainder: Series::zero(nvars, prec),
            var,
            degree: 0,
        });
    }
    let (low, high) = f.split_in(var, k);
    let low = low.truncate(prec);
    let unit_inv = high.with_prec(prec).invert_unit()?;
    let (num, den) = weight_ratio(&low, var, k);

    let mut cur = h.truncate(prec);
    let mut q = Series::zero(nvars, prec);
    let mut r = Series::zero(nvars, prec);
    for _ in 0..=prec {
        if cur.is_zero() {
            break;
        }
        let (rl, rh) = cur.split_in(var, k);
        r = &r + &rl;
        let piece = &rh.with_prec(prec) * &unit_inv;
        q = &q + &piece;
        cur = -(&piece * &low);
    }
    debug_assert!(cur.is_zero());
    let q_prec = div_ceil(prec.saturating_sub(k) * den, num);
    let r_prec = div_ceil(prec * den, num);
    Ok(Division {
        quotient: q.with_prec(q_prec),
        remainder: r.with_prec(r_prec),
        var,
        degree: k,
    })
}

/// Weierstrass division of `h` by a distinguished polynomial.
pub fn weierstrass_divide(h: &Series, w: &DistinguishedPolynomial) -> Result<Division> {
    if h.nvars() != w.nvars() {
        return Err(Error::NvarsMismatch {
            left: h.nvars(),
            right: w.nvars(),
        });
    }
    if w.degree() == 0 {
        return Ok(Division {
            quotient: h.truncate(w.prec()),
            remainder: Series::zero(h.nvars(), h.prec().min(w.prec())),
            var: w.var(),
            degree: 0,
        });
    }
    divide_by_regular(h, &w.to_series(), w.var())
}

/// `f = unit * w` with `w` distinguished.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preparation {
    pub unit: Series,
    pub poly: DistinguishedPolynomial,
}

/// Weierstrass preparation with respect to `x_var`, by dividing `x_var^k` by `f`.
pub fn prepare_in(f: &Series, var: usize) -> Result<Preparation> {
    let k = regular_order_in(f, var)
        .finite()
        .ok_or(Error::NotRegular { var })?;
    let nvars = f.nvars();
    let xk = Series::var(nvars, var, f.prec()).pow(k);
    let div = divide_by_regular(&xk, f, var)?;
    let r_prec = div.remainder.prec();
    if r_prec <= k || div.quotient.prec() == 0 {
        return Err(Error::shortfall(
            "weierstrass preparation",
            k + 1,
            r_prec.min(div.quotient.prec()),
        ));
    }
    // q f = x^k - r, so f = q^-1 (x^k - r)
    let unit = div.quotient.invert_unit()?;
    let neg_r = -&div.remainder;
    let coeffs = (1..=k).map(|j| neg_r.coefficient_in(var, k - j)).collect();
    let poly = DistinguishedPolynomial::new(nvars, var, coeffs, r_prec)?;
    Ok(Preparation { unit, poly })
}

/// Weierstrass preparation with respect to the last variable.
pub fn weierstrass_prepare(f: &Series) -> Result<Preparation> {
    if f.nvars() == 0 {
        return Err(Error::NotRegular { var: 0 });
    }
    prepare_in(f, f.nvars() - 1)
}

/// Linear change of a block of variables making a family regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regularization {
    /// First variable of the block.
    pub offset: usize,
    /// Number of variables in the block.
    pub len: usize,
    /// Absolute index of the variable in which the transformed series are regular.
    pub var: usize,
    /// `x_{offset+i} -> sum_j matrix[i][j] x_{offset+j}`.
    pub matrix: Vec<Vec<i64>>,
    pub inverse: Vec<Vec<i64>>,
    /// Shear coefficients `x_i -> x_i + shear[i] x_var` (zero at the distinguished slot).
    pub shear: Vec<i64>,
    pub transformed: Vec<Series>,
    pub orders: Vec<u32>,
}

impl Regularization {
    pub fn is_identity(&self) -> bool {
        self.shear.iter().all(|&s| s == 0)
    }

    pub fn apply(&self, f: &Series) -> Series {
        if self.is_identity() {
            return f.clone();
        }
        f.linear_substitute(self.offset, &self.matrix)
    }

    pub fn undo(&self, f: &Series) -> Series {
        if self.is_identity() {
            return f.clone();
        }
        f.linear_substitute(self.offset, &self.inverse)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RegularizeOptions {
    pub max_shear: u32,
    /// Accept regularity in any variable of the block before shearing, preferring the last.
    pub any_var: bool,
}

impl Default for RegularizeOptions {
    fn default() -> Self {
        RegularizeOptions {
            max_shear: DEFAULT_MAX_SHEAR,
            any_var: false,
        }
    }
}

fn shear_matrices(len: usize, slot: usize, shear: &[i64]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let mut m = vec![vec![0i64; len]; len];
    let mut inv = vec![vec![0i64; len]; len];
    for i in 0..len {
        m[i][i] = 1;
        inv[i][i] = 1;
        if i != slot {
            m[i][slot] = shear[i];
            inv[i][slot] = -shear[i];
        }
    }
    (m, inv)
}

/// Regularize every series of `fs` in the last variable of the whole ring.
pub fn regularize(fs: &[Series], max_shear: u32) -> Result<Regularization> {
    let nvars = fs.first().map(|f| f.nvars()).unwrap_or(0);
    regularize_block(
        fs,
        0,
        nvars,
        RegularizeOptions {
            max_shear,
            any_var: false,
        },
    )
}

/// Regularize within the block `offset..offset+len`.
///
/// Tries the identity, then single shears `x_i -> x_i + c x_last` for `c = 1, 2, ...`, then
/// the combined shear `x_i -> x_i + c^(i+1) x_last`. A shear is accepted when each
/// transformed series is regular of order equal to its total order.
pub fn regularize_block(
    fs: &[Series],
    offset: usize,
    len: usize,
    opts: RegularizeOptions,
) -> Result<Regularization> {
    if len == 0 {
        return Err(Error::NotRegular { var: offset });
    }
    let mut orders = Vec::with_capacity(fs.len());
    for f in fs {
        match f.order() {
            Order::Finite(o) => orders.push(o),
            Order::Vanishes { below } => return Err(Error::ZeroSeries { prec: below }),
        }
    }
    let identity_in = |var: usize| -> Option<Vec<u32>> {
        fs.iter()
            .map(|f| regular_order_in(f, var).finite())
            .collect()
    };
    let mut candidates: Vec<usize> = vec![offset + len - 1];
    if opts.any_var {
        candidates.extend((offset..offset + len - 1).rev());
    }
    for var in candidates {
        if let Some(found) = identity_in(var) {
            let (matrix, inverse) = shear_matrices(len, var - offset, &vec![0; len]);
            return Ok(Regularization {
                offset,
                len,
                var,
                matrix,
                inverse,
                shear: vec![0; len],
                transformed: fs.to_vec(),
                orders: found,
            });
        }
    }
    let slot = len - 1;
    let var = offset + slot;
    let try_shear = |shear: Vec<i64>| -> Option<Regularization> {
        let (matrix, inverse) = shear_matrices(len, slot, &shear);
        let transformed: Vec<Series> = fs
            .iter()
            .map(|f| f.linear_substitute(offset, &matrix))
            .collect();
        let found: Vec<u32> = transformed
            .iter()
            .map(|g| regular_order_in(g, var).finite())
            .collect::<Option<Vec<u32>>>()?;
        if found != orders {
            return None;
        }
        Some(Regularization {
            offset,
            len,
            var,
            matrix,
            inverse,
            shear,
            transformed,
            orders: found,
        })
    };
    for c in 1..=opts.max_shear as i64 {
        for i in 0..slot {
            let mut shear = vec![0; len];
            shear[i] = c;
            if let Some(r) = try_shear(shear) {
                return Ok(r);
            }
        }
    }
    if slot > 1 {
        for c in 1..=opts.max_shear as i64 {
            let shear: Vec<i64> = (0..len)
                .map(|i| if i == slot { 0 } else { c.pow(i as u32 + 1) })
                .collect();
            if let Some(r) = try_shear(shear) {
                return Ok(r);
            }
        }
    }
    Err(Error::RegularizationExhausted {
        bound: opts.max_shear,
    })
}

/// Pseudo-division `c0^p h = q h1 + r1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoDivision {
    pub power: u32,
    pub quotient: XnPolynomial,
    pub remainder: XnPolynomial,
}

/// `lc` equals `kappa * c0` for a rational `kappa`?
fn scalar_ratio(lc: &Series, c0: &Series) -> Option<BigRational> {
    let (e0, v0) = c0.terms().next()?;
    let (e1, v1) = lc.terms().next()?;
    if e0 != e1 {
        return None;
    }
    let kappa = v1 / v0;
    let p = lc.prec().min(c0.prec());
    if lc.truncate(p) == c0.scale(&kappa).truncate(p) {
        Some(kappa)
    } else {
        None
    }
}

/// Euclid's pseudo-division of `h` by `h1` as polynomials in `x_v` over the series ring of the
/// other variables.
///
/// A step multiplies by the leading coefficient `c0` of `h1` only when the current leading
/// coefficient is not already a rational multiple of `c0`; `power` counts those steps.
pub fn euclid_pseudo_divide(h: &XnPolynomial, h1: &XnPolynomial) -> Result<PseudoDivision> {
    if h.nvars != h1.nvars || h.var != h1.var {
        return Err(Error::NvarsMismatch {
            left: h.nvars,
            right: h1.nvars,
        });
    }
    let l = h1.degree().ok_or(Error::ZeroDivisor)?;
    let c0 = h1.coeffs[l].clone();
    let sub_nvars = h.nvars - 1;
    let prec = h
        .coeffs
        .iter()
        .chain(&h1.coeffs)
        .map(|c| c.prec())
        .min()
        .unwrap_or(0);
    let mut r: Vec<Series> = h.coeffs.clone();
    let qlen = r.len().saturating_sub(l).max(1);
    let mut q: Vec<Series> = vec![Series::zero(sub_nvars, prec); qlen];
    let mut power = 0;
    loop {
        let d = match r.iter().rposition(|c| !c.is_zero()) {
            Some(d) if d >= l => d,
            _ => break,
        };
        let lc = r[d].clone();
        let shift = d - l;
        match scalar_ratio(&lc, &c0) {
            Some(kappa) => {
                let k = Series::constant(sub_nvars, kappa, prec);
                q[shift] = &q[shift] + &k;
                for (j, b) in h1.coeffs.iter().enumerate() {
                    r[j + shift] = &r[j + shift] - &(b * &k);
                }
            }
            None => {
                for c in q.iter_mut() {
                    *c = &*c * &c0;
                }
                q[shift] = &q[shift] + &lc;
                for c in r.iter_mut() {
                    *c = &*c * &c0;
                }
                for (j, b) in h1.coeffs.iter().enumerate() {
                    r[j + shift] = &r[j + shift] - &(b * &lc);
                }
                power += 1;
            }
        }
        // the leading term cancels exactly
        r[d] = Series::zero(sub_nvars, r[d].prec());
    }
    r.truncate(l.max(1));
    if l == 0 {
        r = vec![Series::zero(sub_nvars, prec)];
    }
    Ok(PseudoDivision {
        power,
        quotient: XnPolynomial {
            nvars: h.nvars,
            var: h.var,
            coeffs: q,
        },
        remainder: XnPolynomial {
            nvars: h.nvars,
            var: h.var,
            coeffs: r,
        },
    })
}

impl PseudoDivision {
    /// Check `c0^p h = q h1 + r1` coefficientwise at the common precision.
    pub fn verify(&self, h: &XnPolynomial, h1: &XnPolynomial) -> bool {
        let l = match h1.degree() {
            Some(l) => l,
            None => return false,
        };
        let c0 = &h1.coeffs[l];
        let mut scale = Series::one(h.nvars - 1, c0.prec());
        for _ in 0..self.power {
            scale = &scale * c0;
        }
        let lhs = h.scale_series(&scale).to_series();
        let rhs = self.quotient.mul(h1).add(&self.remainder).to_series();
        lhs.agrees_with(&rhs)
    }
}

/// Exact quotient `h / d`, where `d` only involves the variables of the block
/// `offset..offset+len`. Regularizes `d` within the block, divides, and requires a zero
/// remainder.
pub fn divide_exact(
    h: &Series,
    d: &Series,
    offset: usize,
    len: usize,
    max_shear: u32,
) -> Result<Series> {
    if h.nvars() != d.nvars() {
        return Err(Error::NvarsMismatch {
            left: h.nvars(),
            right: d.nvars(),
        });
    }
    if d.is_unit() {
        return Ok(h * &d.invert_unit()?);
    }
    if d.is_zero() {
        return Err(Error::VanishingMinor { prec: d.prec() });
    }
    let reg = regularize_block(
        std::slice::from_ref(d),
        offset,
        len,
        RegularizeOptions {
            max_shear,
            any_var: true,
        },
    )?;
    let dt = &reg.transformed[0];
    let ht = reg.apply(h);
    let div = divide_by_regular(&ht, dt, reg.var)?;
    if div.remainder.prec() == 0 {
        return Err(Error::shortfall(
            "exact division",
            reg.orders[0] + 1,
            h.prec().min(d.prec()),
        ));
    }
    if !div.remainder.is_zero() {
        return Err(Error::InexactDivision {
            context: format!(
                "remainder of order {} modulo m^{}",
                div.remainder.order(),
                div.remainder.prec()
            ),
        });
    }
    Ok(reg.undo(&div.quotient))
}
