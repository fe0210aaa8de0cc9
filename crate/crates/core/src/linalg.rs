//! Matrices over the truncated series ring: Jacobians, determinants, adjugates and rank
//! certificates.
//!
//! Determinants use Laplace expansion along rows, memoized over column subsets, so no
//! division is ever needed.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::series::{check_uniform, Order, Series};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesMatrix {
    rows: usize,
    cols: usize,
    nvars: usize,
    entries: Vec<Series>,
}

impl SeriesMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Series>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Arity {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let nvars = check_uniform(&entries)?;
        Ok(SeriesMatrix {
            rows,
            cols,
            nvars,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<Series>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::Arity {
                expected: c,
                got: bad.len(),
            });
        }
        SeriesMatrix::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn identity(m: usize, nvars: usize, prec: u32) -> Self {
        let entries = (0..m * m)
            .map(|k| {
                if k / m == k % m {
                    Series::one(nvars, prec)
                } else {
                    Series::zero(nvars, prec)
                }
            })
            .collect();
        SeriesMatrix {
            rows: m,
            cols: m,
            nvars,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn entries(&self) -> &[Series] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Series {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Series] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Smallest entry precision.
    pub fn prec(&self) -> u32 {
        self.entries.iter().map(|e| e.prec()).min().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SeriesMatrix {
        let entries = rows
            .iter()
            .flat_map(|&i| cols.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        SeriesMatrix {
            rows: rows.len(),
            cols: cols.len(),
            nvars: self.nvars,
            entries,
        }
    }

    pub fn transpose(&self) -> SeriesMatrix {
        let entries = (0..self.cols)
            .flat_map(|j| (0..self.rows).map(move |i| self.get(i, j).clone()))
            .collect();
        SeriesMatrix {
            rows: self.cols,
            cols: self.rows,
            nvars: self.nvars,
            entries,
        }
    }

    pub fn mul(&self, other: &SeriesMatrix) -> Result<SeriesMatrix> {
        if self.cols != other.rows {
            return Err(Error::Arity {
                expected: self.cols,
                got: other.rows,
            });
        }
        if self.nvars != other.nvars {
            return Err(Error::NvarsMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let col: Vec<Series> = (0..other.rows).map(|k| other.get(k, j).clone()).collect();
                entries.push(crate::series::dot(self.row(i), &col));
            }
        }
        SeriesMatrix::new(self.rows, other.cols, entries)
    }

    /// `A v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[Series]) -> Result<Vec<Series>> {
        if v.len() != self.cols {
            return Err(Error::Arity {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| crate::series::dot(self.row(i), v))
            .collect())
    }

    pub fn scale(&self, s: &Series) -> SeriesMatrix {
        SeriesMatrix {
            rows: self.rows,
            cols: self.cols,
            nvars: self.nvars,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&Series) -> Result<Series>) -> Result<SeriesMatrix> {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        SeriesMatrix::new(self.rows, self.cols, entries)
    }

    /// Substitute into every entry.
    pub fn compose(&self, args: &[Series]) -> Result<SeriesMatrix> {
        self.map(|e| e.compose(args))
    }

    /// Entrywise agreement at the common precision.
    pub fn agrees_with(&self, other: &SeriesMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.agrees_with(b))
    }
}

/// `J[i][j] = d f_i / d x_{vars[j]}`.
pub fn jacobian(fs: &[Series], vars: &[usize]) -> Result<SeriesMatrix> {
    let mut entries = Vec::with_capacity(fs.len() * vars.len());
    for f in fs {
        for &v in vars {
            entries.push(f.partial(v)?);
        }
    }
    let nvars = check_uniform(fs)?;
    Ok(SeriesMatrix {
        rows: fs.len(),
        cols: vars.len(),
        nvars,
        entries,
    })
}

fn require_square(a: &SeriesMatrix) -> Result<usize> {
    if a.rows != a.cols {
        return Err(Error::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    Ok(a.rows)
}

/// Determinant by row-wise Laplace expansion memoized over the set of used columns.
pub fn determinant(a: &SeriesMatrix) -> Result<Series> {
    let m = require_square(a)?;
    let prec = a.prec();
    if m == 0 {
        return Ok(Series::one(a.nvars, prec));
    }
    // level[S] = det of rows 0..|S| restricted to columns S
    let mut level: HashMap<u64, Series> = HashMap::new();
    level.insert(0, Series::one(a.nvars, prec));
    for i in 0..m {
        let mut next: HashMap<u64, Series> = HashMap::new();
        for (&set, minor) in &level {
            if minor.is_zero() {
                continue;
            }
            for j in 0..m {
                let bit = 1u64 << j;
                if set & bit != 0 {
                    continue;
                }
                let entry = a.get(i, j);
                if entry.is_zero() {
                    continue;
                }
                // sign from moving column j past the larger columns already chosen
                let larger = (set >> (j + 1)).count_ones();
                let mut term = entry * minor;
                if larger % 2 == 1 {
                    term = -term;
                }
                let key = set | bit;
                match next.get_mut(&key) {
                    Some(acc) => *acc = &*acc + &term,
                    None => {
                        next.insert(key, term);
                    }
                }
            }
        }
        level = next;
    }
    let full = (1u64 << m) - 1;
    Ok(level
        .remove(&full)
        .map(|d| d.truncate(prec))
        .unwrap_or_else(|| Series::zero(a.nvars, prec)))
}

/// Determinant and adjugate, with `M = [1]` for `1 x 1` input.
pub fn det_and_adjugate(a: &SeriesMatrix) -> Result<(Series, SeriesMatrix)> {
    let m = require_square(a)?;
    if m == 0 {
        return Err(Error::NotSquare { rows: 0, cols: 0 });
    }
    let prec = a.prec();
    let delta = determinant(a)?;
    if m == 1 {
        return Ok((delta, SeriesMatrix::identity(1, a.nvars, prec)));
    }
    let mut entries = vec![Series::zero(a.nvars, prec); m * m];
    for i in 0..m {
        for j in 0..m {
            let rows: Vec<usize> = (0..m).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..m).filter(|&c| c != j).collect();
            let mut c = determinant(&a.submatrix(&rows, &cols))?;
            if (i + j) % 2 == 1 {
                c = -c;
            }
            // adjugate is the transposed cofactor matrix
            entries[j * m + i] = c;
        }
    }
    Ok((delta, SeriesMatrix::new(m, m, entries)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMarker {
    /// Full rank: the bound cannot be improved.
    Exact,
    /// All larger minors vanish modulo the working precision, which proves nothing.
    AtPrecision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub minor: Series,
    pub marker: RankMarker,
}

impl RankCertificate {
    pub fn minor_order(&self) -> Order {
        self.minor.order()
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Largest `r` with a nonzero `r x r` minor. Among the witnesses of that size the one of least
/// order is returned, ties broken by the lexicographic order of `(rows, cols)`.
pub fn rank_lower_bound(a: &SeriesMatrix) -> Result<RankCertificate> {
    let full = a.rows.min(a.cols);
    let prec = a.prec();
    for r in (1..=full).rev() {
        let mut best: Option<(u32, Vec<usize>, Vec<usize>, Series)> = None;
        for rows in subsets(a.rows, r) {
            for cols in subsets(a.cols, r) {
                let d = determinant(&a.submatrix(&rows, &cols))?;
                if let Order::Finite(o) = d.order() {
                    if best.as_ref().is_none_or(|b| o < b.0) {
                        best = Some((o, rows.clone(), cols.clone(), d));
                    }
                }
            }
        }
        if let Some((_, rows, cols, minor)) = best {
            let marker = if r == full {
                RankMarker::Exact
            } else {
                RankMarker::AtPrecision
            };
            return Ok(RankCertificate {
                rank: r,
                rows,
                cols,
                minor,
                marker,
            });
        }
    }
    Ok(RankCertificate {
        rank: 0,
        rows: vec![],
        cols: vec![],
        minor: Series::one(a.nvars, prec),
        marker: if full == 0 {
            RankMarker::Exact
        } else {
            RankMarker::AtPrecision
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(prec: u32, terms: &[(&[u32], i64)]) -> Series {
        Series::from_int_terms(2, prec, terms)
    }

    #[test]
    fn jacobian_of_product() {
        // ring (x, y1, y2); f = y1 y2 - x
        let f = Series::from_int_terms(3, 6, &[(&[0, 1, 1], 1), (&[1, 0, 0], -1)]);
        let j = jacobian(&[f], &[1, 2]).unwrap();
        assert_eq!(
            j.get(0, 0),
            &Series::from_int_terms(3, 5, &[(&[0, 0, 1], 1)])
        );
        assert_eq!(
            j.get(0, 1),
            &Series::from_int_terms(3, 5, &[(&[0, 1, 0], 1)])
        );
    }

    #[test]
    fn jacobian_of_constants_is_zero() {
        let f = Series::from_int(2, 3, 5);
        assert!(jacobian(&[f.clone(), f], &[0, 1]).unwrap().is_zero());
    }

    #[test]
    fn adjugate_two_by_two() {
        let a = SeriesMatrix::from_rows(vec![
            vec![s2(5, &[(&[0, 0], 1)]), s2(5, &[(&[1, 0], 1)])],
            vec![s2(5, &[(&[0, 1], 1)]), s2(5, &[(&[0, 0], 1)])],
        ])
        .unwrap();
        let (d, m) = det_and_adjugate(&a).unwrap();
        assert_eq!(d, s2(5, &[(&[0, 0], 1), (&[1, 1], -1)]));
        assert_eq!(m.get(0, 1), &s2(5, &[(&[1, 0], -1)]));
        assert_eq!(m.get(1, 0), &s2(5, &[(&[0, 1], -1)]));
        assert_eq!(m.get(1, 1), &s2(5, &[(&[0, 0], 1)]));
    }

    #[test]
    fn one_by_one_convention() {
        let f = s2(4, &[(&[1, 0], 3)]);
        let (d, m) = det_and_adjugate(&SeriesMatrix::new(1, 1, vec![f.clone()]).unwrap()).unwrap();
        assert_eq!(d, f);
        assert_eq!(m.get(0, 0), &Series::one(2, 4));
    }

    #[test]
    fn non_square_rejected() {
        let a = SeriesMatrix::new(1, 2, vec![Series::one(1, 3), Series::one(1, 3)]).unwrap();
        assert!(matches!(det_and_adjugate(&a), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn rank_examples() {
        let x1 = s2(5, &[(&[1, 0], 1)]);
        let x2 = s2(5, &[(&[0, 1], 1)]);
        let a = SeriesMatrix::from_rows(vec![vec![x1.clone(), x2.clone()], vec![x2, x1.clone()]])
            .unwrap();
        let c = rank_lower_bound(&a).unwrap();
        assert_eq!(c.rank, 2);
        assert_eq!(c.minor, s2(5, &[(&[2, 0], 1), (&[0, 2], -1)]));
        assert_eq!(c.marker, RankMarker::Exact);

        let z = SeriesMatrix::new(2, 2, vec![Series::zero(2, 5); 4]).unwrap();
        let c = rank_lower_bound(&z).unwrap();
        assert_eq!(c.rank, 0);
        assert_eq!(c.marker, RankMarker::AtPrecision);

        let row = SeriesMatrix::new(1, 2, vec![x1.clone(), x1]).unwrap();
        assert_eq!(rank_lower_bound(&row).unwrap().rank, 1);
    }

    #[test]
    fn rank_prefers_low_order_minor() {
        let a =
            SeriesMatrix::new(1, 2, vec![s2(5, &[(&[2, 0], 1)]), s2(5, &[(&[0, 0], 2)])]).unwrap();
        let c = rank_lower_bound(&a).unwrap();
        assert_eq!(c.cols, vec![1]);
    }

    #[test]
    fn five_by_five_determinant_matches_permutation_sum() {
        // diagonal plus superdiagonal: det is the product of the diagonal
        let n = 5;
        let mut rows = vec![vec![Series::zero(2, 6); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = s2(6, &[(&[0, 0], (i + 1) as i64), (&[1, 0], 1)]);
            if i + 1 < n {
                row[i + 1] = s2(6, &[(&[0, 1], 7)]);
            }
        }
        let a = SeriesMatrix::from_rows(rows).unwrap();
        let d = determinant(&a).unwrap();
        let mut expect = Series::one(2, 6);
        for i in 0..n {
            expect = &expect * a.get(i, i);
        }
        assert_eq!(d, expect);
    }
}
