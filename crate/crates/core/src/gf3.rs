//! Arithmetic and dense linear algebra over the three-element field.
//!
//! Symbols are stored in canonical form `{0, 1, 2}`; a `-1` coefficient is
//! always normalised to `2` at construction time so equality is structural.
//! Elimination picks the first nonzero entry in column order as the pivot,
//! scanning rows top to bottom, which keeps every result deterministic.

use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// An element of GF(3).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf3(u8);

impl Gf3 {
    pub const ZERO: Gf3 = Gf3(0);
    pub const ONE: Gf3 = Gf3(1);
    /// Also `-1`.
    pub const TWO: Gf3 = Gf3(2);

    /// Builds a symbol from a canonical value; `None` unless `value < 3`.
    pub const fn new(value: u8) -> Option<Gf3> {
        if value < 3 {
            Some(Gf3(value))
        } else {
            None
        }
    }

    /// Reduces an arbitrary integer into the field, so `-1` becomes `2`.
    pub const fn from_i64(value: i64) -> Gf3 {
        Gf3(value.rem_euclid(3) as u8)
    }

    /// `+1 -> 1`, `-1 -> 2`.
    pub const fn from_sign(negative: bool) -> Gf3 {
        if negative {
            Gf3::TWO
        } else {
            Gf3::ONE
        }
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Multiplicative inverse. Both units are self-inverse in GF(3).
    pub const fn inv(self) -> Option<Gf3> {
        match self.0 {
            0 => None,
            v => Some(Gf3(v)),
        }
    }
}

impl fmt::Display for Gf3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Gf3 {
    type Output = Gf3;
    fn add(self, rhs: Gf3) -> Gf3 {
        Gf3((self.0 + rhs.0) % 3)
    }
}

impl Sub for Gf3 {
    type Output = Gf3;
    fn sub(self, rhs: Gf3) -> Gf3 {
        Gf3((self.0 + 3 - rhs.0) % 3)
    }
}

impl Neg for Gf3 {
    type Output = Gf3;
    fn neg(self) -> Gf3 {
        Gf3((3 - self.0) % 3)
    }
}

impl Mul for Gf3 {
    type Output = Gf3;
    fn mul(self, rhs: Gf3) -> Gf3 {
        Gf3((self.0 * rhs.0) % 3)
    }
}

impl AddAssign for Gf3 {
    fn add_assign(&mut self, rhs: Gf3) {
        *self = *self + rhs;
    }
}

impl SubAssign for Gf3 {
    fn sub_assign(&mut self, rhs: Gf3) {
        *self = *self - rhs;
    }
}

impl MulAssign for Gf3 {
    fn mul_assign(&mut self, rhs: Gf3) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for Gf3 {
    fn sum<I: Iterator<Item = Gf3>>(iter: I) -> Gf3 {
        iter.fold(Gf3::ZERO, Add::add)
    }
}

/// A fixed-length column of GF(3) symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Gf3Vector(Vec<Gf3>);

impl Gf3Vector {
    pub fn zeros(len: usize) -> Self {
        Gf3Vector(vec![Gf3::ZERO; len])
    }

    /// Rejects any value outside `{0, 1, 2}`.
    pub fn from_values(values: &[u8]) -> Result<Self> {
        values
            .iter()
            .map(|&v| {
                Gf3::new(v)
                    .ok_or_else(|| Error::InvalidArgument(format!("{v} is not a GF(3) symbol")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Gf3Vector)
    }

    /// Reduces each integer mod 3.
    pub fn from_ints(values: &[i64]) -> Self {
        Gf3Vector(values.iter().map(|&v| Gf3::from_i64(v)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Gf3] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Gf3> {
        self.0.iter()
    }

    pub fn values(&self) -> Vec<u8> {
        self.0.iter().map(|s| s.value()).collect()
    }

    pub fn into_inner(self) -> Vec<Gf3> {
        self.0
    }

    pub fn set(&mut self, index: usize, value: Gf3) {
        self.0[index] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|s| s.is_zero())
    }

    fn check_len(&self, other: &Gf3Vector) -> Result<()> {
        if self.len() == other.len() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.len(),
                found: other.len(),
            })
        }
    }

    pub fn add(&self, other: &Gf3Vector) -> Result<Gf3Vector> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b).collect())
    }

    pub fn sub(&self, other: &Gf3Vector) -> Result<Gf3Vector> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }

    pub fn scale(&self, factor: Gf3) -> Gf3Vector {
        self.0.iter().map(|&a| a * factor).collect()
    }

    pub fn dot(&self, other: &Gf3Vector) -> Result<Gf3> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).sum())
    }

    /// Entrywise (Hadamard) product.
    pub fn pointwise(&self, other: &Gf3Vector) -> Result<Gf3Vector> {
        self.check_len(other)?;
        Ok(self.0.iter().zip(&other.0).map(|(&a, &b)| a * b).collect())
    }

    /// Concatenation of `self` followed by `other`.
    pub fn concat(&self, other: &Gf3Vector) -> Gf3Vector {
        self.0.iter().chain(&other.0).copied().collect()
    }

    /// Splits into consecutive blocks of `block` symbols. The length must be a
    /// multiple of `block`.
    pub fn chunks(&self, block: usize) -> Result<Vec<Gf3Vector>> {
        if block == 0 || !self.len().is_multiple_of(block) {
            return Err(Error::DimensionMismatch {
                expected: self.len().div_ceil(block.max(1)) * block,
                found: self.len(),
            });
        }
        Ok(self
            .0
            .chunks(block)
            .map(|c| Gf3Vector(c.to_vec()))
            .collect())
    }
}

impl From<Vec<Gf3>> for Gf3Vector {
    fn from(v: Vec<Gf3>) -> Self {
        Gf3Vector(v)
    }
}

impl FromIterator<Gf3> for Gf3Vector {
    fn from_iter<I: IntoIterator<Item = Gf3>>(iter: I) -> Self {
        Gf3Vector(iter.into_iter().collect())
    }
}

impl Index<usize> for Gf3Vector {
    type Output = Gf3;
    fn index(&self, index: usize) -> &Gf3 {
        &self.0[index]
    }
}

impl<'a> IntoIterator for &'a Gf3Vector {
    type Item = &'a Gf3;
    type IntoIter = std::slice::Iter<'a, Gf3>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Dense row-major matrix over GF(3).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gf3Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf3>,
}

impl Gf3Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf3Matrix {
            rows,
            cols,
            data: vec![Gf3::ZERO; rows * cols],
        }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(
            order,
            order,
            |r, c| if r == c { Gf3::ONE } else { Gf3::ZERO },
        )
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Gf3) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Gf3Matrix { rows, cols, data }
    }

    /// Integer rows reduced mod 3. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row.iter().map(|&v| Gf3::from_i64(v)));
        }
        Ok(Gf3Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Gf3Vector]) -> Result<Self> {
        let rows = columns.first().map_or(0, Gf3Vector::len);
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |r, c| columns[c][r]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> Gf3 {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Gf3) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[Gf3] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Gf3Vector {
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    pub fn transpose(&self) -> Gf3Matrix {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn mul(&self, other: &Gf3Matrix) -> Result<Gf3Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, other.cols, |r, c| {
            (0..self.cols)
                .map(|t| self.get(r, t) * other.get(t, c))
                .sum()
        }))
    }

    /// `self · x`.
    pub fn mul_vec(&self, x: &Gf3Vector) -> Result<Gf3Vector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(&a, &b)| a * b).sum())
            .collect())
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Gf3Matrix) -> Result<Gf3Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                other.get(r, c - self.cols)
            }
        }))
    }

    /// `self` stacked on top of `other`.
    pub fn vstack(&self, other: &Gf3Matrix) -> Result<Gf3Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Gf3Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Permutes columns: column `c` of the result is column `perm[c]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Gf3Matrix> {
        if perm.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: perm.len(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            self.get(r, perm[c])
        }))
    }

    /// Reduced row echelon form and the pivot column of each nonzero row.
    pub fn rref(&self) -> (Gf3Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.eliminate(true);
        (m, pivots)
    }

    /// Rank over GF(3).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.eliminate(false).len()
    }

    /// Unique `x` with `self · x = y`.
    pub fn solve(&self, y: &Gf3Vector) -> Result<Gf3Vector> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        if y.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: y.len(),
            });
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, n + 1, |r, c| if c < n { self.get(r, c) } else { y[r] });
        let pivots = aug.eliminate_cols(true, n);
        if pivots.len() < n {
            return Err(Error::SingularMatrix);
        }
        Ok((0..n).map(|r| aug.get(r, n)).collect())
    }

    fn eliminate(&mut self, reduce_above: bool) -> Vec<usize> {
        let cols = self.cols;
        self.eliminate_cols(reduce_above, cols)
    }

    /// Gauss-Jordan over the first `limit` columns; remaining columns ride
    /// along as right-hand sides.
    fn eliminate_cols(&mut self, reduce_above: bool, limit: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut prow = 0;
        for col in 0..limit {
            if prow == self.rows {
                break;
            }
            let Some(found) = (prow..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(prow, found);
            let scale = self.get(prow, col).inv().expect("pivot is nonzero");
            self.scale_row(prow, scale);
            let start = if reduce_above { 0 } else { prow + 1 };
            for r in start..self.rows {
                if r == prow {
                    continue;
                }
                let factor = self.get(r, col);
                if !factor.is_zero() {
                    self.axpy_row(r, prow, -factor, col);
                }
            }
            pivots.push(col);
            prow += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn scale_row(&mut self, row: usize, factor: Gf3) {
        for v in &mut self.data[row * self.cols..(row + 1) * self.cols] {
            *v *= factor;
        }
    }

    /// `row[dst] += factor * row[src]`, touching columns from `from` on.
    fn axpy_row(&mut self, dst: usize, src: usize, factor: Gf3, from: usize) {
        let cols = self.cols;
        for c in from..cols {
            let s = self.data[src * cols + c];
            if !s.is_zero() {
                self.data[dst * cols + c] += factor * s;
            }
        }
    }
}

impl fmt::Display for Gf3Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(Gf3::to_string).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// Row-by-row echelon basis for incremental rank tracking.
///
/// Each accepted row is stored reduced against all earlier rows, with a unit
/// pivot, together with its right-hand side.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<(Vec<Gf3>, Gf3)>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        EchelonBasis {
            cols,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    fn reduce(&self, coeffs: &mut [Gf3], rhs: &mut Gf3) {
        for ((row, row_rhs), &p) in self.rows.iter().zip(&self.pivots) {
            let factor = coeffs[p];
            if !factor.is_zero() {
                for (c, &v) in coeffs.iter_mut().zip(row) {
                    *c -= factor * v;
                }
                *rhs -= factor * *row_rhs;
            }
        }
    }

    /// True iff `coeffs` is outside the current span.
    pub fn would_grow(&self, coeffs: &[Gf3]) -> bool {
        let mut c = coeffs.to_vec();
        let mut rhs = Gf3::ZERO;
        self.reduce(&mut c, &mut rhs);
        c.iter().any(|v| !v.is_zero())
    }

    /// Adds the equation `coeffs · x = rhs`; returns whether the rank grew.
    pub fn insert(&mut self, coeffs: &[Gf3], rhs: Gf3) -> Result<bool> {
        if coeffs.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: coeffs.len(),
            });
        }
        let mut c = coeffs.to_vec();
        let mut r = rhs;
        self.reduce(&mut c, &mut r);
        let Some(p) = c.iter().position(|v| !v.is_zero()) else {
            return Ok(false);
        };
        let scale = c[p].inv().expect("pivot is nonzero");
        for v in &mut c {
            *v *= scale;
        }
        self.rows.push((c, r * scale));
        self.pivots.push(p);
        Ok(true)
    }

    /// Solves the accumulated system once it has full rank.
    pub fn solve(&self) -> Result<Gf3Vector> {
        if !self.is_full() {
            return Err(Error::SingularMatrix);
        }
        let mut x = vec![Gf3::ZERO; self.cols];
        // Later rows are zero at earlier pivots but not vice versa, so
        // back-substitute from the last accepted row.
        for ((row, rhs), &p) in self.rows.iter().zip(&self.pivots).rev() {
            let acc: Gf3 = row
                .iter()
                .zip(&x)
                .enumerate()
                .filter(|(c, _)| *c != p)
                .map(|(_, (&a, &b))| a * b)
                .sum();
            x[p] = *rhs - acc;
        }
        Ok(x.into())
    }
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn matrix(max: usize) -> impl Strategy<Value = Gf3Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec(0u8..3, r * c).prop_map(move |vals| {
                Gf3Matrix::from_fn(r, c, |i, j| Gf3::new(vals[i * c + j]).unwrap())
            })
        })
    }

    fn square(max: usize) -> impl Strategy<Value = Gf3Matrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(0u8..3, n * n).prop_map(move |vals| {
                Gf3Matrix::from_fn(n, n, |i, j| Gf3::new(vals[i * n + j]).unwrap())
            })
        })
    }

    proptest! {
        #[test]
        fn rank_is_transpose_invariant(m in matrix(7)) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_ignores_permuted_duplicate_columns(m in matrix(6), seed in any::<u64>()) {
            let mut perm: Vec<usize> = (0..m.cols()).collect();
            let mut s = seed;
            for i in (1..perm.len()).rev() {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                perm.swap(i, (s >> 33) as usize % (i + 1));
            }
            let stacked = m.hstack(&m.permute_columns(&perm).unwrap()).unwrap();
            prop_assert_eq!(stacked.rank(), m.rank());
        }

        #[test]
        fn solve_inverts_mul_vec(m in square(6), xs in proptest::collection::vec(0u8..3, 6)) {
            prop_assume!(m.rank() == m.rows());
            let x = Gf3Vector::from_values(&xs[..m.cols()]).unwrap();
            let y = m.mul_vec(&x).unwrap();
            prop_assert_eq!(m.solve(&y).unwrap(), x);
        }

        #[test]
        fn rank_is_idempotent_under_rref(m in matrix(7)) {
            let (r, pivots) = m.rref();
            prop_assert_eq!(r.rank(), pivots.len());
            prop_assert_eq!(r.rref().0, r);
        }
    }
}
