//! Sign diagonals, the generator matrices `X_1..X_k`, and Sylvester-Hadamard
//! matrices.
//!
//! A `±1` value is bridged into GF(3) as `+1 -> 1`, `-1 -> 2`. Orthogonality
//! is checked over the integers first; `N·I mod 3` alone would lose the
//! scale.
//!
//! Exponent tuples index Hadamard columns. The column position of a tuple is
//! its binary value read with `x_1` as the most significant bit and `x_k` as
//! the least significant one, which reproduces the natural Sylvester order
//! `[w, X_2 w, X_1 w, X_2 X_1 w]` for `k = 2`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf3::{Gf3, Gf3Matrix, Gf3Vector};

/// Largest supported `k`; `N = 2^16`.
pub const MAX_K: usize = 16;

/// A diagonal matrix with `±1` entries, stored as a mask of the negative
/// positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignDiagonal {
    negmask: Vec<bool>,
}

impl SignDiagonal {
    pub fn identity(order: usize) -> Result<Self> {
        Self::from_mask(vec![false; order])
    }

    /// The order must be a power of two.
    pub fn from_mask(negmask: Vec<bool>) -> Result<Self> {
        if !negmask.len().is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "sign diagonal order {} is not a power of two",
                negmask.len()
            )));
        }
        Ok(SignDiagonal { negmask })
    }

    /// `X_i = I_{2^(i-1)} ⊗ blkdiag(I_{N/2^i}, -I_{N/2^i})` with `N = 2^k`.
    pub fn generator(i: usize, k: usize) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::UnsupportedK(k));
        }
        if i == 0 || i > k {
            return Err(Error::IndexOutOfRange { index: i, max: k });
        }
        let half_block = 1usize << (k - i);
        let block: Vec<bool> = std::iter::repeat_n(false, half_block)
            .chain(std::iter::repeat_n(true, half_block))
            .collect();
        let negmask = block.repeat(1 << (i - 1));
        Self::from_mask(negmask)
    }

    pub fn order(&self) -> usize {
        self.negmask.len()
    }

    pub fn negmask(&self) -> &[bool] {
        &self.negmask
    }

    pub fn is_negative(&self, position: usize) -> bool {
        self.negmask[position]
    }

    /// Diagonal entry at `position` as a field element.
    pub fn entry(&self, position: usize) -> Gf3 {
        Gf3::from_sign(self.negmask[position])
    }

    /// Positions holding `-1`.
    pub fn negative_positions(&self) -> Vec<usize> {
        self.negmask
            .iter()
            .enumerate()
            .filter(|(_, &n)| n)
            .map(|(p, _)| p)
            .collect()
    }

    /// `self · x`: flips the sign of every masked entry.
    pub fn apply(&self, x: &Gf3Vector) -> Result<Gf3Vector> {
        if x.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.negmask)
            .map(|(&v, &neg)| if neg { -v } else { v })
            .collect())
    }

    /// Product of two diagonals.
    pub fn compose(&self, other: &SignDiagonal) -> Result<SignDiagonal> {
        if other.order() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                found: other.order(),
            });
        }
        Ok(SignDiagonal {
            negmask: self
                .negmask
                .iter()
                .zip(&other.negmask)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        })
    }

    /// Positions where the two diagonals disagree in sign.
    pub fn differing_positions(&self, other: &SignDiagonal) -> Result<Vec<usize>> {
        Ok(self.compose(other)?.negative_positions())
    }

    /// The diagonal as a vector of `1`/`2` symbols.
    pub fn to_vector(&self) -> Gf3Vector {
        self.negmask.iter().map(|&n| Gf3::from_sign(n)).collect()
    }

    pub fn to_matrix(&self) -> Gf3Matrix {
        Gf3Matrix::from_fn(self.order(), self.order(), |r, c| {
            if r == c {
                self.entry(r)
            } else {
                Gf3::ZERO
            }
        })
    }

    pub fn signs(&self) -> Vec<i8> {
        self.negmask
            .iter()
            .map(|&n| if n { -1 } else { 1 })
            .collect()
    }
}

/// Exponents `(x_1, …, x_k)` in `{0, 1}` of the product `∏ X_i^{x_i} w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentTuple {
    bits: Vec<bool>,
}

impl ExponentTuple {
    pub fn new(bits: &[u8]) -> Result<Self> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::InvalidArgument(format!(
                "exponent {bad} outside {{0,1}}"
            )));
        }
        Ok(ExponentTuple {
            bits: bits.iter().map(|&b| b == 1).collect(),
        })
    }

    pub fn zeros(k: usize) -> Self {
        ExponentTuple {
            bits: vec![false; k],
        }
    }

    /// Unit tuple `e_j` (1-based).
    pub fn unit(j: usize, k: usize) -> Result<Self> {
        if j == 0 || j > k {
            return Err(Error::IndexOutOfRange { index: j, max: k });
        }
        let mut t = Self::zeros(k);
        t.bits[j - 1] = true;
        Ok(t)
    }

    /// Inverse of [`ExponentTuple::index`].
    pub fn from_index(index: usize, k: usize) -> Self {
        ExponentTuple {
            bits: (1..=k).map(|i| (index >> (k - i)) & 1 == 1).collect(),
        }
    }

    pub fn k(&self) -> usize {
        self.bits.len()
    }

    /// Exponent of `X_i` (1-based).
    pub fn get(&self, i: usize) -> u8 {
        u8::from(self.bits[i - 1])
    }

    pub fn bits(&self) -> Vec<u8> {
        self.bits.iter().map(|&b| u8::from(b)).collect()
    }

    /// Column position in `H_N`: binary value with `x_k` least significant.
    pub fn index(&self) -> usize {
        self.bits
            .iter()
            .fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn xor(&self, other: &ExponentTuple) -> ExponentTuple {
        ExponentTuple {
            bits: self
                .bits
                .iter()
                .zip(&other.bits)
                .map(|(&a, &b)| a ^ b)
                .collect(),
        }
    }

    /// Same tuple with `x_j` toggled: the exponent of `X_j · column(self)`.
    pub fn toggled(&self, j: usize) -> ExponentTuple {
        let mut t = self.clone();
        t.bits[j - 1] = !t.bits[j - 1];
        t
    }

    /// All `2^k` tuples in column order.
    pub fn all(k: usize) -> impl Iterator<Item = ExponentTuple> {
        (0..1usize << k).map(move |idx| ExponentTuple::from_index(idx, k))
    }
}

impl fmt::Display for ExponentTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bits().iter().map(u8::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `∏ X_i^{x_i} · w` with `w` the all-ones vector. Entries are in `{1, 2}`.
pub fn hadamard_column(x: &ExponentTuple) -> Result<Gf3Vector> {
    let k = x.k();
    if k > MAX_K {
        return Err(Error::UnsupportedK(k));
    }
    let mut diag = SignDiagonal::identity(1 << k)?;
    for i in (1..=k).filter(|&i| x.get(i) == 1) {
        diag = diag.compose(&SignDiagonal::generator(i, k)?)?;
    }
    Ok(diag.to_vector())
}

/// Number of positions in which two `±1` columns differ.
pub fn column_distance(a: &Gf3Vector, b: &Gf3Vector) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    if a.iter().chain(b.iter()).any(|s| s.is_zero()) {
        return Err(Error::InvalidArgument(
            "sign vectors cannot contain 0".into(),
        ));
    }
    Ok(a.iter().zip(b).filter(|(x, y)| x != y).count())
}

/// A `±1` matrix of order `N = 2^k`, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HadamardMatrix {
    order: usize,
    entries: Vec<i8>,
}

impl HadamardMatrix {
    /// Sylvester construction: `H_1 = [1]`, `H_2N = [[H, H], [H, -H]]`.
    pub fn sylvester(k: usize) -> Result<Self> {
        if k > MAX_K {
            return Err(Error::UnsupportedK(k));
        }
        let mut h = HadamardMatrix {
            order: 1,
            entries: vec![1],
        };
        for _ in 0..k {
            let n = h.order;
            let mut next = vec![0i8; 4 * n * n];
            for r in 0..n {
                for c in 0..n {
                    let v = h.entries[r * n + c];
                    next[r * 2 * n + c] = v;
                    next[r * 2 * n + c + n] = v;
                    next[(r + n) * 2 * n + c] = v;
                    next[(r + n) * 2 * n + c + n] = -v;
                }
            }
            h = HadamardMatrix {
                order: 2 * n,
                entries: next,
            };
        }
        Ok(h)
    }

    /// Arbitrary square `±1` matrix, e.g. for checking that a tampered matrix
    /// fails [`verify_gram`].
    pub fn from_entries(order: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != order * order {
            return Err(Error::DimensionMismatch {
                expected: order * order,
                found: entries.len(),
            });
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(Error::InvalidArgument("entries must be +1 or -1".into()));
        }
        Ok(HadamardMatrix { order, entries })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.order + col]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// Column `col` bridged into GF(3).
    pub fn column(&self, col: usize) -> Gf3Vector {
        (0..self.order)
            .map(|r| Gf3::from_sign(self.entry(r, col) < 0))
            .collect()
    }

    pub fn columns(&self) -> Vec<Gf3Vector> {
        (0..self.order).map(|c| self.column(c)).collect()
    }

    pub fn to_gf3(&self) -> Gf3Matrix {
        Gf3Matrix::from_fn(self.order, self.order, |r, c| {
            Gf3::from_sign(self.entry(r, c) < 0)
        })
    }

    /// Integer `HᵀH`, row major.
    pub fn gram(&self) -> Vec<i64> {
        let n = self.order;
        let mut g = vec![0i64; n * n];
        for a in 0..n {
            for b in a..n {
                let dot: i64 = (0..n)
                    .map(|r| i64::from(self.entry(r, a)) * i64::from(self.entry(r, b)))
                    .sum();
                g[a * n + b] = dot;
                g[b * n + a] = dot;
            }
        }
        g
    }
}

/// True iff `HᵀH = N·I` over the integers and `(N mod 3)·I` over GF(3).
pub fn verify_gram(h: &HadamardMatrix) -> bool {
    let n = h.order();
    let integer_ok = h
        .gram()
        .iter()
        .enumerate()
        .all(|(idx, &g)| g == if idx / n == idx % n { n as i64 } else { 0 });
    if !integer_ok {
        return false;
    }
    let m = h.to_gf3();
    let Ok(g3) = m.transpose().mul(&m) else {
        return false;
    };
    let scale = Gf3::from_i64(n as i64);
    (0..n).all(|r| (0..n).all(|c| g3.get(r, c) == if r == c { scale } else { Gf3::ZERO }))
}

/// In-place fast Walsh-Hadamard transform over GF(3): `x <- H_N x`, with
/// `H_N` in Sylvester order. The length must be a power of two.
pub fn fwht(x: &mut [Gf3]) {
    debug_assert!(x.len().is_power_of_two());
    let n = x.len();
    let mut h = 1;
    while h < n {
        for start in (0..n).step_by(2 * h) {
            for p in start..start + h {
                let (a, b) = (x[p], x[p + h]);
                x[p] = a + b;
                x[p + h] = a - b;
            }
        }
        h *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn signs(v: &Gf3Vector) -> Vec<i8> {
        v.iter()
            .map(|s| if *s == Gf3::TWO { -1 } else { 1 })
            .collect()
    }

    #[test]
    fn generators_small() {
        assert_eq!(
            SignDiagonal::generator(1, 2).unwrap().signs(),
            vec![1, 1, -1, -1]
        );
        assert_eq!(
            SignDiagonal::generator(2, 2).unwrap().signs(),
            vec![1, -1, 1, -1]
        );
        assert_eq!(SignDiagonal::generator(1, 1).unwrap().signs(), vec![1, -1]);
    }

    #[test]
    fn generators_of_five_three_code() {
        let expected: [[i8; 8]; 3] = [
            [1, 1, 1, 1, -1, -1, -1, -1],
            [1, 1, -1, -1, 1, 1, -1, -1],
            [1, -1, 1, -1, 1, -1, 1, -1],
        ];
        for (i, row) in expected.iter().enumerate() {
            assert_eq!(
                SignDiagonal::generator(i + 1, 3).unwrap().signs(),
                row.to_vec()
            );
        }
    }

    #[test]
    fn generator_index_errors() {
        assert!(matches!(
            SignDiagonal::generator(0, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            SignDiagonal::generator(4, 3),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            SignDiagonal::generator(1, 17),
            Err(Error::UnsupportedK(17))
        ));
    }

    #[test]
    fn generators_are_involutions_and_commute() {
        for k in 1..=8 {
            let n = 1 << k;
            let id = SignDiagonal::identity(n).unwrap();
            let gens: Vec<_> = (1..=k)
                .map(|i| SignDiagonal::generator(i, k).unwrap())
                .collect();
            for a in &gens {
                assert_eq!(a.compose(a).unwrap(), id);
                for b in &gens {
                    assert_eq!(a.compose(b).unwrap(), b.compose(a).unwrap());
                }
            }
        }
    }

    #[test]
    fn hadamard_column_examples() {
        let ones = hadamard_column(&ExponentTuple::zeros(3)).unwrap();
        assert!(ones.iter().all(|&s| s == Gf3::ONE));
        let c = hadamard_column(&ExponentTuple::new(&[0, 1]).unwrap()).unwrap();
        assert_eq!(signs(&c), vec![1, -1, 1, -1]);
        let c = hadamard_column(&ExponentTuple::new(&[1, 1]).unwrap()).unwrap();
        assert_eq!(signs(&c), vec![1, -1, -1, 1]);
    }

    #[test]
    fn sylvester_small() {
        assert_eq!(HadamardMatrix::sylvester(0).unwrap().entries(), &[1]);
        assert_eq!(
            HadamardMatrix::sylvester(1).unwrap().entries(),
            &[1, 1, 1, -1]
        );
        let h4 = HadamardMatrix::sylvester(2).unwrap();
        #[rustfmt::skip]
        let expected = [
            1, 1, 1, 1,
            1, -1, 1, -1,
            1, 1, -1, -1,
            1, -1, -1, 1,
        ];
        assert_eq!(h4.entries(), &expected);
    }

    #[test]
    fn sylvester_column_order_matches_tuples() {
        for k in 0..=6 {
            let h = HadamardMatrix::sylvester(k).unwrap();
            for t in ExponentTuple::all(k) {
                assert_eq!(
                    h.column(t.index()),
                    hadamard_column(&t).unwrap(),
                    "k={k} t={t}"
                );
            }
        }
    }

    #[test]
    fn column_distance_examples() {
        let ones = hadamard_column(&ExponentTuple::zeros(2)).unwrap();
        assert_eq!(column_distance(&ones, &ones).unwrap(), 0);
        let h4 = HadamardMatrix::sylvester(2).unwrap();
        assert_eq!(column_distance(&h4.column(0), &h4.column(1)).unwrap(), 2);
        let a = hadamard_column(&ExponentTuple::new(&[0, 1, 1]).unwrap()).unwrap();
        let b = hadamard_column(&ExponentTuple::new(&[1, 0, 1]).unwrap()).unwrap();
        // direct entrywise comparison
        let direct = signs(&a)
            .iter()
            .zip(signs(&b))
            .filter(|(x, y)| **x != *y)
            .count();
        assert_eq!(direct, 4);
        assert_eq!(column_distance(&a, &b).unwrap(), 4);
        assert!(column_distance(&a, &ones).is_err());
        assert!(column_distance(&Gf3Vector::zeros(2), &ones.chunks(2).unwrap()[0]).is_err());
    }

    #[test]
    fn gram_checks() {
        assert!(verify_gram(&HadamardMatrix::sylvester(0).unwrap()));
        let h4 = HadamardMatrix::sylvester(2).unwrap();
        assert!(verify_gram(&h4));
        let g = h4.gram();
        for r in 0..4 {
            for c in 0..4 {
                assert_eq!(g[r * 4 + c], if r == c { 4 } else { 0 });
            }
        }
        let mut tampered = h4.entries().to_vec();
        tampered[5] = -tampered[5];
        assert!(!verify_gram(
            &HadamardMatrix::from_entries(4, tampered).unwrap()
        ));
    }

    #[test]
    fn fwht_matches_dense_product() {
        for k in 0..=6 {
            let h = HadamardMatrix::sylvester(k).unwrap().to_gf3();
            let x: Gf3Vector = (0..1i64 << k).map(|i| Gf3::from_i64(i * 7 + 1)).collect();
            let mut fast = x.clone().into_inner();
            fwht(&mut fast);
            assert_eq!(Gf3Vector::from(fast), h.mul_vec(&x).unwrap());
        }
    }

    #[test]
    fn sign_diagonal_rejects_bad_order() {
        assert!(SignDiagonal::from_mask(vec![false; 3]).is_err());
        assert!(ExponentTuple::new(&[0, 2]).is_err());
    }
}
