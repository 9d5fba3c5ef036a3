//! Dots-on-a-lattice bookkeeping for interference alignment.
//!
//! A product `∏ X_s^{x_s} w` is represented by its exponent point
//! `Σ x_s e_s`. Multiplying by `X_j` shifts a point one step along axis `j`.
//! When the generator entries are `Δ`-th roots of unity the exponents live in
//! `Z_Δ` and the shift wraps around; `delta = 0` marks an unbounded lattice.
//!
//! Everything here is pure integer combinatorics. The link to actual vectors
//! goes through [`crate::hadamard::ExponentTuple`] only.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::hadamard::ExponentTuple;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(Vec<u64>);

impl LatticePoint {
    pub fn new(coords: Vec<u64>) -> Self {
        LatticePoint(coords)
    }

    pub fn origin(k: usize) -> Self {
        LatticePoint(vec![0; k])
    }

    /// Basis vector `e_s` (1-based).
    pub fn unit(s: usize, k: usize) -> Result<Self> {
        check_axis(s, k)?;
        let mut p = Self::origin(k);
        p.0[s - 1] = 1;
        Ok(p)
    }

    pub fn coords(&self) -> &[u64] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// The lattice map: `∏ X_s^{x_s} w  ->  Σ x_s e_s`.
pub fn point_of(tuple: &ExponentTuple) -> LatticePoint {
    LatticePoint(tuple.bits().into_iter().map(u64::from).collect())
}

fn check_axis(axis: usize, k: usize) -> Result<()> {
    if axis == 0 || axis > k {
        Err(Error::IndexOutOfRange {
            index: axis,
            max: k,
        })
    } else {
        Ok(())
    }
}

/// A finite set of lattice points of common dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    k: usize,
    delta: u64,
    points: BTreeSet<LatticePoint>,
}

impl LatticeSet {
    pub fn new(
        k: usize,
        delta: u64,
        points: impl IntoIterator<Item = LatticePoint>,
    ) -> Result<Self> {
        let points: BTreeSet<_> = points.into_iter().collect();
        for p in &points {
            if p.k() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: p.k(),
                });
            }
            if delta > 0 && p.0.iter().any(|&c| c >= delta) {
                return Err(Error::InvalidArgument(format!(
                    "point {p} exceeds modulus {delta}"
                )));
            }
        }
        Ok(LatticeSet { k, delta, points })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Modulus of the exponents; `0` means no wrap-around.
    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        self.points.contains(p)
    }

    pub fn points(&self) -> impl Iterator<Item = &LatticePoint> {
        self.points.iter()
    }

    /// Multiplication by `X_j`: every point moves one step along axis `j`.
    ///
    /// With `wrap` and a nonzero modulus the coordinate is taken mod `delta`.
    /// Without `wrap` the result lives on the unbounded lattice (`delta = 0`).
    pub fn shift(&self, axis: usize, wrap: bool) -> Result<LatticeSet> {
        check_axis(axis, self.k)?;
        let wraps = wrap && self.delta > 0;
        let points = self.points.iter().map(|p| {
            let mut c = p.0.clone();
            c[axis - 1] += 1;
            if wraps {
                c[axis - 1] %= self.delta;
            }
            LatticePoint(c)
        });
        Ok(LatticeSet {
            k: self.k,
            delta: if wraps { self.delta } else { 0 },
            points: points.collect(),
        })
    }

    pub fn union(&self, other: &LatticeSet) -> Result<LatticeSet> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: other.k,
            });
        }
        let delta = if self.delta == other.delta {
            self.delta
        } else {
            0
        };
        Ok(LatticeSet {
            k: self.k,
            delta,
            points: self.points.union(&other.points).cloned().collect(),
        })
    }
}

/// `ℒ(V_i)`: coordinate `i` pinned to zero, every other coordinate ranging over
/// `0..delta`. Has `delta^(k-1)` points.
pub fn repair_lattice(i: usize, k: usize, delta: u64) -> Result<LatticeSet> {
    check_axis(i, k)?;
    if delta < 2 {
        return Err(Error::InvalidArgument(format!(
            "delta must be at least 2, got {delta}"
        )));
    }
    let free = (k - 1) as u32;
    let count = delta
        .checked_pow(free)
        .filter(|&c| c <= 1 << 24)
        .ok_or_else(|| {
            Error::InvalidArgument(format!("lattice of {delta}^{free} points is too large"))
        })?;
    let points = (0..count).map(|mut code| {
        let mut c = vec![0u64; k];
        for axis in (1..=k).rev().filter(|&s| s != i) {
            c[axis - 1] = code % delta;
            code /= delta;
        }
        LatticePoint(c)
    });
    LatticeSet::new(k, delta, points)
}

pub fn union_size(a: &LatticeSet, b: &LatticeSet) -> Result<usize> {
    Ok(a.union(b)?.len())
}

/// `|ℒ(V_i) ∪ ℒ(X_j V_i)| / Δ^(k-1)` without wrap-around, for `j ≠ i`,
/// counted by enumeration. Equals `(Δ+1)/Δ`.
pub fn alignment_ratio(k: usize, delta: u64) -> Result<Ratio<u64>> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "alignment ratio needs k >= 2, got {k}"
        )));
    }
    let base = repair_lattice(1, k, delta)?;
    let shifted = base.shift(2, false)?;
    Ok(Ratio::new(
        union_size(&base, &shifted)? as u64,
        base.len() as u64,
    ))
}

/// Lattice prediction of `rank([V_i | X_j V_i])` in the `Δ = 2` wrap-around
/// regime: the number of distinct points in `ℒ(V_i) ∪ ℒ(X_j V_i)`.
pub fn predict_rank(i: usize, j: usize, k: usize) -> Result<usize> {
    check_axis(j, k)?;
    let base = repair_lattice(i, k, 2)?;
    union_size(&base, &base.shift(j, true)?)
}

/// One row of the unwrapped alignment table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlignmentRow {
    pub k: usize,
    pub delta: u64,
    pub i: usize,
    pub j: usize,
    pub union_size: usize,
    pub ratio: Ratio<u64>,
}

impl AlignmentRow {
    pub const CSV_HEADER: &'static str = "k,delta,i,j,union_size,ratio";

    pub fn to_csv(&self) -> String {
        let ratio = *self.ratio.numer() as f64 / *self.ratio.denom() as f64;
        format!(
            "{},{},{},{},{},{}",
            self.k, self.delta, self.i, self.j, self.union_size, ratio
        )
    }
}

/// Union sizes and ratios for every `(i, j)` pair, unwrapped shifts.
pub fn alignment_table(k: usize, delta: u64) -> Result<Vec<AlignmentRow>> {
    let mut rows = Vec::with_capacity(k * k);
    for i in 1..=k {
        let base = repair_lattice(i, k, delta)?;
        for j in 1..=k {
            let union_size = union_size(&base, &base.shift(j, false)?)?;
            rows.push(AlignmentRow {
                k,
                delta,
                i,
                j,
                union_size,
                ratio: Ratio::new(union_size as u64, base.len() as u64),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[&[u64]]) -> BTreeSet<LatticePoint> {
        raw.iter().map(|c| LatticePoint::new(c.to_vec())).collect()
    }

    #[test]
    fn repair_lattice_examples() {
        let l = repair_lattice(3, 3, 2).unwrap();
        assert_eq!(
            l.points,
            pts(&[&[0, 0, 0], &[0, 1, 0], &[1, 0, 0], &[1, 1, 0]])
        );
        assert_eq!(repair_lattice(1, 1, 2).unwrap().points, pts(&[&[0]]));
        assert_eq!(
            repair_lattice(2, 2, 3).unwrap().points,
            pts(&[&[0, 0], &[1, 0], &[2, 0]])
        );
        assert!(matches!(
            repair_lattice(4, 3, 2),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(repair_lattice(1, 3, 1).is_err());
    }

    #[test]
    fn shift_examples() {
        let v3 = repair_lattice(3, 3, 2).unwrap();
        let x1v3 = v3.shift(1, false).unwrap();
        assert_eq!(
            x1v3.points,
            pts(&[&[1, 0, 0], &[1, 1, 0], &[2, 0, 0], &[2, 1, 0]])
        );
        assert_eq!(x1v3.delta(), 0);
        let x2v3 = v3.shift(2, false).unwrap();
        assert_eq!(
            x2v3.points,
            pts(&[&[0, 1, 0], &[0, 2, 0], &[1, 1, 0], &[1, 2, 0]])
        );
        assert_eq!(v3.shift(1, true).unwrap(), v3);
        let single = repair_lattice(1, 1, 2).unwrap();
        assert_eq!(single.shift(1, true).unwrap().points, pts(&[&[1]]));
        assert!(v3.shift(0, true).is_err());
    }

    #[test]
    fn union_size_examples() {
        let v3 = repair_lattice(3, 3, 2).unwrap();
        // explicit union of the two four-point sets
        let mut explicit = pts(&[&[0, 0, 0], &[0, 1, 0], &[1, 0, 0], &[1, 1, 0]]);
        explicit.extend(pts(&[&[1, 0, 0], &[1, 1, 0], &[2, 0, 0], &[2, 1, 0]]));
        assert_eq!(explicit.len(), 6);
        assert_eq!(union_size(&v3, &v3.shift(1, false).unwrap()).unwrap(), 6);
        for delta in 2..=5u64 {
            for k in 1..=4usize {
                for i in 1..=k {
                    let v = repair_lattice(i, k, delta).unwrap();
                    let slab = delta.pow(k as u32 - 1) as usize;
                    assert_eq!(union_size(&v, &v).unwrap(), slab);
                    assert_eq!(
                        union_size(&v, &v.shift(i, false).unwrap()).unwrap(),
                        2 * slab
                    );
                    assert_eq!(
                        union_size(&v, &v.shift(i, true).unwrap()).unwrap(),
                        2 * slab
                    );
                }
            }
        }
        let other = repair_lattice(1, 2, 2).unwrap();
        assert!(matches!(
            union_size(&v3, &other),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn alignment_ratio_examples() {
        assert_eq!(alignment_ratio(3, 2).unwrap(), Ratio::new(3, 2));
        assert_eq!(alignment_ratio(3, 100).unwrap(), Ratio::new(101, 100));
        assert_eq!(alignment_ratio(2, 2).unwrap(), Ratio::new(3, 2));
        assert!(alignment_ratio(1, 2).is_err());
    }

    #[test]
    fn unwrapped_union_matches_closed_form() {
        for k in 2..=5usize {
            for delta in 2..=16u64 {
                if delta.pow(k as u32 - 1) > 1 << 16 {
                    continue;
                }
                for row in alignment_table(k, delta).unwrap() {
                    let slab = delta.pow(k as u32 - 1) as usize;
                    if row.i == row.j {
                        assert_eq!(row.union_size, 2 * slab);
                    } else {
                        assert_eq!(
                            row.union_size,
                            (delta as usize + 1) * delta.pow(k as u32 - 2) as usize
                        );
                        assert_eq!(row.ratio, Ratio::new(delta + 1, delta));
                    }
                }
            }
        }
    }

    #[test]
    fn predict_rank_examples() {
        assert_eq!(predict_rank(1, 1, 3).unwrap(), 8);
        assert_eq!(predict_rank(1, 2, 3).unwrap(), 4);
        assert_eq!(predict_rank(2, 2, 2).unwrap(), 4);
        assert!(predict_rank(1, 4, 3).is_err());
    }

    #[test]
    fn wrap_fixes_repair_lattice() {
        for k in 1..=8 {
            for i in 1..=k {
                let v = repair_lattice(i, k, 2).unwrap();
                for j in (1..=k).filter(|&j| j != i) {
                    assert_eq!(v.shift(j, true).unwrap(), v);
                }
            }
        }
    }

    #[test]
    fn lattice_map_is_injective_on_box() {
        for k in 1..=8 {
            let image: BTreeSet<_> = ExponentTuple::all(k).map(|t| point_of(&t)).collect();
            assert_eq!(image.len(), 1 << k);
        }
    }

    #[test]
    fn csv_row_format() {
        let rows = alignment_table(3, 2).unwrap();
        let row = rows.iter().find(|r| r.i == 1 && r.j == 2).unwrap();
        assert_eq!(row.to_csv(), "3,2,1,2,6,1.5");
        let rows = alignment_table(3, 16).unwrap();
        let row = rows.iter().find(|r| r.i == 3 && r.j == 1).unwrap();
        assert_eq!(row.ratio, Ratio::new(17, 16));
        assert_eq!(row.to_csv(), "3,16,3,1,272,1.0625");
    }
}
