//! Oracles shared by the integration tests.
//!
//! The elimination decoder rebuilds every downloaded symbol as an equation
//! over all `kN` file symbols, using Hadamard columns computed from the
//! parity-of-popcount formula, and reads `f_i` off the reduced row echelon
//! form.

#![allow(dead_code)]

use hdsc::{CodeParams, Gf3, Gf3Matrix, Gf3Vector, NodeId};
use rand::{rngs::StdRng, Rng};

pub fn sign(p: usize, c: usize) -> Gf3 {
    if (p & c).count_ones().is_multiple_of(2) {
        Gf3::ONE
    } else {
        Gf3::TWO
    }
}

/// `X_j[p]`: negative where bit `k - j` of `p` is set.
pub fn generator(j: usize, k: usize, p: usize) -> Gf3 {
    sign(p, 1 << (k - j))
}

/// Column indices of `V_i`, ascending.
pub fn repair_columns(i: usize, k: usize) -> Vec<usize> {
    (0..1usize << k)
        .filter(|c| c & (1 << (k - i)) == 0)
        .collect()
}

/// Unknown order: interference blocks `f_j (j ≠ i)` first, then `f_i`.
fn unknown(block: usize, p: usize, i: usize, k: usize, n: usize) -> usize {
    let slot = if block == i {
        k - 1
    } else if block < i {
        block - 1
    } else {
        block - 2
    };
    slot * n + p
}

pub fn random_file(params: &CodeParams, rng: &mut StdRng) -> Gf3Vector {
    (0..params.file_size())
        .map(|_| Gf3::from_i64(rng.gen_range(0..3)))
        .collect()
}

pub fn oracle_decode(k: usize, i: usize, downloads: &[(NodeId, Gf3Vector)]) -> Gf3Vector {
    let n = 1usize << k;
    let cols = repair_columns(i, k);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for (source, payload) in downloads {
        assert_eq!(payload.len(), cols.len());
        for (r, &c) in cols.iter().enumerate() {
            let mut row = vec![0i64; k * n + 1];
            for p in 0..n {
                let h = sign(p, c);
                match *source {
                    NodeId::Systematic(j) => {
                        row[unknown(j, p, i, k, n)] = i64::from(h.value());
                    }
                    NodeId::ParityA => {
                        for j in 1..=k {
                            row[unknown(j, p, i, k, n)] = i64::from(h.value());
                        }
                    }
                    NodeId::ParityB => {
                        for j in 1..=k {
                            row[unknown(j, p, i, k, n)] =
                                i64::from((h * generator(j, k, p)).value());
                        }
                    }
                }
            }
            row[k * n] = i64::from(payload[r].value());
            rows.push(row);
        }
    }
    let (rref, pivots) = Gf3Matrix::from_rows(&rows).unwrap().rref();
    let offset = (k - 1) * n;
    let mut out = vec![None; n];
    for (r, &pc) in pivots.iter().enumerate() {
        if pc >= offset && pc < k * n {
            // Reduced form: the pivot is the only nonzero among the unknowns.
            assert!((0..k * n)
                .filter(|&c| c != pc)
                .all(|c| rref.get(r, c).is_zero()));
            out[pc - offset] = Some(rref.get(r, k * n));
        }
    }
    out.into_iter()
        .map(|s| s.expect("f_i is determined by the downloads"))
        .collect()
}
