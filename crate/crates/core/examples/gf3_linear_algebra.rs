//! Arithmetic, rank and solving over GF(3).

use hdsc::gf3::{EchelonBasis, Gf3, Gf3Matrix, Gf3Vector};

pub fn main() -> hdsc::Result<()> {
    let two = Gf3::TWO;
    println!(
        "2 + 2 = {}, 2 * 2 = {}, -1 = {}",
        (two + two).value(),
        (two * two).value(),
        (-Gf3::ONE).value()
    );

    let a = Gf3Matrix::from_rows(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]])?;
    println!("A =\n{a}rank(A) = {}", a.rank());

    let x = Gf3Vector::from_ints(&[1, 2, 0]);
    let y = a.mul_vec(&x)?;
    let solved = a.solve(&y)?;
    println!(
        "A x = {:?}, solve recovers {:?}",
        y.values(),
        solved.values()
    );
    assert_eq!(solved, x);

    // Incremental elimination keeps only rank-raising rows.
    let mut basis = EchelonBasis::new(2);
    for (row, rhs) in [([1, 1], 0), ([2, 2], 0), ([1, 2], 1)] {
        let coeffs: Vec<Gf3> = row.iter().map(|&c| Gf3::from_i64(c)).collect();
        let kept = basis.insert(&coeffs, Gf3::from_i64(rhs))?;
        println!("insert {row:?} -> kept={kept} rank={}", basis.rank());
    }
    println!("solution {:?}", basis.solve()?.values());
    Ok(())
}
