//! Generator diagonals and the Sylvester–Hadamard matrix they span.

use hdsc::gf3::Gf3Vector;
use hdsc::hadamard::{
    fwht, hadamard_column, verify_gram, ExponentTuple, HadamardMatrix, SignDiagonal,
};

pub fn main() -> hdsc::Result<()> {
    let k = 3;
    for i in 1..=k {
        let x = SignDiagonal::generator(i, k)?;
        println!("X_{i} signs {:?}", x.signs());
    }

    let h = HadamardMatrix::sylvester(k)?;
    println!("H_8 Gram = 8·I: {}", verify_gram(&h));
    for t in ExponentTuple::all(k) {
        let col = hadamard_column(&t)?;
        assert_eq!(col, h.column(t.index()));
        println!("column {} = {:?}", t, col.values());
    }

    // The butterfly equals a dense product with H_N.
    let x = Gf3Vector::from_ints(&[1, 0, 2, 1, 0, 0, 1, 2]);
    let mut fast = x.clone().into_inner();
    fwht(&mut fast);
    assert_eq!(Gf3Vector::from(fast.clone()), h.to_gf3().mul_vec(&x)?);
    println!("H x = {:?}", Gf3Vector::from(fast).values());
    Ok(())
}
