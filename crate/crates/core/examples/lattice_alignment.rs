//! How interference aligns on the exponent lattice.

use hdsc::lattice::{alignment_ratio, alignment_table, predict_rank, repair_lattice, AlignmentRow};

pub fn main() -> hdsc::Result<()> {
    let k = 3;
    let base = repair_lattice(1, k, 2)?;
    println!("L(V_1) at delta=2 has {} points", base.len());
    println!(
        "closed under X_2 with wrap-around: {}",
        base.shift(2, true)? == base
    );
    println!(
        "predicted rank [V_1 | X_2 V_1] = {}",
        predict_rank(1, 2, k)?
    );

    for delta in [2, 4, 8, 16, 32] {
        println!("delta={delta:>2} ratio={}", alignment_ratio(k, delta)?);
    }

    println!("{}", AlignmentRow::CSV_HEADER);
    for row in alignment_table(k, 4)?.into_iter().filter(|r| r.i == 1) {
        println!("{}", row.to_csv());
    }
    Ok(())
}
