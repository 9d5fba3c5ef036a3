//! Rebuild a lost systematic node from `(k+1)·N/2` symbols.

use hdsc::code::{encode, make_code, Without};
use hdsc::{repair_systematic, Gf3Vector, NodeId};

pub fn main() -> hdsc::Result<()> {
    let params = make_code(3)?;
    let file = Gf3Vector::from_ints(
        &(0..params.file_size() as i64)
            .map(|i| i * 7 % 3)
            .collect::<Vec<_>>(),
    );
    let nodes = encode(&params, &file)?;

    let lost = NodeId::Systematic(2);
    let survivors = Without::new(&nodes, [lost]);
    let (restored, transcript) = repair_systematic(&params, 2, &survivors)?;

    assert_eq!(restored.data, nodes[1].data);
    print!("{transcript}");
    println!(
        "downloaded {} of the {} symbols a full decode would need",
        transcript.total_symbols(),
        params.file_size()
    );
    Ok(())
}
