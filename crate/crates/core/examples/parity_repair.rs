//! Rebuild either parity node.

use hdsc::code::{encode, make_code, Without};
use hdsc::{repair_parity, Gf3Vector, NodeId};

pub fn main() -> hdsc::Result<()> {
    let params = make_code(4)?;
    let file: Gf3Vector = (0..params.file_size())
        .map(|i| hdsc::Gf3::from_i64((i * i) as i64))
        .collect();
    let nodes = encode(&params, &file)?;

    for (role, stored) in [(NodeId::ParityA, &nodes[4]), (NodeId::ParityB, &nodes[5])] {
        let (restored, transcript) = repair_parity(&params, role, &Without::new(&nodes, [role]))?;
        assert_eq!(&restored.data, &stored.data);
        println!(
            "{role}: total={} (bound {})",
            transcript.total_symbols(),
            (params.k() + 1) * params.n() / 2
        );
    }
    Ok(())
}
