//! Data collection from different node subsets.

use hdsc::code::{encode, make_code};
use hdsc::reconstruct::decodability;
use hdsc::{reconstruct_file, AccessSet, Gf3Vector, NodeId};

pub fn main() -> hdsc::Result<()> {
    let params = make_code(3)?;
    let file: Gf3Vector = (0..params.file_size())
        .map(|i| hdsc::Gf3::from_i64(i as i64 / 2))
        .collect();
    let nodes = encode(&params, &file)?;

    let cases: [(&str, Vec<NodeId>); 3] = [
        ("all systematic", vec![]),
        ("without s3", vec![NodeId::Systematic(3)]),
        (
            "without s2, s3",
            vec![NodeId::Systematic(2), NodeId::Systematic(3)],
        ),
    ];
    for (label, excluded) in cases {
        let access = AccessSet::all_except(&params, &excluded);
        println!("{label}: {}", decodability(&params, &access)?);
        // Fall back to single symbols from the first excluded node.
        let r = reconstruct_file(&params, &access, &excluded, &nodes)?;
        assert_eq!(r.file, file);
        let blocks: Vec<String> = r.block_downloads.iter().map(NodeId::to_string).collect();
        println!(
            "  blocks {}, extra symbols {}, total {}",
            blocks.join(" "),
            r.extra_symbols,
            r.total_downloaded
        );
    }
    Ok(())
}
