//! Encode a file to disk, lose nodes, repair them and read the file back.

use hdsc::cluster::ClusterState;
use hdsc::NodeId;

pub fn main() -> hdsc::Result<()> {
    let dir = std::env::temp_dir().join(format!("hdsc-cluster-{}", std::process::id()));
    let input = b"interference alignment over a small field".to_vec();

    let mut cluster = ClusterState::init(3, &input, &dir)?;
    println!(
        "{} stripes in {}",
        cluster.manifest().stripes,
        dir.display()
    );

    cluster.fail_node(NodeId::Systematic(2))?;
    let t = cluster.run_repair(NodeId::Systematic(2))?;
    println!("repaired s2 with {} symbols", t.total_symbols());

    cluster.fail_node(NodeId::ParityB)?;
    cluster.fail_node(NodeId::Systematic(1))?;
    for node in [NodeId::Systematic(1), NodeId::ParityB] {
        let t = cluster.run_repair(node)?;
        println!("repaired {node} with {} symbols", t.total_symbols());
    }
    println!("repair traffic so far: {}", cluster.traffic());

    let out = dir.join("restored.bin");
    let report = cluster.run_reconstruct(&[NodeId::Systematic(3)], &out)?;
    println!("downloads per stripe {:?}", report.downloads_per_stripe);
    assert_eq!(std::fs::read(&out)?, input);

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
