//! Structured repair against the brute-force elimination decoder.

mod common;

use common::{generator, oracle_decode, random_file};
use hdsc::code::{encode, make_code, Without};
use hdsc::{repair_systematic, NodeId};
use rand::{rngs::StdRng, SeedableRng};

const FILES: usize = 100;

#[test]
fn structured_repair_matches_elimination() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for k in 1..=4 {
        let params = make_code(k).unwrap();
        for _ in 0..FILES {
            let file = random_file(&params, &mut rng);
            let nodes = encode(&params, &file).unwrap();
            for i in 1..=k {
                let lost = NodeId::Systematic(i);
                let (restored, transcript) =
                    repair_systematic(&params, i, &Without::new(&nodes, [lost])).unwrap();
                let downloads: Vec<_> = transcript
                    .downloads()
                    .iter()
                    .map(|d| (d.source, d.payload.clone()))
                    .collect();
                let decoded = oracle_decode(k, i, &downloads);
                assert_eq!(restored.data, decoded, "k={k} i={i}");
                assert_eq!(restored.data, nodes[i - 1].data);
            }
        }
    }
}

#[test]
fn oracle_columns_match_generators() {
    for k in 1..=5 {
        let params = make_code(k).unwrap();
        for j in 1..=k {
            let x = params.generator(j).unwrap();
            assert!((0..params.n()).all(|p| x.entry(p) == generator(j, k, p)));
        }
    }
}
