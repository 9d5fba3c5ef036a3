//! Exhaustive failure patterns of size at most two.

use std::collections::BTreeSet;

use hdsc::code::{encode, make_code, Without};
use hdsc::reconstruct::{decodability, recover_failures};
use hdsc::{AccessSet, Error, Gf3, Gf3Vector, NodeId};

fn failure_sets(k: usize) -> Vec<BTreeSet<NodeId>> {
    let nodes = NodeId::all(k);
    let mut sets = vec![BTreeSet::new()];
    for (a, &x) in nodes.iter().enumerate() {
        sets.push([x].into());
        for &y in &nodes[a + 1..] {
            sets.push([x, y].into());
        }
    }
    sets
}

#[test]
fn recovery_succeeds_exactly_on_admissible_sets() {
    for k in 1..=6 {
        let params = make_code(k).unwrap();
        let file: Gf3Vector = (0..params.file_size())
            .map(|i| Gf3::from_i64((i * 5 + i / 3) as i64))
            .collect();
        let nodes = encode(&params, &file).unwrap();
        for failed in failure_sets(k) {
            let systematic = failed.iter().filter(|n| n.is_systematic()).count();
            let survivors = Without::new(&nodes, failed.iter().copied());
            let result = recover_failures(&params, &failed, &survivors);
            if systematic <= 1 {
                let restored = result.unwrap_or_else(|e| panic!("k={k} {failed:?}: {e}"));
                assert_eq!(restored.len(), failed.len());
                for (content, _) in restored {
                    let original = nodes.iter().find(|c| c.node == content.node).unwrap();
                    assert_eq!(content.data, original.data);
                }
            } else {
                assert!(
                    matches!(result, Err(Error::Intolerable(_))),
                    "k={k} {failed:?}"
                );
                let report = decodability(
                    &params,
                    &AccessSet::all_except(&params, &Vec::from_iter(failed)),
                )
                .unwrap();
                assert_eq!(report.deficiency, params.n() / 2);
                assert!(!report.decodable);
            }
        }
    }
}
