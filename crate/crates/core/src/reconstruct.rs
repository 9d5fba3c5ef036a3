//! Data collection, decodability and multi-failure recovery.
//!
//! Every coding block is diagonal, so the `kN × kN` access matrix decouples
//! into `N` independent `rows × k` systems, one per symbol position `p`:
//! systematic node `s` contributes `e_s`, parity `a` the all-ones row, and
//! parity `b` the row `(X_1[p], …, X_k[p])`. Ranks add across positions.
//! [`access_matrix`] builds the dense form for cross-checking.

use std::collections::BTreeSet;
use std::fmt;

use crate::code::{CodeParams, NodeContent, NodeId, NodeStore};
use crate::error::{Error, Result};
use crate::gf3::{EchelonBasis, Gf3, Gf3Matrix, Gf3Vector};
use crate::repair::{repair_parity, repair_systematic, RepairTranscript};

/// The nodes a data collector connects to.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AccessSet {
    nodes: BTreeSet<NodeId>,
}

impl AccessSet {
    /// Duplicates are rejected.
    pub fn new(nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for n in nodes {
            if !set.insert(n) {
                return Err(Error::InvalidArgument(format!("{n} listed twice")));
            }
        }
        Ok(AccessSet { nodes: set })
    }

    /// Every node except `excluded`.
    pub fn all_except(params: &CodeParams, excluded: &[NodeId]) -> Self {
        AccessSet {
            nodes: params
                .nodes()
                .into_iter()
                .filter(|n| !excluded.contains(n))
                .collect(),
        }
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes.iter().copied()
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.nodes.contains(&node)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn validate(&self, params: &CodeParams) -> Result<()> {
        for n in &self.nodes {
            n.validate(params.k())?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodabilityReport {
    pub system_rank: usize,
    pub deficiency: usize,
    pub decodable: bool,
}

impl fmt::Display for DecodabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "rank={} deficiency={} decodable={}",
            self.system_rank, self.deficiency, self.decodable
        )
    }
}

/// Coefficients of `node`'s symbol at position `p` over `(f_1[p], …, f_k[p])`.
fn position_row(params: &CodeParams, node: NodeId, p: usize) -> Vec<Gf3> {
    let k = params.k();
    match node {
        NodeId::Systematic(s) => (1..=k)
            .map(|j| if j == s { Gf3::ONE } else { Gf3::ZERO })
            .collect(),
        NodeId::ParityA => vec![Gf3::ONE; k],
        NodeId::ParityB => params.generators().iter().map(|x| x.entry(p)).collect(),
    }
}

/// GF(3) rank of the stacked access matrix and its shortfall from `kN`.
pub fn decodability(params: &CodeParams, access: &AccessSet) -> Result<DecodabilityReport> {
    access.validate(params)?;
    let mut system_rank = 0;
    for p in 0..params.n() {
        let mut basis = EchelonBasis::new(params.k());
        for node in access.nodes() {
            basis.insert(&position_row(params, node, p), Gf3::ZERO)?;
        }
        system_rank += basis.rank();
    }
    let deficiency = params.file_size() - system_rank;
    Ok(DecodabilityReport {
        system_rank,
        deficiency,
        decodable: deficiency == 0,
    })
}

/// Dense `(|access|·N) × kN` access matrix: identity blocks for systematic
/// nodes, `[I … I]` for parity `a`, `[X_1 … X_k]` for parity `b`.
pub fn access_matrix(params: &CodeParams, access: &AccessSet) -> Result<Gf3Matrix> {
    access.validate(params)?;
    let n = params.n();
    let nodes: Vec<NodeId> = access.nodes().collect();
    Ok(Gf3Matrix::from_fn(
        nodes.len() * n,
        params.file_size(),
        |r, c| {
            let (node, p) = (nodes[r / n], r % n);
            let (block, q) = (c / n + 1, c % n);
            if p != q {
                return Gf3::ZERO;
            }
            match node {
                NodeId::Systematic(s) if s == block => Gf3::ONE,
                NodeId::Systematic(_) => Gf3::ZERO,
                NodeId::ParityA => Gf3::ONE,
                NodeId::ParityB => params.generators()[block - 1].entry(p),
            }
        },
    ))
}

/// Any single failure, or a pair holding at most one systematic node.
/// The empty set is trivially tolerated.
pub fn can_tolerate(failed: &BTreeSet<NodeId>) -> bool {
    let systematic = failed.iter().filter(|n| n.is_systematic()).count();
    match failed.len() {
        0 | 1 => true,
        2 => systematic <= 1,
        _ => false,
    }
}

fn describe(failed: &BTreeSet<NodeId>) -> String {
    let names: Vec<String> = failed.iter().map(NodeId::to_string).collect();
    format!("{{{}}}", names.join(", "))
}

/// Restores every node in `failed`, which must satisfy [`can_tolerate`].
///
/// A single failure goes through the bandwidth-efficient repair. For a
/// systematic-plus-parity pair the systematic block is decoded from the
/// surviving parity first and the lost parity is then re-encoded.
pub fn recover_failures<S: NodeStore + ?Sized>(
    params: &CodeParams,
    failed: &BTreeSet<NodeId>,
    survivors: &S,
) -> Result<Vec<(NodeContent, RepairTranscript)>> {
    for n in failed {
        n.validate(params.k())?;
    }
    if !can_tolerate(failed) {
        return Err(Error::Intolerable(describe(failed)));
    }
    let nodes: Vec<NodeId> = failed.iter().copied().collect();
    match nodes.as_slice() {
        [] => Ok(Vec::new()),
        [NodeId::Systematic(i)] => Ok(vec![repair_systematic(params, *i, survivors)?]),
        [parity] => Ok(vec![repair_parity(params, *parity, survivors)?]),
        [NodeId::Systematic(i), parity] => {
            let (block, t1) = decode_from_parity(params, *i, parity_other(*parity), survivors)?;
            let (restored, t2) = reencode_parity(params, *parity, Some(&block), survivors)?;
            Ok(vec![(block, t1), (restored, t2)])
        }
        [NodeId::ParityA, NodeId::ParityB] => {
            let a = reencode_parity(params, NodeId::ParityA, None, survivors)?;
            let b = reencode_parity(params, NodeId::ParityB, None, survivors)?;
            Ok(vec![a, b])
        }
        _ => Err(Error::Intolerable(describe(failed))),
    }
}

/// Restores one node of a tolerated failure set, leaving the other failed
/// node (if any) untouched.
///
/// With a single failure this is the bandwidth-efficient repair. With two
/// failures the newcomer fetches whole blocks: the surviving parity and the
/// `k - 1` surviving systematic blocks, or all `k` systematic blocks when both
/// parities are gone.
pub fn recover_node<S: NodeStore + ?Sized>(
    params: &CodeParams,
    target: NodeId,
    failed: &BTreeSet<NodeId>,
    survivors: &S,
) -> Result<(NodeContent, RepairTranscript)> {
    target.validate(params.k())?;
    if !failed.contains(&target) || !can_tolerate(failed) {
        return Err(Error::Intolerable(describe(failed)));
    }
    let other = failed.iter().copied().find(|&n| n != target);
    match (target, other) {
        (NodeId::Systematic(i), None) => repair_systematic(params, i, survivors),
        (parity, None) => repair_parity(params, parity, survivors),
        (NodeId::Systematic(i), Some(lost_parity)) => {
            decode_from_parity(params, i, parity_other(lost_parity), survivors)
        }
        (parity, Some(NodeId::Systematic(i))) => {
            let (block, fetched) = decode_from_parity(params, i, parity_other(parity), survivors)?;
            let mut transcript = RepairTranscript::new(parity);
            for d in fetched.downloads() {
                transcript.record(d.source, d.payload.clone())?;
            }
            let mut blocks = Vec::with_capacity(params.k());
            for j in 1..=params.k() {
                let node = NodeId::Systematic(j);
                blocks.push(if j == i {
                    block.data.clone()
                } else {
                    survivors.require(node)?.clone()
                });
            }
            let data = params.parity(parity, &blocks)?;
            Ok((NodeContent { node: parity, data }, transcript))
        }
        (parity, Some(_)) => reencode_parity(params, parity, None, survivors),
    }
}

fn parity_other(parity: NodeId) -> NodeId {
    match parity {
        NodeId::ParityA => NodeId::ParityB,
        _ => NodeId::ParityA,
    }
}

/// `f_i` from one full parity and the other systematic blocks.
pub fn decode_from_parity<S: NodeStore + ?Sized>(
    params: &CodeParams,
    i: usize,
    parity: NodeId,
    survivors: &S,
) -> Result<(NodeContent, RepairTranscript)> {
    params.check_systematic(i)?;
    if parity.is_systematic() {
        return Err(Error::InvalidArgument(format!(
            "{parity} is not a parity node"
        )));
    }
    let target = NodeId::Systematic(i);
    let mut transcript = RepairTranscript::new(target);
    let mut residual = survivors.require(parity)?.clone();
    transcript.record(parity, residual.clone())?;
    for j in (1..=params.k()).filter(|&j| j != i) {
        let node = NodeId::Systematic(j);
        let f = survivors.require(node)?;
        let term = match parity {
            NodeId::ParityB => params.generator(j)?.apply(f)?,
            _ => f.clone(),
        };
        residual = residual.sub(&term)?;
        transcript.record(node, f.clone())?;
    }
    let data = match parity {
        // X_i is its own inverse.
        NodeId::ParityB => params.generator(i)?.apply(&residual)?,
        _ => residual,
    };
    Ok((NodeContent { node: target, data }, transcript))
}

/// Re-encodes a parity from all systematic blocks; `fresh` supplies a block
/// that is not in `survivors` (a just-restored node).
fn reencode_parity<S: NodeStore + ?Sized>(
    params: &CodeParams,
    parity: NodeId,
    fresh: Option<&NodeContent>,
    survivors: &S,
) -> Result<(NodeContent, RepairTranscript)> {
    let mut transcript = RepairTranscript::new(parity);
    let mut blocks = Vec::with_capacity(params.k());
    for j in 1..=params.k() {
        let node = NodeId::Systematic(j);
        let block = match fresh {
            Some(c) if c.node == node => &c.data,
            _ => survivors.require(node)?,
        };
        transcript.record(node, block.clone())?;
        blocks.push(block.clone());
    }
    let data = params.parity(parity, &blocks)?;
    Ok((NodeContent { node: parity, data }, transcript))
}

/// A decoded file and the number of symbols fetched to decode it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reconstruction {
    pub file: Gf3Vector,
    pub block_downloads: Vec<NodeId>,
    pub extra_symbols: usize,
    pub total_downloaded: usize,
}

/// Decodes the whole file.
///
/// Accessed nodes are visited systematic first, then `pa`, then `pb`; a
/// node's block is fetched only if it raises the system rank. If rank `kN` is
/// still short, single symbols are fetched from the extra sources in order,
/// position by position, keeping only those that raise the rank.
pub fn reconstruct_file<S: NodeStore + ?Sized>(
    params: &CodeParams,
    access: &AccessSet,
    extra_source_order: &[NodeId],
    store: &S,
) -> Result<Reconstruction> {
    access.validate(params)?;
    let (n, k) = (params.n(), params.k());
    let mut systems: Vec<EchelonBasis> = (0..n).map(|_| EchelonBasis::new(k)).collect();
    let mut rank = 0;
    let mut block_downloads = Vec::new();

    for node in access.nodes() {
        let grows = (0..n).any(|p| systems[p].would_grow(&position_row(params, node, p)));
        if !grows {
            continue;
        }
        let data = store.require(node)?;
        for (p, basis) in systems.iter_mut().enumerate() {
            rank += usize::from(basis.insert(&position_row(params, node, p), data[p])?);
        }
        block_downloads.push(node);
    }

    let mut extra_symbols = 0;
    for &node in extra_source_order {
        if rank == params.file_size() {
            break;
        }
        node.validate(k)?;
        if access.contains(node) {
            continue;
        }
        let Some(data) = store.content(node) else {
            continue;
        };
        for (p, basis) in systems.iter_mut().enumerate() {
            if basis.insert(&position_row(params, node, p), data[p])? {
                rank += 1;
                extra_symbols += 1;
            }
        }
    }

    if rank < params.file_size() {
        return Err(Error::InsufficientAccess {
            rank,
            required: params.file_size(),
        });
    }
    let per_position = systems
        .iter()
        .map(EchelonBasis::solve)
        .collect::<Result<Vec<_>>>()?;
    let file: Gf3Vector = (0..k)
        .flat_map(|j| per_position.iter().map(move |x| x[j]))
        .collect();
    Ok(Reconstruction {
        file,
        total_downloaded: block_downloads.len() * n + extra_symbols,
        block_downloads,
        extra_symbols,
    })
}
