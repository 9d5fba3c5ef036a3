//! Single-node repair with exact download accounting.
//!
//! Systematic repair of node `i` downloads `N/2` symbols from every other
//! node, `(k+1)·N/2` in total:
//!
//! * `V_iᵀ p_a` and `V_iᵀ p_b` from the parities,
//! * `V_iᵀ f_j` from each surviving systematic node `j`.
//!
//! `V_iᵀ f_j` cancels the interference of `f_j` in the parity-`a` equations
//! directly. In the parity-`b` equations the interference is `(X_j V_i)ᵀ f_j`,
//! and since `X_j` maps the column of tuple `t` onto the column of `t ⊕ e_j`
//! (also in `V_i`), the same download supplies it after a permutation. What is
//! left is `[V_i | X_i V_i]ᵀ f_i`, whose matrix is `H_N` up to column order,
//! so `f_i = N⁻¹ · H_N · z` where `z` scatters the residual into Hadamard
//! column positions.
//!
//! Parity repair downloads `X_1 · (other parity)` plus, per systematic node
//! `j ≥ 2`, the `N/2` entries where `X_1 X_j` is negative.

use std::fmt;

use crate::code::{
    repair_matrix, stacked_with, CodeParams, NodeContent, NodeId, NodeStore, RepairMatrixV,
};
use crate::error::{Error, Result};
use crate::gf3::{Gf3, Gf3Matrix, Gf3Vector};
use crate::hadamard::{fwht, ExponentTuple};
use crate::lattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Download {
    pub source: NodeId,
    pub payload: Gf3Vector,
}

impl Download {
    pub fn symbols(&self) -> usize {
        self.payload.len()
    }
}

/// Everything a newcomer downloaded while restoring `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairTranscript {
    target: NodeId,
    downloads: Vec<Download>,
}

impl RepairTranscript {
    pub fn new(target: NodeId) -> Self {
        RepairTranscript {
            target,
            downloads: Vec::new(),
        }
    }

    pub fn target(&self) -> NodeId {
        self.target
    }

    pub fn downloads(&self) -> &[Download] {
        &self.downloads
    }

    /// Records a download. A node never serves its own repair.
    pub fn record(&mut self, source: NodeId, payload: Gf3Vector) -> Result<()> {
        if source == self.target {
            return Err(Error::InvalidArgument(format!(
                "{source} cannot serve its own repair"
            )));
        }
        self.downloads.push(Download { source, payload });
        Ok(())
    }

    pub fn total_symbols(&self) -> usize {
        self.downloads.iter().map(Download::symbols).sum()
    }

    /// Symbols fetched from `source`.
    pub fn symbols_from(&self, source: NodeId) -> usize {
        self.downloads
            .iter()
            .filter(|d| d.source == source)
            .map(Download::symbols)
            .sum()
    }

    /// Folds another transcript for the same target in, concatenating the
    /// payloads of matching sources. Used to sum repairs across stripes.
    pub fn absorb(&mut self, other: RepairTranscript) -> Result<()> {
        if other.target != self.target {
            return Err(Error::InvalidArgument(format!(
                "cannot merge transcript for {} into {}",
                other.target, self.target
            )));
        }
        for d in other.downloads {
            match self.downloads.iter_mut().find(|e| e.source == d.source) {
                Some(existing) => existing.payload = existing.payload.concat(&d.payload),
                None => self.downloads.push(d),
            }
        }
        Ok(())
    }

    /// `source=<node> symbols=<count>` per download, then `total=<count>`.
    pub fn report_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .downloads
            .iter()
            .map(|d| format!("source={} symbols={}", d.source, d.symbols()))
            .collect();
        lines.push(format!("total={}", self.total_symbols()));
        lines
    }
}

impl fmt::Display for RepairTranscript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.report_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// The column correspondence `t ↔ t ⊕ e_j` on the tuples of `V_i`, `j ≠ i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterferencePairing {
    i: usize,
    j: usize,
    map: Vec<usize>,
}

impl InterferencePairing {
    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Column position paired with `position`.
    pub fn apply(&self, position: usize) -> usize {
        self.map[position]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn is_involution(&self) -> bool {
        self.map.iter().enumerate().all(|(p, &q)| self.map[q] == p)
    }
}

pub fn pairing(params: &CodeParams, i: usize, j: usize) -> Result<InterferencePairing> {
    params.check_systematic(i)?;
    params.check_systematic(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "pairing needs distinct nodes, got {i} twice"
        )));
    }
    let v = repair_matrix(params, i)?;
    pairing_for(&v, j)
}

fn pairing_for(v: &RepairMatrixV, j: usize) -> Result<InterferencePairing> {
    let map = v
        .tuples()
        .iter()
        .map(|t| {
            v.position(&t.toggled(j))
                .ok_or(Error::InternalRankError(NodeId::Systematic(v.for_node())))
        })
        .collect::<Result<_>>()?;
    Ok(InterferencePairing {
        i: v.for_node(),
        j,
        map,
    })
}

/// `V_iᵀ x`, via one Walsh-Hadamard transform.
fn project(x: &Gf3Vector, v: &RepairMatrixV) -> Gf3Vector {
    let mut h = x.as_slice().to_vec();
    fwht(&mut h);
    v.tuples().iter().map(|t| h[t.index()]).collect()
}

fn subtract_in_place(acc: &mut [Gf3], other: impl IntoIterator<Item = Gf3>) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a -= b;
    }
}

/// Restores systematic node `i` from `N/2` symbols of every other node.
pub fn repair_systematic<S: NodeStore + ?Sized>(
    params: &CodeParams,
    i: usize,
    survivors: &S,
) -> Result<(NodeContent, RepairTranscript)> {
    params.check_systematic(i)?;
    let target = NodeId::Systematic(i);
    let n = params.n();
    let v = repair_matrix(params, i)?;
    let mut transcript = RepairTranscript::new(target);

    let from_a = project(survivors.require(NodeId::ParityA)?, &v);
    let from_b = project(survivors.require(NodeId::ParityB)?, &v);
    transcript.record(NodeId::ParityA, from_a.clone())?;
    transcript.record(NodeId::ParityB, from_b.clone())?;

    // V_iᵀ f_i and (X_i V_i)ᵀ f_i once interference is stripped.
    let mut useful_a = from_a.into_inner();
    let mut useful_b = from_b.into_inner();
    for j in (1..=params.k()).filter(|&j| j != i) {
        let node = NodeId::Systematic(j);
        let proj = project(survivors.require(node)?, &v);
        let pair = pairing_for(&v, j)?;
        subtract_in_place(&mut useful_a, proj.iter().copied());
        subtract_in_place(&mut useful_b, (0..proj.len()).map(|t| proj[pair.apply(t)]));
        transcript.record(node, proj)?;
    }

    // Scatter into Hadamard column positions; every position must be hit once.
    let mut z = vec![Gf3::ZERO; n];
    let mut hit = vec![false; n];
    for (t, tuple) in v.tuples().iter().enumerate() {
        for (col, value) in [
            (tuple.index(), useful_a[t]),
            (tuple.toggled(i).index(), useful_b[t]),
        ] {
            if hit[col] {
                return Err(Error::InternalRankError(target));
            }
            hit[col] = true;
            z[col] = value;
        }
    }
    if hit.iter().any(|h| !h) {
        return Err(Error::InternalRankError(target));
    }
    fwht(&mut z);
    let n_inv = Gf3::from_i64(n as i64)
        .inv()
        .ok_or(Error::InternalRankError(target))?;
    let data: Gf3Vector = z.into_iter().map(|s| s * n_inv).collect();
    Ok((NodeContent { node: target, data }, transcript))
}

/// Restores a parity node from `X_1 ·` the other parity plus `N/2` symbols
/// from each systematic node `j ≥ 2`.
pub fn repair_parity<S: NodeStore + ?Sized>(
    params: &CodeParams,
    role: NodeId,
    survivors: &S,
) -> Result<(NodeContent, RepairTranscript)> {
    let other = match role {
        NodeId::ParityA => NodeId::ParityB,
        NodeId::ParityB => NodeId::ParityA,
        NodeId::Systematic(_) => {
            return Err(Error::InvalidArgument(format!(
                "{role} is not a parity node"
            )));
        }
    };
    let x1 = params.generator(1)?;
    let mut transcript = RepairTranscript::new(role);
    let mixed = x1.apply(survivors.require(other)?)?;
    transcript.record(other, mixed.clone())?;

    let mut data = mixed.into_inner();
    for j in 2..=params.k() {
        let node = NodeId::Systematic(j);
        let f = survivors.require(node)?;
        let xj = params.generator(j)?;
        // X_1 and X_j disagree on exactly N/2 positions.
        let positions = x1.differing_positions(xj)?;
        let patch: Gf3Vector = positions.iter().map(|&p| f[p]).collect();
        for (&p, &value) in positions.iter().zip(&patch) {
            // The download holds -c·f_j[p] where the lost parity needs +c·f_j[p].
            let coeff = match role {
                NodeId::ParityA => Gf3::ONE,
                _ => xj.entry(p),
            };
            data[p] += Gf3::TWO * coeff * value;
        }
        transcript.record(node, patch)?;
    }
    Ok((
        NodeContent {
            node: role,
            data: data.into(),
        },
        transcript,
    ))
}

/// One row of the interference rank table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankRow {
    pub j: usize,
    pub rank: usize,
    pub predicted: usize,
}

/// `rank([V_i | X_j V_i])` over GF(3) for every `j`, each checked against the
/// lattice prediction.
pub fn interference_rank_report(params: &CodeParams, i: usize) -> Result<Vec<RankRow>> {
    let v = repair_matrix(params, i)?;
    (1..=params.k())
        .map(|j| {
            let rank = stacked_with(&v, params.generator(j)?)?.rank();
            let predicted = lattice::predict_rank(i, j, params.k())?;
            if rank != predicted {
                return Err(Error::InternalRankError(NodeId::Systematic(i)));
            }
            Ok(RankRow { j, rank, predicted })
        })
        .collect()
}

/// Dense `[V_i | X_i V_i]`, the matrix of the final repair system.
pub fn final_system_matrix(params: &CodeParams, i: usize) -> Result<Gf3Matrix> {
    let v = repair_matrix(params, i)?;
    stacked_with(&v, params.generator(i)?)
}

/// Exponent tuple of every column of `[V_i | X_i V_i]`, in order.
pub fn final_system_tuples(params: &CodeParams, i: usize) -> Result<Vec<ExponentTuple>> {
    let v = repair_matrix(params, i)?;
    Ok(v.tuples()
        .iter()
        .cloned()
        .chain(v.tuples().iter().map(|t| t.toggled(i)))
        .collect())
}
