//! The `(k+2, k)` code: `k` systematic nodes and two parities over GF(3).
//!
//! Parity `a` stores `Σ f_i` and parity `b` stores `Σ X_i f_i`, with
//! `N = 2^k` symbols per node. All coding matrices are diagonal, so the
//! transposes that appear in the parity definitions are dropped everywhere.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf3::{Gf3Matrix, Gf3Vector};
use crate::hadamard::{hadamard_column, ExponentTuple, SignDiagonal, MAX_K};

/// A storage node. Systematic indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeId {
    Systematic(usize),
    ParityA,
    ParityB,
}

impl NodeId {
    pub fn is_systematic(self) -> bool {
        matches!(self, NodeId::Systematic(_))
    }

    pub fn is_parity(self) -> bool {
        !self.is_systematic()
    }

    /// `s1..sk`, `pa`, `pb`.
    pub fn all(k: usize) -> Vec<NodeId> {
        (1..=k)
            .map(NodeId::Systematic)
            .chain([NodeId::ParityA, NodeId::ParityB])
            .collect()
    }

    /// Checks that a systematic index fits the code.
    pub fn validate(self, k: usize) -> Result<NodeId> {
        match self {
            NodeId::Systematic(i) if i == 0 || i > k => {
                Err(Error::IndexOutOfRange { index: i, max: k })
            }
            other => Ok(other),
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeId::Systematic(i) => write!(f, "s{i}"),
            NodeId::ParityA => f.write_str("pa"),
            NodeId::ParityB => f.write_str("pb"),
        }
    }
}

/// Parses `s<digits>`, `pa` or `pb`, case-insensitively.
impl FromStr for NodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<NodeId> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "pa" => Ok(NodeId::ParityA),
            "pb" => Ok(NodeId::ParityB),
            _ => lower
                .strip_prefix('s')
                .filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i > 0)
                .map(NodeId::Systematic)
                .ok_or_else(|| Error::UnknownNode(s.to_string())),
        }
    }
}

/// Code parameters: `k`, `N = 2^k` and the generators `X_1..X_k`.
///
/// `A_i = I` is never materialised; `B_i = X_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodeParams {
    k: usize,
    generators: Vec<SignDiagonal>,
}

impl CodeParams {
    /// Supports `1 <= k <= 16`.
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 || k > MAX_K {
            return Err(Error::UnsupportedK(k));
        }
        let generators = (1..=k)
            .map(|i| SignDiagonal::generator(i, k))
            .collect::<Result<_>>()?;
        Ok(CodeParams { k, generators })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Symbols per node.
    pub fn n(&self) -> usize {
        1 << self.k
    }

    /// File size `M = k·N` in symbols.
    pub fn file_size(&self) -> usize {
        self.k * self.n()
    }

    /// `X_i`, 1-based.
    pub fn generator(&self, i: usize) -> Result<&SignDiagonal> {
        self.check_systematic(i)?;
        Ok(&self.generators[i - 1])
    }

    pub fn generators(&self) -> &[SignDiagonal] {
        &self.generators
    }

    pub fn nodes(&self) -> Vec<NodeId> {
        NodeId::all(self.k)
    }

    pub(crate) fn check_systematic(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.k {
            Err(Error::IndexOutOfRange {
                index: i,
                max: self.k,
            })
        } else {
            Ok(())
        }
    }

    fn check_blocks(&self, blocks: &[Gf3Vector]) -> Result<()> {
        if blocks.len() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: blocks.len(),
            });
        }
        if let Some(b) = blocks.iter().find(|b| b.len() != self.n()) {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: b.len(),
            });
        }
        Ok(())
    }

    /// Parity `a`: `Σ f_i`.
    pub fn parity_a(&self, blocks: &[Gf3Vector]) -> Result<Gf3Vector> {
        self.check_blocks(blocks)?;
        blocks
            .iter()
            .try_fold(Gf3Vector::zeros(self.n()), |acc, b| acc.add(b))
    }

    /// Parity `b`: `Σ X_i f_i`.
    pub fn parity_b(&self, blocks: &[Gf3Vector]) -> Result<Gf3Vector> {
        self.check_blocks(blocks)?;
        blocks
            .iter()
            .zip(&self.generators)
            .try_fold(Gf3Vector::zeros(self.n()), |acc, (b, x)| {
                acc.add(&x.apply(b)?)
            })
    }

    /// Parity content for `role`, which must be a parity node.
    pub fn parity(&self, role: NodeId, blocks: &[Gf3Vector]) -> Result<Gf3Vector> {
        match role {
            NodeId::ParityA => self.parity_a(blocks),
            NodeId::ParityB => self.parity_b(blocks),
            NodeId::Systematic(_) => Err(Error::InvalidArgument(format!(
                "{role} is not a parity node"
            ))),
        }
    }
}

/// Shorthand for [`CodeParams::new`].
pub fn make_code(k: usize) -> Result<CodeParams> {
    CodeParams::new(k)
}

/// What one node stores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeContent {
    pub node: NodeId,
    pub data: Gf3Vector,
}

/// Splits a `k·N` symbol file into blocks and encodes it. Returns `k + 2`
/// contents in node order `s1..sk, pa, pb`.
pub fn encode(params: &CodeParams, file: &Gf3Vector) -> Result<Vec<NodeContent>> {
    if file.len() != params.file_size() {
        return Err(Error::DimensionMismatch {
            expected: params.file_size(),
            found: file.len(),
        });
    }
    let blocks = file.chunks(params.n())?;
    let pa = params.parity_a(&blocks)?;
    let pb = params.parity_b(&blocks)?;
    let mut out: Vec<NodeContent> = blocks
        .into_iter()
        .enumerate()
        .map(|(i, data)| NodeContent {
            node: NodeId::Systematic(i + 1),
            data,
        })
        .collect();
    out.push(NodeContent {
        node: NodeId::ParityA,
        data: pa,
    });
    out.push(NodeContent {
        node: NodeId::ParityB,
        data: pb,
    });
    Ok(out)
}

/// Read access to surviving node contents.
pub trait NodeStore {
    fn content(&self, node: NodeId) -> Option<&Gf3Vector>;

    fn require(&self, node: NodeId) -> Result<&Gf3Vector> {
        self.content(node).ok_or(Error::NodeUnavailable(node))
    }
}

impl NodeStore for [NodeContent] {
    fn content(&self, node: NodeId) -> Option<&Gf3Vector> {
        self.iter().find(|c| c.node == node).map(|c| &c.data)
    }
}

impl NodeStore for Vec<NodeContent> {
    fn content(&self, node: NodeId) -> Option<&Gf3Vector> {
        self.as_slice().content(node)
    }
}

impl NodeStore for BTreeMap<NodeId, Gf3Vector> {
    fn content(&self, node: NodeId) -> Option<&Gf3Vector> {
        self.get(&node)
    }
}

/// A store that hides some nodes of another.
pub struct Without<'a, S: NodeStore + ?Sized> {
    inner: &'a S,
    hidden: Vec<NodeId>,
}

impl<'a, S: NodeStore + ?Sized> Without<'a, S> {
    pub fn new(inner: &'a S, hidden: impl IntoIterator<Item = NodeId>) -> Self {
        Without {
            inner,
            hidden: hidden.into_iter().collect(),
        }
    }
}

impl<S: NodeStore + ?Sized> NodeStore for Without<'_, S> {
    fn content(&self, node: NodeId) -> Option<&Gf3Vector> {
        if self.hidden.contains(&node) {
            None
        } else {
            self.inner.content(node)
        }
    }
}

/// Repair matrix `V_i`: the `N/2` Hadamard columns whose exponent tuple has
/// `x_i = 0`, kept as tuples in column order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepairMatrixV {
    for_node: usize,
    tuples: Vec<ExponentTuple>,
}

impl RepairMatrixV {
    pub fn for_node(&self) -> usize {
        self.for_node
    }

    pub fn tuples(&self) -> &[ExponentTuple] {
        &self.tuples
    }

    pub fn width(&self) -> usize {
        self.tuples.len()
    }

    /// Position of `tuple` among the columns, if present.
    pub fn position(&self, tuple: &ExponentTuple) -> Option<usize> {
        self.tuples.binary_search(tuple).ok()
    }

    /// Dense `N × N/2` form.
    pub fn to_matrix(&self) -> Result<Gf3Matrix> {
        let cols = self
            .tuples
            .iter()
            .map(hadamard_column)
            .collect::<Result<Vec<_>>>()?;
        Gf3Matrix::from_columns(&cols)
    }
}

pub fn repair_matrix(params: &CodeParams, i: usize) -> Result<RepairMatrixV> {
    params.check_systematic(i)?;
    let tuples = ExponentTuple::all(params.k())
        .filter(|t| t.get(i) == 0)
        .collect();
    Ok(RepairMatrixV {
        for_node: i,
        tuples,
    })
}

/// Dense `[V | D·V]` for a sign diagonal `D`.
pub fn stacked_with(v: &RepairMatrixV, d: &SignDiagonal) -> Result<Gf3Matrix> {
    let dense = v.to_matrix()?;
    let shifted = (0..dense.cols())
        .map(|c| d.apply(&dense.column(c)))
        .collect::<Result<Vec<_>>>()?;
    dense.hstack(&Gf3Matrix::from_columns(&shifted)?)
}

/// Repair bandwidth `γ_i = N + Σ_{j≠i} rank([V_i | X_j V_i])`, with the
/// ranks computed over GF(3).
pub fn gamma(params: &CodeParams, i: usize, v: &RepairMatrixV) -> Result<usize> {
    params.check_systematic(i)?;
    if v.for_node() != i {
        return Err(Error::InvalidArgument(format!(
            "repair matrix is for node {}, not {i}",
            v.for_node()
        )));
    }
    let mut total = params.n();
    for j in (1..=params.k()).filter(|&j| j != i) {
        total += stacked_with(v, params.generator(j)?)?.rank();
    }
    Ok(total)
}
