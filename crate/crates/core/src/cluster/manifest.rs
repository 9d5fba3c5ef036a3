//! Plain-text cluster manifest, one `key=value` per line:
//!
//! ```text
//! k=3
//! byte_length=10
//! stripes=1
//! traffic=0
//! chunk=systematic:1:s1.chunk:live
//! chunk=parityA:0:pa.chunk:live
//! chunk=parityB:0:pb.chunk:failed
//! ```

use std::fmt;
use std::str::FromStr;

use crate::code::NodeId;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChunkStatus {
    Live,
    Failed,
}

impl fmt::Display for ChunkStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChunkStatus::Live => "live",
            ChunkStatus::Failed => "failed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkEntry {
    pub node: NodeId,
    pub filename: String,
    pub status: ChunkStatus,
}

impl ChunkEntry {
    fn to_line(&self) -> String {
        let (role, index) = match self.node {
            NodeId::Systematic(i) => ("systematic", i),
            NodeId::ParityA => ("parityA", 0),
            NodeId::ParityB => ("parityB", 0),
        };
        format!("chunk={role}:{index}:{}:{}", self.filename, self.status)
    }

    fn parse(value: &str) -> Result<Self> {
        let bad = || Error::Manifest(format!("bad chunk line: {value}"));
        let parts: Vec<&str> = value.split(':').collect();
        let [role, index, filename, status] = parts.as_slice() else {
            return Err(bad());
        };
        let index: usize = index.parse().map_err(|_| bad())?;
        let node = match (*role, index) {
            ("systematic", i) if i > 0 => NodeId::Systematic(i),
            ("parityA", 0) => NodeId::ParityA,
            ("parityB", 0) => NodeId::ParityB,
            _ => return Err(bad()),
        };
        let status = match *status {
            "live" => ChunkStatus::Live,
            "failed" => ChunkStatus::Failed,
            _ => return Err(bad()),
        };
        if filename.is_empty() {
            return Err(bad());
        }
        Ok(ChunkEntry {
            node,
            filename: filename.to_string(),
            status,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifest {
    pub k: usize,
    pub byte_length: u64,
    pub stripes: usize,
    /// Cumulative symbols moved by repairs.
    pub traffic: u64,
    pub chunks: Vec<ChunkEntry>,
}

impl Manifest {
    pub fn entry(&self, node: NodeId) -> Option<&ChunkEntry> {
        self.chunks.iter().find(|c| c.node == node)
    }

    pub fn entry_mut(&mut self, node: NodeId) -> Option<&mut ChunkEntry> {
        self.chunks.iter_mut().find(|c| c.node == node)
    }

    pub fn failed(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.chunks
            .iter()
            .filter(|c| c.status == ChunkStatus::Failed)
            .map(|c| c.node)
    }

    pub fn live(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.chunks
            .iter()
            .filter(|c| c.status == ChunkStatus::Live)
            .map(|c| c.node)
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k={}", self.k)?;
        writeln!(f, "byte_length={}", self.byte_length)?;
        writeln!(f, "stripes={}", self.stripes)?;
        writeln!(f, "traffic={}", self.traffic)?;
        for c in &self.chunks {
            writeln!(f, "{}", c.to_line())?;
        }
        Ok(())
    }
}

impl FromStr for Manifest {
    type Err = Error;

    fn from_str(s: &str) -> Result<Manifest> {
        let (mut k, mut byte_length, mut stripes, mut traffic) = (None, None, None, None);
        let mut chunks = Vec::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Manifest(format!("no '=' in: {line}")))?;
            let num = |v: &str| {
                v.parse::<u64>()
                    .map_err(|_| Error::Manifest(format!("bad number in: {line}")))
            };
            match key {
                "k" => k = Some(num(value)? as usize),
                "byte_length" => byte_length = Some(num(value)?),
                "stripes" => stripes = Some(num(value)? as usize),
                "traffic" => traffic = Some(num(value)?),
                "chunk" => chunks.push(ChunkEntry::parse(value)?),
                other => return Err(Error::Manifest(format!("unknown key {other}"))),
            }
        }
        let missing = |name: &str| Error::Manifest(format!("missing {name}"));
        let manifest = Manifest {
            k: k.ok_or_else(|| missing("k"))?,
            byte_length: byte_length.ok_or_else(|| missing("byte_length"))?,
            stripes: stripes.ok_or_else(|| missing("stripes"))?,
            traffic: traffic.unwrap_or(0),
            chunks,
        };
        let mut expected = NodeId::all(manifest.k);
        let mut listed: Vec<NodeId> = manifest.chunks.iter().map(|c| c.node).collect();
        expected.sort();
        listed.sort();
        if expected != listed {
            return Err(Error::Manifest(format!(
                "roster must list exactly the {} chunks",
                manifest.k + 2
            )));
        }
        Ok(manifest)
    }
}
