//! On-disk chunk format.
//!
//! ```text
//! "HDSC" | version u8 = 1 | k u8 | role u8 | index u16 BE | len u64 BE | payload | checksum u32 BE
//! ```
//!
//! `role` is 0 for systematic, 1 for parity a, 2 for parity b; `index` is 0
//! for parities. The payload holds one symbol per byte and the checksum is the
//! wrapping sum of the payload bytes.

use std::fs;
use std::path::Path;

use crate::code::NodeId;
use crate::error::{Error, Result};
use crate::gf3::{Gf3, Gf3Vector};

pub const MAGIC: &[u8; 4] = b"HDSC";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 4 + 1 + 1 + 1 + 2 + 8;
pub const TRAILER_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChunkFile {
    pub k: u8,
    pub node: NodeId,
    pub payload: Vec<u8>,
}

pub fn checksum(payload: &[u8]) -> u32 {
    payload
        .iter()
        .fold(0u32, |acc, &b| acc.wrapping_add(u32::from(b)))
}

fn role_code(node: NodeId) -> Result<(u8, u16)> {
    match node {
        NodeId::Systematic(i) => {
            let index = u16::try_from(i)
                .map_err(|_| Error::InvalidArgument(format!("index {i} too large")))?;
            Ok((0, index))
        }
        NodeId::ParityA => Ok((1, 0)),
        NodeId::ParityB => Ok((2, 0)),
    }
}

impl ChunkFile {
    pub fn from_symbols(k: u8, node: NodeId, symbols: &[Gf3]) -> Self {
        ChunkFile {
            k,
            node,
            payload: symbols.iter().map(|s| s.value()).collect(),
        }
    }

    pub fn symbols(&self) -> Gf3Vector {
        Gf3Vector::from_values(&self.payload).expect("payload validated on decode")
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let (role, index) = role_code(self.node)?;
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len() + TRAILER_LEN);
        out.extend_from_slice(MAGIC);
        out.push(VERSION);
        out.push(self.k);
        out.push(role);
        out.extend_from_slice(&index.to_be_bytes());
        out.extend_from_slice(&(self.payload.len() as u64).to_be_bytes());
        out.extend_from_slice(&self.payload);
        out.extend_from_slice(&checksum(&self.payload).to_be_bytes());
        Ok(out)
    }

    /// Parses and validates a chunk. `origin` names the source in errors.
    pub fn from_bytes(bytes: &[u8], origin: &str) -> Result<Self> {
        let corrupt = |reason: &str| Error::CorruptChunk {
            path: origin.to_string(),
            reason: reason.to_string(),
        };
        if bytes.len() < HEADER_LEN + TRAILER_LEN {
            return Err(corrupt("truncated header"));
        }
        if &bytes[..4] != MAGIC {
            return Err(corrupt("bad magic"));
        }
        if bytes[4] != VERSION {
            return Err(corrupt("unsupported version"));
        }
        let k = bytes[5];
        let index = u16::from_be_bytes([bytes[7], bytes[8]]);
        let node = match (bytes[6], index) {
            (0, i) if i > 0 => NodeId::Systematic(usize::from(i)),
            (1, 0) => NodeId::ParityA,
            (2, 0) => NodeId::ParityB,
            _ => return Err(corrupt("bad role/index")),
        };
        let len = u64::from_be_bytes(bytes[9..17].try_into().expect("8 bytes"));
        let len = usize::try_from(len).map_err(|_| corrupt("payload length overflows"))?;
        if bytes.len() != HEADER_LEN + len + TRAILER_LEN {
            return Err(corrupt("length does not match payload"));
        }
        let payload = bytes[HEADER_LEN..HEADER_LEN + len].to_vec();
        let stored = u32::from_be_bytes(bytes[HEADER_LEN + len..].try_into().expect("4 bytes"));
        if stored != checksum(&payload) {
            return Err(corrupt("checksum mismatch"));
        }
        if payload.iter().any(|&b| b > 2) {
            return Err(corrupt("symbol outside {0,1,2}"));
        }
        Ok(ChunkFile { k, node, payload })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_bytes()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        Self::from_bytes(&bytes, &path.display().to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn golden_layout() {
        let chunk = ChunkFile {
            k: 1,
            node: NodeId::Systematic(1),
            payload: vec![2, 1],
        };
        let bytes = chunk.to_bytes().unwrap();
        #[rustfmt::skip]
        let expected = [
            b'H', b'D', b'S', b'C', 0x01, 0x01, 0x00, 0x00, 0x01,
            0, 0, 0, 0, 0, 0, 0, 2,
            2, 1,
            0, 0, 0, 3,
        ];
        assert_eq!(bytes, expected);

        let pb = ChunkFile {
            k: 3,
            node: NodeId::ParityB,
            payload: vec![0; 8],
        }
        .to_bytes()
        .unwrap();
        assert_eq!(&pb[5..9], &[3, 2, 0, 0]);
    }

    #[test]
    fn corruption_is_detected() {
        let bytes = ChunkFile {
            k: 2,
            node: NodeId::ParityA,
            payload: vec![1, 2, 0, 1],
        }
        .to_bytes()
        .unwrap();
        let mut flipped = bytes.clone();
        flipped[HEADER_LEN + 1] = 1;
        assert!(matches!(
            ChunkFile::from_bytes(&flipped, "x"),
            Err(Error::CorruptChunk { .. })
        ));
        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'X';
        assert!(ChunkFile::from_bytes(&bad_magic, "x").is_err());
        assert!(ChunkFile::from_bytes(&bytes[..bytes.len() - 1], "x").is_err());
        let mut bad_role = bytes.clone();
        bad_role[6] = 0;
        assert!(ChunkFile::from_bytes(&bad_role, "x").is_err());
        // symbol 3 with a fixed-up checksum
        let mut bad_symbol = bytes;
        bad_symbol[HEADER_LEN] = 3;
        let sum = checksum(&bad_symbol[HEADER_LEN..HEADER_LEN + 4]);
        let n = bad_symbol.len();
        bad_symbol[n - 4..].copy_from_slice(&sum.to_be_bytes());
        assert!(ChunkFile::from_bytes(&bad_symbol, "x").is_err());
    }

    proptest! {
        #[test]
        fn round_trip(k in 1u8..=16, idx in 0usize..=3, payload in proptest::collection::vec(0u8..3, 0..200)) {
            let node = match idx { 0 => NodeId::ParityA, 1 => NodeId::ParityB, i => NodeId::Systematic(i) };
            let chunk = ChunkFile { k, node, payload };
            let bytes = chunk.to_bytes().unwrap();
            let back = ChunkFile::from_bytes(&bytes, "mem").unwrap();
            prop_assert_eq!(back.to_bytes().unwrap(), bytes);
            prop_assert_eq!(back, chunk);
        }

        #[test]
        fn any_single_byte_flip_in_payload_is_caught(payload in proptest::collection::vec(0u8..3, 1..64), pos in any::<usize>(), delta in 1u8..3) {
            let bytes = ChunkFile { k: 4, node: NodeId::Systematic(2), payload }.to_bytes().unwrap();
            let mut bad = bytes.clone();
            let p = HEADER_LEN + pos % (bytes.len() - HEADER_LEN - TRAILER_LEN);
            bad[p] = (bad[p] + delta) % 3;
            prop_assert!(ChunkFile::from_bytes(&bad, "mem").is_err());
        }
    }
}
