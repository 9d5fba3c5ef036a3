//! A `(k+2, k)` storage code over GF(3) built from Hadamard designs.
//!
//! A file of `k·N` symbols (`N = 2^k`) is split into `k` systematic blocks
//! `f_1..f_k`. Two parity nodes store `a = Σ f_i` and `b = Σ X_i f_i`, where
//! the `X_i` are the `±1` generator diagonals of the Sylvester–Hadamard
//! matrix. A lost systematic node is rebuilt from `(k+1)·N/2` symbols
//! instead of the `k·N` a plain MDS repair would fetch.
//!
//! * [`gf3`]: field, vectors, matrices, incremental elimination.
//! * [`hadamard`]: generator diagonals, exponent tuples, `H_N`, FWHT.
//! * [`lattice`]: the lattice picture of interference alignment.
//! * [`code`]: parameters, encoding, repair matrices.
//! * [`repair`]: single-node repair with download transcripts.
//! * [`reconstruct`]: data collection and double-failure recovery.
//! * [`cluster`]: an on-disk cluster simulator.
//! * [`cli`]: the `hdsc` command line.

pub mod cli;
pub mod cluster;
pub mod code;
pub mod error;
pub mod gf3;
pub mod hadamard;
pub mod lattice;
pub mod reconstruct;
pub mod repair;

pub use code::{encode, make_code, CodeParams, NodeContent, NodeId, NodeStore};
pub use error::{Error, Result};
pub use gf3::{Gf3, Gf3Matrix, Gf3Vector};
pub use reconstruct::{can_tolerate, reconstruct_file, recover_failures, AccessSet};
pub use repair::{repair_parity, repair_systematic, RepairTranscript};
