//! Single-host cluster simulator.
//!
//! A cluster directory holds one chunk file per node plus `manifest.txt`.
//! Input bytes are expanded to trits, zero padded to whole stripes of `k·N`
//! symbols, and each stripe is encoded independently; a node's chunk is the
//! concatenation of its per-stripe contents. Failing a node renames its chunk
//! to `<name>.lost`. All mutations go through `&mut ClusterState` and are
//! persisted before returning.

pub mod chunk;
pub mod manifest;
pub mod trits;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use crate::code::{encode, CodeParams, NodeId};
use crate::error::{Error, Result};
use crate::gf3::{Gf3, Gf3Vector};
use crate::reconstruct::{can_tolerate, reconstruct_file, recover_node, AccessSet};
use crate::repair::RepairTranscript;

pub use chunk::ChunkFile;
pub use manifest::{ChunkEntry, ChunkStatus, Manifest};

pub const MANIFEST_NAME: &str = "manifest.txt";
pub const LOST_SUFFIX: &str = ".lost";

pub fn chunk_filename(node: NodeId) -> String {
    format!("{node}.chunk")
}

/// Per-stripe outcome of a data collection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconstructReport {
    pub bytes_written: usize,
    pub downloads_per_stripe: Vec<usize>,
}

impl ReconstructReport {
    pub fn total_downloaded(&self) -> usize {
        self.downloads_per_stripe.iter().sum()
    }
}

#[derive(Debug)]
pub struct ClusterState {
    dir: PathBuf,
    params: CodeParams,
    manifest: Manifest,
}

impl ClusterState {
    /// Encodes `input` into a fresh cluster under `dir`.
    pub fn init(k: usize, input: &[u8], dir: &Path) -> Result<Self> {
        let params = CodeParams::new(k)?;
        let stripe_len = params.file_size();
        let mut symbols = trits::bytes_to_trits(input);
        let stripes = symbols.len().div_ceil(stripe_len).max(1);
        symbols.resize(stripes * stripe_len, Gf3::ZERO);

        let mut per_node: BTreeMap<NodeId, Vec<Gf3>> = BTreeMap::new();
        for stripe in symbols.chunks(stripe_len) {
            for content in encode(&params, &Gf3Vector::from(stripe.to_vec()))? {
                per_node
                    .entry(content.node)
                    .or_default()
                    .extend(content.data.iter());
            }
        }

        fs::create_dir_all(dir)?;
        let mut chunks = Vec::with_capacity(k + 2);
        for (node, data) in &per_node {
            let filename = chunk_filename(*node);
            ChunkFile::from_symbols(k as u8, *node, data).write(&dir.join(&filename))?;
            chunks.push(ChunkEntry {
                node: *node,
                filename,
                status: ChunkStatus::Live,
            });
        }
        let manifest = Manifest {
            k,
            byte_length: input.len() as u64,
            stripes,
            traffic: 0,
            chunks,
        };
        let state = ClusterState {
            dir: dir.to_path_buf(),
            params,
            manifest,
        };
        state.save()?;
        Ok(state)
    }

    /// Loads an existing cluster and checks the roster against the files.
    pub fn open(dir: &Path) -> Result<Self> {
        let text = fs::read_to_string(dir.join(MANIFEST_NAME))?;
        let manifest: Manifest = text.parse()?;
        let params = CodeParams::new(manifest.k)?;
        for entry in &manifest.chunks {
            let present = dir.join(&entry.filename).exists();
            if present != (entry.status == ChunkStatus::Live) {
                return Err(Error::Manifest(format!(
                    "{} is marked {} but its file is {}",
                    entry.node,
                    entry.status,
                    if present { "present" } else { "missing" }
                )));
            }
        }
        Ok(ClusterState {
            dir: dir.to_path_buf(),
            params,
            manifest,
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn manifest(&self) -> &Manifest {
        &self.manifest
    }

    pub fn traffic(&self) -> u64 {
        self.manifest.traffic
    }

    pub fn failed_nodes(&self) -> BTreeSet<NodeId> {
        self.manifest.failed().collect()
    }

    fn save(&self) -> Result<()> {
        fs::write(self.dir.join(MANIFEST_NAME), self.manifest.to_string())?;
        Ok(())
    }

    fn entry(&self, node: NodeId) -> Result<&ChunkEntry> {
        self.manifest
            .entry(node)
            .ok_or_else(|| Error::UnknownNode(node.to_string()))
    }

    pub fn chunk_path(&self, node: NodeId) -> Result<PathBuf> {
        Ok(self.dir.join(&self.entry(node)?.filename))
    }

    /// Reads and validates a live chunk, split into stripes.
    pub fn read_stripes(&self, node: NodeId) -> Result<Vec<Gf3Vector>> {
        if self.entry(node)?.status != ChunkStatus::Live {
            return Err(Error::NodeUnavailable(node));
        }
        let path = self.chunk_path(node)?;
        let chunk = ChunkFile::read(&path)?;
        let corrupt = |reason: String| Error::CorruptChunk {
            path: path.display().to_string(),
            reason,
        };
        if chunk.node != node || usize::from(chunk.k) != self.params.k() {
            return Err(corrupt(format!(
                "header names {} with k={}",
                chunk.node, chunk.k
            )));
        }
        let expected = self.manifest.stripes * self.params.n();
        if chunk.payload.len() != expected {
            return Err(corrupt(format!(
                "payload has {} symbols, expected {expected}",
                chunk.payload.len()
            )));
        }
        chunk.symbols().chunks(self.params.n())
    }

    /// Live contents as one store per stripe.
    fn load_live(&self) -> Result<Vec<BTreeMap<NodeId, Gf3Vector>>> {
        let mut stripes = vec![BTreeMap::new(); self.manifest.stripes];
        for node in self.manifest.live().collect::<Vec<_>>() {
            for (store, data) in stripes.iter_mut().zip(self.read_stripes(node)?) {
                store.insert(node, data);
            }
        }
        Ok(stripes)
    }

    /// Marks `node` failed and renames its chunk to `<name>.lost`.
    pub fn fail_node(&mut self, node: NodeId) -> Result<()> {
        let entry = self.entry(node)?;
        if entry.status == ChunkStatus::Failed {
            return Err(Error::AlreadyFailed(node));
        }
        let path = self.dir.join(&entry.filename);
        let lost = self.dir.join(format!("{}{LOST_SUFFIX}", entry.filename));
        fs::rename(&path, &lost)?;
        self.manifest.entry_mut(node).expect("entry exists").status = ChunkStatus::Failed;
        self.save()
    }

    /// Restores a failed node stripe by stripe and meters the traffic.
    pub fn run_repair(&mut self, node: NodeId) -> Result<RepairTranscript> {
        if self.entry(node)?.status == ChunkStatus::Live {
            return Err(Error::NotFailed(node));
        }
        let failed = self.failed_nodes();
        if !can_tolerate(&failed) {
            let names: Vec<String> = failed.iter().map(NodeId::to_string).collect();
            return Err(Error::Intolerable(format!("{{{}}}", names.join(", "))));
        }
        let mut transcript = RepairTranscript::new(node);
        let mut restored = Vec::with_capacity(self.manifest.stripes * self.params.n());
        for store in self.load_live()? {
            let (content, t) = recover_node(&self.params, node, &failed, &store)?;
            restored.extend(content.data.iter());
            transcript.absorb(t)?;
        }

        let entry = self.entry(node)?.clone();
        ChunkFile::from_symbols(self.params.k() as u8, node, &restored)
            .write(&self.dir.join(&entry.filename))?;
        let lost = self.dir.join(format!("{}{LOST_SUFFIX}", entry.filename));
        if lost.exists() {
            fs::remove_file(lost)?;
        }
        let m = &mut self.manifest;
        m.entry_mut(node).expect("entry exists").status = ChunkStatus::Live;
        m.traffic += transcript.total_symbols() as u64;
        self.save()?;
        Ok(transcript)
    }

    /// Decodes the stored file without touching the nodes in `exclude` unless
    /// the access is rank deficient, in which case single symbols are drawn
    /// from the first live excluded node.
    pub fn run_reconstruct(&self, exclude: &[NodeId], output: &Path) -> Result<ReconstructReport> {
        for n in exclude {
            n.validate(self.params.k())?;
        }
        let live: BTreeSet<NodeId> = self.manifest.live().collect();
        let access = AccessSet::new(live.iter().copied().filter(|n| !exclude.contains(n)))?;
        let extra: Vec<NodeId> = live
            .iter()
            .copied()
            .filter(|n| exclude.contains(n))
            .take(1)
            .collect();

        let mut symbols = Vec::with_capacity(self.manifest.stripes * self.params.file_size());
        let mut downloads_per_stripe = Vec::with_capacity(self.manifest.stripes);
        for store in self.load_live()? {
            let r = reconstruct_file(&self.params, &access, &extra, &store)?;
            symbols.extend(r.file.iter());
            downloads_per_stripe.push(r.total_downloaded);
        }
        let byte_len = self.manifest.byte_length as usize;
        let bytes =
            trits::trits_to_bytes(&symbols, byte_len).ok_or_else(|| Error::CorruptChunk {
                path: self.dir.display().to_string(),
                reason: "decoded symbols do not form bytes".into(),
            })?;
        fs::write(output, &bytes)?;
        Ok(ReconstructReport {
            bytes_written: bytes.len(),
            downloads_per_stripe,
        })
    }
}
