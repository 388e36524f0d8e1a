//! Private codebook of inner jamming sequences.
//!
//! Each knowledge-base payload is hashed with SHA-256; the digest keys a
//! ChaCha20 stream whose words are sliced into 2-bit labels (32 labels per
//! `u64`, least significant pair first). Alice and Bob rebuild the same
//! codebook from the same knowledge base and only exchange an index.

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::constellation::{SymbolLabel, SymbolSeq};
use crate::error::{Error, Result};
use crate::rng::{CounterRng, STREAM_INDEX};
use crate::scalar::Scalar;

/// Items shared by Alice and Bob, kept in lexicographic id order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    items: BTreeMap<String, Vec<u8>>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, payload: Vec<u8>) -> Result<()> {
        let id = id.into();
        if self.items.contains_key(&id) {
            return Err(Error::DuplicateId(id));
        }
        self.items.insert(id, payload);
        Ok(())
    }

    pub fn from_items<I, S>(items: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<u8>)>,
        S: Into<String>,
    {
        let mut kb = Self::new();
        for (id, payload) in items {
            kb.insert(id, payload)?;
        }
        Ok(kb)
    }

    /// One item per regular file; id is the file name.
    pub fn from_dir(dir: &Path) -> Result<Self> {
        let io = |source| Error::Io {
            path: dir.to_path_buf(),
            source,
        };
        let mut kb = Self::new();
        for entry in std::fs::read_dir(dir).map_err(io)? {
            let entry = entry.map_err(io)?;
            if !entry.file_type().map_err(io)?.is_file() {
                continue;
            }
            let path = entry.path();
            let payload = std::fs::read(&path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            kb.insert(entry.file_name().to_string_lossy().into_owned(), payload)?;
        }
        Ok(kb)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[u8])> {
        self.items.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// SHA-256 over length-prefixed `(id, payload)` pairs in canonical order.
    pub fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        for (id, payload) in &self.items {
            h.update((id.len() as u64).to_le_bytes());
            h.update(id.as_bytes());
            h.update((payload.len() as u64).to_le_bytes());
            h.update(payload);
        }
        h.finalize().into()
    }
}

/// Expands a payload into `len` inner 4-QAM labels.
pub fn derive_inner_sequence<T: Scalar>(payload: &[u8], len: usize) -> Result<SymbolSeq<T>> {
    if payload.is_empty() {
        return Err(Error::EmptyPayload);
    }
    if len == 0 {
        return Err(Error::InvalidParameter(
            "sequence length must be ≥ 1".into(),
        ));
    }
    let key: [u8; 32] = Sha256::digest(payload).into();
    let mut rng = CounterRng::keyed(key);
    let mut labels = Vec::with_capacity(len);
    while labels.len() < len {
        let word = rng.next_u64();
        let take = (len - labels.len()).min(32);
        labels.extend((0..take).map(|k| SymbolLabel::from_low_bits((word >> (2 * k)) as u8)));
    }
    Ok(SymbolSeq::from_labels(labels))
}

/// Index into a codebook.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CodewordIndex(usize);

impl CodewordIndex {
    pub fn value(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for CodewordIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Codebook<T> {
    sequence_len: usize,
    kb_digest: [u8; 32],
    entries: Vec<SymbolSeq<T>>,
}

impl<T: Scalar> Codebook<T> {
    /// Entry `i` is derived from the `i`-th item in id order.
    pub fn build(kb: &KnowledgeBase, sequence_len: usize) -> Result<Self> {
        if kb.is_empty() {
            return Err(Error::EmptyKnowledgeBase);
        }
        let entries = kb
            .iter()
            .map(|(_, payload)| derive_inner_sequence(payload, sequence_len))
            .collect::<Result<Vec<_>>>()?;
        Ok(Codebook {
            sequence_len,
            kb_digest: kb.digest(),
            entries,
        })
    }

    pub fn sequence_len(&self) -> usize {
        self.sequence_len
    }

    pub fn kb_digest(&self) -> [u8; 32] {
        self.kb_digest
    }

    pub fn kb_digest_hex(&self) -> String {
        self.kb_digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn index(&self, i: usize) -> Result<CodewordIndex> {
        if i < self.entries.len() {
            Ok(CodewordIndex(i))
        } else {
            Err(Error::InvalidParameter(format!(
                "codeword index {i} out of range 0..{}",
                self.entries.len()
            )))
        }
    }

    pub fn lookup(&self, i: CodewordIndex) -> &SymbolSeq<T> {
        &self.entries[i.0]
    }

    /// Uniform index, deterministic in `seed`.
    pub fn pick_index(&self, seed: u64) -> CodewordIndex {
        let mut rng = CounterRng::at(seed, STREAM_INDEX, 0, 2);
        CodewordIndex(rng.below(self.entries.len() as u64) as usize)
    }
}
