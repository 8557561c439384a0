//! SHA-256 Merkle trees over canonical edge order.
//!
//! Domain separation: leaves are hashed with a `0x00` prefix, internal
//! nodes with `0x01`. A level of odd width duplicates its last node.

use sha2::{Digest, Sha256};
use thiserror::Error;

pub type Hash = [u8; 32];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MerkleError {
    #[error("cannot commit to an empty leaf list")]
    EmptyLeaves,
    #[error("leaf index out of range")]
    IndexOutOfRange,
}

pub fn leaf_hash(bytes: &[u8]) -> Hash {
    let mut h = Sha256::new();
    h.update([0x00]);
    h.update(bytes);
    h.finalize().into()
}

fn node_hash(left: &Hash, right: &Hash) -> Hash {
    let mut h = Sha256::new();
    h.update([0x01]);
    h.update(left);
    h.update(right);
    h.finalize().into()
}

/// Root and leaf count; what the verifier keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MerkleCommitment {
    pub root: Hash,
    pub leaf_count: usize,
}

/// Full tree kept on the prover side for opening paths.
#[derive(Debug, Clone)]
pub struct MerkleTree {
    levels: Vec<Vec<Hash>>,
}

impl MerkleTree {
    pub fn build(leaves: &[Vec<u8>]) -> Result<MerkleTree, MerkleError> {
        if leaves.is_empty() {
            return Err(MerkleError::EmptyLeaves);
        }
        let mut levels = vec![leaves.iter().map(|l| leaf_hash(l)).collect::<Vec<_>>()];
        while levels.last().unwrap().len() > 1 {
            let prev = levels.last().unwrap();
            let mut next = Vec::with_capacity(prev.len().div_ceil(2));
            for pair in prev.chunks(2) {
                let right = if pair.len() == 2 { &pair[1] } else { &pair[0] };
                next.push(node_hash(&pair[0], right));
            }
            levels.push(next);
        }
        Ok(MerkleTree { levels })
    }

    pub fn root(&self) -> Hash {
        self.levels.last().unwrap()[0]
    }

    pub fn leaf_count(&self) -> usize {
        self.levels[0].len()
    }

    pub fn commitment(&self) -> MerkleCommitment {
        MerkleCommitment { root: self.root(), leaf_count: self.leaf_count() }
    }

    /// Sibling digests bottom-up; the duplicate node serves as its own
    /// sibling on odd levels.
    pub fn path(&self, index: usize) -> Result<Vec<Hash>, MerkleError> {
        if index >= self.leaf_count() {
            return Err(MerkleError::IndexOutOfRange);
        }
        let mut path = Vec::new();
        let mut idx = index;
        for level in &self.levels[..self.levels.len() - 1] {
            let sibling = if idx % 2 == 0 {
                *level.get(idx + 1).unwrap_or(&level[idx])
            } else {
                level[idx - 1]
            };
            path.push(sibling);
            idx /= 2;
        }
        Ok(path)
    }
}

/// Recomputes the root from a leaf and its path.
pub fn verify_path(
    commitment: &MerkleCommitment,
    index: usize,
    leaf_bytes: &[u8],
    path: &[Hash],
) -> bool {
    if index >= commitment.leaf_count {
        return false;
    }
    // the path must have exactly one sibling per level
    let mut expected_len = 0usize;
    let mut width = commitment.leaf_count;
    while width > 1 {
        expected_len += 1;
        width = width.div_ceil(2);
    }
    if path.len() != expected_len {
        return false;
    }
    let mut h = leaf_hash(leaf_bytes);
    let mut idx = index;
    for sibling in path {
        h = if idx % 2 == 0 { node_hash(&h, sibling) } else { node_hash(sibling, &h) };
        idx /= 2;
    }
    h == commitment.root
}
