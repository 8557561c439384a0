//! Deterministic challenge derivation for the non-interactive mode.
//!
//! The transcript state is a 32-byte chain value seeded by the parameter
//! digest; absorbing a commitment root rehashes the chain. Challenges are
//! squeezed without disturbing the chain, under domain tags `0x02` (field
//! elements) and `0x03` (index ranges), with a monotone counter keeping
//! successive squeezes distinct.
//!
//! Field challenges reduce a `2 * byte_len`-byte draw mod p; the bias is
//! at most `p / 2^(16 * byte_len) <= 2^-8`-th of a trial, negligible at
//! the soundness scales reported. Index challenges reduce a full 8-byte
//! draw mod the range.

use crate::field::{FieldElement, PrimeField};
use crate::group::BlossomingSequence;
use crate::rim::Rim;
use sha2::{Digest, Sha256};

pub const CHALLENGE_TAG: u8 = 0x02;
pub const INDEX_TAG: u8 = 0x03;

/// Labels naming what a squeeze is for; bound into the hash input.
pub mod label {
    pub const RHO: u8 = b'R';
    pub const VERTEX: u8 = b'V';
    pub const SUBSET: u8 = b'J';
    pub const CUT: u8 = b'I';
}

#[derive(Debug, Clone)]
pub struct Transcript {
    state: [u8; 32],
    counter: u64,
}

impl Transcript {
    pub fn new(params_digest: [u8; 32]) -> Transcript {
        Transcript { state: params_digest, counter: 0 }
    }

    pub fn absorb_root(&mut self, root: &[u8; 32]) {
        let mut h = Sha256::new();
        h.update(self.state);
        h.update(root);
        self.state = h.finalize().into();
    }

    fn squeeze(&mut self, tag: u8, label: u8) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update([tag, label]);
        h.update(self.state);
        h.update(self.counter.to_le_bytes());
        self.counter += 1;
        h.finalize().into()
    }

    /// A field element from a `2 * byte_len`-byte draw reduced mod p.
    pub fn challenge_field(&mut self, field: &PrimeField, label: u8) -> FieldElement {
        let buf = self.squeeze(CHALLENGE_TAG, label);
        let width = 2 * field.byte_len();
        let mut wide = [0u8; 16];
        wide[..width].copy_from_slice(&buf[..width]);
        let v = u128::from_le_bytes(wide);
        FieldElement((v % field.modulus() as u128) as u64)
    }

    /// A uniform index below `range` from an 8-byte draw.
    pub fn challenge_index(&mut self, range: u64, label: u8) -> u64 {
        debug_assert!(range > 0);
        let buf = self.squeeze(INDEX_TAG, label);
        u64::from_le_bytes(buf[..8].try_into().unwrap()) % range
    }
}

/// Digest of a graph's full structure.
pub fn rim_digest(rim: &Rim) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"FLWRRIM1");
    h.update((rim.vertex_count() as u32).to_le_bytes());
    h.update((rim.arity() as u32).to_le_bytes());
    let (neighbor, pairing) = rim.tables();
    for &x in neighbor {
        h.update(x.to_le_bytes());
    }
    for &x in pairing {
        h.update(x.to_le_bytes());
    }
    h.finalize().into()
}

/// Digest of a blossoming sequence: every graph, subset, and isomorphism.
pub fn blossoming_digest(seq: &BlossomingSequence) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(b"FLWRBLS1");
    h.update((seq.round_count() as u32).to_le_bytes());
    h.update(rim_digest(&seq.base));
    for round in &seq.rounds {
        h.update([round.collection.order() as u8]);
        h.update(rim_digest(&round.graph));
        for subset in &round.collection.subsets {
            h.update((subset.len() as u32).to_le_bytes());
            for &v in subset {
                h.update(v.to_le_bytes());
            }
        }
        for iso in &round.collection.isos {
            for &v in iso {
                h.update(v.to_le_bytes());
            }
        }
    }
    h.finalize().into()
}
