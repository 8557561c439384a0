//! The proof byte format.
//!
//! Little-endian throughout:
//!
//! ```text
//! "FLWR" | version u8 = 1 | modulus: u8 len, len bytes
//! n, k, R, L, t: u32 each | m_r: u8 x R
//! input root: 32 bytes | R round roots: 32 bytes each
//! final local view: n field elements (canonical bytes)
//! openings, each: leaf index u32 | value bytes | path length u8 | path digests
//! ```
//!
//! The opening count is implied by the parameters; the verifier knows how
//! many to consume and rejects trailing bytes.

use crate::field::FieldElement;
use crate::merkle::Hash;
use thiserror::Error;

pub const MAGIC: &[u8; 4] = b"FLWR";
pub const VERSION: u8 = 1;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WireError {
    #[error("malformed proof: {0}")]
    Malformed(&'static str),
}

/// One opened leaf with its authentication path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Opening {
    pub leaf_index: u32,
    pub value: FieldElement,
    pub path: Vec<Hash>,
}

/// The full non-interactive transcript.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proof {
    pub modulus: u64,
    pub n: u32,
    pub k: u32,
    pub rounds: u32,
    pub reps: u32,
    pub edges_per_check: u32,
    /// Cut order per round.
    pub orders: Vec<u8>,
    pub input_root: Hash,
    pub roots: Vec<Hash>,
    pub final_view: Vec<FieldElement>,
    pub openings: Vec<Opening>,
}

fn modulus_byte_len(modulus: u64) -> usize {
    let bits = 64 - (modulus - 1).leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

pub fn serialize_proof(p: &Proof) -> Vec<u8> {
    let byte_len = modulus_byte_len(p.modulus);
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(byte_len as u8);
    out.extend_from_slice(&p.modulus.to_le_bytes()[..byte_len]);
    for v in [p.n, p.k, p.rounds, p.reps, p.edges_per_check] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&p.orders);
    out.extend_from_slice(&p.input_root);
    for r in &p.roots {
        out.extend_from_slice(r);
    }
    for v in &p.final_view {
        out.extend_from_slice(&v.0.to_le_bytes()[..byte_len]);
    }
    for o in &p.openings {
        out.extend_from_slice(&o.leaf_index.to_le_bytes());
        out.extend_from_slice(&o.value.0.to_le_bytes()[..byte_len]);
        out.push(o.path.len() as u8);
        for h in &o.path {
            out.extend_from_slice(h);
        }
    }
    out
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], WireError> {
        if self.pos + n > self.data.len() {
            return Err(WireError::Malformed("truncated"));
        }
        let s = &self.data[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8, WireError> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32, WireError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn hash(&mut self) -> Result<Hash, WireError> {
        Ok(self.take(32)?.try_into().unwrap())
    }

    fn field_value(&mut self, byte_len: usize, modulus: u64) -> Result<FieldElement, WireError> {
        let mut buf = [0u8; 8];
        buf[..byte_len].copy_from_slice(self.take(byte_len)?);
        let v = u64::from_le_bytes(buf);
        if v >= modulus {
            return Err(WireError::Malformed("field value out of range"));
        }
        Ok(FieldElement(v))
    }
}

pub fn deserialize_proof(bytes: &[u8]) -> Result<Proof, WireError> {
    let mut c = Cursor { data: bytes, pos: 0 };
    if c.take(4)? != MAGIC {
        return Err(WireError::Malformed("bad magic"));
    }
    if c.u8()? != VERSION {
        return Err(WireError::Malformed("unsupported version"));
    }
    let mlen = c.u8()? as usize;
    if mlen == 0 || mlen > 8 {
        return Err(WireError::Malformed("bad modulus length"));
    }
    let mut mbuf = [0u8; 8];
    mbuf[..mlen].copy_from_slice(c.take(mlen)?);
    let modulus = u64::from_le_bytes(mbuf);
    if modulus < 3 || modulus_byte_len(modulus) != mlen {
        return Err(WireError::Malformed("non-minimal modulus encoding"));
    }
    let n = c.u32()?;
    let k = c.u32()?;
    let rounds = c.u32()?;
    let reps = c.u32()?;
    let edges_per_check = c.u32()?;
    if n == 0 || rounds == 0 || rounds > 100_000 || n > 100_000 {
        return Err(WireError::Malformed("implausible dimensions"));
    }
    let orders = c.take(rounds as usize)?.to_vec();
    let input_root = c.hash()?;
    let mut roots = Vec::with_capacity(rounds as usize);
    for _ in 0..rounds {
        roots.push(c.hash()?);
    }
    let mut final_view = Vec::with_capacity(n as usize);
    for _ in 0..n {
        final_view.push(c.field_value(mlen, modulus)?);
    }
    let mut openings = Vec::new();
    while c.pos < c.data.len() {
        let leaf_index = c.u32()?;
        let value = c.field_value(mlen, modulus)?;
        let plen = c.u8()? as usize;
        let mut path = Vec::with_capacity(plen);
        for _ in 0..plen {
            path.push(c.hash()?);
        }
        openings.push(Opening { leaf_index, value, path });
    }
    Ok(Proof {
        modulus,
        n,
        k,
        rounds,
        reps,
        edges_per_check,
        orders,
        input_root,
        roots,
        final_view,
        openings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_proof() -> Proof {
        Proof {
            modulus: 101,
            n: 3,
            k: 2,
            rounds: 2,
            reps: 1,
            edges_per_check: 3,
            orders: vec![3, 2],
            input_root: [1; 32],
            roots: vec![[2; 32], [3; 32]],
            final_view: vec![FieldElement(5), FieldElement(0), FieldElement(100)],
            openings: vec![
                Opening { leaf_index: 7, value: FieldElement(42), path: vec![[9; 32]] },
                Opening { leaf_index: 0, value: FieldElement(1), path: vec![] },
            ],
        }
    }

    #[test]
    fn round_trip_bit_exact() {
        let p = sample_proof();
        let bytes = serialize_proof(&p);
        let q = deserialize_proof(&bytes).unwrap();
        assert_eq!(p, q);
        assert_eq!(serialize_proof(&q), bytes);
    }

    #[test]
    fn magic_and_version_enforced() {
        let mut bytes = serialize_proof(&sample_proof());
        bytes[0] = b'X';
        assert!(deserialize_proof(&bytes).is_err());
        let mut bytes = serialize_proof(&sample_proof());
        bytes[4] = 2;
        assert!(deserialize_proof(&bytes).is_err());
    }

    #[test]
    fn out_of_range_value_rejected() {
        let mut p = sample_proof();
        p.final_view[0] = FieldElement(101);
        let bytes = serialize_proof(&p);
        assert!(deserialize_proof(&bytes).is_err());
    }

    #[test]
    fn truncation_rejected() {
        let bytes = serialize_proof(&sample_proof());
        for cut in [1usize, 5, 12, bytes.len() - 1] {
            assert!(deserialize_proof(&bytes[..cut]).is_err(), "cut at {cut}");
        }
    }
}
