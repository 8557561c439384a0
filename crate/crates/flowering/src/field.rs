//! Prime-field arithmetic over word-sized moduli.
//!
//! Elements are canonical representatives in `[0, p)` stored as `u64`.
//! Moduli are capped below `2^62` so every product fits a 128-bit
//! intermediate; the analysis layer reports deployment-scale field sizes
//! separately and nothing here needs them.

use rand::Rng;
use thiserror::Error;

/// Largest permitted modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 62;

const MILLER_RABIN_ROUNDS: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is too small, need at least 3")]
    TooSmall(u64),
    #[error("modulus {0} exceeds the 2^62 cap")]
    TooLarge(u64),
    #[error("modulus {0} failed the primality check")]
    CompositeModulus(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("byte string does not decode to a canonical element")]
    BadEncoding,
}

/// An element of some [`PrimeField`], always the canonical representative.
///
/// The element does not remember its field; mixing fields is the caller's
/// bug and is only caught by debug assertions on the value range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(pub u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);
}

/// A prime field `F_p` with `3 <= p < 2^62`, `p` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    modulus: u64,
    byte_len: usize,
}

impl PrimeField {
    /// Builds the field, checking primality with 64 Miller-Rabin rounds.
    ///
    /// The witness schedule is deterministic (seeded from the modulus), so
    /// the same modulus always passes or fails identically.
    pub fn new(modulus: u64) -> Result<PrimeField, FieldError> {
        if modulus < 3 {
            return Err(FieldError::TooSmall(modulus));
        }
        if modulus >= MAX_MODULUS {
            return Err(FieldError::TooLarge(modulus));
        }
        if !is_prime(modulus) {
            return Err(FieldError::CompositeModulus(modulus));
        }
        let byte_len = byte_len_for(modulus - 1);
        Ok(PrimeField { modulus, byte_len })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Width of the canonical encoding: minimal bytes holding `p - 1`.
    pub fn byte_len(&self) -> usize {
        self.byte_len
    }

    /// Canonical representative of an arbitrary integer.
    pub fn element(&self, value: u64) -> FieldElement {
        FieldElement(value % self.modulus)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.modulus && b.0 < self.modulus);
        let s = a.0 + b.0;
        FieldElement(if s >= self.modulus { s - self.modulus } else { s })
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.modulus && b.0 < self.modulus);
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(a.0 + self.modulus - b.0)
        }
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.modulus - a.0)
        }
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        debug_assert!(a.0 < self.modulus && b.0 < self.modulus);
        FieldElement(((a.0 as u128 * b.0 as u128) % self.modulus as u128) as u64)
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        if b.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Multiplicative inverse by Fermat exponentiation.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(a, self.modulus - 2))
    }

    pub fn pow(&self, base: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = base;
        let mut acc = FieldElement(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Fixed-width little-endian encoding, injective on the field.
    pub fn canonical_bytes(&self, x: FieldElement) -> Vec<u8> {
        debug_assert!(x.0 < self.modulus);
        x.0.to_le_bytes()[..self.byte_len].to_vec()
    }

    /// Inverse of [`canonical_bytes`](Self::canonical_bytes).
    pub fn from_canonical_bytes(&self, bytes: &[u8]) -> Result<FieldElement, FieldError> {
        if bytes.len() != self.byte_len {
            return Err(FieldError::BadEncoding);
        }
        let mut buf = [0u8; 8];
        buf[..bytes.len()].copy_from_slice(bytes);
        let v = u64::from_le_bytes(buf);
        if v >= self.modulus {
            return Err(FieldError::BadEncoding);
        }
        Ok(FieldElement(v))
    }

    /// Uniform sampling by rejection on `byte_len`-byte draws.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let mut buf = [0u8; 8];
            rng.fill_bytes(&mut buf[..self.byte_len]);
            let v = u64::from_le_bytes(buf);
            if v < self.modulus {
                return FieldElement(v);
            }
        }
    }
}

fn byte_len_for(max_value: u64) -> usize {
    let bits = 64 - max_value.leading_zeros() as usize;
    bits.div_ceil(8).max(1)
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Miller-Rabin with a deterministic witness schedule.
///
/// Witnesses come from a splitmix-style generator seeded by the candidate,
/// so the check is reproducible while still running 64 independent rounds.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    let mut state = n ^ 0x9e37_79b9_7f4a_7c15;
    'witness: for _ in 0..MILLER_RABIN_ROUNDS {
        // splitmix64 step
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        let a = 2 + z % (n - 3);
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
