//! Lazily sampled random oracle and the canonical input encoding fed to it.

use std::collections::HashMap;
use std::sync::Mutex;

use sha2::{Digest, Sha256};

use crate::commitment::{Commitment, Opening};
use crate::error::{Error, Result};

/// `H : {0,1}* → {0,1}^out_bits`, sampled on first query and memoized. Entries are keyed by
/// the SHA-256 digest of the seeded input and drawn from that digest, so answers do not depend
/// on query order.
#[derive(Debug)]
pub struct RandomOracle {
    out_bits: u32,
    seed: u64,
    table: Mutex<HashMap<[u8; 32], u64>>,
}

impl RandomOracle {
    pub fn new(out_bits: u32, seed: u64) -> Result<Self> {
        if out_bits > 64 {
            return Err(Error::Params(format!("random oracle output limited to 64 bits, got {out_bits}")));
        }
        Ok(Self { out_bits, seed, table: Mutex::new(HashMap::new()) })
    }

    pub fn out_bits(&self) -> u32 {
        self.out_bits
    }

    pub fn query(&self, input: &[u8]) -> u64 {
        let mut h = Sha256::new();
        h.update(self.seed.to_le_bytes());
        h.update(b"H");
        h.update(input);
        let key: [u8; 32] = h.finalize().into();
        let mut table = self.table.lock().expect("oracle lock");
        *table.entry(key).or_insert_with(|| {
            let raw = u64::from_le_bytes(key[..8].try_into().expect("digest prefix"));
            if self.out_bits == 64 {
                raw
            } else {
                raw & ((1u64 << self.out_bits) - 1)
            }
        })
    }

    /// Number of distinct inputs queried so far.
    pub fn table_len(&self) -> usize {
        self.table.lock().expect("oracle lock").len()
    }
}

/// Length-prefixed field concatenation: every field is a little-endian `u32` byte length
/// followed by its content; integers are 8-byte little-endian.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Encoder {
    buf: Vec<u8>,
}

impl Encoder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn finish(self) -> Vec<u8> {
        self.buf
    }

    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.bytes(&v.to_le_bytes())
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.buf.extend_from_slice(&(b.len() as u32).to_le_bytes());
        self.buf.extend_from_slice(b);
        self
    }

    pub fn nested(&mut self, f: impl FnOnce(&mut Encoder)) -> &mut Self {
        let mut inner = Encoder::new();
        f(&mut inner);
        self.bytes(&inner.buf)
    }

    pub fn commitment(&mut self, c: &Commitment) -> &mut Self {
        self.nested(|e| {
            e.u64(c.len() as u64);
            c.positions.iter().for_each(|&p| {
                e.u64(p as u64);
            });
            c.anchors.iter().for_each(|&y| {
                e.u64(y as u64);
            });
            c.masks.iter().for_each(|&b| {
                e.u64(b as u64);
            });
        })
    }

    pub fn opening(&mut self, u: &Opening) -> &mut Self {
        self.nested(|e| {
            e.u64(u.elements.len() as u64);
            u.elements.iter().for_each(|&x| {
                e.u64(x as u64);
            });
        })
    }
}
