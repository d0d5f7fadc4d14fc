//! Binary cache format for an [`OrderSet`]:
//!
//! ```text
//! "HADSIEVE1" | limit: u64 LE | flags: u8 | bitset bytes
//! ```
//!
//! `flags` bit 0 marks order 1 and bit 1 marks order 2. The bitset holds
//! `floor(limit / 4) + 1` bits, least significant bit first, where bit `i`
//! stands for order `4i`.

use std::fs;
use std::path::Path;

use super::OrderSet;
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 9] = b"HADSIEVE1";

impl OrderSet {
    pub fn to_bytes(&self) -> Vec<u8> {
        let nbytes = bitset_len(self.limit());
        let mut out = Vec::with_capacity(CACHE_MAGIC.len() + 9 + nbytes);
        out.extend_from_slice(CACHE_MAGIC);
        out.extend_from_slice(&self.limit().to_le_bytes());
        out.push(self.contains(1) as u8 | (self.contains(2) as u8) << 1);
        let bytes = self.raw_bits().iter().flat_map(|w| w.to_le_bytes());
        out.extend(bytes.take(nbytes));
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<OrderSet> {
        let bad = |why: &str| Error::CacheFormat(why.to_string());
        let rest = bytes.strip_prefix(CACHE_MAGIC.as_slice()).ok_or_else(|| bad("bad magic"))?;
        if rest.len() < 9 {
            return Err(bad("truncated header"));
        }
        let limit = u64::from_le_bytes(rest[..8].try_into().unwrap());
        let flags = rest[8];
        if flags & !3 != 0 {
            return Err(bad("unknown flag bits"));
        }
        let body = &rest[9..];
        if limit < 4 || body.len() != bitset_len(limit) {
            return Err(bad("bitset length does not match limit"));
        }
        let slots = limit / 4 + 1;
        let mut words = vec![0u64; (slots as usize).div_ceil(64)];
        for (i, &b) in body.iter().enumerate() {
            words[i / 8] |= (b as u64) << (8 * (i % 8));
        }
        let tail = slots % 64;
        if words[0] & 1 != 0 || (tail != 0 && words.last().unwrap() >> tail != 0) {
            return Err(bad("bits set outside the order range"));
        }
        Ok(OrderSet::from_raw(limit, words, flags & 1 == 1, flags & 2 == 2))
    }

    pub fn write_cache(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        // Write then rename so a concurrent reader never sees a partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, self.to_bytes())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read_cache(path: &Path) -> Result<OrderSet> {
        OrderSet::from_bytes(&fs::read(path)?)
    }
}

fn bitset_len(limit: u64) -> usize {
    ((limit / 4 + 1) as usize).div_ceil(8)
}
