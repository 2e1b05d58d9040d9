//! Binary cache of the `τ` table.
//!
//! Layout, all little-endian:
//!
//! | offset | size   | content                                   |
//! |--------|--------|-------------------------------------------|
//! | 0      | 8      | magic `CHBTAU01`                          |
//! | 8      | 8      | `N` as `u64`                              |
//! | 16     | 32     | SHA-256 of the record bytes               |
//! | 48     | 16·N   | `τ(1), ..., τ(N)` as `i128`               |

use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::expansion::{DeltaExpansion, MAX_ORDER};
use crate::error::{Error, Result};

pub const CACHE_MAGIC: &[u8; 8] = b"CHBTAU01";
const HEADER: usize = 48;

pub fn encode_cache(delta: &DeltaExpansion) -> Vec<u8> {
    let n = delta.order();
    let mut records = Vec::with_capacity(16 * n);
    for &t in &delta.values()[1..] {
        records.extend_from_slice(&t.to_le_bytes());
    }
    let mut out = Vec::with_capacity(HEADER + records.len());
    out.extend_from_slice(CACHE_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    out.extend_from_slice(&Sha256::digest(&records));
    out.extend_from_slice(&records);
    out
}

pub fn decode_cache(bytes: &[u8]) -> Result<DeltaExpansion> {
    let bad = |msg: &str| Error::Io(format!("tau cache: {msg}"));
    if bytes.len() < HEADER || &bytes[..8] != CACHE_MAGIC {
        return Err(bad("missing header"));
    }
    let n = u64::from_le_bytes(bytes[8..16].try_into().unwrap());
    if n == 0 || n > MAX_ORDER as u64 {
        return Err(bad("order out of range"));
    }
    let records = &bytes[HEADER..];
    if records.len() as u64 != 16 * n {
        return Err(bad("truncated records"));
    }
    if Sha256::digest(records).as_slice() != &bytes[16..HEADER] {
        return Err(bad("checksum mismatch"));
    }
    let mut tau = vec![0i128];
    tau.extend(
        records
            .chunks_exact(16)
            .map(|c| i128::from_le_bytes(c.try_into().unwrap())),
    );
    DeltaExpansion::from_values(tau)
}

pub fn write_cache(delta: &DeltaExpansion, path: &Path) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(&encode_cache(delta))?;
    f.sync_all()?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<DeltaExpansion> {
    decode_cache(&fs::read(path)?)
}

/// Reads the cache when it covers `order`, otherwise computes and rewrites it.
pub fn load_or_compute(order: usize, path: &Path) -> Result<DeltaExpansion> {
    if let Ok(cached) = read_cache(path) {
        if cached.order() >= order {
            return Ok(cached);
        }
    }
    let delta = DeltaExpansion::new(order)?;
    write_cache(&delta, path)?;
    Ok(delta)
}
