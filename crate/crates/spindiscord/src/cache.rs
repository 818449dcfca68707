//! On-disk ground-state cache.
//!
//! Layout, little-endian: magic `SDKGS1`, `u32` N, `u32` n_up, `f64` delta,
//! `f64` tol, `f64` energy, `u64` dimension, then `dimension` f64 amplitudes,
//! then the CRC32 of the amplitude bytes.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use spindiscord_core::spinchain::{
    build_sector, ground_state_with, GroundStateSource, SolverOptions,
};
use spindiscord_core::GroundState;

pub const MAGIC: &[u8; 6] = b"SDKGS1";
const HEADER_LEN: usize = 6 + 4 + 4 + 8 + 8 + 8 + 8;

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] io::Error),
    #[error("not a ground-state cache file")]
    BadMagic,
    #[error("cache file truncated")]
    Truncated,
    #[error("checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("cache entry does not match the request")]
    Mismatch,
    #[error(transparent)]
    Core(#[from] spindiscord_core::Error),
}

/// Header and payload of one cache file.
#[derive(Debug, Clone, PartialEq)]
pub struct CacheEntry {
    pub n_sites: u32,
    pub n_up: u32,
    pub delta: f64,
    pub tol: f64,
    pub energy: f64,
    pub amplitudes: Vec<f64>,
}

impl CacheEntry {
    pub fn encode(&self) -> Vec<u8> {
        let mut buf = Vec::with_capacity(HEADER_LEN + 8 * self.amplitudes.len() + 4);
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&self.n_sites.to_le_bytes());
        buf.extend_from_slice(&self.n_up.to_le_bytes());
        buf.extend_from_slice(&self.delta.to_le_bytes());
        buf.extend_from_slice(&self.tol.to_le_bytes());
        buf.extend_from_slice(&self.energy.to_le_bytes());
        buf.extend_from_slice(&(self.amplitudes.len() as u64).to_le_bytes());
        let start = buf.len();
        for a in &self.amplitudes {
            buf.extend_from_slice(&a.to_le_bytes());
        }
        let crc = crc32fast::hash(&buf[start..]);
        buf.extend_from_slice(&crc.to_le_bytes());
        buf
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, CacheError> {
        if bytes.len() < HEADER_LEN + 4 {
            return Err(if bytes.starts_with(MAGIC) {
                CacheError::Truncated
            } else {
                CacheError::BadMagic
            });
        }
        if &bytes[..6] != MAGIC {
            return Err(CacheError::BadMagic);
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let u64_at = |o: usize| u64::from_le_bytes(bytes[o..o + 8].try_into().unwrap());
        let f64_at = |o: usize| f64::from_bits(u64_at(o));
        let dim = u64_at(38) as usize;
        let end = dim
            .checked_mul(8)
            .and_then(|p| p.checked_add(HEADER_LEN))
            .ok_or(CacheError::Truncated)?;
        if bytes.len() != end + 4 {
            return Err(CacheError::Truncated);
        }
        let payload = &bytes[HEADER_LEN..end];
        let stored = u32_at(end);
        let computed = crc32fast::hash(payload);
        if stored != computed {
            return Err(CacheError::Checksum { stored, computed });
        }
        Ok(CacheEntry {
            n_sites: u32_at(6),
            n_up: u32_at(10),
            delta: f64_at(14),
            tol: f64_at(22),
            energy: f64_at(30),
            amplitudes: payload
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect(),
        })
    }
}

/// Cache file for a solve. The key covers everything that changes the
/// stored vector: size, anisotropy, tolerance, start-vector seed and the
/// crate version.
pub fn cache_path(dir: &Path, n_sites: usize, delta: f64, opts: &SolverOptions) -> PathBuf {
    dir.join(format!(
        "gs_n{n_sites}_d{:016x}_t{:016x}_s{:x}_v{}.sdkgs",
        delta.to_bits(),
        opts.tol.to_bits(),
        opts.seed,
        env!("CARGO_PKG_VERSION"),
    ))
}

pub fn read_entry(path: &Path) -> Result<CacheEntry, CacheError> {
    CacheEntry::decode(&fs::read(path)?)
}

/// Writes through a temporary file and a rename, so readers never see a
/// partial entry.
pub fn write_entry(path: &Path, entry: &CacheEntry) -> Result<(), CacheError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&entry.encode())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Ground state from a cache entry. Energy and amplitudes are taken
/// verbatim; the residual is recomputed.
pub fn ground_state_from_entry(entry: CacheEntry) -> Result<GroundState, CacheError> {
    let basis = build_sector(entry.n_sites as usize, entry.n_up as usize)?;
    if basis.dim() != entry.amplitudes.len() {
        return Err(CacheError::Mismatch);
    }
    let mut gs = GroundState::from_amplitudes(basis, entry.delta, entry.amplitudes)?;
    gs.energy = entry.energy;
    Ok(gs)
}

/// Solver that consults a cache directory before running Lanczos and stores
/// fresh solves there. Without a directory it only solves.
#[derive(Debug, Clone, Default)]
pub struct CachedSolver {
    pub dir: Option<PathBuf>,
    pub options: SolverOptions,
    /// Number of solves answered from disk.
    pub hits: usize,
}

impl CachedSolver {
    pub fn new(dir: Option<PathBuf>, options: SolverOptions) -> Self {
        CachedSolver {
            dir,
            options,
            hits: 0,
        }
    }

    fn lookup(&self, path: &Path, n_sites: usize, delta: f64) -> Option<GroundState> {
        let entry = read_entry(path).ok()?;
        let matches = entry.n_sites as usize == n_sites
            && entry.n_up as usize == n_sites / 2
            && entry.delta.to_bits() == delta.to_bits()
            && entry.tol.to_bits() == self.options.tol.to_bits();
        if !matches {
            return None;
        }
        ground_state_from_entry(entry).ok()
    }
}

impl GroundStateSource for CachedSolver {
    fn ground_state(
        &mut self,
        n_sites: usize,
        delta: f64,
    ) -> spindiscord_core::Result<GroundState> {
        let Some(dir) = self.dir.clone() else {
            return ground_state_with(n_sites, delta, &self.options);
        };
        let path = cache_path(&dir, n_sites, delta, &self.options);
        if let Some(gs) = self.lookup(&path, n_sites, delta) {
            self.hits += 1;
            return Ok(gs);
        }
        let gs = ground_state_with(n_sites, delta, &self.options)?;
        let entry = CacheEntry {
            n_sites: n_sites as u32,
            n_up: gs.basis.n_up() as u32,
            delta,
            tol: self.options.tol,
            energy: gs.energy,
            amplitudes: gs.amplitudes.clone(),
        };
        if let Err(e) = write_entry(&path, &entry) {
            eprintln!("warning: could not write {}: {e}", path.display());
        }
        // report the residual exactly as a cache hit would
        let gap = gs.gap;
        let matvecs = gs.matvecs;
        let mut out = ground_state_from_entry(entry)
            .map_err(|_| spindiscord_core::Error::Domain("cache round trip failed"))?;
        out.gap = gap;
        out.matvecs = matvecs;
        Ok(out)
    }
}
