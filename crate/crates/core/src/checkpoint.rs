//! Binary checkpoint of a prepared, separated ensemble.
//!
//! Layout, all integers and floats little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 8     | magic `FWMCKPT\0` |
//! | 4     | format version, u32 |
//! | 32    | SHA-256 of the preparation parameters |
//! | 8     | RNG seed, u64 |
//! | 8     | trajectory count `n`, u64 |
//! | 24    | `t_fwm` (s), `N_t chi` (1/s), boundary fraction, f64 |
//! | 80 n  | per trajectory, left then right side: `A, B, Re C, Im C, modes` |
//! | 32    | SHA-256 of everything above |

use std::io::{Read, Write};
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::interferometer::{SideCoherency, SplitState};
use crate::{Error, Result};

pub const MAGIC: [u8; 8] = *b"FWMCKPT\0";
pub const FORMAT_VERSION: u32 = 1;

const HEADER_LEN: usize = 8 + 4 + 32 + 8 + 8 + 24;
const PER_TRAJECTORY: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub params_hash: [u8; 32],
    pub seed: u64,
    pub t_fwm: f64,
    pub nt_chi: f64,
    pub boundary_fraction: f64,
    pub states: Vec<SplitState>,
}

fn side_values(s: &SideCoherency) -> [f64; 5] {
    [s.a, s.b, s.c_re, s.c_im, s.modes]
}

fn side_from(v: &[f64]) -> SideCoherency {
    SideCoherency { a: v[0], b: v[1], c_re: v[2], c_im: v[3], modes: v[4] }
}

impl Checkpoint {
    /// Ensemble-mean corrected atom number.
    pub fn mean_total(&self) -> f64 {
        self.states.iter().map(|s| s.total()).sum::<f64>() / self.states.len() as f64
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + 8 * PER_TRAJECTORY * self.states.len() + 32);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&self.params_hash);
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&(self.states.len() as u64).to_le_bytes());
        for v in [self.t_fwm, self.nt_chi, self.boundary_fraction] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        for s in &self.states {
            for v in side_values(&s.left).iter().chain(&side_values(&s.right)) {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        let digest = Sha256::digest(&out);
        out.extend_from_slice(&digest);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let bad = |msg: &str| Error::Checkpoint(msg.to_string());
        if bytes.len() < HEADER_LEN + 32 {
            return Err(bad("file too short"));
        }
        if bytes[..8] != MAGIC {
            return Err(bad("not a checkpoint (bad magic)"));
        }
        let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().unwrap());
        let u64_at = |i: usize| u64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let f64_at = |i: usize| f64::from_le_bytes(bytes[i..i + 8].try_into().unwrap());
        let version = u32_at(8);
        if version != FORMAT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported format version {version}")));
        }
        let n = u64_at(52) as usize;
        let expected = n
            .checked_mul(8 * PER_TRAJECTORY)
            .and_then(|d| d.checked_add(HEADER_LEN + 32))
            .ok_or_else(|| bad("corrupt trajectory count"))?;
        if bytes.len() != expected {
            return Err(Error::Checkpoint(format!("length {} does not match {n} trajectories", bytes.len())));
        }
        let body = &bytes[..expected - 32];
        if Sha256::digest(body).as_slice() != &bytes[expected - 32..] {
            return Err(bad("checksum mismatch"));
        }
        let states = (0..n)
            .map(|k| {
                let base = HEADER_LEN + 8 * PER_TRAJECTORY * k;
                let v: Vec<f64> = (0..PER_TRAJECTORY).map(|j| f64_at(base + 8 * j)).collect();
                SplitState { left: side_from(&v[..5]), right: side_from(&v[5..]) }
            })
            .collect();
        Ok(Checkpoint {
            params_hash: bytes[12..44].try_into().unwrap(),
            seed: u64_at(44),
            t_fwm: f64_at(60),
            nt_chi: f64_at(68),
            boundary_fraction: f64_at(76),
            states,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut f = std::fs::File::create(path)?;
        f.write_all(&self.to_bytes())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)
            .map_err(|e| Error::Checkpoint(format!("cannot open {}: {e}", path.display())))?
            .read_to_end(&mut bytes)?;
        Self::from_bytes(&bytes)
    }

    /// Refuse to resume from a checkpoint prepared with other parameters.
    pub fn verify(&self, params_hash: &[u8; 32]) -> Result<()> {
        if &self.params_hash != params_hash {
            return Err(Error::Checkpoint(
                "preparation parameters differ from the checkpoint's; re-run prepare".into(),
            ));
        }
        Ok(())
    }
}
