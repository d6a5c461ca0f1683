//! Binary checkpoints.
//!
//! Layout, all little-endian: magic `ZKGS`, `u32` version, `u8` system id,
//! `u8` d, `u32` n_per_dim, `f64` box length, `f64` t, then the coefficients
//! of each field as `(re, im)` `f64` pairs in the storage order of
//! [`SpectralField`] (row-major over axes, FFT order within an axis).

use std::path::Path;

use num_complex::Complex64;

use crate::dissipative::DampedState;
use crate::error::{Error, Result};
use crate::evolution::{System, SystemState};
use crate::spectral::{make_grid, SpectralField};

pub const MAGIC: &[u8; 4] = b"ZKGS";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 + 1 + 1 + 4 + 8 + 8;

/// Which system a checkpoint belongs to; fixes the field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckpointKind {
    /// `(u, w⁺, w⁻)`.
    Kgs,
    /// `(u, n⁺, n⁻)`.
    Zakharov,
    /// `(u, v, w)` of the damped system.
    Damped,
}

impl CheckpointKind {
    fn id(self) -> u8 {
        match self {
            CheckpointKind::Kgs => 0,
            CheckpointKind::Zakharov => 1,
            CheckpointKind::Damped => 2,
        }
    }

    fn from_id(id: u8) -> Result<Self> {
        match id {
            0 => Ok(CheckpointKind::Kgs),
            1 => Ok(CheckpointKind::Zakharov),
            2 => Ok(CheckpointKind::Damped),
            _ => Err(Error::Format(format!("unknown system id {id}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub kind: CheckpointKind,
    pub t: f64,
    /// Three fields on one grid.
    pub fields: Vec<SpectralField>,
}

impl Checkpoint {
    pub fn from_state(state: &SystemState) -> Self {
        Checkpoint {
            kind: match state.system {
                System::Kgs => CheckpointKind::Kgs,
                System::Zakharov => CheckpointKind::Zakharov,
            },
            t: state.t,
            fields: state.fields(),
        }
    }

    pub fn from_damped(state: &DampedState) -> Self {
        Checkpoint {
            kind: CheckpointKind::Damped,
            t: state.t,
            fields: vec![state.u.clone(), state.v.clone(), state.w.clone()],
        }
    }

    pub fn into_state(self) -> Result<SystemState> {
        let system = match self.kind {
            CheckpointKind::Kgs => System::Kgs,
            CheckpointKind::Zakharov => System::Zakharov,
            CheckpointKind::Damped => {
                return Err(Error::Format("checkpoint holds a damped state".into()))
            }
        };
        let t = self.t;
        let [u, wp, wm] = self.into_fields()?;
        SystemState::new(system, u, wp, wm, t)
    }

    fn into_fields(self) -> Result<[SpectralField; 3]> {
        self.fields
            .try_into()
            .map_err(|_| Error::Format("checkpoint needs exactly three fields".into()))
    }

    pub fn into_damped(self) -> Result<DampedState> {
        if self.kind != CheckpointKind::Damped {
            return Err(Error::Format("checkpoint does not hold a damped state".into()));
        }
        let t = self.t;
        let [u, v, w] = self.into_fields()?;
        DampedState::new(u, v, w, t)
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let first = self
            .fields
            .first()
            .ok_or_else(|| Error::Format("checkpoint without fields".into()))?;
        let grid = first.grid();
        for f in &self.fields {
            first.same_grid(f, "checkpoint fields")?;
        }
        let mut out = Vec::with_capacity(HEADER_LEN + self.fields.len() * grid.len() * 16);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.push(self.kind.id());
        out.push(grid.dim() as u8);
        out.extend_from_slice(&(grid.n_per_dim() as u32).to_le_bytes());
        out.extend_from_slice(&grid.box_length().to_le_bytes());
        out.extend_from_slice(&self.t.to_le_bytes());
        for f in &self.fields {
            for c in f.coeffs() {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN {
            return Err(Error::Format(format!(
                "truncated checkpoint: {} bytes, header needs {HEADER_LEN}",
                bytes.len()
            )));
        }
        if &bytes[0..4] != MAGIC {
            return Err(Error::Format(format!("bad magic {:?}, expected \"ZKGS\"", &bytes[0..4])));
        }
        let u32_at = |k: usize| u32::from_le_bytes(bytes[k..k + 4].try_into().expect("4 bytes"));
        let f64_at = |k: usize| f64::from_le_bytes(bytes[k..k + 8].try_into().expect("8 bytes"));
        let version = u32_at(4);
        if version != FORMAT_VERSION {
            return Err(Error::Format(format!(
                "unsupported checkpoint version {version}, expected {FORMAT_VERSION}"
            )));
        }
        let kind = CheckpointKind::from_id(bytes[8])?;
        let d = bytes[9] as usize;
        let n = u32_at(10) as usize;
        let box_length = f64_at(14);
        let t = f64_at(22);
        let grid = make_grid(d, n, box_length).map_err(|e| Error::Format(format!("bad grid header: {e}")))?;
        let per_field = grid.len() * 16;
        let expected = HEADER_LEN + 3 * per_field;
        if bytes.len() != expected {
            return Err(Error::Format(format!(
                "checkpoint has {} bytes, expected {expected}",
                bytes.len()
            )));
        }
        let fields = (0..3)
            .map(|k| {
                let base = HEADER_LEN + k * per_field;
                let coeffs = (0..grid.len())
                    .map(|j| Complex64::new(f64_at(base + 16 * j), f64_at(base + 16 * j + 8)))
                    .collect();
                SpectralField::from_coeffs(&grid, coeffs)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Checkpoint { kind, t, fields })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()?).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        Checkpoint::from_bytes(&bytes)
    }
}

pub fn save_checkpoint(state: &SystemState, path: &Path) -> Result<()> {
    Checkpoint::from_state(state).write(path)
}

pub fn load_checkpoint(path: &Path) -> Result<SystemState> {
    Checkpoint::read(path)?.into_state()
}
