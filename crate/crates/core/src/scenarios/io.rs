//! Binary initial-data files.
//!
//! Layout (all integers and floats little-endian):
//!
//! | offset | size | content                          |
//! |--------|------|----------------------------------|
//! | 0      | 4    | magic `GLMQ`                     |
//! | 4      | 4    | `u32` format version (1)         |
//! | 8      | 24   | `u64` point counts `nx, ny, nz`  |
//! | 32     | 8    | `u64` component count            |
//! | 40     | ...  | `f64` values, component-major, x fastest |
//!
//! Log-stored FO-CCZ4 variables are written as `alpha` and `phi`.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::LoadError;
use crate::scalar::Real;
use crate::state::layout::ccz4;
use crate::state::sym3::det3;
use crate::state::{FieldSnapshot, GridSpec, SystemDescriptor, SystemKind};

pub const MAGIC: [u8; 4] = *b"GLMQ";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: u64 = 40;

pub fn save_initial_data<T: Real>(path: &Path, s: &FieldSnapshot<T>) -> Result<(), LoadError> {
    let np = s.n_points();
    let nc = s.n_components();
    let mut buf = Vec::with_capacity(HEADER_LEN as usize + 8 * np * nc);
    buf.extend_from_slice(&MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for n in s.grid().n {
        buf.extend_from_slice(&(n as u64).to_le_bytes());
    }
    buf.extend_from_slice(&(nc as u64).to_le_bytes());
    for c in 0..nc {
        for p in 0..np {
            buf.extend_from_slice(&s.io_value(c, p).to_f64_lossy().to_le_bytes());
        }
    }
    let mut f = fs::File::create(path)?;
    f.write_all(&buf)?;
    Ok(())
}

fn u64_at(b: &[u8], off: usize) -> u64 {
    u64::from_le_bytes(b[off..off + 8].try_into().expect("8-byte slice"))
}

/// Reads a file written in the layout above onto `grid` with the component
/// ordering of `descriptor`. Nothing is returned unless every check passes.
pub fn load_initial_data<T: Real>(
    path: &Path,
    grid: &GridSpec<T>,
    descriptor: &SystemDescriptor,
) -> Result<FieldSnapshot<T>, LoadError> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_LEN as usize {
        return Err(LoadError::Truncated {
            expected: HEADER_LEN,
            found: bytes.len() as u64,
        });
    }
    let magic: [u8; 4] = bytes[0..4].try_into().expect("4-byte slice");
    if magic != MAGIC {
        return Err(LoadError::BadMagic(magic));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4-byte slice"));
    if version != FORMAT_VERSION {
        return Err(LoadError::Version(version));
    }
    let dims = [u64_at(&bytes, 8), u64_at(&bytes, 16), u64_at(&bytes, 24)];
    if (0..3).any(|d| dims[d] != grid.n[d] as u64) {
        return Err(LoadError::Dimensions {
            file: dims,
            expected: grid.n,
        });
    }
    let nc_file = u64_at(&bytes, 32);
    let nc = descriptor.count();
    if nc_file != nc as u64 {
        return Err(LoadError::ComponentCount {
            file: nc_file,
            expected: nc,
        });
    }
    let np = grid.n_points();
    let expected = HEADER_LEN + 8 * (np as u64) * (nc as u64);
    if bytes.len() as u64 != expected {
        return Err(LoadError::Truncated {
            expected,
            found: bytes.len() as u64,
        });
    }
    let body = &bytes[HEADER_LEN as usize..];
    let mut data = Vec::with_capacity(np * nc);
    for c in 0..nc {
        let log = descriptor.is_log_stored(c);
        for p in 0..np {
            let off = 8 * (c * np + p);
            let v = f64::from_le_bytes(body[off..off + 8].try_into().expect("8-byte slice"));
            let point = || {
                let (i, j, k) = grid.unindex(p);
                [i, j, k]
            };
            if !v.is_finite() {
                return Err(LoadError::NonFinite {
                    component: descriptor.io_name(c).to_string(),
                    point: point(),
                });
            }
            if log {
                if !(v > 0.0) {
                    return Err(LoadError::Positivity {
                        name: if c == ccz4::LN_ALPHA { "alpha" } else { "phi" },
                        value: v,
                        point: point(),
                    });
                }
                data.push(T::lit(v.ln()));
            } else {
                data.push(T::lit(v));
            }
        }
    }
    Ok(FieldSnapshot::from_data(
        grid.clone(),
        descriptor.clone(),
        data,
        T::zero(),
    )?)
}

/// Largest `|det gtilde - 1|` over the grid (FO-CCZ4 layouts only).
pub fn metric_determinant_drift<T: Real>(s: &FieldSnapshot<T>) -> Option<f64> {
    if s.descriptor().kind != SystemKind::Foccz4 {
        return None;
    }
    let mut worst = 0.0f64;
    for p in 0..s.n_points() {
        let mut g = [[T::zero(); 3]; 3];
        for (slot, &(i, j)) in crate::state::SYM_PAIRS.iter().enumerate() {
            let v = s.get(ccz4::GAMMA + slot, p);
            g[i][j] = v;
            g[j][i] = v;
        }
        worst = worst.max((det3(&g) - T::one()).abs().to_f64_lossy());
    }
    Some(worst)
}
