//! Field snapshots and trajectory tables.
//!
//! Snapshot layout (all integers and floats little-endian):
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 4    | magic `b"BNLS"`                           |
//! | 4      | 4    | format version, `u32`, currently 1        |
//! | 8      | 4    | points per side `n`, `u32`                |
//! | 12     | 4    | flags, `u32`; bit 0 set = frequency data  |
//! | 16     | 8    | box length `L`, `f64`                     |
//! | 24     | 8    | time `t`, `f64`                           |
//! | 32     | 8n²  | `n²` complex64 values (`f32` re, `f32` im) |
//!
//! Values are row-major with the first grid index slowest.

use std::io::{self, Read, Write};

use super::Trajectory;
use crate::spectral::{Field2D, GridSpec, Representation};
use crate::table::{Cell, CsvTable};
use crate::{Error, Result, C64};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"BNLS";
pub const SNAPSHOT_VERSION: u32 = 1;
pub const SNAPSHOT_HEADER_LEN: usize = 32;

pub fn write_snapshot(w: &mut impl Write, f: &Field2D, time: f64) -> io::Result<()> {
    let g = f.grid();
    let mut header = [0u8; SNAPSHOT_HEADER_LEN];
    header[0..4].copy_from_slice(SNAPSHOT_MAGIC);
    header[4..8].copy_from_slice(&SNAPSHOT_VERSION.to_le_bytes());
    header[8..12].copy_from_slice(&(g.points_per_side() as u32).to_le_bytes());
    let flags: u32 = match f.representation() {
        Representation::Physical => 0,
        Representation::Frequency => 1,
    };
    header[12..16].copy_from_slice(&flags.to_le_bytes());
    header[16..24].copy_from_slice(&g.box_length().to_le_bytes());
    header[24..32].copy_from_slice(&time.to_le_bytes());
    w.write_all(&header)?;
    let mut body = Vec::with_capacity(8 * f.values().len());
    for v in f.values() {
        body.extend_from_slice(&(v.re as f32).to_le_bytes());
        body.extend_from_slice(&(v.im as f32).to_le_bytes());
    }
    w.write_all(&body)
}

/// Reads a snapshot, returning the field and its time stamp.
pub fn read_snapshot(r: &mut impl Read) -> Result<(Field2D, f64)> {
    let mut header = [0u8; SNAPSHOT_HEADER_LEN];
    r.read_exact(&mut header)?;
    if &header[0..4] != SNAPSHOT_MAGIC {
        return Err(Error::Data("not a BNLS snapshot (bad magic)".into()));
    }
    let word = |k: usize| u32::from_le_bytes(header[k..k + 4].try_into().unwrap());
    let float = |k: usize| f64::from_le_bytes(header[k..k + 8].try_into().unwrap());
    let version = word(4);
    if version != SNAPSHOT_VERSION {
        return Err(Error::Data(format!("unsupported snapshot version {version}")));
    }
    let n = word(8) as usize;
    let repr = if word(12) & 1 == 1 { Representation::Frequency } else { Representation::Physical };
    let grid = GridSpec::new(float(16), n)?;
    let time = float(24);
    let mut body = vec![0u8; 8 * n * n];
    r.read_exact(&mut body)?;
    let values = body
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes(c[0..4].try_into().unwrap());
            let im = f32::from_le_bytes(c[4..8].try_into().unwrap());
            C64::new(re as f64, im as f64)
        })
        .collect();
    Ok((Field2D::from_values(grid, repr, values)?, time))
}

pub const TRAJECTORY_COLUMNS: [&str; 6] = ["time", "mass", "energy", "modified_energy", "hs_norm", "linf"];

/// `time,mass,energy,modified_energy,hs_norm,linf`, one row per record.
pub fn trajectory_table(traj: &Trajectory) -> CsvTable {
    let mut t = CsvTable::new(TRAJECTORY_COLUMNS);
    for r in &traj.reports {
        t.push(vec![
            r.time.into(),
            r.mass.into(),
            r.energy.into(),
            Cell::from(r.modified_energy),
            r.hs_norm.into(),
            r.linf.into(),
        ]);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn snapshot_layout() {
        let g = GridSpec::new(2.5, 8).unwrap();
        let mut rng = SeededRng::new(4);
        let f = Field2D::from_fn(g, |_, _| rng.complex_normal());
        let mut buf = Vec::new();
        write_snapshot(&mut buf, &f, 0.125).unwrap();
        assert_eq!(buf.len(), 32 + 8 * 64);
        assert_eq!(&buf[0..4], b"BNLS");
        assert_eq!(&buf[4..8], &[1, 0, 0, 0]);
        assert_eq!(&buf[8..12], &[8, 0, 0, 0]);
        assert_eq!(&buf[12..16], &[0, 0, 0, 0]);
        assert_eq!(&buf[16..24], &2.5f64.to_le_bytes());
        assert_eq!(&buf[32..36], &(f.values()[0].re as f32).to_le_bytes());

        let (back, t) = read_snapshot(&mut buf.as_slice()).unwrap();
        assert_eq!(t, 0.125);
        assert_eq!(back.grid(), f.grid());
        assert!(back.l2_distance(&f).unwrap() < 1e-6 * f.l2_norm());
    }

    #[test]
    fn rejects_bad_magic() {
        let mut buf = vec![0u8; 64];
        buf[0..4].copy_from_slice(b"NOPE");
        assert!(matches!(read_snapshot(&mut buf.as_slice()), Err(Error::Data(_))));
    }
}
