//! Full-resolution solution fields stored next to the tables, so `verify` can
//! certify a run without repeating the simulation.
//!
//! Layout, little endian: magic `FLS1`, `u64` node count, `u64` snapshot count,
//! `f64` first node, `f64` mesh, then per snapshot `f64` time followed by the nodes.

use std::io::{Read, Write};

use anyhow::{bail, Context, Result};
use frontlab_core::pde::FrontSolution;
use frontlab_core::Real;

const MAGIC: &[u8; 4] = b"FLS1";

#[derive(Debug, Clone, PartialEq)]
pub struct StoredState {
    pub x0: Real,
    pub dx: Real,
    pub n: usize,
    pub times: Vec<Real>,
    pub fields: Vec<Vec<Real>>,
}

pub fn write_state(mut w: impl Write, sol: &FrontSolution) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&(sol.grid.n as u64).to_le_bytes())?;
    w.write_all(&(sol.snapshots.len() as u64).to_le_bytes())?;
    w.write_all(&sol.grid.x0.to_le_bytes())?;
    w.write_all(&sol.grid.dx.to_le_bytes())?;
    let mut buf = Vec::with_capacity(8 * (sol.grid.n + 1));
    for s in &sol.snapshots {
        buf.clear();
        buf.extend_from_slice(&s.t.to_le_bytes());
        for u in &s.u {
            buf.extend_from_slice(&u.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<Real> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(Real::from_le_bytes(b))
}

pub fn read_state(mut r: impl Read) -> Result<StoredState> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).context("reading state header")?;
    if &magic != MAGIC {
        bail!("not a frontlab state file");
    }
    let n = read_u64(&mut r)? as usize;
    let m = read_u64(&mut r)? as usize;
    let x0 = read_f64(&mut r)?;
    let dx = read_f64(&mut r)?;
    let mut times = Vec::with_capacity(m);
    let mut fields = Vec::with_capacity(m);
    let mut buf = vec![0u8; 8 * n];
    for j in 0..m {
        times.push(read_f64(&mut r).with_context(|| format!("snapshot {j} truncated"))?);
        r.read_exact(&mut buf).with_context(|| format!("snapshot {j} truncated"))?;
        fields.push(
            buf.chunks_exact(8)
                .map(|c| Real::from_le_bytes(c.try_into().expect("chunk of 8")))
                .collect(),
        );
    }
    Ok(StoredState { x0, dx, n, times, fields })
}
