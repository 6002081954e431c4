//! Chunked binary storage for sector kernels.
//!
//! Layout: the magic bytes, a little-endian `u64` header length, the JSON
//! header, then per sector a values chunk and a modes chunk. Each chunk is a
//! `u64` count of `f64` entries followed by the entries, little-endian. Values
//! are stored per displacement as 16 row-major `(re, im)` pairs; modes as the
//! four momentum components followed by the same 32 numbers.

use std::io::{Read, Write};

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::correlation::GRAM_CONVENTION;
use super::lattice::{LatticeSpec, Mode, SectorKernel};
use super::sectors::{MassData, SECTOR_LABELS};
use crate::gamma::Mat4;
use crate::{Error, Result};

pub const MAGIC: &[u8; 8] = b"OCFSKRN1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainerHeader {
    pub lattice: LatticeSpec,
    pub masses: MassData,
    pub epsilon: f64,
    pub tau_reg: f64,
    pub sector_labels: Vec<String>,
    pub sector_masses: Vec<Vec<f64>>,
    pub gram_convention: String,
    pub version: String,
}

impl ContainerHeader {
    pub fn new(lattice: LatticeSpec, masses: MassData, sectors: &[SectorKernel]) -> Self {
        ContainerHeader {
            lattice,
            epsilon: lattice.epsilon,
            tau_reg: masses.tau_reg,
            masses,
            sector_labels: SECTOR_LABELS
                .iter()
                .take(sectors.len())
                .map(|s| s.to_string())
                .collect(),
            sector_masses: sectors.iter().map(|s| s.masses.clone()).collect(),
            gram_convention: GRAM_CONVENTION.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

fn push_matrix(buf: &mut Vec<f64>, m: &Mat4) {
    for r in 0..4 {
        for c in 0..4 {
            buf.push(m[(r, c)].re);
            buf.push(m[(r, c)].im);
        }
    }
}

fn read_matrix(data: &[f64]) -> Mat4 {
    SMatrix::from_fn(|r, c| Complex64::new(data[2 * (4 * r + c)], data[2 * (4 * r + c) + 1]))
}

fn write_chunk<W: Write>(w: &mut W, data: &[f64]) -> Result<()> {
    w.write_all(&(data.len() as u64).to_le_bytes())?;
    for v in data {
        w.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}

fn read_chunk<R: Read>(r: &mut R, limit: u64) -> Result<Vec<f64>> {
    let n = read_u64(r)?;
    if n > limit {
        return Err(Error::Consistency(format!(
            "chunk of {n} entries exceeds expected {limit}"
        )));
    }
    let mut out = Vec::with_capacity(n as usize);
    let mut b = [0u8; 8];
    for _ in 0..n {
        r.read_exact(&mut b)?;
        out.push(f64::from_le_bytes(b));
    }
    Ok(out)
}

pub fn write_kernels<W: Write>(
    w: &mut W,
    header: &ContainerHeader,
    sectors: &[SectorKernel],
) -> Result<()> {
    let json = serde_json::to_vec(header)?;
    w.write_all(MAGIC)?;
    w.write_all(&(json.len() as u64).to_le_bytes())?;
    w.write_all(&json)?;
    for s in sectors {
        let mut values = Vec::with_capacity(32 * s.values.len());
        for m in &s.values {
            push_matrix(&mut values, m);
        }
        write_chunk(w, &values)?;
        let mut modes = Vec::with_capacity(36 * s.modes.len());
        for m in &s.modes {
            modes.extend_from_slice(&m.k);
            push_matrix(&mut modes, &m.matrix);
        }
        write_chunk(w, &modes)?;
    }
    Ok(())
}

pub fn read_kernels<R: Read>(r: &mut R) -> Result<(ContainerHeader, Vec<SectorKernel>)> {
    let mut magic = [0u8; 8];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Consistency("not a kernel container".into()));
    }
    let len = read_u64(r)?;
    if len > 1 << 24 {
        return Err(Error::Consistency(format!(
            "header length {len} is implausible"
        )));
    }
    let mut json = vec![0u8; len as usize];
    r.read_exact(&mut json)?;
    let header: ContainerHeader = serde_json::from_slice(&json)?;
    header.lattice.validate()?;
    let n = header.lattice.num_displacements();
    let mut sectors = Vec::with_capacity(header.sector_labels.len());
    for masses in &header.sector_masses {
        let values = read_chunk(r, 32 * n as u64)?;
        if values.len() != 32 * n {
            return Err(Error::Consistency(
                "values chunk has the wrong length".into(),
            ));
        }
        let modes = read_chunk(r, u32::MAX as u64)?;
        if modes.len() % 36 != 0 {
            return Err(Error::Consistency(
                "modes chunk has the wrong length".into(),
            ));
        }
        sectors.push(SectorKernel {
            lattice: header.lattice,
            masses: masses.clone(),
            values: values.chunks_exact(32).map(read_matrix).collect(),
            modes: modes
                .chunks_exact(36)
                .map(|c| Mode {
                    k: [c[0], c[1], c[2], c[3]],
                    matrix: read_matrix(&c[4..]),
                })
                .collect(),
        });
    }
    Ok((header, sectors))
}

#[cfg(test)]
mod tests {
    use super::super::lattice::Dims;
    use super::super::sectors::{build_vacuum_direct, VacuumOptions};
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let lat = LatticeSpec::new(4, 2, 0.5, 0.5, Dims::D1p1).unwrap();
        let md = MassData {
            charged_masses: [0.1, 0.2, 0.3],
            neutrino_masses: [0.0, 0.01, 0.02],
            tau_reg: 0.7,
            m: 1.0,
        };
        let v = build_vacuum_direct(&md, &lat, &VacuumOptions::default()).unwrap();
        let header = ContainerHeader::new(lat, md, &v);
        let mut buf = Vec::new();
        write_kernels(&mut buf, &header, &v).unwrap();
        let (h2, back) = read_kernels(&mut buf.as_slice()).unwrap();
        assert_eq!(h2, header);
        assert_eq!(back, v);
    }

    #[test]
    fn rejects_bad_magic() {
        let buf = b"NOTAKRNL\0\0\0\0\0\0\0\0".to_vec();
        assert!(read_kernels(&mut buf.as_slice()).is_err());
    }
}
