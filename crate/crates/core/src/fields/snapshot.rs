//! Binary field snapshots.
//!
//! Layout: 8-byte magic `QTHALF\0\0`, `u32` version, `u32` flags, then
//! little-endian `u32` dims `N, n_tan (N−1 times), n_wall, components`,
//! then `f64` samples row-major over `[n_tan…, n_wall, components]`.

use std::io::{Read, Write};

use super::field::ScalarField;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"QTHALF\0\0";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub dim: usize,
    pub n_tan: usize,
    pub n_wall: usize,
    pub components: usize,
    /// Samples in file order.
    pub data: Vec<f64>,
}

impl Snapshot {
    pub fn from_fields(fields: &[&ScalarField<f64>]) -> Result<Self> {
        let g = *fields
            .first()
            .ok_or_else(|| Error::Snapshot("no components".into()))?
            .grid();
        if fields.iter().any(|f| *f.grid() != g) {
            return Err(Error::GridMismatch("snapshot components on different grids".into()));
        }
        let k = fields.len();
        let mut data = vec![0.0; g.len() * k];
        for (c, f) in fields.iter().enumerate() {
            for (i, v) in f.data().iter().enumerate() {
                data[i * k + c] = *v;
            }
        }
        Ok(Snapshot { dim: g.dim(), n_tan: g.n_tan(), n_wall: g.n_wall(), components: k, data })
    }

    /// Split into component fields on `grid`, which must match the stored dims.
    pub fn into_fields(self, grid: &Grid) -> Result<Vec<ScalarField<f64>>> {
        if grid.dim() != self.dim || grid.n_tan() != self.n_tan || grid.n_wall() != self.n_wall {
            return Err(Error::GridMismatch(format!(
                "snapshot dims (N={}, n_tan={}, n_wall={}) differ from grid",
                self.dim, self.n_tan, self.n_wall
            )));
        }
        let k = self.components;
        (0..k)
            .map(|c| ScalarField::from_vec(grid, self.data.iter().skip(c).step_by(k).copied().collect()))
            .collect()
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&VERSION.to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        let mut dims = vec![self.dim as u32];
        dims.extend(std::iter::repeat(self.n_tan as u32).take(self.dim - 1));
        dims.push(self.n_wall as u32);
        dims.push(self.components as u32);
        for d in dims {
            w.write_all(&d.to_le_bytes())?;
        }
        for v in &self.data {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_from(r: &mut impl Read) -> Result<Self> {
        let io = |e: std::io::Error| Error::Snapshot(e.to_string());
        let mut header = [0u8; 16];
        r.read_exact(&mut header).map_err(io)?;
        if &header[..8] != MAGIC {
            return Err(Error::Snapshot("bad magic".into()));
        }
        let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
        if version != VERSION {
            return Err(Error::Snapshot(format!("unsupported version {version}")));
        }
        let mut read_u32 = || -> Result<usize> {
            let mut b = [0u8; 4];
            r.read_exact(&mut b).map_err(io)?;
            Ok(u32::from_le_bytes(b) as usize)
        };
        let dim = read_u32()?;
        if dim != 2 && dim != 3 {
            return Err(Error::Snapshot(format!("dimension {dim}")));
        }
        let n_tan = read_u32()?;
        for _ in 1..dim - 1 {
            if read_u32()? != n_tan {
                return Err(Error::Snapshot("unequal tangential sizes".into()));
            }
        }
        let n_wall = read_u32()?;
        let components = read_u32()?;
        let count = n_tan.pow(dim as u32 - 1) * n_wall * components;
        let mut bytes = vec![0u8; count * 8];
        r.read_exact(&mut bytes).map_err(io)?;
        let data = bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
        Ok(Snapshot { dim, n_tan, n_wall, components, data })
    }

    pub fn save(&self, path: &std::path::Path) -> Result<()> {
        let err = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
        let mut f = std::io::BufWriter::new(std::fs::File::create(path).map_err(err)?);
        self.write_to(&mut f).map_err(err)?;
        f.flush().map_err(err)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let err = |e: std::io::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
        let mut f = std::io::BufReader::new(std::fs::File::open(path).map_err(err)?);
        Self::read_from(&mut f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_layout() {
        let g = Grid::new(3, 4, 1.0, 8, 1.0).unwrap();
        let a = ScalarField::from_fn(&g, |x| x[0] + 10.0 * x[2]);
        let b = ScalarField::from_fn(&g, |x| x[1]);
        let snap = Snapshot::from_fields(&[&a, &b]).unwrap();
        let mut bytes = Vec::new();
        snap.write_to(&mut bytes).unwrap();
        assert_eq!(bytes.len(), 16 + 5 * 4 + 4 * 4 * 8 * 2 * 8);
        assert_eq!(&bytes[16..20], &3u32.to_le_bytes());
        let back = Snapshot::read_from(&mut bytes.as_slice()).unwrap();
        assert_eq!(back, snap);
        let fields = back.into_fields(&g).unwrap();
        assert_eq!(fields[0], a);
        assert_eq!(fields[1], b);
    }

    #[test]
    fn rejects_bad_magic() {
        let bytes = [0u8; 40];
        assert!(matches!(Snapshot::read_from(&mut &bytes[..]), Err(Error::Snapshot(_))));
    }
}
