//! Text and binary layouts for grids.
//!
//! CSV files start with `#`-prefixed metadata lines followed by a header row.
//! Floats use 17 significant digits (`{:.16e}`), `.` as decimal separator and
//! `\n` line endings, so identical data always yields identical bytes.
//!
//! Binary layout (all integers and floats little-endian):
//!
//! ```text
//! offset        size        field
//! 0             8           magic  b"WQGRID01"
//! 8             4           u32    rank r (number of axes)
//! 12            4           u32    components per node c
//! 16            8 r         u64    extent of each axis
//! 16 + 8r       16 r        f64    (origin, spacing) per axis
//! 16 + 24r      8           f64    hbar (0 when not applicable)
//! 24 + 24r      8 c prod(n) f64    values, row-major (last axis fastest),
//!                                  components innermost
//! ```
//!
//! Complex vector fields store `c = 6` components: `re, im` for x, y, z.

use crate::error::{Error, Result};
use crate::spectral::{Grid3, VectorField};
use crate::wigner::WignerGrid;
use crate::Complex64;
use std::fmt::Write as _;

pub const MAGIC: &[u8; 8] = b"WQGRID01";

/// Format a float with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Render a CSV document.
pub fn csv_document(meta: &[(&str, String)], header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = String::new();
    for (k, v) in meta {
        let _ = writeln!(out, "# {k}={v}");
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_f64).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// `x,p,f` triplets with grid metadata.
pub fn wigner_csv(grid: &WignerGrid) -> String {
    let meta = [
        ("kind", "wigner".to_string()),
        ("nx", grid.nx.to_string()),
        ("np", grid.np.to_string()),
        ("x0", fmt_f64(grid.x0)),
        ("dx", fmt_f64(grid.dx)),
        ("p0", fmt_f64(grid.p0)),
        ("dp", fmt_f64(grid.dp)),
        ("hbar", fmt_f64(grid.hbar)),
    ];
    let rows = (0..grid.np).flat_map(|ip| (0..grid.nx).map(move |ix| vec![grid.x(ix), grid.p(ip), grid.value(ix, ip)]));
    csv_document(&meta, &["x", "p", "f"], rows)
}

/// Generic binary grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BinaryGrid {
    pub extents: Vec<u64>,
    pub origin: Vec<f64>,
    pub spacing: Vec<f64>,
    pub components: u32,
    pub hbar: f64,
    pub data: Vec<f64>,
}

impl BinaryGrid {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(24 + 24 * self.extents.len() + 8 * self.data.len());
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&(self.extents.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.components.to_le_bytes());
        for e in &self.extents {
            out.extend_from_slice(&e.to_le_bytes());
        }
        for (o, s) in self.origin.iter().zip(&self.spacing) {
            out.extend_from_slice(&o.to_le_bytes());
            out.extend_from_slice(&s.to_le_bytes());
        }
        out.extend_from_slice(&self.hbar.to_le_bytes());
        for v in &self.data {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(8)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let rank = cur.u32()? as usize;
        let components = cur.u32()?;
        let extents = (0..rank).map(|_| cur.u64()).collect::<Result<Vec<_>>>()?;
        let mut origin = Vec::with_capacity(rank);
        let mut spacing = Vec::with_capacity(rank);
        for _ in 0..rank {
            origin.push(cur.f64()?);
            spacing.push(cur.f64()?);
        }
        let hbar = cur.f64()?;
        let count = extents
            .iter()
            .try_fold(components as u64, |acc, &e| acc.checked_mul(e))
            .ok_or_else(|| Error::Format("extent overflow".into()))? as usize;
        let data = (0..count).map(|_| cur.f64()).collect::<Result<Vec<_>>>()?;
        if cur.pos != bytes.len() {
            return Err(Error::Format(format!("{} trailing bytes", bytes.len() - cur.pos)));
        }
        Ok(BinaryGrid {
            extents,
            origin,
            spacing,
            components,
            hbar,
            data,
        })
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(Error::Format("truncated grid file".into()));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }
    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }
    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

impl From<&WignerGrid> for BinaryGrid {
    fn from(g: &WignerGrid) -> Self {
        BinaryGrid {
            extents: vec![g.np as u64, g.nx as u64],
            origin: vec![g.p0, g.x0],
            spacing: vec![g.dp, g.dx],
            components: 1,
            hbar: g.hbar,
            data: g.f.clone(),
        }
    }
}

impl From<&VectorField> for BinaryGrid {
    fn from(field: &VectorField) -> Self {
        let g = field.grid;
        let n = g.n as u64;
        let mut data = Vec::with_capacity(6 * g.cells());
        for idx in 0..g.cells() {
            for c in &field.comps {
                data.push(c[idx].re);
                data.push(c[idx].im);
            }
        }
        BinaryGrid {
            extents: vec![n, n, n],
            origin: vec![0.0; 3],
            spacing: vec![g.spacing(); 3],
            components: 6,
            hbar: 0.0,
            data,
        }
    }
}

impl BinaryGrid {
    pub fn to_wigner(&self) -> Result<WignerGrid> {
        if self.extents.len() != 2 || self.components != 1 {
            return Err(Error::Format("not a 2-axis scalar grid".into()));
        }
        Ok(WignerGrid {
            p0: self.origin[0],
            dp: self.spacing[0],
            np: self.extents[0] as usize,
            x0: self.origin[1],
            dx: self.spacing[1],
            nx: self.extents[1] as usize,
            f: self.data.clone(),
            hbar: self.hbar,
            imag_residue: 0.0,
        })
    }

    pub fn to_vector_field(&self) -> Result<VectorField> {
        if self.extents.len() != 3 || self.components != 6 || self.extents.iter().any(|&e| e != self.extents[0]) {
            return Err(Error::Format("not a cubic complex vector grid".into()));
        }
        let n = self.extents[0] as usize;
        let grid = Grid3::new(n, self.spacing[0] * n as f64)?;
        let mut field = VectorField::zeros(grid);
        for idx in 0..grid.cells() {
            for d in 0..3 {
                let base = 6 * idx + 2 * d;
                field.comps[d][idx] = Complex64::new(self.data[base], self.data[base + 1]);
            }
        }
        Ok(field)
    }
}
