//! Binary checkpoint format.
//!
//! Layout (all little-endian):
//!
//! | bytes | content                         |
//! |-------|---------------------------------|
//! | 5     | magic `BMHD1`                   |
//! | 4     | dim (u32)                       |
//! | 4     | points per axis N (u32)         |
//! | 8     | time (f64)                      |
//! | 4     | field count (u32)               |
//! | ...   | per field, N^dim `(re, im)` f64 pairs |
//!
//! Coefficients are written in row-major wavenumber order: axis 0 slowest,
//! each axis running `k = -N/2 .. N/2 - 1`. Nyquist entries are written as zero.

use std::io::{Read, Write};

use num_complex::Complex64;

use super::field::ScalarField;
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 5] = b"BMHD1";

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub grid: Grid,
    pub time: f64,
    pub fields: Vec<ScalarField>,
}

/// Maps the i-th entry of the row-major wavenumber order to the grid's flat FFT index.
fn wavenumber_order(grid: &Grid) -> Vec<usize> {
    let n = grid.n();
    let dim = grid.dim();
    (0..grid.len())
        .map(|pos| {
            let mut rem = pos;
            let mut digits = [0usize; 3];
            for axis in (0..dim).rev() {
                digits[axis] = rem % n;
                rem /= n;
            }
            let mut idx = 0usize;
            for &d in &digits[..dim] {
                // Position d carries wavenumber d - n/2.
                let k = d as i64 - (n / 2) as i64;
                idx = idx * n + k.rem_euclid(n as i64) as usize;
            }
            idx
        })
        .collect()
}

pub fn write_checkpoint<W: Write>(mut w: W, time: f64, fields: &[&ScalarField]) -> Result<()> {
    let grid = fields
        .first()
        .map(|f| f.grid().clone())
        .ok_or_else(|| Error::Checkpoint("no fields to write".into()))?;
    if fields.iter().any(|f| !f.grid().same_as(&grid)) {
        return Err(Error::GridMismatch);
    }
    w.write_all(MAGIC)?;
    w.write_all(&(grid.dim() as u32).to_le_bytes())?;
    w.write_all(&(grid.n() as u32).to_le_bytes())?;
    w.write_all(&time.to_le_bytes())?;
    w.write_all(&(fields.len() as u32).to_le_bytes())?;
    let order = wavenumber_order(&grid);
    let mut buf = Vec::with_capacity(grid.len() * 16);
    for f in fields {
        buf.clear();
        for &idx in &order {
            let c = f.coeffs()[idx];
            buf.extend_from_slice(&c.re.to_le_bytes());
            buf.extend_from_slice(&c.im.to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    Ok(())
}

fn read_array<const K: usize, R: Read>(r: &mut R) -> Result<[u8; K]> {
    let mut b = [0u8; K];
    r.read_exact(&mut b)
        .map_err(|e| Error::Checkpoint(format!("truncated header: {e}")))?;
    Ok(b)
}

pub fn read_checkpoint<R: Read>(mut r: R) -> Result<Checkpoint> {
    let magic: [u8; 5] = read_array(&mut r)?;
    if &magic != MAGIC {
        return Err(Error::Checkpoint(format!("bad magic {magic:?}")));
    }
    let dim = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let n = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let time = f64::from_le_bytes(read_array(&mut r)?);
    let count = u32::from_le_bytes(read_array(&mut r)?) as usize;
    let grid = Grid::new(dim, n).map_err(|e| Error::Checkpoint(format!("header grid: {e}")))?;
    let order = wavenumber_order(&grid);
    let mut fields = Vec::with_capacity(count);
    let mut raw = vec![0u8; grid.len() * 16];
    for fi in 0..count {
        r.read_exact(&mut raw)
            .map_err(|e| Error::Checkpoint(format!("truncated field {fi}: {e}")))?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
        for (pos, chunk) in raw.chunks_exact(16).enumerate() {
            let re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
            let im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
            coeffs[order[pos]] = Complex64::new(re, im);
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Checkpoint(format!("non-finite coefficient in field {fi}")));
        }
        let f = ScalarField::from_raw(&grid, coeffs);
        if f.hermitian_defect() > 1e-12 * f.max_abs_coeff() || f.nyquist_content() != 0.0 {
            return Err(Error::Checkpoint(format!("field {fi} is not a real field")));
        }
        fields.push(f);
    }
    Ok(Checkpoint { grid, time, fields })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::make_grid;

    #[test]
    fn header_layout() {
        let g = make_grid(2, 16).unwrap();
        let f = ScalarField::mode(&g, &[1, 2], 1.0, 0.3).unwrap();
        let mut bytes = Vec::new();
        write_checkpoint(&mut bytes, 0.25, &[&f]).unwrap();
        assert_eq!(&bytes[..5], b"BMHD1");
        assert_eq!(u32::from_le_bytes(bytes[5..9].try_into().unwrap()), 2);
        assert_eq!(u32::from_le_bytes(bytes[9..13].try_into().unwrap()), 16);
        assert_eq!(f64::from_le_bytes(bytes[13..21].try_into().unwrap()), 0.25);
        assert_eq!(u32::from_le_bytes(bytes[21..25].try_into().unwrap()), 1);
        assert_eq!(bytes.len(), 25 + 256 * 16);
        // First entry is k = (-8, -8), a Nyquist corner: zero.
        assert!(bytes[25..41].iter().all(|&b| b == 0));
        // k = (1, 2) sits at position (1 + 8) * 16 + (2 + 8).
        let pos = 25 + ((9 * 16) + 10) * 16;
        let re = f64::from_le_bytes(bytes[pos..pos + 8].try_into().unwrap());
        assert!((re - 0.5 * 0.3f64.cos()).abs() < 1e-15);
    }

    #[test]
    fn bit_exact_round_trip() {
        let g = make_grid(3, 16).unwrap();
        let f = ScalarField::from_fn(&g, |x| (x[0] + x[1]).sin() * (2.0 * x[2]).cos()).unwrap();
        let h = ScalarField::mode(&g, &[3, -1, 2], 0.7, 1.1).unwrap();
        let mut bytes = Vec::new();
        write_checkpoint(&mut bytes, 1.5, &[&f, &h]).unwrap();
        let cp = read_checkpoint(&bytes[..]).unwrap();
        assert_eq!(cp.time, 1.5);
        assert_eq!(cp.fields.len(), 2);
        for (a, b) in cp.fields.iter().zip([&f, &h]) {
            for (x, y) in a.coeffs().iter().zip(b.coeffs()) {
                assert_eq!(x.re.to_bits(), y.re.to_bits());
                assert_eq!(x.im.to_bits(), y.im.to_bits());
            }
        }
    }

    #[test]
    fn rejects_bad_magic_and_truncation() {
        assert!(matches!(read_checkpoint(&b"XXXXX"[..]), Err(Error::Checkpoint(_))));
        let g = make_grid(2, 16).unwrap();
        let f = ScalarField::zeros(&g);
        let mut bytes = Vec::new();
        write_checkpoint(&mut bytes, 0.0, &[&f]).unwrap();
        bytes.truncate(bytes.len() - 1);
        assert!(matches!(read_checkpoint(&bytes[..]), Err(Error::Checkpoint(_))));
    }
}
