//! Binary envelope for cached matrices.
//!
//! Layout (little endian): 4 magic bytes, `u32` format version, a fixed
//! number of `u32` header fields, `u64` matrix count, then each matrix as
//! `u64` rows, `u64` cols and `rows * cols` row-major `f64` values.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub(crate) const VERSION: u32 = 1;

pub(crate) fn write(path: &Path, magic: &[u8; 4], header: &[u32], mats: &[&Matrix]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(magic)?;
    w.write_all(&VERSION.to_le_bytes())?;
    for h in header {
        w.write_all(&h.to_le_bytes())?;
    }
    w.write_all(&(mats.len() as u64).to_le_bytes())?;
    for m in mats {
        w.write_all(&(m.rows() as u64).to_le_bytes())?;
        w.write_all(&(m.cols() as u64).to_le_bytes())?;
        for v in m.as_slice() {
            w.write_all(&v.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Returns the header fields and the matrices.
pub(crate) fn read(path: &Path, magic: &[u8; 4], header_len: usize) -> Result<(Vec<u32>, Vec<Matrix>)> {
    let mut r = BufReader::new(File::open(path)?);
    let mut tag = [0u8; 4];
    r.read_exact(&mut tag)?;
    if &tag != magic {
        return Err(Error::Cache(format!(
            "{}: wrong magic bytes {:?}",
            path.display(),
            String::from_utf8_lossy(&tag)
        )));
    }
    let version = read_u32(&mut r)?;
    if version != VERSION {
        return Err(Error::Cache(format!(
            "{}: unsupported version {version}",
            path.display()
        )));
    }
    let header = (0..header_len).map(|_| read_u32(&mut r)).collect::<Result<Vec<_>>>()?;
    let count = read_u64(&mut r)?;
    let mut mats = Vec::new();
    for _ in 0..count {
        let rows = read_u64(&mut r)? as usize;
        let cols = read_u64(&mut r)? as usize;
        let len = rows
            .checked_mul(cols)
            .filter(|&l| l <= 1 << 34)
            .ok_or_else(|| Error::Cache(format!("implausible matrix size {rows}x{cols}")))?;
        let mut bytes = vec![0u8; len * 8];
        r.read_exact(&mut bytes)?;
        let data = bytes
            .chunks_exact(8)
            .map(|b| f64::from_le_bytes(b.try_into().expect("8-byte chunk")))
            .collect();
        mats.push(Matrix::from_vec(rows, cols, data)?);
    }
    let mut rest = [0u8; 1];
    if r.read(&mut rest)? != 0 {
        return Err(Error::Cache(format!("{}: trailing bytes", path.display())));
    }
    Ok((header, mats))
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64(r: &mut impl Read) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)?;
    Ok(u64::from_le_bytes(b))
}
