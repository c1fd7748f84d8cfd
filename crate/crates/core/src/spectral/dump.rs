//! Binary field dumps.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! 0   4  magic "RWFD"
//! 4   1  version (1)
//! 5   1  tag: 0 physical real, 1 spectral, 2 physical complex
//! 6   2  name length in bytes (u16)
//! 8   4  n_points (u32)
//! 12  8  box_length (f64)
//! 20  .. name (UTF-8)
//! ..  .. row-major samples: f64 per point (tag 0) or re,im f64 pairs
//! ```

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use super::field::{Field, Representation};
use super::grid::Grid;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"RWFD";
pub const VERSION: u8 = 1;
const HEADER_LEN: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum DumpTag {
    PhysicalReal = 0,
    Spectral = 1,
    PhysicalComplex = 2,
}

impl DumpTag {
    fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(DumpTag::PhysicalReal),
            1 => Ok(DumpTag::Spectral),
            2 => Ok(DumpTag::PhysicalComplex),
            other => Err(Error::Dump(format!("unknown representation tag {other}"))),
        }
    }
}

/// A decoded dump: the field plus its stored name.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedField {
    pub name: String,
    pub field: Field,
}

pub fn encode_field(name: &str, field: &Field) -> Result<Vec<u8>> {
    let name_len = u16::try_from(name.len())
        .map_err(|_| Error::Dump(format!("field name too long ({} bytes)", name.len())))?;
    let grid = field.grid();
    let tag = match field.representation() {
        Representation::Spectral => DumpTag::Spectral,
        Representation::Physical if field.data().iter().all(|z| z.im == 0.0) => {
            DumpTag::PhysicalReal
        }
        Representation::Physical => DumpTag::PhysicalComplex,
    };
    let per = if tag == DumpTag::PhysicalReal { 8 } else { 16 };
    let mut out = Vec::with_capacity(HEADER_LEN + name.len() + per * grid.len());
    out.extend_from_slice(MAGIC);
    out.push(VERSION);
    out.push(tag as u8);
    out.extend_from_slice(&name_len.to_le_bytes());
    out.extend_from_slice(&(grid.n_points() as u32).to_le_bytes());
    out.extend_from_slice(&grid.box_length().to_le_bytes());
    out.extend_from_slice(name.as_bytes());
    for z in field.data() {
        out.extend_from_slice(&z.re.to_le_bytes());
        if tag != DumpTag::PhysicalReal {
            out.extend_from_slice(&z.im.to_le_bytes());
        }
    }
    Ok(out)
}

pub fn decode_field(bytes: &[u8]) -> Result<NamedField> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Dump(format!("truncated header ({} bytes)", bytes.len())));
    }
    if &bytes[0..4] != MAGIC {
        return Err(Error::Dump("bad magic".into()));
    }
    if bytes[4] != VERSION {
        return Err(Error::Dump(format!("unsupported version {}", bytes[4])));
    }
    let tag = DumpTag::from_byte(bytes[5])?;
    let name_len = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let n_points = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes")) as usize;
    let box_length = f64::from_le_bytes(bytes[12..20].try_into().expect("8 bytes"));
    // Cap before Grid::new so a hostile header cannot request a huge buffer.
    if n_points > 1 << 14 {
        return Err(Error::Dump(format!("n_points {n_points} too large")));
    }
    let grid = Grid::new(n_points, box_length).map_err(|e| Error::Dump(e.to_string()))?;
    let name_end = HEADER_LEN + name_len;
    let name = bytes
        .get(HEADER_LEN..name_end)
        .ok_or_else(|| Error::Dump("truncated name".into()))?;
    let name = std::str::from_utf8(name)
        .map_err(|e| Error::Dump(format!("name is not UTF-8: {e}")))?
        .to_owned();
    let per = if tag == DumpTag::PhysicalReal { 8 } else { 16 };
    let body = &bytes[name_end..];
    if body.len() != per * grid.len() {
        return Err(Error::Dump(format!(
            "expected {} payload bytes, found {}",
            per * grid.len(),
            body.len()
        )));
    }
    let read = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
    let data: Vec<Complex64> = match tag {
        DumpTag::PhysicalReal => body.chunks_exact(8).map(|c| Complex64::new(read(c), 0.0)).collect(),
        _ => body
            .chunks_exact(16)
            .map(|c| Complex64::new(read(&c[..8]), read(&c[8..])))
            .collect(),
    };
    let repr = match tag {
        DumpTag::Spectral => Representation::Spectral,
        _ => Representation::Physical,
    };
    Ok(NamedField {
        name,
        field: Field::from_data(grid, repr, data)?,
    })
}

pub fn write_field(path: &Path, name: &str, field: &Field) -> Result<()> {
    let bytes = encode_field(name, field)?;
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&bytes).map_err(|e| Error::io(path, e))
}

pub fn read_field(path: &Path) -> Result<NamedField> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_field(&bytes)
}
