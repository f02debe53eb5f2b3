//! Binary checkpoints.
//!
//! Little-endian layout:
//!
//! ```text
//! "MHDW"  u32 version  u32 n  f64 L  f64 gamma  f64 t
//! û₁ û₂ b̂₁ b̂₂ ∂ₜb̂₁ ∂ₜb̂₂      each n·n complex values, row-major, (re, im) as f64
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;

use super::State;
use crate::error::{Error, Result};
use crate::field::SpectralVectorField;
use crate::grid::GridSpec;

pub const MAGIC: &[u8; 4] = b"MHDW";
pub const VERSION: u32 = 1;

pub fn write_checkpoint<W: Write>(mut out: W, state: &State, gamma: f64) -> Result<()> {
    let grid = state.grid();
    let n = u32::try_from(grid.n()).map_err(|_| Error::Format("grid too large".into()))?;
    out.write_all(MAGIC)?;
    out.write_all(&VERSION.to_le_bytes())?;
    out.write_all(&n.to_le_bytes())?;
    for v in [grid.box_length(), gamma, state.t] {
        out.write_all(&v.to_le_bytes())?;
    }
    let mut buf = Vec::with_capacity(grid.len() * 16);
    for field in [&state.u_hat, &state.b_hat, &state.bt_hat] {
        for c in 0..2 {
            buf.clear();
            for z in field.component(c) {
                buf.extend_from_slice(&z.re.to_le_bytes());
                buf.extend_from_slice(&z.im.to_le_bytes());
            }
            out.write_all(&buf)?;
        }
    }
    out.flush()?;
    Ok(())
}

fn read_array<const N: usize, R: Read>(input: &mut R, what: &str) -> Result<[u8; N]> {
    let mut b = [0u8; N];
    input.read_exact(&mut b).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Format(format!("checkpoint truncated in {what}")),
        _ => Error::Io(e),
    })?;
    Ok(b)
}

/// Returns the state and the `γ` it was written with.
pub fn read_checkpoint<R: Read>(mut input: R) -> Result<(State, f64)> {
    if &read_array::<4, _>(&mut input, "magic")? != MAGIC {
        return Err(Error::Format("not a checkpoint (bad magic)".into()));
    }
    let version = u32::from_le_bytes(read_array(&mut input, "header")?);
    if version != VERSION {
        return Err(Error::Format(format!("unsupported checkpoint version {version}")));
    }
    let n = u32::from_le_bytes(read_array(&mut input, "header")?) as usize;
    let box_length = f64::from_le_bytes(read_array(&mut input, "header")?);
    let gamma = f64::from_le_bytes(read_array(&mut input, "header")?);
    let t = f64::from_le_bytes(read_array(&mut input, "header")?);
    let grid = GridSpec::new(n, box_length).map_err(|e| Error::Format(format!("bad checkpoint grid: {e}")))?;
    let mut fields = Vec::with_capacity(3);
    let mut raw = vec![0u8; grid.len() * 16];
    for _ in 0..3 {
        let mut comps = Vec::with_capacity(2);
        for _ in 0..2 {
            input.read_exact(&mut raw).map_err(|e| match e.kind() {
                std::io::ErrorKind::UnexpectedEof => Error::Format("checkpoint truncated in coefficients".into()),
                _ => Error::Io(e),
            })?;
            let data: Vec<Complex64> = raw
                .chunks_exact(16)
                .map(|c| {
                    let re = f64::from_le_bytes(c[..8].try_into().expect("8 bytes"));
                    let im = f64::from_le_bytes(c[8..].try_into().expect("8 bytes"));
                    Complex64::new(re, im)
                })
                .collect();
            comps.push(data);
        }
        let y = comps.pop().expect("two components");
        let x = comps.pop().expect("two components");
        fields.push(SpectralVectorField::from_components(grid, x, y)?);
    }
    if input.read(&mut [0u8; 1])? != 0 {
        return Err(Error::Format("trailing bytes after checkpoint".into()));
    }
    let bt_hat = fields.pop().expect("three fields");
    let b_hat = fields.pop().expect("three fields");
    let u_hat = fields.pop().expect("three fields");
    Ok((State { u_hat, b_hat, bt_hat, t }, gamma))
}

pub fn save(path: &Path, state: &State, gamma: f64) -> Result<()> {
    write_checkpoint(BufWriter::new(File::create(path)?), state, gamma)
}

pub fn load(path: &Path) -> Result<(State, f64)> {
    read_checkpoint(BufReader::new(File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::{make_initial_data, InitialFamily, InitialParams};

    #[test]
    fn round_trip_is_bitwise() {
        let g = GridSpec::new(16, 5.0).unwrap();
        let params = InitialParams { seed: 4, a_scale: -0.3, ..InitialParams::default() };
        let mut state = State::from_initial(&make_initial_data(InitialFamily::RandomBand, &params, &g).unwrap());
        state.t = 1.75;
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &state, 0.25).unwrap();
        assert_eq!(buf.len(), 4 + 4 + 4 + 24 + 6 * 256 * 16);
        assert_eq!(&buf[..4], b"MHDW");
        let (back, gamma) = read_checkpoint(buf.as_slice()).unwrap();
        assert_eq!(back, state);
        assert_eq!(gamma, 0.25);
    }

    #[test]
    fn corrupt_files_are_format_errors() {
        let g = GridSpec::new(8, 1.0).unwrap();
        let mut buf = Vec::new();
        write_checkpoint(&mut buf, &State::zeros(g), 1.0).unwrap();
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_checkpoint(bad.as_slice()), Err(Error::Format(_))));
        assert!(matches!(read_checkpoint(&buf[..buf.len() - 3]), Err(Error::Format(_))));
        let mut long = buf.clone();
        long.push(0);
        assert!(matches!(read_checkpoint(long.as_slice()), Err(Error::Format(_))));
        let mut v2 = buf;
        v2[4] = 2;
        assert!(matches!(read_checkpoint(v2.as_slice()), Err(Error::Format(_))));
    }
}
