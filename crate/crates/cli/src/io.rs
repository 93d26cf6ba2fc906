//! File formats: binary snapshots, PGM images and the CSV time series.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use tfche_core::diagnostics::SeriesRow;
use tfche_core::field::{Field, Grid2D};

use crate::error::{CliError, CliResult};

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"TFCH";
pub const SNAPSHOT_VERSION: u32 = 1;

/// Column names of the series CSV, in order.
pub const SERIES_HEADER: [&str; 6] = ["step", "t", "energy", "mass", "length_sf", "length_energy"];

/// Field dump: `"TFCH"`, then little-endian `u32` version, `u32` nx, `u32` ny,
/// `f64` alpha, `f64` epsilon, `f64` t and nx·ny `f64` values, x fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotFile {
    pub nx: u32,
    pub ny: u32,
    pub alpha: f64,
    pub epsilon: f64,
    pub t: f64,
    pub values: Vec<f64>,
}

impl SnapshotFile {
    pub fn from_field(u: &Field, alpha: f64, epsilon: f64, t: f64) -> Self {
        let g = u.grid();
        Self {
            nx: g.nx() as u32,
            ny: g.ny() as u32,
            alpha,
            epsilon,
            t,
            values: u.values().to_vec(),
        }
    }

    /// Rebuilds the field on a grid of the given physical size.
    pub fn to_field(&self, lx: f64, ly: f64) -> CliResult<Field> {
        let grid = Grid2D::new(self.nx as usize, self.ny as usize, lx, ly)?;
        Ok(Field::from_values(grid, self.values.clone())?)
    }

    pub fn write_to(&self, w: &mut impl Write) -> std::io::Result<()> {
        w.write_all(SNAPSHOT_MAGIC)?;
        for v in [SNAPSHOT_VERSION, self.nx, self.ny] {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in [self.alpha, self.epsilon, self.t] {
            w.write_all(&v.to_le_bytes())?;
        }
        for v in &self.values {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    /// Parses a snapshot; `Err` carries a description of what is wrong.
    pub fn read_from(r: &mut impl Read) -> Result<Self, String> {
        let mut magic = [0u8; 4];
        read_exact(r, &mut magic)?;
        if &magic != SNAPSHOT_MAGIC {
            return Err("bad magic bytes".into());
        }
        let version = read_u32(r)?;
        if version != SNAPSHOT_VERSION {
            return Err(format!("unsupported version {version}"));
        }
        let nx = read_u32(r)?;
        let ny = read_u32(r)?;
        let alpha = read_f64(r)?;
        let epsilon = read_f64(r)?;
        let t = read_f64(r)?;
        let n = nx as usize * ny as usize;
        let mut bytes = vec![0u8; n * 8];
        read_exact(r, &mut bytes)?;
        let values = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mut extra = [0u8; 1];
        if r.read(&mut extra).map_err(|e| e.to_string())? != 0 {
            return Err("trailing bytes after field values".into());
        }
        Ok(Self {
            nx,
            ny,
            alpha,
            epsilon,
            t,
            values,
        })
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_to(&mut w)
            .and_then(|_| w.flush())
            .map_err(|e| CliError::io(path, e))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let file = File::open(path).map_err(|e| CliError::io(path, e))?;
        Self::read_from(&mut BufReader::new(file)).map_err(|r| CliError::format(path, r))
    }
}

fn read_exact(r: &mut impl Read, buf: &mut [u8]) -> Result<(), String> {
    r.read_exact(buf).map_err(|_| "file truncated".to_string())
}

fn read_u32(r: &mut impl Read) -> Result<u32, String> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64, String> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}

/// Gray level of `u`: `[-1, 1]` maps linearly onto `[0, 255]`, clamped,
/// rounding half up (so `u = 0` gives 128).
pub fn gray_level(u: f64) -> u8 {
    if u.is_nan() {
        return 0;
    }
    let v = (u + 1.0) * 127.5;
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Binary PGM ("P5"). The first image row is the top of the domain (largest y).
pub fn pgm_bytes(nx: usize, ny: usize, values: &[f64]) -> Vec<u8> {
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(nx * ny);
    for j in (0..ny).rev() {
        out.extend(values[j * nx..(j + 1) * nx].iter().map(|&u| gray_level(u)));
    }
    out
}

pub fn write_pgm(path: &Path, snap: &SnapshotFile) -> CliResult<()> {
    let bytes = pgm_bytes(snap.nx as usize, snap.ny as usize, &snap.values);
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Streams series rows to CSV. Energy is written per unit area and mass as
/// the mean of `u`.
pub struct SeriesWriter {
    inner: csv::Writer<File>,
    path: std::path::PathBuf,
}

impl SeriesWriter {
    pub fn create(path: &Path) -> CliResult<Self> {
        let file = File::create(path).map_err(|e| CliError::io(path, e))?;
        let mut inner = csv::Writer::from_writer(file);
        inner
            .write_record(SERIES_HEADER)
            .map_err(|e| csv_error(path, e))?;
        Ok(Self {
            inner,
            path: path.to_path_buf(),
        })
    }

    pub fn write(&mut self, row: &SeriesRow) -> CliResult<()> {
        let record = [
            row.step.to_string(),
            fmt_f64(row.t),
            fmt_f64(row.energy_per_area),
            fmt_f64(row.mass),
            fmt_f64(row.length_sf),
            fmt_f64(row.length_energy),
        ];
        self.inner
            .write_record(&record)
            .map_err(|e| csv_error(&self.path, e))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.inner.flush().map_err(|e| CliError::io(&self.path, e))
    }
}

/// Shortest representation that parses back to the same value.
fn fmt_f64(v: f64) -> String {
    format!("{v:e}")
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    CliError::format(path, e.to_string())
}

/// Reads the `t` column and one named column from a series CSV.
pub fn read_series_column(path: &Path, column: &str) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| {
                CliError::Usage(format!("column '{name}' not found in {}", path.display()))
            })
    };
    let it = find("t")?;
    let iy = find(column)?;
    let (mut t, mut y) = (Vec::new(), Vec::new());
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let parse = |i: usize| {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| {
                    CliError::format(path, format!("bad number on data row {}", line + 1))
                })
        };
        t.push(parse(it)?);
        y.push(parse(iy)?);
    }
    Ok((t, y))
}
