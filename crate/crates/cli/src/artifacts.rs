use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use permflow::Points;
use serde::Serialize;
use sha2::{Digest, Sha256};

/// 17 significant digits: round-trips every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

pub const AXES: [&str; 3] = ["x", "y", "z"];

/// Comma-separated text with a header row and LF line endings.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let mut t = Table { writer };
        t.row(header);
        t
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        self.writer
            .write_record(cells.iter().map(|c| c.as_ref()))
            .expect("writing to memory");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("flushing to memory")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Output directory that remembers a checksum for every file it writes.
pub struct OutDir {
    root: PathBuf,
    pub written: Vec<Artifact>,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).with_context(|| format!("creating output directory {}", root.display()))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.root.join(name)
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.written.push(Artifact {
            path: name.to_string(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len(),
        });
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Header for point tables: `index,x[,y[,z]]`.
pub fn point_header(dim: usize) -> Vec<String> {
    std::iter::once("index".to_string())
        .chain(AXES[..dim].iter().map(|a| a.to_string()))
        .collect()
}

pub fn point_table(points: &Points<f64>) -> Table {
    let mut t = Table::new(&point_header(points.dim()));
    for (k, p) in points.iter().enumerate() {
        let mut row = vec![k.to_string()];
        row.extend(p.iter().map(|&x| fmt_f64(x)));
        t.row(&row);
    }
    t
}

/// Reads a table written by [`point_table`] (or by hand in the same layout).
/// Rows must be listed in index order; errors name the offending line.
pub fn read_point_table(path: &Path, dim: usize) -> Result<Points<f64>> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(file);
    let header: Vec<String> = reader
        .headers()
        .with_context(|| format!("{}: reading header", path.display()))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != point_header(dim) {
        bail!(
            "{}: line 1: expected header `{}`, found `{}`",
            path.display(),
            point_header(dim).join(","),
            header.join(",")
        );
    }
    let mut coords = Vec::new();
    for (k, record) in reader.records().enumerate() {
        let line = k + 2;
        let record = record.with_context(|| format!("{}: line {}", path.display(), line))?;
        if record.len() != dim + 1 {
            bail!(
                "{}: line {}: expected {} fields, found {}",
                path.display(),
                line,
                dim + 1,
                record.len()
            );
        }
        let index: usize = record[0]
            .parse()
            .with_context(|| format!("{}: line {}: bad index `{}`", path.display(), line, &record[0]))?;
        if index != k {
            bail!(
                "{}: line {}: index {} out of order (expected {})",
                path.display(),
                line,
                index,
                k
            );
        }
        for field in record.iter().skip(1) {
            let x: f64 = field
                .parse()
                .with_context(|| format!("{}: line {}: bad number `{}`", path.display(), line, field))?;
            coords.push(x);
        }
    }
    Ok(Points::new(dim, coords)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, std::f64::consts::PI] {
            assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn point_tables_round_trip_and_report_lines() {
        let dir = tempfile::tempdir().unwrap();
        let p = Points::from_rows(2, &[[0.25, 0.75], [0.5, 1.0 / 3.0]]).unwrap();
        let path = dir.path().join("p.csv");
        fs::write(&path, point_table(&p).into_bytes()).unwrap();
        assert_eq!(read_point_table(&path, 2).unwrap(), p);

        fs::write(&path, "index,x,y\n0,0.1,0.2\n1,0.3,oops\n").unwrap();
        let e = format!("{:#}", read_point_table(&path, 2).unwrap_err());
        assert!(e.contains("line 3") && e.contains("oops"), "{}", e);
    }
}
