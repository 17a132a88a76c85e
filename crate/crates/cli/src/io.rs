//! Artifact writers: CSV with spec header lines, pretty JSON, and hashed
//! file names `<verb>_<spec-hash>_<grid-hash>.<ext>`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Hex characters of each hash kept in file names.
pub const NAME_HASH_LEN: usize = 16;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Hash of the compact JSON encoding. `serde_json` maps keep keys sorted,
/// so equal values hash alike.
pub fn hash_json<T: Serialize>(v: &T) -> String {
    sha256_hex(&serde_json::to_vec(v).expect("serializable"))
}

/// Location and hashes of one artifact pair.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub spec: Value,
    pub spec_hash: String,
    pub stem: PathBuf,
}

impl Artifact {
    pub fn new(dir: &Path, verb: &str, spec: Value, grid: &impl Serialize) -> Self {
        let spec_hash = hash_json(&spec);
        let grid_hash = hash_json(grid);
        let stem = dir.join(format!(
            "{verb}_{}_{}",
            &spec_hash[..NAME_HASH_LEN],
            &grid_hash[..NAME_HASH_LEN]
        ));
        Self {
            spec,
            spec_hash,
            stem,
        }
    }

    pub fn path(&self, ext: &str) -> PathBuf {
        self.stem.with_extension(ext)
    }

    pub fn write_csv(&self, table: &Table) -> Result<PathBuf> {
        let path = self.path("csv");
        write_csv(&path, &self.spec_hash, &self.spec, table)?;
        Ok(path)
    }

    /// JSON record `{spec_hash, spec, ...fields of body}`.
    pub fn write_json(&self, body: Value) -> Result<PathBuf> {
        let mut rec = serde_json::Map::new();
        rec.insert("spec_hash".into(), Value::String(self.spec_hash.clone()));
        rec.insert("spec".into(), self.spec.clone());
        match body {
            Value::Object(m) => rec.extend(m),
            other => {
                rec.insert("data".into(), other);
            }
        }
        let path = self.path("json");
        write_json(&path, &Value::Object(rec))?;
        Ok(path)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(t) => t.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<u64> for Cell {
    fn from(i: u64) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(t: &str) -> Self {
        Cell::Text(t.to_string())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// 17 significant digits; `inf`, `-inf`, `nan` for non-finite values.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn write_csv(path: &Path, spec_hash: &str, spec: &Value, table: &Table) -> Result<()> {
    let mut buf = Vec::new();
    writeln!(buf, "# spec-hash: {spec_hash}")?;
    writeln!(buf, "# spec: {}", serde_json::to_string(spec)?)?;
    {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(&mut buf);
        w.write_record(&table.columns)?;
        for row in &table.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
    }
    write_file(path, &buf)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut buf = serde_json::to_vec_pretty(value)?;
    buf.push(b'\n');
    write_file(path, &buf)
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Reads the `# spec-hash:` line of a CSV artifact.
pub fn read_spec_hash(text: &str) -> Option<&str> {
    text.lines()
        .next()?
        .strip_prefix("# spec-hash: ")
        .map(str::trim)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(0.1).parse::<f64>().unwrap(), 0.1);
    }

    #[test]
    fn csv_has_hash_header() {
        let dir = std::env::temp_dir().join(format!("aiprod-io-{}", std::process::id()));
        let spec = serde_json::json!({"b": 1, "a": [0.5]});
        let art = Artifact::new(&dir, "sweep", spec, &vec![0.0, 1.0]);
        let mut t = Table::new(["a", "m"]);
        t.push(vec![0.5.into(), 3usize.into()]);
        let path = art.write_csv(&t).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(read_spec_hash(&text), Some(art.spec_hash.as_str()));
        assert!(text.contains("# spec: {\"a\":[0.5],\"b\":1}\n"));
        assert!(text.ends_with("a,m\r\n5.0000000000000000e-1,3\r\n"));
        let name = path.file_name().unwrap().to_str().unwrap();
        assert!(name.starts_with(&format!("sweep_{}_", &art.spec_hash[..NAME_HASH_LEN])));
        fs::remove_dir_all(dir).unwrap();
    }
}
