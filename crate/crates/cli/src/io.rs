use std::fs;
use std::path::{Path, PathBuf};

use gbs_core::encoding::GbsProgram;
use gbs_core::numerics::{CMatrix, UnitaryMatrix, C64};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Program file: squeezing, interferometer rows of `[re, im]` pairs, and
/// per-mode transmission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProgramFile {
    pub r: Vec<f64>,
    #[serde(rename = "U")]
    pub u: Vec<Vec<[f64; 2]>>,
    pub loss: Vec<f64>,
}

impl From<&GbsProgram> for ProgramFile {
    fn from(p: &GbsProgram) -> Self {
        let m = p.unitary().matrix();
        let u = (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
        Self { r: p.squeezing().to_vec(), u, loss: p.loss().to_vec() }
    }
}

impl ProgramFile {
    pub fn parse(text: &str) -> CliResult<GbsProgram> {
        let file: Self = serde_json::from_str(text).map_err(|e| CliError::usage(format!("program JSON: {e}")))?;
        let n = file.u.len();
        if let Some(row) = file.u.iter().position(|row| row.len() != n) {
            return Err(CliError::usage(format!(
                "program JSON: U row {row} has {} entries, expected {n}",
                file.u[row].len()
            )));
        }
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(file.u[i][j][0], file.u[i][j][1]));
        Ok(GbsProgram::new(file.r, UnitaryMatrix::new(m)?, file.loss)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Collects every output in memory so nothing is written unless the whole
/// command succeeded.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
    inputs: Vec<FileDigest>,
}

impl Artifacts {
    pub fn add(&mut self, name: &str, contents: impl Into<Vec<u8>>) {
        self.files.push((name.to_owned(), contents.into()));
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> CliResult<String> {
        let text = read_text(path)?;
        self.inputs.push(FileDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(text.as_bytes()),
            bytes: text.len(),
        });
        Ok(text)
    }

    pub fn inputs(&self) -> &[FileDigest] {
        &self.inputs
    }

    /// Writes each file through a temporary name and a rename; returns their
    /// digests.
    pub fn commit(&self, dir: &Path) -> CliResult<Vec<FileDigest>> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        self.files
            .iter()
            .map(|(name, bytes)| {
                write_atomic(&dir.join(name), bytes)?;
                Ok(FileDigest { path: name.clone(), sha256: sha256_hex(bytes), bytes: bytes.len() })
            })
            .collect()
    }
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp: PathBuf = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}
