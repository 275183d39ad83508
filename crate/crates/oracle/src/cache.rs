//! On-disk cache of oracle reports keyed by a SHA-256 of their inputs.
//!
//! Reads take a shared advisory lock on `<dir>/.lock`, writes an exclusive
//! one. Computation happens outside the lock, so distinct keys can be
//! computed concurrently; a record is published by atomic rename.

use std::fs::{self, File, OpenOptions};
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::{Method, OracleReport, Result};

#[derive(Debug, Clone)]
pub struct OracleCache {
    dir: PathBuf,
}

impl OracleCache {
    pub fn open(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        Ok(Self { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(method: Method, inputs: &str, digits: u32) -> String {
        let text = format!("method = {method}\n{inputs}precision_digits = {digits}\n");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.txt"))
    }

    fn lock_file(&self) -> Result<File> {
        Ok(OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(self.dir.join(".lock"))?)
    }

    pub fn get(&self, method: Method, inputs: &str, digits: u32) -> Result<Option<OracleReport>> {
        let path = self.path(&Self::key(method, inputs, digits));
        let lock = self.lock_file()?;
        lock.lock_shared()?;
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        drop(lock);
        let report = OracleReport::from_record(&text)?;
        Ok((report.inputs == inputs).then_some(report))
    }

    pub fn put(&self, report: &OracleReport) -> Result<()> {
        let key = Self::key(report.method, &report.inputs, report.precision_digits);
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, report.to_record())?;
        let lock = self.lock_file()?;
        lock.lock()?;
        fs::rename(&tmp, self.path(&key))?;
        Ok(())
    }

    pub fn get_or_compute(
        &self,
        method: Method,
        inputs: &str,
        digits: u32,
        compute: impl FnOnce() -> Result<OracleReport>,
    ) -> Result<OracleReport> {
        if let Some(r) = self.get(method, inputs, digits)? {
            return Ok(r);
        }
        let r = compute()?;
        self.put(&r)?;
        Ok(r)
    }
}
