use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::{Error, Result};

/// Float formatting for CSV cells: 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Headerful CSV text with a leading `# config_hash=` comment.
pub struct CsvTable {
    text: String,
}

impl CsvTable {
    pub fn new(config_hash: &str, columns: &[&str]) -> Self {
        let mut text = format!("# config_hash={config_hash}\n");
        text.push_str(&columns.join(","));
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

/// Collects the files a command writes into one directory.
pub struct OutputDir {
    root: PathBuf,
    written: Vec<PathBuf>,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| Error::Io(format!("{}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn write_text(&mut self, name: &str, text: &str) -> Result<PathBuf> {
        let path = self.root.join(name);
        std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.written.push(path.clone());
        Ok(path)
    }

    pub fn write_csv(&mut self, name: &str, table: &CsvTable) -> Result<PathBuf> {
        self.write_text(name, table.as_str())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf> {
        let mut text = serde_json::to_string_pretty(value).expect("summary serializes");
        text.push('\n');
        self.write_text(name, &text)
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    pub fn into_files(self) -> Vec<PathBuf> {
        self.written
    }
}

/// Config hash, header and data rows of a CSV file.
pub type CsvContents = (Option<String>, Vec<String>, Vec<Vec<String>>);

/// Reads a CSV written by [`CsvTable`], returning the config hash and the
/// data rows split into cells.
pub fn read_csv(path: &Path) -> Result<CsvContents> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut hash = None;
    let mut header = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if let Some(h) = line.strip_prefix("# config_hash=") {
            hash = Some(h.trim().to_string());
        } else if line.starts_with('#') || line.trim().is_empty() {
            continue;
        } else if header.is_none() {
            header = Some(line.split(',').map(str::to_string).collect());
        } else {
            rows.push(line.split(',').map(|c| c.trim().to_string()).collect());
        }
    }
    let header =
        header.ok_or_else(|| Error::Io(format!("{}: missing CSV header", path.display())))?;
    Ok((hash, header, rows))
}
