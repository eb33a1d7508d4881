use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug)]
pub enum CliError {
    Core(prtail::Error),
    /// Outputs were written but an iteration stopped short of its tolerance.
    NotConverged(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(prtail::Error::Parameter(_) | prtail::Error::State(_)) => 2,
            CliError::Core(prtail::Error::Io(_) | prtail::Error::Parse { .. }) => 3,
            CliError::Core(prtail::Error::Numeric(_) | prtail::Error::DegenerateFit { .. }) => 4,
            CliError::NotConverged(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::NotConverged(m) => write!(f, "not converged: {m}"),
        }
    }
}

impl From<prtail::Error> for CliError {
    fn from(e: prtail::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(prtail::Error::Io(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(prtail::Error::Io(e.into()))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn parameter(msg: impl Into<String>) -> CliError {
    CliError::Core(prtail::Error::Parameter(msg.into()))
}

/// Output directory that remembers what was written to it.
pub struct OutDir {
    root: PathBuf,
    written: Vec<String>,
}

impl OutDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root)?;
        Ok(Self { root: root.to_path_buf(), written: Vec::new() })
    }

    /// Opens `name`, writes it with `body` and records it for the manifest.
    pub fn write<F>(&mut self, name: &str, body: F) -> CliResult<()>
    where
        F: FnOnce(&mut BufWriter<File>) -> prtail::Result<()>,
    {
        let mut w = BufWriter::new(File::create(self.root.join(name))?);
        body(&mut w)?;
        w.flush()?;
        self.written.push(name.to_string());
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> CliResult<()> {
        self.write(name, |w| {
            serde_json::to_writer_pretty(&mut *w, value).map_err(std::io::Error::from)?;
            writeln!(w)?;
            Ok(())
        })
    }

    /// Writes `manifest.json`. No timestamps or absolute paths, so identical
    /// configurations give identical bytes.
    pub fn finish<P: Serialize, R: Serialize>(mut self, command: &str, parameters: &P, results: &R) -> CliResult<()> {
        let manifest = Manifest {
            tool: "prtail",
            version: env!("CARGO_PKG_VERSION"),
            library_version: prtail::VERSION,
            command,
            parameters,
            results,
            outputs: std::mem::take(&mut self.written),
        };
        self.write_json("manifest.json", &manifest)
    }
}

#[derive(Serialize)]
struct Manifest<'a, P, R> {
    tool: &'a str,
    version: &'a str,
    library_version: &'a str,
    command: &'a str,
    parameters: &'a P,
    results: &'a R,
    outputs: Vec<String>,
}

/// `0.5` → `"0.5"`, used to name per-`c` files.
pub fn tag(x: f64) -> String {
    format!("{x}")
}
