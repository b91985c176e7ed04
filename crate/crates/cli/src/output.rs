//! All-or-nothing file output.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use sparseproc::Error;

/// Why a run produced no output.
#[derive(Debug)]
pub enum Failure {
    Experiment(Error),
    Io { path: PathBuf, source: io::Error },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Experiment(e)
    }
}

impl Failure {
    pub fn to_json(&self) -> Value {
        match self {
            Failure::Experiment(e) => e.to_json(),
            Failure::Io { path, source } => json!({
                "error": { "kind": "io", "message": source.to_string(), "path": path.display().to_string() }
            }),
        }
    }

    /// 2 for configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Experiment(Error::Config { .. }) => 2,
            _ => 1,
        }
    }
}

fn io_failure(path: &Path) -> impl FnOnce(io::Error) -> Failure + '_ {
    move |source| Failure::Io { path: path.to_path_buf(), source }
}

/// Writes every `(file name, contents)` pair into `dir`.
///
/// Contents go to hidden temporary files first, which are synced and then
/// renamed over the targets. If any temporary file cannot be written, all of
/// them are removed and no target is touched.
pub fn write_all(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, Failure> {
    fs::create_dir_all(dir).map_err(io_failure(dir))?;
    let pid = std::process::id();
    let mut staged: Vec<(PathBuf, PathBuf)> = Vec::with_capacity(files.len());
    let stage = |name: &str, contents: &str| -> Result<(PathBuf, PathBuf), Failure> {
        let target = dir.join(name);
        let tmp = dir.join(format!(".{name}.{pid}.tmp"));
        let mut f = fs::File::create(&tmp).map_err(io_failure(&tmp))?;
        let written = f.write_all(contents.as_bytes()).and_then(|_| f.sync_all());
        if let Err(source) = written {
            let _ = fs::remove_file(&tmp);
            return Err(Failure::Io { path: tmp, source });
        }
        Ok((tmp, target))
    };
    for (name, contents) in files {
        match stage(name, contents) {
            Ok(pair) => staged.push(pair),
            Err(e) => {
                for (tmp, _) in &staged {
                    let _ = fs::remove_file(tmp);
                }
                return Err(e);
            }
        }
    }
    let mut written = Vec::with_capacity(staged.len());
    for (tmp, target) in staged {
        fs::rename(&tmp, &target).map_err(io_failure(&target))?;
        written.push(target);
    }
    Ok(written)
}
