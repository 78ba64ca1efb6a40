use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use gardner_core::Trajectory;
use serde::Serialize;

use crate::error::{io_err, CliError};

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

/// Long-format CSV with header `t,n,u`.
pub fn write_trajectory_csv(path: &Path, tr: &Trajectory) -> Result<(), CliError> {
    let f = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(f);
    let mut go = || -> std::io::Result<()> {
        writeln!(w, "t,n,u")?;
        for (t, row) in tr.times.iter().zip(&tr.values) {
            for (n, u) in tr.sites().zip(row) {
                writeln!(w, "{t:?},{n},{u:?}")?;
            }
        }
        w.flush()
    };
    go().map_err(io_err(path))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
    fs::write(path, text + "\n").map_err(io_err(path))
}

pub fn out_file(dir: &Path, name: &str) -> PathBuf {
    dir.join(name)
}
