use std::path::Path;

use trades::format::{self, Record};
use trades::Word;

use crate::error::{CliError, Result};

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn records(path: &Path) -> Result<Vec<Record>> {
    Ok(format::parse_records(&read(path)?)?)
}

pub fn word_set(path: &Path) -> Result<Vec<Word>> {
    Ok(format::parse_word_set(&read(path)?)?)
}

pub fn emit(out: &mut dyn std::io::Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}
