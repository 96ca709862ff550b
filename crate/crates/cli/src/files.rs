use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;

use crate::CliError;

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<String, CliError> {
    let fail = |source| CliError::Read {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(fail)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(fail)
    }
}

/// Writes a file, or standard output for `-`.
pub fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    let fail = |source| CliError::Write {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut out = io::stdout().lock();
        out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(fail)
    } else {
        fs::write(path, text).map_err(fail)
    }
}
