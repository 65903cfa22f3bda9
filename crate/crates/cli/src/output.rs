use std::fs;
use std::path::Path;

use fracchemo_core::{Error, Result};

pub fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))
}

/// Prefixes every line of `text` with `# `.
pub fn comment(text: &str) -> String {
    text.lines().map(|l| format!("# {l}\n")).collect()
}

/// Writes `header` as a comment block followed by `body`.
pub fn write_with_header(path: &Path, header: &str, body: &str) -> Result<()> {
    let mut s = comment(header);
    s.push_str(body);
    fs::write(path, s).map_err(|e| io_err(path, e))
}
