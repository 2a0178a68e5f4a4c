//! Atomic output files.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{Command, Format};
use crate::document::ResultDocument;
use crate::error::CliResult;

/// Writes `contents` to `path` through a temporary file in the same
/// directory, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> CliResult<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

/// Writes the document in the requested formats, plus plot data for sweeps
/// that carry errors. Returns the paths written.
pub fn write_outputs(doc: &ResultDocument, dir: &Path, stem: &str, format: Format) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    if matches!(format, Format::Json | Format::Both) {
        let p = dir.join(format!("{stem}.json"));
        write_atomic(&p, &doc.to_json()?)?;
        written.push(p);
    }
    if matches!(format, Format::Csv | Format::Both) {
        let p = dir.join(format!("{stem}.csv"));
        write_atomic(&p, &doc.table().to_csv()?)?;
        written.push(p);
    }
    if doc.command == Command::Sweep && doc.reference.is_some() {
        let p = dir.join(format!("{stem}.dat"));
        write_atomic(&p, &doc.plot_data()?)?;
        written.push(p);
    }
    Ok(written)
}
