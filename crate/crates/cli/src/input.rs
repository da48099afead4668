use std::io::Read;
use std::path::Path;

use microrisk::{Dataset, DatasetBuilder};

use crate::error::{io_error, CliError};

/// Reads an RFC 4180 CSV with a header row. Empty cells become missing values.
pub fn load_dataset(path: &Path) -> Result<Dataset, CliError> {
    let file = std::fs::File::open(path).map_err(|e| io_error(path.display(), e))?;
    read_dataset(std::io::BufReader::with_capacity(1 << 20, file))
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn read_dataset(reader: impl Read) -> Result<Dataset, String> {
    let mut csv = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let header = csv.headers().map_err(|e| e.to_string())?.clone();
    if header.is_empty() {
        return Err("empty file".to_string());
    }
    let mut builder = DatasetBuilder::new(header.iter()).map_err(|e| e.to_string())?;
    let mut record = csv::StringRecord::new();
    loop {
        match csv.read_record(&mut record) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => return Err(e.to_string()),
        }
        if record.len() != header.len() {
            let line = record.position().map_or(0, |p| p.line());
            return Err(format!(
                "row {} (line {line}) has {} cells, expected {}",
                builder.n_records() + 1,
                record.len(),
                header.len()
            ));
        }
        builder.push_row(record.iter()).map_err(|e| e.to_string())?;
    }
    builder.finish().map_err(|e| e.to_string())
}
