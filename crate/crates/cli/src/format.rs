//! Number formatting and CSV sinks.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::CliError;

const SIGNIFICANT: usize = 9;

/// Nine significant digits; plain notation for magnitudes in `[1e-4, 1e9)`,
/// scientific otherwise.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    // The exponent after rounding, so 9.9999999996 counts as 1e1.
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

pub fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// A CSV destination: a file, or any writer such as stdout.
pub struct Sink {
    writer: csv::Writer<Box<dyn Write>>,
    path: PathBuf,
}

impl Sink {
    pub fn create(path: &Path) -> Result<Self, CliError> {
        let file = std::fs::File::create(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(Self::from_writer(
            Box::new(std::io::BufWriter::new(file)),
            path,
        ))
    }

    pub fn from_writer(writer: Box<dyn Write>, label: &Path) -> Self {
        Self {
            writer: csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(writer),
            path: label.to_path_buf(),
        }
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<(), CliError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer
            .write_record(fields)
            .map_err(|source| CliError::Csv {
                path: self.path.clone(),
                source,
            })
    }

    pub fn finish(mut self) -> Result<(), CliError> {
        self.writer.flush().map_err(|source| CliError::Io {
            path: self.path.clone(),
            source,
        })
    }
}
