//! CSV output helpers: versioned header comment, floats at 12 significant
//! digits so outputs are byte-stable across platforms.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

pub const CSV_VERSION: &str = "fountain-csv v1";

/// 12 significant digits, scientific notation; integers and zero unscathed.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        "0".to_string()
    } else if x.is_nan() {
        "nan".to_string()
    } else {
        format!("{x:.11e}")
    }
}

pub struct CsvFile {
    w: std::io::BufWriter<fs::File>,
    pub path: PathBuf,
}

impl CsvFile {
    /// Creates `<dir>/<name>` with the version header, a description comment
    /// and the column-header row.
    pub fn create(dir: &Path, name: &str, description: &str, columns: &[&str]) -> Result<Self> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output dir {}", dir.display()))?;
        let path = dir.join(name);
        let mut w = std::io::BufWriter::new(
            fs::File::create(&path).with_context(|| format!("creating {}", path.display()))?,
        );
        writeln!(w, "# {CSV_VERSION}")?;
        writeln!(w, "# {description}")?;
        writeln!(w, "{}", columns.join(","))?;
        Ok(Self { w, path })
    }

    pub fn row(&mut self, fields: &[String]) -> Result<()> {
        writeln!(self.w, "{}", fields.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.w.flush()?;
        Ok(self.path)
    }
}

/// Shorthand for building a row out of mixed values.
#[macro_export]
macro_rules! csv_row {
    ($($v:expr),* $(,)?) => {
        vec![$($v.to_string()),*]
    };
}
