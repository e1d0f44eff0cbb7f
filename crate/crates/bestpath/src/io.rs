//! Reading delimited data and schema files, writing tables back out.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bestpath_core::dataset::LoadOptions;
use bestpath_core::{Dataset, KindTag, RawTable};

use crate::error::{CliError, Result};

/// Reads an RFC 4180 file whose first record is the header. Cells are
/// kept verbatim; short or long rows are reported by the core loader.
pub fn read_raw_table(path: &Path) -> Result<RawTable> {
    let bytes = fs::read(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    parse_raw_table(&bytes, path)
}

pub fn parse_raw_table(bytes: &[u8], path: &Path) -> Result<RawTable> {
    let csv_err = |source| CliError::Csv {
        path: path.into(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(bytes);
    let headers = rdr
        .headers()
        .map_err(csv_err)?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    let mut rows = Vec::new();
    for rec in rdr.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(str::to_string).collect());
    }
    Ok(RawTable { headers, rows })
}

/// One `name,kind` line per column. Blank lines and lines starting with `#`
/// are skipped, as is a leading `name,kind` header.
pub fn read_schema(path: &Path) -> Result<Vec<(String, KindTag)>> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.into(),
        source,
    })?;
    parse_schema(&text, path)
}

pub fn parse_schema(text: &str, path: &Path) -> Result<Vec<(String, KindTag)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| CliError::Schema {
            path: path.into(),
            line: i + 1,
            message,
        };
        let (name, kind) = line
            .rsplit_once(',')
            .ok_or_else(|| err(format!("expected `name,kind`, got `{line}`")))?;
        let name = name.trim().trim_matches('"');
        if out.is_empty() && name == "name" && kind.trim() == "kind" {
            continue;
        }
        let kind = kind.parse::<KindTag>().map_err(|e| err(e.to_string()))?;
        out.push((name.to_string(), kind));
    }
    Ok(out)
}

pub fn load_dataset(path: &Path, schema: Option<&Path>, missing_col_frac: f64) -> Result<Dataset> {
    let opts = LoadOptions {
        missing_col_frac,
        schema: match schema {
            Some(p) => read_schema(p)?,
            None => Vec::new(),
        },
        ..LoadOptions::default()
    };
    Ok(Dataset::from_raw(&read_raw_table(path)?, &opts)?)
}

pub fn raw_table_to_csv(table: &RawTable) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.headers).expect("writing to memory");
    for row in &table.rows {
        w.write_record(row).expect("writing to memory");
    }
    w.into_inner().expect("writing to memory")
}

pub fn dataset_to_csv(ds: &Dataset) -> Vec<u8> {
    raw_table_to_csv(&ds.to_raw())
}

pub fn schema_to_text(ds: &Dataset) -> String {
    ds.schema()
        .iter()
        .map(|(n, k)| format!("{n},{}\n", k.as_str()))
        .collect()
}

/// Writes through a temporary file in the destination directory and renames
/// it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let err = |source| CliError::Write {
        path: path.into(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(bytes)?;
            f.sync_all()
        })
        .and_then(|_| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result.map_err(err)
}
