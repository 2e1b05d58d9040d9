//! CSV series and the JSON run manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use chebias_core::CheckpointSeries;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;
use crate::spec::ExperimentSpec;

pub const MANIFEST_NAME: &str = "manifest.json";
pub const SCHEMA_VERSION: u32 = 1;
const SIGNIFICANT: usize = 15;

/// Decimal text with 15 significant digits, trailing zeros removed;
/// scientific notation outside `1e-5 ≤ |v| < 1e15`.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..SIGNIFICANT as i32).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{v:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// Writes `x` plus the named columns (all columns when `columns` is empty).
pub fn write_series_csv(series: &CheckpointSeries, columns: &[String], path: &Path) -> CliResult<()> {
    let names: Vec<String> = if columns.is_empty() {
        series.column_names().into_iter().map(String::from).collect()
    } else {
        columns.to_vec()
    };
    let values = names
        .iter()
        .map(|n| series.column(n))
        .collect::<chebias_core::Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec![series.x_name.clone()];
    header.extend(names.iter().cloned());
    w.write_record(&header)?;
    for (i, x) in series.points().iter().enumerate() {
        let mut row = vec![x.to_string()];
        row.extend(values.iter().map(|v| format_value(v[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path)?;
    Ok(format!("{:x}", Sha256::digest(&bytes)))
}

/// One emitted CSV: file stem, the series and its selected columns.
#[derive(Debug, Clone)]
pub struct SeriesOutput {
    pub stem: String,
    pub series: CheckpointSeries,
    pub columns: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
    pub columns: Vec<String>,
    pub metadata: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineRecord {
    pub limit: u64,
    pub segment_size: usize,
    pub threads: usize,
    /// Segment boundary the run resumed from, if any.
    pub resumed_from: Option<u64>,
    pub last_boundary: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GridRecord {
    pub x_min: u64,
    pub x_max: u64,
    pub ratio: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub spec: ExperimentSpec,
    pub started: String,
    pub finished: String,
    pub grid: Option<GridRecord>,
    pub engine: Option<EngineRecord>,
    pub outputs: Vec<OutputRecord>,
}

/// Writes every CSV, then the manifest. The manifest only appears once all
/// series are on disk.
pub fn write_outputs(
    dir: &Path,
    outputs: &[SeriesOutput],
    build: impl FnOnce(Vec<OutputRecord>) -> RunManifest,
) -> CliResult<PathBuf> {
    fs::create_dir_all(dir)?;
    let manifest_path = dir.join(MANIFEST_NAME);
    if manifest_path.exists() {
        fs::remove_file(&manifest_path)?;
    }
    let mut records = Vec::new();
    for out in outputs {
        let file = format!("{}.csv", out.stem);
        let path = dir.join(&file);
        write_series_csv(&out.series, &out.columns, &path)?;
        let columns = if out.columns.is_empty() {
            out.series.column_names().into_iter().map(String::from).collect()
        } else {
            out.columns.clone()
        };
        records.push(OutputRecord {
            sha256: sha256_file(&path)?,
            file,
            rows: out.series.len(),
            columns,
            metadata: out.series.metadata.clone(),
        });
    }
    let manifest = build(records);
    let tmp = dir.join(format!("{MANIFEST_NAME}.tmp"));
    let mut f = fs::File::create(&tmp)?;
    serde_json::to_writer_pretty(&mut f, &manifest)?;
    f.write_all(b"\n")?;
    f.sync_all()?;
    fs::rename(&tmp, &manifest_path)?;
    Ok(manifest_path)
}
