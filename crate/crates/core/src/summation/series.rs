use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::CheckpointGrid;

/// Smallest checkpoint allowed on the log-log scale.
pub const LOGLOG_MIN_X: u64 = 16;

/// Minimum number of checkpoints for a slope fit.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub values: Vec<f64>,
}

/// Natural density of a classifier label, kept alongside its column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelInfo {
    pub column: String,
    pub density: (u64, u64),
}

impl LabelInfo {
    pub fn density_f64(&self) -> f64 {
        self.density.0 as f64 / self.density.1 as f64
    }
}

/// Named columns sampled at the points of a checkpoint grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSeries {
    pub grid: CheckpointGrid,
    /// Header of the abscissa: `x` for primes, `n` for polynomial degrees.
    pub x_name: String,
    pub columns: Vec<Column>,
    pub labels: Vec<LabelInfo>,
    pub metadata: BTreeMap<String, String>,
}

impl CheckpointSeries {
    pub fn new(grid: CheckpointGrid, x_name: impl Into<String>) -> Self {
        CheckpointSeries {
            grid,
            x_name: x_name.into(),
            columns: Vec::new(),
            labels: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn points(&self) -> &[u64] {
        &self.grid.points
    }

    pub fn len(&self) -> usize {
        self.grid.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.points.is_empty()
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.iter().any(|c| c.name == name)
    }

    pub fn column(&self, name: &str) -> Result<&[f64]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
            .ok_or_else(|| Error::InvalidArgument(format!("no column named {name:?}")))
    }

    pub fn column_names(&self) -> Vec<&str> {
        self.columns.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<f64>) -> Result<()> {
        let name = name.into();
        if values.len() != self.len() {
            return invalid(format!(
                "column {name:?} has {} values for {} checkpoints",
                values.len(),
                self.len()
            ));
        }
        if self.has_column(&name) {
            return invalid(format!("duplicate column {name:?}"));
        }
        self.columns.push(Column { name, values });
        Ok(())
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    /// Row `i` as `(x, values in column order)`.
    pub fn row(&self, i: usize) -> (u64, Vec<f64>) {
        (self.grid.points[i], self.columns.iter().map(|c| c.values[i]).collect())
    }

    /// Keeps only checkpoints inside `[lo, hi]`.
    pub fn restrict(&self, lo: u64, hi: u64) -> Result<Self> {
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| (lo..=hi).contains(&self.grid.points[i]))
            .collect();
        if keep.is_empty() {
            return invalid(format!("no checkpoints in [{lo}, {hi}]"));
        }
        let mut grid = CheckpointGrid::from_points(keep.iter().map(|&i| self.grid.points[i]).collect())?;
        grid.ratio = self.grid.ratio;
        Ok(CheckpointSeries {
            grid,
            x_name: self.x_name.clone(),
            columns: self
                .columns
                .iter()
                .map(|c| Column {
                    name: c.name.clone(),
                    values: keep.iter().map(|&i| c.values[i]).collect(),
                })
                .collect(),
            labels: self.labels.clone(),
            metadata: self.metadata.clone(),
        })
    }
}

/// Abscissa transform for predictions and fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scale {
    LogLog,
    LogN,
}

impl Scale {
    pub fn apply(&self, x: u64) -> Result<f64> {
        match self {
            Scale::LogLog if x < LOGLOG_MIN_X => {
                Err(Error::Domain(format!("log log x needs x >= {LOGLOG_MIN_X}, got {x}")))
            }
            Scale::LogLog => Ok((x as f64).ln().ln()),
            Scale::LogN if x < 1 => Err(Error::Domain(format!("log n needs n >= 1, got {x}"))),
            Scale::LogN => Ok((x as f64).ln()),
        }
    }

    pub fn min_x(&self) -> u64 {
        match self {
            Scale::LogLog => LOGLOG_MIN_X,
            Scale::LogN => 1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Scale::LogLog => "log log x",
            Scale::LogN => "log n",
        }
    }
}

/// `Σ coefficient·column`, stored under `name`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearCombo {
    pub name: String,
    pub terms: Vec<(String, f64)>,
}

impl LinearCombo {
    pub fn new(name: impl Into<String>) -> Self {
        LinearCombo {
            name: name.into(),
            terms: Vec::new(),
        }
    }

    pub fn term(mut self, column: impl Into<String>, coefficient: f64) -> Self {
        self.terms.push((column.into(), coefficient));
        self
    }

    /// `a − b`.
    pub fn difference(name: impl Into<String>, a: &str, b: &str) -> Self {
        Self::new(name).term(a, 1.0).term(b, -1.0)
    }

    pub fn eval(&self, series: &CheckpointSeries) -> Result<Vec<f64>> {
        let cols = self
            .terms
            .iter()
            .map(|(name, c)| Ok((series.column(name)?, *c)))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..series.len())
            .map(|i| cols.iter().map(|(v, c)| c * v[i]).sum())
            .collect())
    }
}

pub fn prediction_column(name: &str) -> String {
    format!("{name}:prediction")
}

pub fn residual_column(name: &str) -> String {
    format!("{name}:residual")
}

/// Adds the combo, its prediction `slope·scale(x)` and the residual
/// `combo − prediction`. Existing columns are left untouched; if a column
/// named like the combo exists it must agree with the combo.
pub fn residual_series(
    series: &CheckpointSeries,
    combo: &LinearCombo,
    slope: f64,
    scale: Scale,
) -> Result<CheckpointSeries> {
    let values = combo.eval(series)?;
    let scaled = series
        .points()
        .iter()
        .map(|&x| scale.apply(x))
        .collect::<Result<Vec<_>>>()?;
    let mut out = series.clone();
    if !out.has_column(&combo.name) {
        out.push_column(combo.name.clone(), values.clone())?;
    } else if out.column(&combo.name)? != values.as_slice() {
        return invalid(format!("column {:?} exists with different values", combo.name));
    }
    let prediction: Vec<f64> = scaled.iter().map(|s| slope * s).collect();
    let residual = values.iter().zip(&prediction).map(|(v, p)| v - p).collect();
    out.push_column(prediction_column(&combo.name), prediction)?;
    out.push_column(residual_column(&combo.name), residual)?;
    out.set_meta(format!("{}.slope", combo.name), slope);
    out.set_meta(format!("{}.scale", combo.name), scale.name());
    Ok(out)
}

/// Ordinary least squares of `column` against `scale(x)` over checkpoints
/// with `x ≥ max(x_lo, scale minimum)`; returns `(slope, intercept)`.
pub fn fit_slope(series: &CheckpointSeries, column: &str, x_lo: u64, scale: Scale) -> Result<(f64, f64)> {
    let values = series.column(column)?;
    let lo = x_lo.max(scale.min_x());
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&x, &y) in series.points().iter().zip(values) {
        if x >= lo {
            xs.push(scale.apply(x)?);
            ys.push(y);
        }
    }
    if xs.len() < MIN_FIT_POINTS {
        return Err(Error::Precondition(format!(
            "slope fit needs {MIN_FIT_POINTS} checkpoints at or above {lo}, found {}",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("slope fit over a single abscissa".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

pub fn fit_loglog_slope(series: &CheckpointSeries, column: &str, x_lo: u64) -> Result<(f64, f64)> {
    fit_slope(series, column, x_lo, Scale::LogLog)
}

/// `max − min` of a column over checkpoints in `[lo, hi]`.
pub fn column_range(series: &CheckpointSeries, column: &str, lo: u64, hi: u64) -> Result<f64> {
    let values = series.column(column)?;
    let picked: Vec<f64> = series
        .points()
        .iter()
        .zip(values)
        .filter(|(x, _)| (lo..=hi).contains(*x))
        .map(|(_, &v)| v)
        .collect();
    if picked.is_empty() {
        return invalid(format!("no checkpoints in [{lo}, {hi}]"));
    }
    let max = picked.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = picked.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(max - min)
}

/// Per-label share of the counted primes at each checkpoint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub points: Vec<u64>,
    pub labels: Vec<String>,
    pub expected: Vec<f64>,
    /// `ratios[label][checkpoint]`; `None` while no prime has been counted.
    pub ratios: Vec<Vec<Option<f64>>>,
}

impl DensityReport {
    /// Largest `|ratio / expected − 1|` over labels at checkpoint `i`.
    pub fn max_relative_deviation(&self, i: usize) -> Option<f64> {
        self.ratios
            .iter()
            .zip(&self.expected)
            .map(|(r, e)| r[i].map(|r| (r / e - 1.0).abs()))
            .try_fold(0.0f64, |acc, d| d.map(|d| acc.max(d)))
    }

    pub fn index_of(&self, x: u64) -> Option<usize> {
        self.points.iter().position(|&p| p == x)
    }
}

/// Requires a counting series (`s = 0`) produced by a classifier.
pub fn density_report(series: &CheckpointSeries) -> Result<DensityReport> {
    if series.labels.is_empty() {
        return Err(Error::Precondition(
            "density report needs classifier label columns".into(),
        ));
    }
    match series.metadata.get("s").map(|s| s.parse::<f64>()) {
        Some(Ok(0.0)) => {}
        _ => {
            return Err(Error::Precondition(
                "density report needs counting (s = 0) columns".into(),
            ))
        }
    }
    let cols = series
        .labels
        .iter()
        .map(|l| series.column(&l.column))
        .collect::<Result<Vec<_>>>()?;
    let totals: Vec<f64> = (0..series.len()).map(|i| cols.iter().map(|c| c[i]).sum()).collect();
    Ok(DensityReport {
        points: series.points().to_vec(),
        labels: series.labels.iter().map(|l| l.column.clone()).collect(),
        expected: series.labels.iter().map(|l| l.density_f64()).collect(),
        ratios: cols
            .iter()
            .map(|c| c.iter().zip(&totals).map(|(&v, &t)| (t > 0.0).then(|| v / t)).collect())
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn synthetic(f: impl Fn(f64) -> f64) -> CheckpointSeries {
        let grid = make_grid(16, 1_000_000_000, 1.5).unwrap();
        let values = grid.points.iter().map(|&x| f((x as f64).ln().ln())).collect();
        let mut s = CheckpointSeries::new(grid, "x");
        s.push_column("y", values).unwrap();
        s
    }

    #[test]
    fn fit_recovers_line() {
        let s = synthetic(|l| 0.5 * l + 3.0);
        let (slope, intercept) = fit_loglog_slope(&s, "y", 0).unwrap();
        assert!((slope - 0.5).abs() < 1e-9);
        assert!((intercept - 3.0).abs() < 1e-9);
        let (slope, _) = fit_loglog_slope(&synthetic(|_| 7.0), "y", 0).unwrap();
        assert!(slope.abs() < 1e-9);
    }

    #[test]
    fn fit_needs_enough_points() {
        let s = synthetic(|l| l);
        assert!(fit_loglog_slope(&s, "y", 500_000_000).is_err());
        assert!(fit_loglog_slope(&s, "missing", 0).is_err());
    }

    #[test]
    fn zero_slope_residual_is_combo() {
        let s = synthetic(|l| l * l);
        let combo = LinearCombo::new("d").term("y", 2.0);
        let r = residual_series(&s, &combo, 0.0, Scale::LogLog).unwrap();
        assert_eq!(r.column("d:residual").unwrap(), r.column("d").unwrap());
        assert_eq!(r.column("y").unwrap(), s.column("y").unwrap());
    }

    #[test]
    fn loglog_domain() {
        let grid = CheckpointGrid::from_points(vec![2, 100]).unwrap();
        let mut s = CheckpointSeries::new(grid, "x");
        s.push_column("y", vec![0.0, 1.0]).unwrap();
        let e = residual_series(&s, &LinearCombo::new("d").term("y", 1.0), 1.0, Scale::LogLog);
        assert!(matches!(e, Err(Error::Domain(_))));
        assert!(residual_series(&s, &LinearCombo::new("d").term("y", 1.0), 1.0, Scale::LogN).is_ok());
    }

    #[test]
    fn column_length_checked() {
        let mut s = synthetic(|l| l);
        assert!(s.push_column("z", vec![1.0]).is_err());
        assert!(s.push_column("y", vec![0.0; s.len()]).is_err());
    }
}
