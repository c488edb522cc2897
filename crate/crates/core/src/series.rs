//! Finite time series, z-normalization and UCR-format ingestion.
//!
//! A UCR file holds one record per line: an integer class label followed by
//! the `p` samples, separated by a comma or a tab (detected per file from the
//! first record). Runs of spaces are accepted too, for the older archive
//! layout. There is no header; CRLF line endings and a trailing newline are
//! tolerated.
//!
//! Every series is z-normalized on its own when loaded, so merging a train
//! and a test file gives the same records whichever order they are merged in.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An equal-length sample of a waveform. Length is at least 2.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    values: Vec<T>,
}

impl<T: Scalar> TimeSeries<T> {
    /// Wraps raw values without normalizing them.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "length {} is below the minimum of 2",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries("non-finite sample".into()));
        }
        Ok(Self { values })
    }

    /// Builds a z-normalized series from raw samples.
    pub fn z_normalized(raw: &[T]) -> Result<Self> {
        z_normalize(raw)
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![T::zero(); len],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_slice(&self) -> &[T] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<T> {
        self.values
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.values.iter()
    }

    /// True when every sample is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.is_zero())
    }

    pub fn norm(&self) -> T {
        self.values.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    pub fn mean(&self) -> T {
        mean(&self.values)
    }

    /// Population standard deviation (divides by `p`).
    pub fn std_dev(&self) -> T {
        population_std(&self.values, self.mean())
    }

    pub fn negated(&self) -> Self {
        Self {
            values: self.values.iter().map(|&v| -v).collect(),
        }
    }
}

impl<T> std::ops::Index<usize> for TimeSeries<T> {
    type Output = T;

    fn index(&self, idx: usize) -> &T {
        &self.values[idx]
    }
}

impl<T> AsRef<[T]> for TimeSeries<T> {
    fn as_ref(&self) -> &[T] {
        &self.values
    }
}

fn mean<T: Scalar>(values: &[T]) -> T {
    values.iter().copied().sum::<T>() / T::from_usize_lossy(values.len())
}

fn population_std<T: Scalar>(values: &[T], mean: T) -> T {
    let ss = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<T>();
    (ss / T::from_usize_lossy(values.len())).sqrt()
}

/// Subtracts the mean and divides by the population standard deviation.
///
/// A constant series (zero spread, up to rounding) maps to the all-zero
/// series.
pub fn z_normalize<T: Scalar>(raw: &[T]) -> Result<TimeSeries<T>> {
    if raw.len() < 2 {
        return Err(Error::InvalidSeries(format!(
            "length {} is below the minimum of 2",
            raw.len()
        )));
    }
    if raw.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSeries("non-finite sample".into()));
    }
    let mu = mean(raw);
    let sd = population_std(raw, mu);
    let scale = raw.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
    // rounding noise of the mean alone is ~eps * max|x|
    if sd <= scale * T::epsilon() * T::lit(16.0) || sd.is_zero() {
        return Ok(TimeSeries::zeros(raw.len()));
    }
    Ok(TimeSeries {
        values: raw.iter().map(|&v| (v - mu) / sd).collect(),
    })
}

/// A labelled or unlabelled collection of equal-length series.
///
/// Labels are stored as contiguous zero-based class indices in order of
/// first appearance; files and reports use `index + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    name: String,
    series: Vec<TimeSeries<T>>,
    labels: Option<Vec<usize>>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(
        name: impl Into<String>,
        series: Vec<TimeSeries<T>>,
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        if series.len() < 2 {
            return Err(Error::InvalidSeries(format!(
                "a dataset needs at least 2 series, got {}",
                series.len()
            )));
        }
        let p = series[0].len();
        if let Some(bad) = series.iter().find(|s| s.len() != p) {
            return Err(Error::DimensionMismatch {
                expected: p,
                found: bad.len(),
            });
        }
        let labels = match labels {
            Some(raw) => {
                if raw.len() != series.len() {
                    return Err(Error::DimensionMismatch {
                        expected: series.len(),
                        found: raw.len(),
                    });
                }
                Some(remap_labels(&raw))
            }
            None => None,
        };
        Ok(Self {
            name: name.into(),
            series,
            labels,
        })
    }

    /// Convenience constructor that z-normalizes each raw row.
    pub fn from_raw(
        name: impl Into<String>,
        rows: &[Vec<T>],
        labels: Option<Vec<usize>>,
    ) -> Result<Self> {
        let series = rows
            .iter()
            .map(|r| z_normalize(r))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, series, labels)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn series(&self) -> &[TimeSeries<T>] {
        &self.series
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    /// Number of series, `n`.
    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    /// Common series length, `p`.
    pub fn series_len(&self) -> usize {
        self.series[0].len()
    }

    /// Number of distinct ground-truth classes, if labelled.
    pub fn class_count(&self) -> Option<usize> {
        self.labels
            .as_ref()
            .map(|l| l.iter().copied().max().map_or(0, |m| m + 1))
    }

    /// Returns a copy with the series (and labels) reordered so that entry
    /// `i` of the result is entry `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                found: order.len(),
            });
        }
        let series = order.iter().map(|&i| self.series[i].clone()).collect();
        let labels = self
            .labels
            .as_ref()
            .map(|l| order.iter().map(|&i| l[i]).collect());
        Self::new(self.name.clone(), series, labels)
    }
}

/// Maps arbitrary labels onto `0..k` in order of first appearance.
pub fn remap_labels<L: Copy + Eq + std::hash::Hash>(raw: &[L]) -> Vec<usize> {
    let mut seen: HashMap<L, usize> = HashMap::new();
    raw.iter()
        .map(|l| {
            let next = seen.len();
            *seen.entry(*l).or_insert(next)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Separator {
    Comma,
    Tab,
    Whitespace,
}

impl Separator {
    fn detect(line: &str) -> Self {
        if line.contains('\t') {
            Separator::Tab
        } else if line.contains(',') {
            Separator::Comma
        } else {
            Separator::Whitespace
        }
    }

    fn split<'a>(self, line: &'a str) -> Box<dyn Iterator<Item = &'a str> + 'a> {
        match self {
            Separator::Comma => Box::new(line.split(',').map(str::trim)),
            Separator::Tab => Box::new(line.split('\t').map(str::trim)),
            Separator::Whitespace => Box::new(line.split_whitespace()),
        }
    }
}

/// Raw parsed records before normalization: `(label, samples)`.
struct Records<T> {
    labels: Vec<i64>,
    rows: Vec<Vec<T>>,
}

fn parse_records<T: Scalar>(
    text: &str,
    source: &str,
    expected_len: Option<usize>,
) -> Result<Records<T>> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.to_string(),
        line,
        message,
    };
    let mut sep = None;
    let mut labels = Vec::new();
    let mut rows: Vec<Vec<T>> = Vec::new();
    let mut width = expected_len;
    for (idx, raw_line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw_line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let sep = *sep.get_or_insert_with(|| Separator::detect(line));
        let mut fields = sep.split(line);
        let label_field = fields.next().unwrap_or("");
        let label = parse_label(label_field)
            .ok_or_else(|| parse_err(lineno, format!("invalid class label {label_field:?}")))?;
        let mut row = Vec::new();
        for (col, field) in fields.enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                parse_err(
                    lineno,
                    format!("non-numeric value {field:?} in field {}", col + 2),
                )
            })?;
            if !v.is_finite() {
                return Err(parse_err(lineno, format!("non-finite value {field:?}")));
            }
            row.push(T::lit(v));
        }
        match width {
            None => {
                if row.len() < 2 {
                    return Err(parse_err(
                        lineno,
                        format!("record has {} samples, need at least 2", row.len()),
                    ));
                }
                width = Some(row.len());
            }
            Some(p) if p != row.len() => {
                return Err(parse_err(
                    lineno,
                    format!("record has {} samples, expected {p}", row.len()),
                ));
            }
            Some(_) => {}
        }
        labels.push(label);
        rows.push(row);
    }
    Ok(Records { labels, rows })
}

fn parse_label(field: &str) -> Option<i64> {
    if let Ok(v) = field.parse::<i64>() {
        return Some(v);
    }
    // older archive files write labels as floats, e.g. "1.0000000e+00"
    let v: f64 = field.parse().ok()?;
    (v.is_finite() && v.fract() == 0.0 && v.abs() < 1e15).then_some(v as i64)
}

/// Parses UCR-format text into a z-normalized, labelled dataset.
pub fn parse_ucr<T: Scalar>(text: &str, name: &str) -> Result<Dataset<T>> {
    let records = parse_records(text, name, None)?;
    build_dataset(name, records)
}

fn build_dataset<T: Scalar>(name: &str, records: Records<T>) -> Result<Dataset<T>> {
    let series = records
        .rows
        .iter()
        .map(|r| z_normalize(r))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(name, series, Some(remap_labels(&records.labels)))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Dataset name derived from a file path: the stem with any `_TRAIN` /
/// `_TEST` suffix removed.
pub fn dataset_name(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    for suffix in ["_TRAIN", "_TEST"] {
        if let Some(base) = stem.strip_suffix(suffix) {
            return base.to_string();
        }
    }
    stem
}

/// Loads a UCR file, optionally concatenating the records of a second file
/// (typically the test split) with the same series length.
pub fn load_ucr<T: Scalar>(path: &Path, merge: Option<&Path>) -> Result<Dataset<T>> {
    let source = path.display().to_string();
    let mut records = parse_records::<T>(&read(path)?, &source, None)?;
    if let Some(other) = merge {
        let p = records.rows.first().map(Vec::len);
        let extra = parse_records::<T>(&read(other)?, &other.display().to_string(), p)?;
        records.labels.extend(extra.labels);
        records.rows.extend(extra.rows);
    }
    build_dataset(&dataset_name(path), records)
}
