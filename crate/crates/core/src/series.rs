//! Dated scalar series: CSV ingestion, calendar regularization and slicing.

use std::fmt::Write as _;

use chrono::{Days, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const DEFAULT_DATE_FORMAT: &str = "%Y-%m-%d";

/// Regularly indexed observations with one calendar date each.
///
/// Dates are strictly increasing, both vectors have the same nonzero length
/// and every value is finite. The constructor enforces all three.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries<T> {
    dates: Vec<NaiveDate>,
    values: Vec<T>,
    label: String,
}

impl<T: Scalar> TimeSeries<T> {
    pub fn new(dates: Vec<NaiveDate>, values: Vec<T>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySeries);
        }
        if dates.len() != values.len() {
            return Err(Error::InvalidSeries(format!(
                "{} dates for {} values",
                dates.len(),
                values.len()
            )));
        }
        for w in dates.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateDate(w[0]));
            }
            if w[0] > w[1] {
                return Err(Error::InvalidSeries(format!(
                    "dates not increasing: {} then {}",
                    w[0], w[1]
                )));
            }
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidSeries(format!("non-finite value at index {i}")));
        }
        Ok(Self {
            dates,
            values,
            label: label.into(),
        })
    }

    /// Series on consecutive calendar days starting at `start`.
    pub fn from_values(start: NaiveDate, values: Vec<T>, label: impl Into<String>) -> Result<Self> {
        let dates = consecutive_days(start, values.len());
        Self::new(dates, values, label)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start_date(&self) -> NaiveDate {
        self.dates[0]
    }

    pub fn end_date(&self) -> NaiveDate {
        self.dates[self.dates.len() - 1]
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same dates, new values. Used by transforms such as detrending.
    pub fn with_values(&self, values: Vec<T>) -> Result<Self> {
        Self::new(self.dates.clone(), values, self.label.clone())
    }

    /// Writes `date,value` CSV with ISO dates and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 32);
        out.push_str("date,value\n");
        for (d, v) in self.dates.iter().zip(&self.values) {
            let _ = writeln!(out, "{},{}", d.format(DEFAULT_DATE_FORMAT), format_sig17(v.to_f64_lossy()));
        }
        out
    }
}

pub(crate) fn consecutive_days(start: NaiveDate, n: usize) -> Vec<NaiveDate> {
    start.iter_days().take(n).collect()
}

/// Decimal rendering with 17 significant digits, enough to round-trip any f64.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..16).contains(&magnitude) {
        let decimals = (16 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.16e}")
    }
}

/// How calendar gaps are treated by [`regularize`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapMode {
    ForwardFill,
    Drop,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapPolicy {
    pub mode: GapMode,
    pub max_gap_days: u32,
}

impl GapPolicy {
    pub fn new(mode: GapMode, max_gap_days: u32) -> Result<Self> {
        if max_gap_days < 1 {
            return Err(Error::InvalidParameter("max_gap_days must be at least 1".into()));
        }
        Ok(Self { mode, max_gap_days })
    }
}

impl Default for GapPolicy {
    fn default() -> Self {
        Self {
            mode: GapMode::ForwardFill,
            max_gap_days: 7,
        }
    }
}

/// Parses one dated column pair out of a headered CSV.
///
/// Data rows are numbered from 1 (the header is row 0) in error messages.
/// Rows whose value cell is empty are skipped; the result is sorted by date.
pub fn parse_csv<T: Scalar>(
    raw_text: &str,
    date_column: &str,
    value_column: &str,
    date_format: &str,
) -> Result<TimeSeries<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(raw_text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::MalformedRow {
            row: 0,
            reason: e.to_string(),
        })?
        .clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    };
    let date_idx = column(date_column)?;
    let value_idx = column(value_column)?;

    let mut rows: Vec<(NaiveDate, T)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::MalformedRow {
            row,
            reason: e.to_string(),
        })?;
        let value_cell = record.get(value_idx).unwrap_or("");
        if value_cell.is_empty() {
            continue;
        }
        let date_cell = record.get(date_idx).unwrap_or("");
        let date = NaiveDate::parse_from_str(date_cell, date_format).map_err(|e| {
            Error::MalformedRow {
                row,
                reason: format!("date {date_cell:?}: {e}"),
            }
        })?;
        let value: f64 = value_cell.parse().map_err(|_| Error::MalformedRow {
            row,
            reason: format!("value {value_cell:?} is not a number"),
        })?;
        if !value.is_finite() {
            return Err(Error::MalformedRow {
                row,
                reason: format!("value {value_cell:?} is not finite"),
            });
        }
        rows.push((date, T::of(value)));
    }
    if rows.is_empty() {
        return Err(Error::EmptySeries);
    }
    rows.sort_by_key(|(d, _)| *d);
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateDate(w[0].0));
    }
    let (dates, values) = rows.into_iter().unzip();
    TimeSeries::new(dates, values, value_column)
}

/// Header cells of a CSV document, trimmed.
pub fn csv_headers(raw_text: &str) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(raw_text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::MalformedRow {
        row: 0,
        reason: e.to_string(),
    })?;
    Ok(headers.iter().map(str::to_string).collect())
}

/// Makes the observation grid uniform according to `policy`.
pub fn regularize<T: Scalar>(series: &TimeSeries<T>, policy: &GapPolicy) -> Result<TimeSeries<T>> {
    match policy.mode {
        // Observation index is already the time axis; calendar gaps are ignored.
        GapMode::Drop => Ok(series.clone()),
        GapMode::Error => {
            for w in series.dates.windows(2) {
                let gap = (w[1] - w[0]).num_days();
                if gap > 1 {
                    return Err(Error::GapFound {
                        after: w[0],
                        gap_days: gap,
                    });
                }
            }
            Ok(series.clone())
        }
        GapMode::ForwardFill => {
            let mut dates = Vec::with_capacity(series.len());
            let mut values = Vec::with_capacity(series.len());
            for i in 0..series.len() {
                let (date, value) = (series.dates[i], series.values[i]);
                dates.push(date);
                values.push(value);
                if let Some(&next) = series.dates.get(i + 1) {
                    let gap = (next - date).num_days();
                    if gap > i64::from(policy.max_gap_days) {
                        return Err(Error::GapTooLarge {
                            after: date,
                            gap_days: gap,
                            max_gap_days: policy.max_gap_days,
                        });
                    }
                    for k in 1..gap {
                        dates.push(date + Days::new(k as u64));
                        values.push(value);
                    }
                }
            }
            TimeSeries::new(dates, values, series.label.clone())
        }
    }
}

/// Observations with `start <= date <= end`, order preserved.
pub fn slice_by_date<T: Scalar>(
    series: &TimeSeries<T>,
    start: NaiveDate,
    end: NaiveDate,
) -> Result<TimeSeries<T>> {
    if start > end {
        return Err(Error::InvalidParameter(format!(
            "slice start {start} is after end {end}"
        )));
    }
    let lo = series.dates.partition_point(|d| *d < start);
    let hi = series.dates.partition_point(|d| *d <= end);
    if lo >= hi {
        return Err(Error::EmptySeries);
    }
    TimeSeries::new(
        series.dates[lo..hi].to_vec(),
        series.values[lo..hi].to_vec(),
        series.label.clone(),
    )
}
