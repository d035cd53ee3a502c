//! Monthly time series, CSV ingestion, and date alignment.

use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    year: i32,
    month: u8,
}

impl Month {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidConfig(format!(
                "month {month} outside 1..=12"
            )));
        }
        Ok(Month { year, month })
    }

    pub fn year(&self) -> i32 {
        self.year
    }

    pub fn month(&self) -> u8 {
        self.month
    }

    pub fn next(&self) -> Month {
        if self.month == 12 {
            Month {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Month {
                year: self.year,
                month: self.month + 1,
            }
        }
    }

    /// Months since year 0, for interval arithmetic.
    fn index(&self) -> i64 {
        self.year as i64 * 12 + (self.month as i64 - 1)
    }

    pub fn offset(&self, months: i64) -> Month {
        let idx = self.index() + months;
        Month {
            year: idx.div_euclid(12) as i32,
            month: (idx.rem_euclid(12) + 1) as u8,
        }
    }
}

impl fmt::Display for Month {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Accepted date encodings for the CSV date column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DateFormat {
    /// Try `YYYY-MM`, then `YYYYMM`, then `YYYY-MM-DD`.
    #[default]
    Auto,
    /// `YYYY-MM`
    YearDashMonth,
    /// `YYYYMM` (the convention of many portfolio-return files)
    Compact,
    /// `YYYY-MM-DD`; the day is ignored.
    YearMonthDay,
}

impl DateFormat {
    pub fn parse_month(&self, s: &str) -> Option<Month> {
        let s = s.trim();
        match self {
            DateFormat::Auto => DateFormat::YearDashMonth
                .parse_month(s)
                .or_else(|| DateFormat::Compact.parse_month(s))
                .or_else(|| DateFormat::YearMonthDay.parse_month(s)),
            DateFormat::YearDashMonth => {
                let (y, m) = s.split_once('-')?;
                if y.len() != 4 || m.len() != 2 {
                    return None;
                }
                Month::new(y.parse().ok()?, m.parse().ok()?).ok()
            }
            DateFormat::Compact => {
                if s.len() != 6 || !s.bytes().all(|b| b.is_ascii_digit()) {
                    return None;
                }
                Month::new(s[..4].parse().ok()?, s[4..].parse().ok()?).ok()
            }
            DateFormat::YearMonthDay => {
                let mut parts = s.splitn(3, '-');
                let y = parts.next()?;
                let m = parts.next()?;
                let d = parts.next()?;
                if y.len() != 4 || m.len() != 2 || d.len() != 2 {
                    return None;
                }
                Month::new(y.parse().ok()?, m.parse().ok()?).ok()
            }
        }
    }
}

impl std::str::FromStr for DateFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(DateFormat::Auto),
            "year-month" | "%Y-%m" => Ok(DateFormat::YearDashMonth),
            "compact" | "%Y%m" => Ok(DateFormat::Compact),
            "year-month-day" | "%Y-%m-%d" => Ok(DateFormat::YearMonthDay),
            other => Err(Error::InvalidConfig(format!(
                "unknown date format '{other}' (expected auto, year-month, compact, year-month-day)"
            ))),
        }
    }
}

/// Consecutive-month observations of one variable. No gaps, no missing
/// values, no non-finite values; all enforced at construction.
#[derive(Debug, Clone)]
pub struct TimeSeries {
    name: String,
    start: Month,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Build from explicit month labels, checking strict month-by-month
    /// continuity.
    pub fn new(name: &str, months: &[Month], values: Vec<f64>) -> Result<Self> {
        if months.len() != values.len() {
            return Err(Error::LengthMismatch {
                left: months.len(),
                right: values.len(),
            });
        }
        if months.is_empty() {
            return Err(Error::SeriesTooShort { len: 0, min: 1 });
        }
        for (i, w) in months.windows(2).enumerate() {
            let expected = w[0].next();
            if w[1] < expected || w[1] == w[0] {
                return Err(Error::NonMonotoneDates { row: i + 1 });
            }
            if w[1] != expected {
                return Err(Error::MonthGap {
                    expected: expected.to_string(),
                    row: i + 1,
                });
            }
        }
        Self::from_start(name, months[0], values)
    }

    /// Build from a start month and consecutive values.
    pub fn from_start(name: &str, start: Month, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::SeriesTooShort { len: 0, min: 1 });
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        Ok(TimeSeries {
            name: name.to_string(),
            start,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn start(&self) -> Month {
        self.start
    }

    pub fn end(&self) -> Month {
        self.start.offset(self.values.len() as i64 - 1)
    }

    pub fn months(&self) -> impl Iterator<Item = Month> + '_ {
        (0..self.values.len() as i64).map(move |i| self.start.offset(i))
    }

    /// Sub-series covering `[from, to]` inclusive; the range must lie inside
    /// the series.
    fn window(&self, from: Month, to: Month) -> TimeSeries {
        let a = (from.index() - self.start.index()) as usize;
        let b = (to.index() - self.start.index()) as usize;
        TimeSeries {
            name: self.name.clone(),
            start: from,
            values: self.values[a..=b].to_vec(),
        }
    }
}

/// Values treated as missing-data markers in portfolio-return files.
pub const SENTINELS: [f64; 2] = [-99.99, -999.0];

fn is_sentinel(v: f64) -> bool {
    SENTINELS.iter().any(|s| *s == v)
}

/// How to read one series out of a CSV file.
#[derive(Debug, Clone)]
pub struct CsvSpec {
    pub series_column: String,
    pub date_column: String,
    pub date_format: DateFormat,
    /// Trim leading/trailing sentinel runs instead of erroring on them.
    /// Interior sentinels are always an error.
    pub na_drop: bool,
}

impl CsvSpec {
    pub fn new(series_column: &str, date_column: &str) -> Self {
        CsvSpec {
            series_column: series_column.to_string(),
            date_column: date_column.to_string(),
            date_format: DateFormat::Auto,
            na_drop: false,
        }
    }
}

/// Load one monthly series from a UTF-8 CSV file with a header row.
///
/// Row numbers in errors are 1-based data rows (the header is row 0).
pub fn load_csv(path: &Path, spec: &CsvSpec) -> Result<TimeSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn {
                column: name.to_string(),
                path: path.display().to_string(),
            })
    };
    let date_idx = find(&spec.date_column)?;
    let value_idx = find(&spec.series_column)?;

    let mut months: Vec<Month> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record?;
        let date_cell = record.get(date_idx).unwrap_or("");
        let month = spec
            .date_format
            .parse_month(date_cell)
            .ok_or_else(|| Error::BadDate {
                row,
                value: date_cell.to_string(),
            })?;
        let value_cell = record.get(value_idx).unwrap_or("");
        let value: f64 = value_cell.parse().map_err(|_| Error::NonNumericCell {
            row,
            column: spec.series_column.clone(),
            value: value_cell.to_string(),
        })?;
        months.push(month);
        values.push(value);
    }
    if months.is_empty() {
        return Err(Error::SeriesTooShort { len: 0, min: 1 });
    }

    // Sentinel handling: optionally trim runs at either end, then reject any
    // survivor (with its original 1-based row number).
    let mut lo = 0usize;
    let mut hi = values.len();
    if spec.na_drop {
        while lo < hi && is_sentinel(values[lo]) {
            lo += 1;
        }
        while hi > lo && is_sentinel(values[hi - 1]) {
            hi -= 1;
        }
    }
    if lo >= hi {
        return Err(Error::SeriesTooShort { len: 0, min: 1 });
    }
    for (offset, v) in values[lo..hi].iter().enumerate() {
        if is_sentinel(*v) {
            return Err(Error::InteriorSentinel {
                row: lo + offset + 1,
                value: *v,
            });
        }
    }

    // Continuity errors should name the missing month, so map the row offset
    // back through TimeSeries::new.
    TimeSeries::new(&spec.series_column, &months[lo..hi], values[lo..hi].to_vec()).map_err(
        |e| match e {
            Error::MonthGap { expected, row } => Error::MonthGap {
                expected,
                row: row + lo,
            },
            Error::NonMonotoneDates { row } => Error::NonMonotoneDates { row: row + lo },
            Error::NonFinite { index } => Error::NonFinite { index: index + lo },
            other => other,
        },
    )
}

/// Trim both series to the intersection of their date ranges.
pub fn align(x: &TimeSeries, y: &TimeSeries) -> Result<(TimeSeries, TimeSeries)> {
    let from = x.start().max(y.start());
    let to = x.end().min(y.end());
    if from > to {
        return Err(Error::EmptyOverlap);
    }
    Ok((x.window(from, to), y.window(from, to)))
}
