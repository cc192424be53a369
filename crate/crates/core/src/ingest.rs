//! CSV readers and writers for meter data.
//!
//! Three layouts are understood:
//!
//! * `long`: one sample per row, either `value` or `timestamp,value`.
//! * `wide`: one named series per column, optionally led by a timestamp column.
//! * `labeled`: one pattern per row, `label,v1,...,vs`.
//!
//! A header row is detected by trying to parse the first row's numeric fields,
//! unless [`HeaderMode`] forces it. Missing or non-numeric values are errors;
//! nothing is imputed or skipped. Timestamps are naive ISO-8601 local times
//! and must advance by a constant whole number of minutes.
//!
//! Line numbers in errors are 1-based and count the header.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use chrono::NaiveDateTime;
use serde::Serialize;

use crate::classify::LabeledSet;
use crate::error::{Error, Result};
use crate::types::{TimeSeries, DEFAULT_INTERVAL_MINUTES};

const TIMESTAMP_FORMATS: &[&str] = &["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M", "%Y-%m-%d %H:%M"];

/// Format used when writing timestamps.
pub const TIMESTAMP_OUT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Long,
    Wide,
    Labeled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HeaderMode {
    #[default]
    Auto,
    Present,
    Absent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadOptions {
    pub format: Format,
    pub delimiter: u8,
    pub header: HeaderMode,
    /// Interval assigned to series without timestamps.
    pub interval_minutes: u32,
}

impl ReadOptions {
    pub fn new(format: Format) -> Self {
        Self { format, delimiter: b',', header: HeaderMode::Auto, interval_minutes: DEFAULT_INTERVAL_MINUTES }
    }
}

/// A data file and how to read it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesFile {
    pub path: PathBuf,
    pub options: ReadOptions,
}

impl SeriesFile {
    pub fn new(path: impl Into<PathBuf>, format: Format) -> Self {
        Self { path: path.into(), options: ReadOptions::new(format) }
    }

    pub fn delimiter(mut self, d: u8) -> Self {
        self.options.delimiter = d;
        self
    }

    pub fn header(mut self, h: HeaderMode) -> Self {
        self.options.header = h;
        self
    }

    pub fn interval(mut self, minutes: u32) -> Self {
        self.options.interval_minutes = minutes;
        self
    }

    fn open(&self) -> Result<fs::File> {
        fs::File::open(&self.path).map_err(|e| io_error(&self.path, e))
    }
}

fn io_error(path: &Path, e: std::io::Error) -> Error {
    Error::Io { path: path.display().to_string(), reason: e.to_string() }
}

/// Reads a `long` file as one series or a `wide` file as one series per column.
pub fn read_series(file: &SeriesFile) -> Result<Vec<TimeSeries>> {
    parse_series(file.open()?, &file.options)
}

pub fn read_labeled_set(file: &SeriesFile) -> Result<LabeledSet> {
    parse_labeled(file.open()?, &file.options)
}

/// Named series from a `wide` file, or from every `*.csv` (read as `long`) in a
/// directory, named by file stem and sorted by name.
pub fn read_bundle(path: &Path, options: &ReadOptions) -> Result<Vec<TimeSeries>> {
    if !path.is_dir() {
        let opts = ReadOptions { format: Format::Wide, ..options.clone() };
        return read_series(&SeriesFile { path: path.to_owned(), options: opts });
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| io_error(path, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")))
        .collect();
    files.sort();
    let opts = ReadOptions { format: Format::Long, ..options.clone() };
    files
        .into_iter()
        .map(|p| {
            let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let mut series = read_series(&SeriesFile { path: p, options: opts.clone() })?;
            Ok(series.remove(0).with_label(name))
        })
        .collect()
}

struct Row {
    line: usize,
    fields: Vec<String>,
}

fn read_rows<R: Read>(reader: R, options: &ReadOptions) -> Result<Vec<Row>> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec
            .map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), reason: e.to_string() })?;
        let line = rec.position().map_or(rows.len() + 1, |p| p.line() as usize);
        if rec.len() == 1 && rec[0].is_empty() {
            continue;
        }
        rows.push(Row { line, fields: rec.iter().map(str::to_owned).collect() });
    }
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok(rows)
}

fn parse_value(field: &str, line: usize) -> Result<f64> {
    if field.is_empty() {
        return Err(Error::Parse { line, reason: "missing value".into() });
    }
    let v: f64 = field.parse().map_err(|_| Error::Parse { line, reason: format!("not a number: {field:?}") })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteSampleAt(line))
    }
}

pub fn parse_timestamp(field: &str) -> Option<NaiveDateTime> {
    TIMESTAMP_FORMATS.iter().find_map(|f| NaiveDateTime::parse_from_str(field, f).ok())
}

fn is_number(field: &str) -> bool {
    field.parse::<f64>().is_ok()
}

/// Splits off a header row if requested or detected by `looks_like_header`.
fn split_header(
    mut rows: Vec<Row>,
    mode: HeaderMode,
    looks_like_header: impl Fn(&[String]) -> bool,
) -> Result<(Option<Row>, Vec<Row>)> {
    let has_header = match mode {
        HeaderMode::Present => true,
        HeaderMode::Absent => false,
        HeaderMode::Auto => looks_like_header(&rows[0].fields),
    };
    let header = has_header.then(|| rows.remove(0));
    if rows.is_empty() {
        return Err(Error::EmptyFile);
    }
    Ok((header, rows))
}

fn check_width(rows: &[Row], width: usize) -> Result<()> {
    match rows.iter().find(|r| r.fields.len() != width) {
        Some(r) => Err(Error::RaggedRows(r.line)),
        None => Ok(()),
    }
}

/// Start time and interval from a column of timestamps.
fn timing(stamps: &[(usize, &str)], default_interval: u32) -> Result<(NaiveDateTime, u32)> {
    let mut parsed = Vec::with_capacity(stamps.len());
    for &(line, s) in stamps {
        let t = parse_timestamp(s).ok_or_else(|| Error::Parse { line, reason: format!("bad timestamp: {s:?}") })?;
        parsed.push((line, t));
    }
    let start = parsed[0].1;
    if parsed.len() == 1 {
        return Ok((start, default_interval));
    }
    let step = (parsed[1].1 - start).num_seconds();
    if step <= 0 || step % 60 != 0 {
        return Err(Error::IrregularInterval(parsed[1].0));
    }
    for w in parsed.windows(2) {
        if (w[1].1 - w[0].1).num_seconds() != step {
            return Err(Error::IrregularInterval(w[1].0));
        }
    }
    let minutes = u32::try_from(step / 60).map_err(|_| Error::IrregularInterval(parsed[1].0))?;
    Ok((start, minutes))
}

fn build(values: Vec<f64>, start: Option<NaiveDateTime>, interval: u32) -> Result<TimeSeries> {
    let s = TimeSeries::new(values)?.with_interval(interval)?;
    Ok(match start {
        Some(t) => s.with_start(t),
        None => s,
    })
}

pub fn parse_series<R: Read>(reader: R, options: &ReadOptions) -> Result<Vec<TimeSeries>> {
    match options.format {
        Format::Long => parse_long(reader, options).map(|s| vec![s]),
        Format::Wide => parse_wide(reader, options),
        Format::Labeled => {
            Err(Error::InvalidParameter("labeled files hold patterns, read them with read_labeled_set".into()))
        }
    }
}

fn parse_long<R: Read>(reader: R, options: &ReadOptions) -> Result<TimeSeries> {
    let rows = read_rows(reader, options)?;
    let (_, rows) = split_header(rows, options.header, |f| !is_number(f.last().map_or("", String::as_str)))?;
    let width = rows[0].fields.len();
    if width > 2 {
        return Err(Error::Parse {
            line: rows[0].line,
            reason: format!("long format takes 1 or 2 columns, found {width}"),
        });
    }
    check_width(&rows, width)?;

    let values = rows.iter().map(|r| parse_value(&r.fields[width - 1], r.line)).collect::<Result<Vec<_>>>()?;
    if width == 1 {
        return build(values, None, options.interval_minutes);
    }
    let stamps: Vec<(usize, &str)> = rows.iter().map(|r| (r.line, r.fields[0].as_str())).collect();
    let (start, interval) = timing(&stamps, options.interval_minutes)?;
    build(values, Some(start), interval)
}

fn is_time_name(name: &str) -> bool {
    matches!(name.to_ascii_lowercase().as_str(), "timestamp" | "time" | "datetime" | "date")
}

fn parse_wide<R: Read>(reader: R, options: &ReadOptions) -> Result<Vec<TimeSeries>> {
    let rows = read_rows(reader, options)?;
    let (header, rows) =
        split_header(rows, options.header, |f| f.iter().any(|x| !is_number(x) && parse_timestamp(x).is_none()))?;
    let width = header.as_ref().map_or(rows[0].fields.len(), |h| h.fields.len());
    check_width(&rows, width)?;

    let has_time = match &header {
        Some(h) => is_time_name(&h.fields[0]),
        None => parse_timestamp(&rows[0].fields[0]).is_some(),
    };
    let first = usize::from(has_time);
    if first >= width {
        return Err(Error::Parse { line: rows[0].line, reason: "no value columns".into() });
    }
    let names: Vec<String> = match &header {
        Some(h) => h.fields[first..].to_vec(),
        None => (first..width).map(|c| format!("series_{}", c - first + 1)).collect(),
    };

    let (start, interval) = if has_time {
        let stamps: Vec<(usize, &str)> = rows.iter().map(|r| (r.line, r.fields[0].as_str())).collect();
        let (s, i) = timing(&stamps, options.interval_minutes)?;
        (Some(s), i)
    } else {
        (None, options.interval_minutes)
    };

    names
        .into_iter()
        .enumerate()
        .map(|(k, name)| {
            let col = first + k;
            let values = rows.iter().map(|r| parse_value(&r.fields[col], r.line)).collect::<Result<Vec<_>>>()?;
            Ok(build(values, start, interval)?.with_label(name))
        })
        .collect()
}

pub fn parse_labeled<R: Read>(reader: R, options: &ReadOptions) -> Result<LabeledSet> {
    let rows = read_rows(reader, options)?;
    let (_, rows) = split_header(rows, options.header, |f| f.iter().skip(1).any(|x| !is_number(x)))?;
    let width = rows[0].fields.len();
    if width < 2 {
        return Err(Error::Parse { line: rows[0].line, reason: "labeled rows need a label and values".into() });
    }
    check_width(&rows, width)?;

    let patterns = rows
        .iter()
        .map(|r| {
            let label = &r.fields[0];
            if label.is_empty() {
                return Err(Error::MissingLabel(r.line));
            }
            let values = r.fields[1..].iter().map(|f| parse_value(f, r.line)).collect::<Result<Vec<_>>>()?;
            Ok(TimeSeries::new(values)?.with_interval(options.interval_minutes)?.with_label(label.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    LabeledSet::new(patterns)
}

/// Writes `series` in `long` layout: `timestamp,value` when it has a start
/// time, otherwise a single `value` column.
pub fn write_long<W: Write>(series: &TimeSeries, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let res: csv::Result<()> = (|| {
        if series.start().is_some() {
            w.write_record(["timestamp", "value"])?;
            for (i, v) in series.values().iter().enumerate() {
                let t = series.timestamp_of(i).expect("start present");
                w.write_record([t.format(TIMESTAMP_OUT).to_string(), v.to_string()])?;
            }
        } else {
            w.write_record(["value"])?;
            for v in series.values() {
                w.write_record([v.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    })();
    res.map_err(|e| Error::Io { path: "<writer>".into(), reason: e.to_string() })
}
