use std::fmt::Write as _;
use std::path::Path;

use super::fmt_machine;
use crate::error::{Error, Result};

/// Header line of tick files.
pub const TICK_HEADER: &str = "time,price";

/// Observation times with prices. Times are strictly increasing; by
/// convention the trading day is rescaled to `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TickSeries {
    pub times: Vec<f64>,
    pub prices: Vec<f64>,
    pub source: String,
}

impl TickSeries {
    pub fn new(times: Vec<f64>, prices: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        let s = Self {
            times,
            prices,
            source: source.into(),
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.times.len() != self.prices.len() {
            return Err(Error::Data("times and prices differ in length".into()));
        }
        for (i, (t, p)) in self.times.iter().zip(&self.prices).enumerate() {
            if !(t.is_finite() && p.is_finite()) {
                return Err(Error::Data(format!(
                    "non-finite value in data row {}",
                    i + 1
                )));
            }
            if i > 0 && !(*t > self.times[i - 1]) {
                return Err(Error::Data(format!(
                    "time not strictly increasing at data row {}",
                    i + 1
                )));
            }
        }
        Ok(())
    }

    /// Parses `time,price` CSV. Row numbers in errors count data rows from 1.
    pub fn parse_csv(text: &str, source: impl Into<String>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.trim().eq_ignore_ascii_case(TICK_HEADER) => {}
            Some((_, h)) => {
                return Err(Error::Data(format!(
                    "expected header `{TICK_HEADER}`, found `{}`",
                    h.trim()
                )))
            }
            None => return Err(Error::Data("empty tick file".into())),
        }
        let mut times = Vec::new();
        let mut prices = Vec::new();
        for (row, (_, line)) in lines.enumerate() {
            let mut fields = line.split(',');
            let parse = |f: Option<&str>, what: &str| -> Result<f64> {
                f.map(str::trim)
                    .ok_or_else(|| Error::Data(format!("data row {}: missing {what}", row + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Data(format!("data row {}: bad {what}: {e}", row + 1)))
            };
            times.push(parse(fields.next(), "time")?);
            prices.push(parse(fields.next(), "price")?);
            if fields.next().is_some() {
                return Err(Error::Data(format!(
                    "data row {}: too many fields",
                    row + 1
                )));
            }
        }
        Self::new(times, prices, source)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse_csv(&text, path.display().to_string())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * (self.times.len() + 1));
        out.push_str(TICK_HEADER);
        out.push('\n');
        for (t, p) in self.times.iter().zip(&self.prices) {
            let _ = writeln!(out, "{},{}", fmt_machine(*t), fmt_machine(*p));
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}
