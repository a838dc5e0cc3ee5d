//! CSV batches of statlines.
//!
//! A batch has a header row and either a `stat` column holding statline text
//! or the four columns `kind,value,df1,df2`. Columns `n`, `alpha` and `label`
//! are optional. Bad rows become [`RowError`]s and do not stop the batch.

use std::io::Read;

use serde::Serialize;

use super::report::{evaluate, Report, Settings};
use super::statline::{parse_statline, Statline};
use crate::domain::SummaryStat;

/// Problems with the batch as a whole, as opposed to a single row.
#[derive(Debug, thiserror::Error)]
pub enum BatchError {
    #[error("batch header needs a `stat` column or all of `kind`, `value`, `df1`, `df2`")]
    MissingColumns,
    #[error("cannot read batch: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowError {
    /// Line number in the input file; the header is line 1.
    pub row: u64,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

enum StatColumns {
    Text(usize),
    Parts { kind: usize, value: usize, df1: usize, df2: usize },
}

struct Columns {
    stat: StatColumns,
    n: Option<usize>,
    alpha: Option<usize>,
    label: Option<usize>,
}

impl Columns {
    fn from_header(header: &csv::StringRecord) -> Result<Self, BatchError> {
        let find = |name: &str| header.iter().position(|h| h.trim().eq_ignore_ascii_case(name));
        let stat = match find("stat") {
            Some(i) => StatColumns::Text(i),
            None => match (find("kind"), find("value"), find("df1"), find("df2")) {
                (Some(kind), Some(value), Some(df1), Some(df2)) => StatColumns::Parts { kind, value, df1, df2 },
                _ => return Err(BatchError::MissingColumns),
            },
        };
        Ok(Columns {
            stat,
            n: find("n"),
            alpha: find("alpha"),
            label: find("label"),
        })
    }

    fn statline(&self, record: &csv::StringRecord) -> Result<Statline, String> {
        let field = |i: usize| record.get(i).map(str::trim).unwrap_or("");
        let optional = |i: Option<usize>| i.map(field).filter(|s| !s.is_empty());

        let mut line = match self.stat {
            StatColumns::Text(i) => parse_statline(field(i)).map_err(|e| e.to_string())?,
            StatColumns::Parts { kind, value, df1, df2 } => {
                let number = |i: usize, what: &str| {
                    field(i)
                        .parse::<f64>()
                        .map_err(|_| format!("{what} is not a number: '{}'", field(i)))
                };
                let raw_value = field(value);
                let v = number(value, "value")?;
                let stat = match field(kind).to_ascii_lowercase().as_str() {
                    "f" => SummaryStat::f(v, number(df1, "df1")?, number(df2, "df2")?),
                    "t" => SummaryStat::t(v, number(df1, "df1")?),
                    other => return Err(format!("kind must be F or t, found '{other}'")),
                }
                .map_err(|e| e.to_string())?;
                Statline {
                    raw: record.iter().collect::<Vec<_>>().join(","),
                    stat,
                    n: None,
                    alpha: None,
                    label: None,
                    value_decimals: raw_value
                        .split_once('.')
                        .map_or(0, |(_, frac)| frac.chars().take_while(char::is_ascii_digit).count()),
                }
            }
        };
        if let Some(n) = optional(self.n) {
            line.n = Some(n.parse::<u64>().map_err(|_| format!("n is not a positive integer: '{n}'"))?);
        }
        if let Some(a) = optional(self.alpha) {
            line.alpha = Some(a.parse::<f64>().map_err(|_| format!("alpha is not a number: '{a}'"))?);
        }
        line.label = optional(self.label).map(str::to_string);
        Ok(line)
    }
}

/// Evaluates every row, preserving input order.
pub fn run_batch<R: Read>(input: R, settings: &Settings) -> Result<Vec<Result<Report, RowError>>, BatchError> {
    let mut reader = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let columns = Columns::from_header(reader.headers()?)?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let row = e.position().map_or(0, |p| p.line());
                out.push(Err(RowError {
                    row,
                    message: e.to_string(),
                }));
                continue;
            }
        };
        let row = record.position().map_or(0, |p| p.line());
        let result = columns
            .statline(&record)
            .map(|line| evaluate(&line, settings))
            .map_err(|message| RowError { row, message });
        out.push(result);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(text: &str) -> Vec<Result<Report, RowError>> {
        run_batch(text.as_bytes(), &Settings::default()).unwrap()
    }

    #[test]
    fn two_rows_in_order() {
        let out = run("stat,n\n\"F(2,15)=7.16\",18\nt(38)=0.00,40\n");
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].as_ref().unwrap().input, "F(2,15)=7.16");
        assert_eq!(out[1].as_ref().unwrap().input, "t(38)=0");
        assert!(out[0].as_ref().unwrap().find("BIC", None).is_some());
    }

    #[test]
    fn bad_row_is_isolated() {
        let out = run("stat\n\"F(2,15)=-1\"\n\"F(2,15)=7.16\"\n");
        let err = out[0].as_ref().unwrap_err();
        assert_eq!(err.row, 2);
        assert!(err.message.contains("negative F"));
        assert!(out[1].is_ok());
    }

    #[test]
    fn header_only_is_empty() {
        assert!(run("stat,n,alpha,label\n").is_empty());
    }

    #[test]
    fn split_columns_and_overrides() {
        let out = run("kind,value,df1,df2,n,alpha,label\nF,7.16,2,15,18,-0.5,ex1\nt,3.00,38,,,,\n");
        let first = out[0].as_ref().unwrap();
        assert_eq!(first.label.as_deref(), Some("ex1"));
        assert_eq!(first.methods.len(), 2);
        assert!((first.find("PBF", Some(-0.5)).unwrap().bf10 - 7.268).abs() < 1e-3);
        let second = out[1].as_ref().unwrap();
        assert_eq!(second.input, "t(38)=3");
        assert!(second.warnings.iter().any(|w| w.contains("rounding")));
    }

    #[test]
    fn missing_columns_is_fatal() {
        assert!(matches!(
            run_batch("value,df1\n1,2\n".as_bytes(), &Settings::default()),
            Err(BatchError::MissingColumns)
        ));
    }

    #[test]
    fn bad_optional_fields() {
        let out = run("stat,n\n\"F(2,15)=7.16\",abc\n");
        assert!(out[0].as_ref().unwrap_err().message.contains("n is not"));
    }
}
