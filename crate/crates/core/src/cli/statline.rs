//! Parser for reported statistics such as `F(2,15)=7.16` or `t(38)=3.00`.
//!
//! Grammar (whitespace allowed between tokens, letters case-insensitive):
//!
//! ```text
//! statline := kind '(' number [ ',' number ] ')' '=' number
//! kind     := 'F' | 't'
//! number   := [+-] digits [ '.' digits ] [ ('e'|'E') [+-] digits ]
//! ```
//!
//! `F` takes two degrees of freedom and a nonnegative value; `t` takes one.

use serde::Serialize;

use crate::domain::{StatKind, SummaryStat};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Statline {
    pub raw: String,
    pub stat: SummaryStat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    /// Digits after the decimal point in the reported value.
    #[serde(skip)]
    pub value_decimals: usize,
}

impl Statline {
    pub fn canonical(&self) -> String {
        self.stat.to_string()
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn error(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
            found,
        }
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        if self.peek() == Some(want) {
            self.pos += want.len_utf8();
            Ok(())
        } else {
            Err(self.error(&format!("'{want}'")))
        }
    }

    /// Returns the value and the number of fractional digits.
    fn number(&mut self, what: &str) -> Result<(f64, usize)> {
        self.skip_ws();
        let start = self.pos;
        let bytes = self.text.as_bytes();
        let mut i = self.pos;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        let int_start = i;
        while i < bytes.len() && bytes[i].is_ascii_digit() {
            i += 1;
        }
        if i == int_start {
            return Err(self.error(what));
        }
        let mut decimals = 0;
        if i < bytes.len() && bytes[i] == b'.' {
            let frac_start = i + 1;
            let mut j = frac_start;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == frac_start {
                self.pos = j;
                return Err(self.error("digits after the decimal point"));
            }
            decimals = j - frac_start;
            i = j;
        }
        if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
            let mut j = i + 1;
            if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                j += 1;
            }
            let exp_start = j;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if j == exp_start {
                self.pos = j;
                return Err(self.error("exponent digits"));
            }
            i = j;
        }
        self.pos = i;
        let value = self.text[start..i]
            .parse::<f64>()
            .map_err(|_| Error::Parse {
                position: start,
                expected: what.to_string(),
                found: format!("'{}'", &self.text[start..i]),
            })?;
        Ok((value, decimals))
    }

    fn positive_df(&mut self) -> Result<f64> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let (df, _) = self.number("degrees of freedom")?;
        if df > 0.0 && df.is_finite() {
            Ok(df)
        } else {
            Err(Error::Parse {
                position: at,
                expected: "positive degrees of freedom".into(),
                found: format!("{df}"),
            })
        }
    }
}

/// Parses a statline into a [`Statline`] with no sample size, prior or label.
pub fn parse_statline(text: &str) -> Result<Statline> {
    let mut cur = Cursor { text, pos: 0 };
    cur.skip_ws();
    let kind = match cur.peek() {
        Some('F' | 'f') => StatKind::F,
        Some('t' | 'T') => StatKind::T,
        _ => return Err(cur.error("'F' or 't'")),
    };
    cur.pos += 1;
    cur.expect('(')?;
    let df1 = cur.positive_df()?;
    cur.skip_ws();
    let df2 = if cur.peek() == Some(',') {
        cur.pos += 1;
        Some(cur.positive_df()?)
    } else {
        None
    };
    let close_expect = match (kind, df2) {
        (StatKind::F, None) => "',' and a second degrees of freedom",
        _ => "')'",
    };
    cur.skip_ws();
    if cur.peek() != Some(')') || (kind == StatKind::F && df2.is_none()) {
        return Err(cur.error(close_expect));
    }
    if kind == StatKind::T && df2.is_some() {
        return Err(Error::Parse {
            position: cur.pos,
            expected: "a single degrees of freedom for t".into(),
            found: "two".into(),
        });
    }
    cur.pos += 1;
    cur.expect('=')?;
    let (value, value_decimals) = cur.number("a numeric statistic")?;
    cur.skip_ws();
    if cur.pos != text.len() {
        return Err(cur.error("end of input"));
    }
    let stat = match (kind, df2) {
        (StatKind::F, Some(df2)) => SummaryStat::f(value, df1, df2)?,
        (StatKind::T, None) => SummaryStat::t(value, df1)?,
        _ => unreachable!("checked above"),
    };
    Ok(Statline {
        raw: text.to_string(),
        stat,
        n: None,
        alpha: None,
        label: None,
        value_decimals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_worked_examples() {
        let f = parse_statline("F(2,15)=7.16").unwrap();
        assert_eq!(f.stat, SummaryStat::f(7.16, 2.0, 15.0).unwrap());
        assert_eq!(f.value_decimals, 2);
        let t = parse_statline("t(38)=3.00").unwrap();
        assert_eq!(t.stat, SummaryStat::t(3.0, 38.0).unwrap());
        let spaced = parse_statline(" f( 2 , 15 ) = 7.16 ").unwrap();
        assert_eq!(spaced.stat, f.stat);
        assert_eq!(parse_statline("T(12.5) = -2.1").unwrap().stat, SummaryStat::t(-2.1, 12.5).unwrap());
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(parse_statline(" f( 2 , 15 ) = 7.16 ").unwrap().canonical(), "F(2,15)=7.16");
        assert_eq!(parse_statline("t(38)=3.00").unwrap().canonical(), "t(38)=3");
        for s in ["F(2,15)=7.16", "t(38)=-3.5", "F(1.5,20.25)=0.001"] {
            let once = parse_statline(s).unwrap().canonical();
            assert_eq!(once, s);
            assert_eq!(parse_statline(&once).unwrap().canonical(), once);
        }
    }

    fn parse_err(s: &str) -> (usize, String) {
        match parse_statline(s).unwrap_err() {
            Error::Parse { position, expected, .. } => (position, expected),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn reports_positions() {
        assert_eq!(parse_err("X(2,15)=1").0, 0);
        assert_eq!(parse_err("F 2,15)=1"), (2, "'('".to_string()));
        assert_eq!(parse_err("F(2)=1").0, 3);
        assert_eq!(parse_err("t(2,3)=1").0, 5);
        assert_eq!(parse_err("F(2,15)7.16").0, 7);
        assert_eq!(parse_err("F(2,15)=").0, 8);
        assert_eq!(parse_err("F(2,15)=7.16 extra").0, 13);
        assert_eq!(parse_err("F(0,15)=1").0, 2);
        assert_eq!(parse_err("F(2,15)=7.").0, 10);
        assert_eq!(parse_err("").0, 0);
    }

    #[test]
    fn negative_f_is_a_semantic_error() {
        assert!(matches!(parse_statline("F(2,15)=-1"), Err(Error::Domain { .. })));
        let msg = parse_statline("F(2,15)=-1").unwrap_err().to_string();
        assert!(msg.contains("negative F"));
    }

    proptest! {
        #[test]
        fn render_then_parse_round_trips(
            is_f in any::<bool>(),
            value in -1e6f64..1e6,
            df1 in 1f64..100.0,
            df2 in 0.01f64..1e4,
        ) {
            let stat = if is_f {
                SummaryStat::f(value.abs(), df1, df2).unwrap()
            } else {
                SummaryStat::t(value, df2).unwrap()
            };
            let parsed = parse_statline(&stat.to_string()).unwrap();
            prop_assert_eq!(parsed.stat, stat);
        }
    }
}
