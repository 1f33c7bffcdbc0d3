//! Plain-text matrix files.
//!
//! ```text
//! # optional comments
//! matrix 2 2
//! 1 3/4,-1/2
//! 0 -2
//! ```
//!
//! The header is `matrix <rows> <cols>`, followed by one line per row with
//! entries separated by spaces. An entry is `rat` or `rat,rat` (real and
//! imaginary parts), where `rat` is `[-]digits[/digits]` with a nonzero
//! denominator. `#` starts a comment running to the end of the line and
//! blank lines are ignored. Output is always in lowest terms.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::exactpoly::GaussianRational;
use crate::matrix::ExactMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader,
    InvalidEntry,
    ZeroDenominator,
    WrongEntryCount { expected: usize, found: usize },
    MissingRows { expected: usize, found: usize },
    TrailingGarbage,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MalformedHeader => {
                f.write_str("malformed header, expected `matrix <rows> <cols>`")
            }
            Self::InvalidEntry => f.write_str("invalid entry"),
            Self::ZeroDenominator => f.write_str("zero denominator"),
            Self::WrongEntryCount { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            Self::MissingRows { expected, found } => {
                write!(f, "expected {expected} rows, found {found}")
            }
            Self::TrailingGarbage => f.write_str("unexpected content after the last row"),
        }
    }
}

/// Location is 1-based; `token` is the offending text (empty at end of
/// input).
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind} (at `{token}`)")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub kind: ParseErrorKind,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (idx, ch) in content
        .char_indices()
        .chain(std::iter::once((content.len(), ' ')))
    {
        match (ch.is_ascii_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push(Token {
                    text: &content[s..idx],
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

fn parse_rat(s: &str) -> Result<BigRational, ParseErrorKind> {
    let body = s.strip_prefix('-').unwrap_or(s);
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if !is_digits(num) || den.is_some_and(|d| !is_digits(d)) {
        return Err(ParseErrorKind::InvalidEntry);
    }
    let mut numer = BigInt::from_str(num).map_err(|_| ParseErrorKind::InvalidEntry)?;
    if s.starts_with('-') {
        numer = -numer;
    }
    let denom = match den {
        Some(d) => BigInt::from_str(d).map_err(|_| ParseErrorKind::InvalidEntry)?,
        None => BigInt::from(1),
    };
    if denom.is_zero() {
        return Err(ParseErrorKind::ZeroDenominator);
    }
    Ok(BigRational::new(numer, denom))
}

/// Parses one `rat` or `rat,rat` entry.
pub fn parse_entry(s: &str) -> Result<GaussianRational, ParseErrorKind> {
    match s.split_once(',') {
        Some((re, im)) => Ok(GaussianRational::new(parse_rat(re)?, parse_rat(im)?)),
        None => Ok(GaussianRational::from_real(parse_rat(s)?)),
    }
}

fn nat(s: &str) -> Option<usize> {
    if is_digits(s) {
        s.parse().ok()
    } else {
        None
    }
}

pub fn parse_matrix(contents: &str) -> Result<ExactMatrix, ParseError> {
    let mut lines = contents
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, tokens(l)))
        .filter(|(_, t)| !t.is_empty());

    let err = |line, column, token: &str, kind| ParseError {
        line,
        column,
        token: token.to_string(),
        kind,
    };

    let Some((hline, header)) = lines.next() else {
        return Err(err(1, 1, "", ParseErrorKind::MalformedHeader));
    };
    let (rows, cols) = match header.as_slice() {
        [kw, r, c] if kw.text == "matrix" => match (nat(r.text), nat(c.text)) {
            (Some(r), Some(c)) => (r, c),
            (None, _) => {
                return Err(err(
                    hline,
                    r.column,
                    r.text,
                    ParseErrorKind::MalformedHeader,
                ))
            }
            (_, None) => {
                return Err(err(
                    hline,
                    c.column,
                    c.text,
                    ParseErrorKind::MalformedHeader,
                ))
            }
        },
        [first, ..] if first.text != "matrix" => {
            return Err(err(
                hline,
                first.column,
                first.text,
                ParseErrorKind::MalformedHeader,
            ))
        }
        toks => {
            let t = toks.get(3).or(toks.last()).expect("nonempty");
            return Err(err(
                hline,
                t.column,
                t.text,
                ParseErrorKind::MalformedHeader,
            ));
        }
    };

    let mut entries = Vec::with_capacity(rows * cols);
    let mut seen = 0;
    for (lineno, toks) in lines {
        if seen == rows {
            let t = &toks[0];
            return Err(err(
                lineno,
                t.column,
                t.text,
                ParseErrorKind::TrailingGarbage,
            ));
        }
        if toks.len() != cols {
            let t = toks.get(cols).unwrap_or(&toks[toks.len() - 1]);
            return Err(err(
                lineno,
                t.column,
                t.text,
                ParseErrorKind::WrongEntryCount {
                    expected: cols,
                    found: toks.len(),
                },
            ));
        }
        for t in &toks {
            entries.push(parse_entry(t.text).map_err(|kind| err(lineno, t.column, t.text, kind))?);
        }
        seen += 1;
    }
    if seen != rows {
        let line = contents.lines().count().max(1);
        return Err(err(
            line,
            1,
            "",
            ParseErrorKind::MissingRows {
                expected: rows,
                found: seen,
            },
        ));
    }
    Ok(ExactMatrix::new(rows, cols, entries).expect("entry count checked"))
}

fn write_rat(out: &mut String, r: &BigRational) {
    use fmt::Write;
    if r.is_integer() {
        let _ = write!(out, "{}", r.numer());
    } else {
        let _ = write!(out, "{}/{}", r.numer(), r.denom());
    }
}

/// Canonical entry text: `re` when real, otherwise `re,im`.
pub fn format_entry(z: &GaussianRational) -> String {
    let mut s = String::new();
    write_rat(&mut s, z.re());
    if !z.is_real() {
        s.push(',');
        write_rat(&mut s, z.im());
    }
    s
}

/// Serializes in canonical form; `parse_matrix` reads it back exactly.
pub fn format_matrix(m: &ExactMatrix) -> String {
    let mut out = format!("matrix {} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(format_entry).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity() {
        let m = parse_matrix("matrix 2 2\n1 0\n0 1\n").unwrap();
        assert_eq!(m, ExactMatrix::identity(2));
    }

    #[test]
    fn complex_entry() {
        let z = parse_entry("3/4,-1/2").unwrap();
        assert_eq!(
            z,
            GaussianRational::new(
                BigRational::new(3.into(), 4.into()),
                BigRational::new((-1).into(), 2.into())
            )
        );
        assert_eq!(format_entry(&z), "3/4,-1/2");
    }

    #[test]
    fn comments_blank_lines_and_reduction() {
        let src = "# header comment\n\nmatrix 1 3   # dims\n2/4 -6/3 0,5\n\n# trailing\n";
        let m = parse_matrix(src).unwrap();
        assert_eq!(format_matrix(&m), "matrix 1 3\n1/2 -2 0,5\n");
    }

    #[test]
    fn error_locations() {
        let e = parse_matrix("matrix 2 2\n1 0\n0 1/0\n").unwrap_err();
        assert_eq!(
            (e.line, e.column, e.token.as_str(), e.kind.clone()),
            (3, 3, "1/0", ParseErrorKind::ZeroDenominator)
        );

        let e = parse_matrix("matrix 2 2\n1 0 5\n0 1\n").unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::WrongEntryCount {
                expected: 2,
                found: 3
            }
        );
        assert_eq!((e.line, e.column), (2, 5));

        let e = parse_matrix("matrix 1 1\n1\n2\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::TrailingGarbage);
        assert_eq!(e.line, 3);

        let e = parse_matrix("matrx 1 1\n1\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MalformedHeader);

        let e = parse_matrix("matrix 2 x\n").unwrap_err();
        assert_eq!(
            (e.kind, e.column, e.token.as_str()),
            (ParseErrorKind::MalformedHeader, 10, "x")
        );

        let e = parse_matrix("matrix 2 1\n1\n").unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::MissingRows {
                expected: 2,
                found: 1
            }
        );

        for bad in ["1.5", "--1", "1/", "/2", "1,", "a", "1/-2", "1,2,3"] {
            assert!(parse_entry(bad).is_err(), "{bad} should not parse");
        }
    }
}
