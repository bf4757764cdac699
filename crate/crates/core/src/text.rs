//! Plain-text serialization.
//!
//! A sparse map is written one term per line as `i1 i2 ... ik : coefficient`
//! with 1-based indices, in lexicographic key order; the empty map is the
//! single line `zero k=<arity>`. Object files prefix this with a header
//! line `kform k=<arity>` or `ktensor k=<arity>`. Coefficients use the
//! shortest representation that parses back to the same value.
//!
//! Frames and matrices are whitespace-separated rows, one row per line.
//! Blank lines and lines starting with `#` are ignored everywhere.

use std::fmt;

use crate::error::{Error, Result};
use crate::form::KForm;
use crate::index::MultiIndex;
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::sparse::SparseMap;
use crate::tensor::KTensor;

/// Shortest round-trip decimal; exponent notation outside `[1e-5, 1e16)`.
pub fn format_coeff<T: Scalar>(c: T) -> String {
    let a = c.abs();
    if c.is_zero() || (a >= T::lit(1e-5) && a < T::lit(1e16)) || !c.is_finite() {
        format!("{c}")
    } else {
        format!("{c:e}")
    }
}

impl<T: Scalar> fmt::Display for SparseMap<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return writeln!(f, "zero k={}", self.arity());
        }
        for (key, c) in self.iter() {
            if key.arity() == 0 {
                writeln!(f, ": {}", format_coeff(c))?;
            } else {
                writeln!(f, "{key} : {}", format_coeff(c))?;
            }
        }
        Ok(())
    }
}

impl<T: Scalar> fmt::Display for KForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "kform k={}", self.arity())?;
        write!(f, "{}", self.as_map())
    }
}

impl<T: Scalar> fmt::Display for KTensor<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ktensor k={}", self.arity())?;
        write!(f, "{}", self.as_map())
    }
}

/// A parsed object file.
#[derive(Debug, Clone, PartialEq)]
pub enum Parsed<T> {
    Form(KForm<T>),
    Tensor(KTensor<T>),
}

impl<T: Scalar> Parsed<T> {
    pub fn arity(&self) -> usize {
        match self {
            Parsed::Form(f) => f.arity(),
            Parsed::Tensor(t) => t.arity(),
        }
    }

    pub fn into_form(self) -> Result<KForm<T>> {
        match self {
            Parsed::Form(f) => Ok(f),
            Parsed::Tensor(_) => Err(Error::InvalidArgument("expected a kform, found a ktensor".into())),
        }
    }

    pub fn into_tensor(self) -> KTensor<T> {
        match self {
            Parsed::Form(f) => f.expand().unwrap_or_else(|_| KTensor::from_map(f.into_map())),
            Parsed::Tensor(t) => t,
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_arity_tag(line: usize, tag: &str) -> Result<usize> {
    tag.strip_prefix("k=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Parse { line, message: format!("expected `k=<arity>`, found `{tag}`") })
}

fn parse_scalar<T: Scalar>(line: usize, s: &str) -> Result<T> {
    s.parse::<T>().map_err(|_| Error::Parse { line, message: format!("invalid number `{s}`") })
}

/// Parses a `kform` or `ktensor` file. Rows of a `kform` are canonicalized
/// (sorted with sign, repeated indices dropped).
pub fn parse_object<T: Scalar>(text: &str) -> Result<Parsed<T>> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::Parse { line: 1, message: "empty input".into() })?;
    let mut parts = header.split_whitespace();
    let is_form = match parts.next() {
        Some("kform") => true,
        Some("ktensor") => false,
        other => {
            return Err(Error::Parse {
                line: hline,
                message: format!("expected `kform` or `ktensor` header, found `{}`", other.unwrap_or("")),
            })
        }
    };
    let arity = parse_arity_tag(hline, parts.next().unwrap_or(""))?;
    if let Some(extra) = parts.next() {
        return Err(Error::Parse { line: hline, message: format!("unexpected `{extra}` in header") });
    }

    let mut rows = Vec::new();
    let mut coeffs = Vec::new();
    let mut saw_zero = false;
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("zero") {
            let k = parse_arity_tag(ln, rest.trim())?;
            if k != arity {
                return Err(Error::ArityMismatch { expected: arity, found: k });
            }
            saw_zero = true;
            continue;
        }
        let (lhs, rhs) = line
            .split_once(':')
            .ok_or_else(|| Error::Parse { line: ln, message: "expected `indices : coefficient`".into() })?;
        let row = lhs
            .split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(i),
                _ => Err(Error::Parse { line: ln, message: format!("invalid index `{tok}`") }),
            })
            .collect::<Result<Vec<usize>>>()?;
        if row.len() != arity {
            return Err(Error::ArityMismatch { expected: arity, found: row.len() });
        }
        coeffs.push(parse_scalar::<T>(ln, rhs.trim())?);
        rows.push(row);
    }
    if saw_zero && !rows.is_empty() {
        return Err(Error::Parse { line: hline, message: "`zero` line mixed with terms".into() });
    }

    let mut body = SparseMap::new(arity);
    for (row, c) in rows.into_iter().zip(coeffs) {
        body.insert_accumulate(MultiIndex::new(row)?, c)?;
    }
    Ok(if is_form { Parsed::Form(KForm::from_map(&body)) } else { Parsed::Tensor(KTensor::from_map(body)) })
}

/// Whitespace-separated matrix, one row per line.
pub fn parse_matrix<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (ln, line) in content_lines(text) {
        let row = line.split_whitespace().map(|tok| parse_scalar::<T>(ln, tok)).collect::<Result<Vec<T>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(Error::Parse {
                    line: ln,
                    message: format!("row has {} entries, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    Matrix::from_rows(&rows)
}

/// A vector given either on one line or one entry per line.
pub fn parse_vector<T: Scalar>(text: &str) -> Result<Vec<T>> {
    let mut out = Vec::new();
    for (ln, line) in content_lines(text) {
        for tok in line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
            out.push(parse_scalar::<T>(ln, tok)?);
        }
    }
    Ok(out)
}

pub fn format_matrix<T: Scalar>(m: &Matrix<T>) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_coeff(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kform_file_is_canonicalized() {
        let p: Parsed<f64> = parse_object("kform k=3\n4 2 3 : 1\n1 4 2 : 5\n").unwrap();
        let expected = KForm::from_rows(&[vec![2, 3, 4], vec![1, 2, 4]], &[1.0, -5.0]).unwrap();
        assert_eq!(p, Parsed::Form(expected));
    }

    #[test]
    fn zero_form_file() {
        let p: Parsed<f64> = parse_object("kform k=2\nzero k=2\n").unwrap();
        assert_eq!(p, Parsed::Form(KForm::zero(2)));
        assert!(parse_object::<f64>("kform k=2\nzero k=3\n").is_err());
    }

    #[test]
    fn ktensor_file() {
        let p: Parsed<f64> = parse_object("ktensor k=2\n1 2 : 1\n2 3 : 2\n3 4 : 3").unwrap();
        let s1 = KTensor::from_rows(&[vec![1, 2], vec![2, 3], vec![3, 4]], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(p, Parsed::Tensor(s1));
    }

    #[test]
    fn malformed_lines_report_line_number() {
        let err = parse_object::<f64>("kform k=2\n1 2 : 1\n1 x : 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_object::<f64>("# comment\nkform k=2\n1 2 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_object::<f64>("kform k=2\n1 2 : 1\n1 2 3 : 1\n").unwrap_err();
        assert!(matches!(err, Error::ArityMismatch { expected: 2, found: 3 }));
        assert!(matches!(parse_object::<f64>("blah k=2"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn display_format() {
        let k = KForm::from_rows(&[vec![2, 4], vec![7, 8]], &[113.0, 5.0]).unwrap();
        assert_eq!(k.to_string(), "kform k=2\n2 4 : 113\n7 8 : 5\n");
        assert_eq!(KForm::<f64>::zero(3).to_string(), "kform k=3\nzero k=3\n");
        assert_eq!(KForm::scalar(0.25).to_string(), "kform k=0\n: 0.25\n");
        let back: Parsed<f64> = parse_object(&KForm::scalar(0.25).to_string()).unwrap();
        assert_eq!(back, Parsed::Form(KForm::scalar(0.25)));
    }

    #[test]
    fn coefficient_formatting() {
        assert_eq!(format_coeff(3.0), "3");
        assert_eq!(format_coeff(-0.5), "-0.5");
        assert_eq!(format_coeff(1e-17), "1e-17");
        assert_eq!(format_coeff(371423053.0), "371423053");
        assert_eq!(format_coeff(0.1 + 0.2), "0.30000000000000004");
    }

    #[test]
    fn matrices_and_vectors() {
        let m: Matrix<f64> = parse_matrix("1 4 7\n2 5 8\n3 6 9\n").unwrap();
        assert_eq!(m.column(0), &[1.0, 2.0, 3.0]);
        assert!(matches!(parse_matrix::<f64>("1 2\n3\n"), Err(Error::Parse { line: 2, .. })));
        assert_eq!(parse_vector::<f64>("14\n15\n16\n").unwrap(), vec![14.0, 15.0, 16.0]);
        assert_eq!(parse_vector::<f64>("1, 2, 3").unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(format_matrix(&m).lines().next(), Some("1 4 7"));
    }
}
