//! Plain-text matrix format: a line holding `n`, then `n` lines of `n`
//! whitespace-separated complex entries written `a+bi` (the imaginary part
//! is omitted when zero). Numbers always use `.` as decimal separator and
//! are written with 17 significant digits so doubles round-trip exactly.

use std::fmt::Write as _;
use std::str::FromStr;

use num_complex::Complex64;

use super::matrix::Matrix;
use crate::error::{Error, Result};

pub fn format_entry(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.16e}", z.re)
    } else {
        format!("{:.16e}{:+.16e}i", z.re, z.im)
    }
}

pub fn parse_entry(token: &str) -> Option<Complex64> {
    Complex64::from_str(token).ok().filter(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn write_matrix(m: &Matrix) -> String {
    let n = m.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_entry(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

/// Parse one matrix from a line iterator. `first_line` is the 1-based line
/// number of the next line yielded, used in error messages.
pub fn read_matrix<'a, I>(lines: &mut I, first_line: usize) -> Result<Matrix>
where
    I: Iterator<Item = &'a str>,
{
    let header = lines.next().ok_or_else(|| Error::parse(first_line, "missing dimension line"))?;
    let n: usize =
        header.trim().parse().map_err(|_| Error::parse(first_line, format!("bad dimension {:?}", header.trim())))?;
    if n == 0 {
        return Err(Error::parse(first_line, "dimension must be positive"));
    }
    let mut data = Vec::with_capacity(n * n);
    for row in 0..n {
        let line_no = first_line + 1 + row;
        let line = lines.next().ok_or_else(|| Error::parse(line_no, "missing matrix row"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != n {
            return Err(Error::parse(line_no, format!("expected {n} entries, found {}", tokens.len())));
        }
        for tok in tokens {
            let z = parse_entry(tok).ok_or_else(|| Error::parse(line_no, format!("bad entry {tok:?}")))?;
            data.push(z);
        }
    }
    Matrix::from_vec(n, data).map_err(|e| Error::parse(first_line, e.to_string()))
}

pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let m = read_matrix(&mut lines, 1)?;
    if lines.next().is_some() {
        return Err(Error::parse(m.dim() + 2, "trailing content after matrix"));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn entry_forms() {
        assert_eq!(parse_entry("1.5"), Some(Complex64::new(1.5, 0.0)));
        assert_eq!(parse_entry("1.5e-3-2.5e4i"), Some(Complex64::new(1.5e-3, -2.5e4)));
        assert_eq!(parse_entry("-2+3i"), Some(Complex64::new(-2.0, 3.0)));
        assert_eq!(parse_entry("4i"), Some(Complex64::new(0.0, 4.0)));
        assert_eq!(parse_entry("1,5"), None);
        assert_eq!(parse_entry("abc"), None);
        assert_eq!(format_entry(Complex64::new(2.0, 0.0)), "2.0000000000000000e0");
        assert_eq!(format_entry(Complex64::new(1.0, -0.5)), "1.0000000000000000e0-5.0000000000000000e-1i");
    }

    #[test]
    fn parses_document() {
        let m = parse_matrix("2\n1 0+1i\n0-1i 2\n").unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(m[(1, 1)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_matrix("2\n1 2\n3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_matrix("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_matrix("1\n1\n2\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_matrix("1\nnan\n"), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn write_then_parse_is_exact(
            n in 1usize..5,
            vals in proptest::collection::vec((-1e6f64..1e6, -1e6f64..1e6), 16),
        ) {
            let data: Vec<Complex64> =
                vals.iter().cycle().take(n * n).map(|&(re, im)| Complex64::new(re, im)).collect();
            let m = Matrix::from_vec(n, data).unwrap();
            prop_assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        }
    }
}
