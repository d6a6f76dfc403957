//! Text matrix and image-series files.
//!
//! ```text
//! MAT1 <rows> <cols> <real|complex>
//! <rows lines of cols values; complex entries as "re im">
//!
//! SER1 <nx> <ny> <t> <real|complex>
//! <t frames of nx lines with ny values each, frames separated by a blank line>
//! ```
//!
//! Values are written with 17 significant digits, which round-trips every
//! finite `f64` exactly.

use num_complex::Complex64;
use sure_svt::blockwise::ImageSeries;
use sure_svt::{Field, Matrix, Scalar};

/// Scalars that can be stored in the text formats.
pub trait FileScalar: Scalar<Real = f64> {
    /// Numbers per entry.
    const WIDTH: usize;
    fn write_to(self, out: &mut String);
    fn from_numbers(v: &[f64]) -> Self;
}

/// Shortest fixed-width rendering with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

impl FileScalar for f64 {
    const WIDTH: usize = 1;
    fn write_to(self, out: &mut String) {
        out.push_str(&format_f64(self));
    }
    fn from_numbers(v: &[f64]) -> Self {
        v[0]
    }
}

impl FileScalar for Complex64 {
    const WIDTH: usize = 2;
    fn write_to(self, out: &mut String) {
        out.push_str(&format_f64(self.re));
        out.push(' ');
        out.push_str(&format_f64(self.im));
    }
    fn from_numbers(v: &[f64]) -> Self {
        Complex64::new(v[0], v[1])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(Matrix<f64>),
    Complex(Matrix<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnySeries {
    Real(ImageSeries<f64>),
    Complex(ImageSeries<Complex64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Matrix(AnyMatrix),
    Series(AnySeries),
}

fn write_rows<T: FileScalar>(out: &mut String, m: &Matrix<T>) {
    for i in 0..m.rows() {
        for (j, &v) in m.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            v.write_to(out);
        }
        out.push('\n');
    }
}

pub fn write_mat<T: FileScalar>(m: &Matrix<T>) -> String {
    let mut out = format!("MAT1 {} {} {}\n", m.rows(), m.cols(), T::FIELD);
    write_rows(&mut out, m);
    out
}

pub fn write_ser<T: FileScalar>(s: &ImageSeries<T>) -> String {
    let mut out = format!("SER1 {} {} {} {}\n", s.nx(), s.ny(), s.t(), T::FIELD);
    for (k, frame) in s.frames().iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        write_rows(&mut out, frame);
    }
    out
}

fn parse_field(tok: &str) -> Result<Field, String> {
    match tok {
        "real" => Ok(Field::Real),
        "complex" => Ok(Field::Complex),
        other => Err(format!("unknown field '{other}'")),
    }
}

fn parse_dim(tok: &str, what: &str) -> Result<usize, String> {
    match tok.parse::<usize>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("bad {what} '{tok}'")),
    }
}

/// Parses `count` lines of `width·cols` numbers into a row-major vector.
fn parse_block<T: FileScalar>(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    count: usize,
    cols: usize,
) -> Result<Vec<T>, String> {
    let mut data = Vec::with_capacity(count * cols);
    let mut buf = Vec::with_capacity(cols * T::WIDTH);
    for _ in 0..count {
        let (lineno, line) = lines.next().ok_or("unexpected end of file")?;
        buf.clear();
        for tok in line.split_whitespace() {
            let v: f64 = tok
                .parse()
                .map_err(|_| format!("line {}: bad number '{tok}'", lineno + 1))?;
            if !v.is_finite() {
                return Err(format!("line {}: non-finite value '{tok}'", lineno + 1));
            }
            buf.push(v);
        }
        if buf.len() != cols * T::WIDTH {
            return Err(format!(
                "line {}: expected {} values, found {}",
                lineno + 1,
                cols * T::WIDTH,
                buf.len()
            ));
        }
        data.extend(buf.chunks(T::WIDTH).map(T::from_numbers));
    }
    Ok(data)
}

fn mat_body<T: FileScalar>(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    rows: usize,
    cols: usize,
) -> Result<Matrix<T>, String> {
    let data = parse_block::<T>(lines, rows, cols)?;
    Matrix::from_vec(rows, cols, data).map_err(|e| e.to_string())
}

fn ser_body<T: FileScalar>(
    lines: &mut dyn Iterator<Item = (usize, &str)>,
    nx: usize,
    ny: usize,
    t: usize,
) -> Result<ImageSeries<T>, String> {
    let frames = (0..t)
        .map(|_| mat_body::<T>(lines, nx, ny))
        .collect::<Result<Vec<_>, _>>()?;
    ImageSeries::new(frames).map_err(|e| e.to_string())
}

/// Parses a MAT1 or SER1 document.
pub fn parse_document(text: &str) -> Result<Document, String> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or("empty file")?;
    let head: Vec<&str> = header.split_whitespace().collect();
    let doc = match head.as_slice() {
        ["MAT1", rows, cols, field] => {
            let (rows, cols) = (parse_dim(rows, "rows")?, parse_dim(cols, "cols")?);
            Document::Matrix(match parse_field(field)? {
                Field::Real => AnyMatrix::Real(mat_body(&mut lines, rows, cols)?),
                Field::Complex => AnyMatrix::Complex(mat_body(&mut lines, rows, cols)?),
            })
        }
        ["SER1", nx, ny, t, field] => {
            let (nx, ny, t) = (parse_dim(nx, "nx")?, parse_dim(ny, "ny")?, parse_dim(t, "t")?);
            Document::Series(match parse_field(field)? {
                Field::Real => AnySeries::Real(ser_body(&mut lines, nx, ny, t)?),
                Field::Complex => AnySeries::Complex(ser_body(&mut lines, nx, ny, t)?),
            })
        }
        _ => return Err(format!("unrecognized header '{header}'")),
    };
    if let Some((lineno, _)) = lines.next() {
        return Err(format!("line {}: trailing data", lineno + 1));
    }
    Ok(doc)
}

pub fn write_document(doc: &Document) -> String {
    match doc {
        Document::Matrix(AnyMatrix::Real(m)) => write_mat(m),
        Document::Matrix(AnyMatrix::Complex(m)) => write_mat(m),
        Document::Series(AnySeries::Real(s)) => write_ser(s),
        Document::Series(AnySeries::Complex(s)) => write_ser(s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_matrix_round_trip() {
        let m = Matrix::from_vec(2, 3, vec![0.1, -2.5e-300, 1.0 / 3.0, f64::MAX, -0.0, 7.0]).unwrap();
        let text = write_mat(&m);
        assert!(text.starts_with("MAT1 2 3 real\n"));
        let back = parse_document(&text).unwrap();
        assert_eq!(back, Document::Matrix(AnyMatrix::Real(m.clone())));
        assert_eq!(write_document(&back), text);
        match back {
            Document::Matrix(AnyMatrix::Real(b)) => {
                assert!(b.as_slice().iter().zip(m.as_slice()).all(|(x, y)| x.to_bits() == y.to_bits()))
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn complex_series_round_trip() {
        let frames = (0..3)
            .map(|k| Matrix::from_fn(2, 4, |i, j| Complex64::new(k as f64 + 0.1 * i as f64, -(j as f64) / 7.0)))
            .collect();
        let s = ImageSeries::new(frames).unwrap();
        let text = write_ser(&s);
        assert!(text.starts_with("SER1 2 4 3 complex\n"));
        assert_eq!(text.lines().filter(|l| l.is_empty()).count(), 2);
        let back = parse_document(&text).unwrap();
        assert_eq!(back, Document::Series(AnySeries::Complex(s)));
        assert_eq!(write_document(&back), text);
    }

    #[test]
    fn malformed_inputs() {
        assert!(parse_document("").is_err());
        assert!(parse_document("MAT1 2 2 real\n1 2\n3\n").is_err());
        assert!(parse_document("MAT1 1 1 real\n1\n2\n").is_err());
        assert!(parse_document("MAT1 1 1 quaternion\n1\n").is_err());
        assert!(parse_document("MAT1 1 1 real\nNaN\n").is_err());
        assert!(parse_document("MAT1 0 1 real\n").is_err());
        assert!(parse_document("MAT1 1 1 complex\n1\n").is_err());
    }
}
