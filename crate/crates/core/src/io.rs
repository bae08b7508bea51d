//! Matrix Market files and JSON structure specs.
//!
//! Matrices are written in dense `array` format, column-major, with 17
//! significant digits so that a write/read round trip is exact. The reader
//! also accepts `coordinate` files and the `symmetric`, `skew-symmetric` and
//! `hermitian` storage schemes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::linalg::{eye, max_imag, to_pairs};
use crate::structure::{Algebra, Form, Parity, StructureSpec};
use crate::{CMat, Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Integer,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
    Hermitian,
}

struct Cursor<'a> {
    label: &'a str,
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

impl<'a> Cursor<'a> {
    fn err(&self, line: usize, column: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.label.to_string(),
            line,
            column,
            message: message.into(),
        }
    }

    /// Next non-comment, non-blank line with its 1-based number.
    fn next_data(&mut self) -> Option<(usize, &'a str)> {
        for (i, line) in self.lines.by_ref() {
            let t = line.trim();
            if t.is_empty() || t.starts_with('%') {
                continue;
            }
            return Some((i + 1, line));
        }
        None
    }
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_matrix_market(text: &str, label: &str) -> Result<CMat> {
    let mut cur = Cursor {
        label,
        lines: text.lines().enumerate(),
    };
    let header = match cur.lines.next() {
        Some((_, h)) => h,
        None => return Err(cur.err(1, 1, "empty file")),
    };
    let head: Vec<String> = header.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if head.len() != 5 || head[0] != "%%matrixmarket" || head[1] != "matrix" {
        return Err(cur.err(1, 1, "expected '%%MatrixMarket matrix <format> <field> <symmetry>'"));
    }
    let dense = match head[2].as_str() {
        "array" => true,
        "coordinate" => false,
        other => return Err(cur.err(1, 1, format!("unsupported format '{other}'"))),
    };
    let field = match head[3].as_str() {
        "real" | "double" => Field::Real,
        "integer" => Field::Integer,
        "complex" => Field::Complex,
        other => return Err(cur.err(1, 1, format!("unsupported field '{other}'"))),
    };
    let sym = match head[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(cur.err(1, 1, format!("unsupported symmetry '{other}'"))),
    };
    if sym == Symmetry::Hermitian && field != Field::Complex {
        return Err(cur.err(1, 1, "hermitian storage requires complex field"));
    }

    let (ln, size_line) = cur.next_data().ok_or_else(|| cur.err(2, 1, "missing size line"))?;
    let size = tokens(size_line);
    let want = if dense { 2 } else { 3 };
    if size.len() != want {
        return Err(cur.err(ln, 1, format!("size line needs {want} integers")));
    }
    let mut dims = Vec::with_capacity(want);
    for &(col, t) in &size {
        dims.push(
            t.parse::<usize>()
                .map_err(|_| cur.err(ln, col, format!("invalid integer '{t}'")))?,
        );
    }
    let (rows, cols) = (dims[0], dims[1]);
    if sym != Symmetry::General && rows != cols {
        return Err(cur.err(ln, 1, "symmetric storage requires a square matrix"));
    }
    let mut a = CMat::zeros(rows, cols);

    let value = |cur: &Cursor, ln: usize, toks: &[(usize, &str)]| -> Result<C64> {
        let num = |&(col, t): &(usize, &str)| -> Result<f64> {
            let v = t
                .parse::<f64>()
                .map_err(|_| cur.err(ln, col, format!("invalid number '{t}'")))?;
            if field == Field::Integer && v.fract() != 0.0 {
                return Err(cur.err(ln, col, format!("expected integer, got '{t}'")));
            }
            Ok(v)
        };
        match field {
            Field::Complex => Ok(C64::new(num(&toks[0])?, num(&toks[1])?)),
            _ => Ok(C64::new(num(&toks[0])?, 0.0)),
        }
    };
    let per_value = if field == Field::Complex { 2 } else { 1 };

    let put = |a: &mut CMat, i: usize, j: usize, v: C64| {
        a[(i, j)] = v;
        if i != j {
            match sym {
                Symmetry::General => {}
                Symmetry::Symmetric => a[(j, i)] = v,
                Symmetry::SkewSymmetric => a[(j, i)] = -v,
                Symmetry::Hermitian => a[(j, i)] = v.conj(),
            }
        }
    };

    if dense {
        // column-major; packed storage lists only the lower triangle
        let mut slots = Vec::new();
        for j in 0..cols {
            let start = match sym {
                Symmetry::General => 0,
                Symmetry::SkewSymmetric => j + 1,
                _ => j,
            };
            for i in start..rows {
                slots.push((i, j));
            }
        }
        for &(i, j) in &slots {
            let (ln, line) = cur
                .next_data()
                .ok_or_else(|| cur.err(text.lines().count() + 1, 1, format!("expected {} entries", slots.len())))?;
            let toks = tokens(line);
            if toks.len() != per_value {
                return Err(cur.err(ln, 1, format!("expected {per_value} value(s) per line")));
            }
            let v = value(&cur, ln, &toks)?;
            put(&mut a, i, j, v);
        }
    } else {
        let nnz = dims[2];
        for _ in 0..nnz {
            let (ln, line) = cur
                .next_data()
                .ok_or_else(|| cur.err(text.lines().count() + 1, 1, format!("expected {nnz} entries")))?;
            let toks = tokens(line);
            if toks.len() != 2 + per_value {
                return Err(cur.err(ln, 1, format!("expected row, column and {per_value} value(s)")));
            }
            let mut idx = [0usize; 2];
            for (k, &(col, t)) in toks[..2].iter().enumerate() {
                let v = t
                    .parse::<usize>()
                    .map_err(|_| cur.err(ln, col, format!("invalid index '{t}'")))?;
                let bound = if k == 0 { rows } else { cols };
                if v == 0 || v > bound {
                    return Err(cur.err(ln, col, format!("index {v} out of range 1..={bound}")));
                }
                idx[k] = v - 1;
            }
            let v = value(&cur, ln, &toks[2..])?;
            put(&mut a, idx[0], idx[1], v);
        }
    }
    if let Some((ln, _)) = cur.next_data() {
        return Err(cur.err(ln, 1, "unexpected trailing data"));
    }
    Ok(a)
}

pub fn read_matrix_market(path: &Path) -> Result<CMat> {
    let text = std::fs::read_to_string(path)?;
    parse_matrix_market(&text, &path.display().to_string())
}

/// Dense array format; `real` when every imaginary part is exactly zero.
pub fn format_matrix_market(a: &CMat) -> String {
    let real = max_imag(a) == 0.0;
    let mut out = String::new();
    let field = if real { "real" } else { "complex" };
    let _ = writeln!(out, "%%MatrixMarket matrix array {field} general");
    let _ = writeln!(out, "% written by structmap {}", crate::VERSION);
    let _ = writeln!(out, "{} {}", a.nrows(), a.ncols());
    for j in 0..a.ncols() {
        for i in 0..a.nrows() {
            let z = a[(i, j)];
            if real {
                let _ = writeln!(out, "{:.16e}", z.re);
            } else {
                let _ = writeln!(out, "{:.16e} {:.16e}", z.re, z.im);
            }
        }
    }
    out
}

pub fn write_matrix_market(path: &Path, a: &CMat) -> Result<()> {
    std::fs::write(path, format_matrix_market(a))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum MatrixSource {
    Inline(Vec<Vec<Entry>>),
    File(String),
}

/// On-disk form of a [`StructureSpec`].
#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpecFile {
    n: usize,
    form: String,
    algebra: String,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    m: Option<MatrixSource>,
}

pub fn parse_form(s: &str) -> Result<Form> {
    match s.to_ascii_lowercase().as_str() {
        "bilinear" | "t" => Ok(Form::Bilinear),
        "sesquilinear" | "h" => Ok(Form::Sesquilinear),
        other => Err(Error::BadStructureSpec(format!("unknown form '{other}'"))),
    }
}

pub fn parse_algebra(s: &str) -> Result<Algebra> {
    match s.to_ascii_lowercase().as_str() {
        "jordan" | "j" => Ok(Algebra::Jordan),
        "lie" | "l" => Ok(Algebra::Lie),
        other => Err(Error::BadStructureSpec(format!("unknown algebra '{other}'"))),
    }
}

/// Parse a spec document. A string `M` names a Matrix Market file relative
/// to `base_dir`; a missing `M` means the identity.
pub fn parse_spec(text: &str, base_dir: Option<&Path>) -> Result<StructureSpec> {
    let file: SpecFile =
        serde_json::from_str(text).map_err(|e| Error::BadStructureSpec(format!("invalid spec JSON: {e}")))?;
    let form = parse_form(&file.form)?;
    let algebra = parse_algebra(&file.algebra)?;
    let m = match file.m {
        None => eye(file.n),
        Some(MatrixSource::Inline(rows)) => {
            if rows.len() != file.n || rows.iter().any(|r| r.len() != file.n) {
                return Err(Error::BadStructureSpec(format!("M must be {0}x{0}", file.n)));
            }
            CMat::from_fn(file.n, file.n, |i, j| match rows[i][j] {
                Entry::Pair([re, im]) => C64::new(re, im),
                Entry::Real(re) => C64::new(re, 0.0),
            })
        }
        Some(MatrixSource::File(name)) => {
            let path: PathBuf = match base_dir {
                Some(d) => d.join(&name),
                None => PathBuf::from(&name),
            };
            let m = read_matrix_market(&path)?;
            if m.shape() != (file.n, file.n) {
                return Err(Error::BadStructureSpec(format!(
                    "M from {} is {}x{}, expected {3}x{3}",
                    path.display(),
                    m.nrows(),
                    m.ncols(),
                    file.n
                )));
            }
            m
        }
    };
    StructureSpec::new(m, form, algebra)
}

pub fn read_spec(path: &Path) -> Result<StructureSpec> {
    let text = std::fs::read_to_string(path)?;
    parse_spec(&text, path.parent())
}

/// JSON value describing a spec with `M` inline.
pub fn spec_to_json(spec: &StructureSpec) -> serde_json::Value {
    let form = match spec.form() {
        Form::Bilinear => "bilinear",
        Form::Sesquilinear => "sesquilinear",
    };
    let algebra = match spec.algebra() {
        Algebra::Jordan => "jordan",
        Algebra::Lie => "lie",
    };
    let parity = match spec.m_parity() {
        Parity::Symmetric => "symmetric",
        Parity::Skew => "skew",
    };
    serde_json::json!({
        "n": spec.n(),
        "form": form,
        "algebra": algebra,
        "M": to_pairs(spec.m()),
        "m_parity": parity,
        "prototype": spec.prototype_class().to_string(),
    })
}
