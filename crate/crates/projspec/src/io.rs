//! Shared file formats and scalar parsing.
//!
//! One structured text format carries every matrix collection in the project:
//! it lists the parameter count `n`, the dimension `d`, and `n + 1` matrices
//! as row-major `[re, im]` pairs. A pencil reads the matrices as
//! `A_0, ..., A_n`; the joint-spectrum tools read the same file as a bare
//! tuple.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::CMatrix;
use crate::pencil::{MatrixPencil, PencilError, ProjPoint};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// On-disk pencil/tuple document.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PencilFile {
    /// Parameter count; the file carries `n + 1` matrices.
    pub n: usize,
    /// Matrix dimension.
    pub d: usize,
    /// Each matrix is rows of `[re, im]` pairs, row-major.
    pub matrices: Vec<Vec<Vec<[f64; 2]>>>,
}

impl PencilFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let file: PencilFile = toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    fn validate(&self) -> Result<(), IoError> {
        if self.matrices.len() != self.n + 1 {
            return Err(IoError::Validation(format!(
                "expected n + 1 = {} matrices, found {}",
                self.n + 1,
                self.matrices.len()
            )));
        }
        for (k, m) in self.matrices.iter().enumerate() {
            if m.len() != self.d || m.iter().any(|row| row.len() != self.d) {
                return Err(IoError::Validation(format!(
                    "matrix {k} is not {d}x{d}",
                    d = self.d
                )));
            }
        }
        Ok(())
    }

    pub fn to_matrices(&self) -> Vec<CMatrix> {
        self.matrices
            .iter()
            .map(|m| {
                CMatrix::from_fn(self.d, self.d, |r, c| {
                    Complex64::new(m[r][c][0], m[r][c][1])
                })
            })
            .collect()
    }

    pub fn from_matrices(matrices: &[CMatrix]) -> Self {
        let d = matrices.first().map(|m| m.nrows()).unwrap_or(0);
        PencilFile {
            n: matrices.len().saturating_sub(1),
            d,
            matrices: matrices
                .iter()
                .map(|m| {
                    (0..d)
                        .map(|r| (0..d).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("pencil file serializes")
    }
}

/// Read a pencil `(A_0, ..., A_n)` from the shared format.
pub fn parse_pencil(text: &str) -> Result<MatrixPencil, IoError> {
    let file = PencilFile::parse(text)?;
    Ok(MatrixPencil::new(file.to_matrices())?)
}

/// Read the same format as a bare matrix tuple (every listed matrix).
pub fn parse_matrix_tuple(text: &str) -> Result<Vec<CMatrix>, IoError> {
    let file = PencilFile::parse(text)?;
    Ok(file.to_matrices())
}

/// Group specification document: which representation to build.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    /// One of `dihedral`, `cyclic`, `koopman-dinfty`, `gl3z3`, `custom-cayley`.
    pub kind: String,
    /// Order parameter for `dihedral` (D_N) and `cyclic` (Z_N).
    #[serde(default)]
    pub n: Option<u32>,
    /// Truncation level for `koopman-dinfty`.
    #[serde(default)]
    pub level: Option<u32>,
    /// `plus` or `minus` for `gl3z3`.
    #[serde(default)]
    pub sign: Option<String>,
    /// Optional generator labels.
    #[serde(default)]
    pub labels: Option<Vec<String>>,
    /// Explicit multiplication table for `custom-cayley`.
    #[serde(default)]
    pub cayley: Option<CayleyFile>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CayleyFile {
    pub order: usize,
    pub identity: usize,
    pub generators: Vec<usize>,
    pub table: Vec<Vec<usize>>,
}

pub fn parse_group_spec(text: &str) -> Result<GroupSpec, IoError> {
    toml::from_str(text).map_err(|e| IoError::Parse(e.to_string()))
}

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        // keep integers readable in CSV output
        format!("{:.1}", x)
    } else {
        format!("{:.16e}", x)
    }
}

/// Human-readable complex scalar in `re+imi` form.
pub fn format_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        trim_float(c.re)
    } else if c.re == 0.0 {
        format!("{}i", trim_float(c.im))
    } else if c.im < 0.0 {
        format!("{}-{}i", trim_float(c.re), trim_float(-c.im))
    } else {
        format!("{}+{}i", trim_float(c.re), trim_float(c.im))
    }
}

fn trim_float(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{}", x)
    }
}

/// Parse `re`, `imi`, or `re+imi` (also `re-imi`), e.g. `1.5-0.25i`.
pub fn parse_complex(s: &str) -> Result<Complex64, IoError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(IoError::Parse("empty complex literal".into()));
    }
    if let Some(body) = t.strip_suffix(['i', 'I']) {
        // pure imaginary or combined form
        if let Some(split) = split_last_sign(body) {
            let (re_part, im_part) = body.split_at(split);
            let re: f64 = re_part
                .parse()
                .map_err(|_| IoError::Parse(format!("bad real part in '{t}'")))?;
            let im = parse_signed_coefficient(im_part, t)?;
            return Ok(Complex64::new(re, im));
        }
        let im = parse_signed_coefficient(body, t)?;
        return Ok(Complex64::new(0.0, im));
    }
    let re: f64 = t
        .parse()
        .map_err(|_| IoError::Parse(format!("bad complex literal '{t}'")))?;
    Ok(Complex64::new(re, 0.0))
}

fn parse_signed_coefficient(body: &str, whole: &str) -> Result<f64, IoError> {
    match body {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        other => other
            .parse()
            .map_err(|_| IoError::Parse(format!("bad imaginary part in '{whole}'"))),
    }
}

/// Index of the sign that separates real and imaginary parts, ignoring
/// leading signs and exponent signs.
fn split_last_sign(body: &str) -> Option<usize> {
    let bytes = body.as_bytes();
    for i in (1..bytes.len()).rev() {
        let b = bytes[i];
        if (b == b'+' || b == b'-') && bytes[i - 1] != b'e' && bytes[i - 1] != b'E' {
            return Some(i);
        }
    }
    None
}

/// Comma-separated homogeneous coordinates, each a complex literal.
pub fn parse_point(s: &str) -> Result<ProjPoint, IoError> {
    let coords: Result<Vec<Complex64>, IoError> = s.split(',').map(parse_complex).collect();
    Ok(ProjPoint::new(coords?)?)
}
