//! JSON documents exchanged on stdin/stdout and in files.

use grassfactor::{Field, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub schema_version: String,
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Entry>,
}

/// A parsed matrix in whichever field the document declared.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex64>),
}

impl AnyMatrix {
    /// Complex view; real matrices are promoted.
    pub fn complex(&self) -> DMatrix<Complex64> {
        match self {
            AnyMatrix::Real(m) => m.map(|x| Complex64::new(x, 0.0)),
            AnyMatrix::Complex(m) => m.clone(),
        }
    }
}

impl MatrixDocument {
    pub fn from_matrix<T: Scalar>(m: &DMatrix<T>) -> Self {
        let data = m
            .row_iter()
            .flat_map(|row| row.iter().map(|z| z.to_c64()).collect::<Vec<_>>())
            .map(|z| match T::FIELD {
                Field::Real => Entry::Real(z.re),
                Field::Complex => Entry::Complex([z.re, z.im]),
            })
            .collect();
        MatrixDocument {
            schema_version: SCHEMA_VERSION.into(),
            field: T::FIELD.name().into(),
            rows: m.nrows(),
            cols: m.ncols(),
            data,
        }
    }

    pub fn to_matrix(&self) -> Result<AnyMatrix, String> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {:?}", self.schema_version));
        }
        if self.data.len() != self.rows * self.cols {
            return Err(format!("{} entries for a {}x{} matrix", self.data.len(), self.rows, self.cols));
        }
        let field: Field = self.field.parse()?;
        let mut values = Vec::with_capacity(self.data.len());
        for e in &self.data {
            let z = match (field, e) {
                (Field::Real, Entry::Real(x)) => Complex64::new(*x, 0.0),
                (Field::Complex, Entry::Complex([re, im])) => Complex64::new(*re, *im),
                _ => return Err(format!("entry {e:?} does not match field {}", self.field)),
            };
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err("non-finite entry".into());
            }
            values.push(z);
        }
        let m = DMatrix::from_row_iterator(self.rows, self.cols, values);
        Ok(match field {
            Field::Real => AnyMatrix::Real(m.map(|z| z.re)),
            Field::Complex => AnyMatrix::Complex(m),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDocument {
    pub matrix: MatrixDocument,
    pub model: String,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorizationDocument {
    pub target: MatrixDocument,
    pub factors: Vec<FactorDocument>,
    pub residual: f64,
    pub group: String,
    pub tool_version: String,
}

/// Compact JSON with every float written as 17 significant digits.
struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn to_json<S: Serialize>(value: &S) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, FixedDigits);
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    String::from_utf8(out).expect("serde_json writes UTF-8")
}
