//! The two coefficient fields, behind one trait so that the Grassmannian
//! code is written once for real and complex matrices.

use crate::backend::{self, NormalForm};
use crate::error::Result;
use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl std::str::FromStr for Field {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field '{other}'")),
        }
    }
}

pub trait Scalar: ComplexField<RealField = f64> + Copy {
    const FIELD: Field;

    /// Standard Gaussian draw; complex draws have independent parts of variance 1/2.
    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn to_c64(self) -> Complex64;

    /// `None` when the value has a nonzero imaginary part and `Self` is real.
    fn from_c64(z: Complex64) -> Option<Self>;

    /// Spectral normal form of an orthogonal/unitary matrix; `None` when the
    /// spectrum is not closed under conjugation (never for real input).
    fn normal_form(z: &DMatrix<Self>, tol: f64, cluster: f64) -> Result<Option<NormalForm<Self>>>;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }

    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }

    fn from_c64(z: Complex64) -> Option<Self> {
        (z.im == 0.0).then_some(z.re)
    }

    fn normal_form(z: &DMatrix<Self>, tol: f64, cluster: f64) -> Result<Option<NormalForm<Self>>> {
        backend::normal_form_real(z, tol, cluster).map(Some)
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    fn to_c64(self) -> Complex64 {
        self
    }

    fn from_c64(z: Complex64) -> Option<Self> {
        Some(z)
    }

    fn normal_form(z: &DMatrix<Self>, tol: f64, cluster: f64) -> Result<Option<NormalForm<Self>>> {
        backend::normal_form_complex(z, tol, cluster)
    }
}

pub fn to_complex<T: Scalar>(m: &DMatrix<T>) -> DMatrix<Complex64> {
    m.map(|x| x.to_c64())
}
