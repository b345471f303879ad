//! Involution model of the real and complex Grassmannians.
//!
//! A k-dimensional subspace of Fⁿ is stored as the symmetric (Hermitian)
//! involution that is `+1` on the subspace and `−1` on its orthogonal
//! complement. Such a matrix has trace `2k − n`, squares to the identity and
//! is orthogonal (unitary); any two of these properties describe the set.

use crate::backend::{self, rng_from_seed};
use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};
use nalgebra::DMatrix;
use rand::Rng;

/// A point of Gr(k, Fⁿ) in the involution model.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassPoint<T: Scalar> {
    pub n: usize,
    pub k: usize,
    pub m: DMatrix<T>,
}

/// Orthonormal basis (as columns) of a k-dimensional subspace of Fⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis<T: Scalar> {
    pub v: DMatrix<T>,
}

impl<T: Scalar> SubspaceBasis<T> {
    pub fn n(&self) -> usize {
        self.v.nrows()
    }

    pub fn k(&self) -> usize {
        self.v.ncols()
    }
}

/// Residuals of the three defining conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    /// `‖m² − I‖_F`
    pub involution: f64,
    /// `‖m − mᴴ‖_F`
    pub symmetry: f64,
    /// `|tr m − (2k − n)|`
    pub trace: f64,
    pub accepted: bool,
}

impl<T: Scalar> GrassPoint<T> {
    pub fn field(&self) -> Field {
        T::FIELD
    }

    /// Wraps `m` after checking it against `Gr(k, Fⁿ)` at tolerance `tol`.
    pub fn new(m: DMatrix<T>, k: usize, tol: f64) -> Result<Self> {
        let report = gr_validate(&m, k, tol);
        if !report.accepted {
            return Err(Error::InvalidPoint(format!(
                "involution {:.3e}, symmetry {:.3e}, trace {:.3e}",
                report.involution, report.symmetry, report.trace
            )));
        }
        Ok(GrassPoint { n: m.nrows(), k, m })
    }

    /// `−X`, a point of Gr(n − k).
    pub fn negate(&self) -> Self {
        GrassPoint { n: self.n, k: self.n - self.k, m: -&self.m }
    }

    /// `Q X Qᴴ` for orthogonal/unitary `Q`.
    pub fn conjugate_by(&self, q: &DMatrix<T>) -> Self {
        GrassPoint { n: self.n, k: self.k, m: q * &self.m * q.adjoint() }
    }
}

fn check_dims(k: usize, n: usize) -> Result<()> {
    if k > n {
        return Err(Error::BadDimensions(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// `diag(I_k, −I_{n−k})`.
pub fn gr_canonical<T: Scalar>(k: usize, n: usize) -> Result<GrassPoint<T>> {
    check_dims(k, n)?;
    let m = DMatrix::<T>::from_fn(n, n, |i, j| {
        if i != j {
            T::zero()
        } else if i < k {
            T::one()
        } else {
            -T::one()
        }
    });
    Ok(GrassPoint { n, k, m })
}

/// `2VVᴴ − I`.
pub fn gr_from_basis<T: Scalar>(b: &SubspaceBasis<T>) -> Result<GrassPoint<T>> {
    let (n, k) = b.v.shape();
    let gram_res = (b.v.adjoint() * &b.v - DMatrix::<T>::identity(k, k)).norm();
    if !backend::is_finite(&b.v) || gram_res > 1e-8 * n.max(1) as f64 {
        return Err(Error::NotOrthonormal(gram_res));
    }
    let two = T::from_real(2.0);
    let m = &b.v * b.v.adjoint() * two - DMatrix::<T>::identity(n, n);
    Ok(GrassPoint { n, k, m })
}

/// Orthonormal basis of the `+1` eigenspace.
pub fn gr_basis_of<T: Scalar>(x: &GrassPoint<T>) -> Result<SubspaceBasis<T>> {
    let report = gr_validate(&x.m, x.k, 1e-8);
    if !report.accepted {
        return Err(Error::InvalidPoint(format!("{report:?}")));
    }
    let (_, vecs) = backend::hermitian_eigen(&x.m);
    let v = vecs.columns(x.n - x.k, x.k).into_owned();
    Ok(SubspaceBasis { v })
}

/// Haar-random point of Gr(k, Fⁿ).
pub fn gr_sample<T: Scalar>(k: usize, n: usize, seed: u64) -> Result<GrassPoint<T>> {
    gr_sample_with(k, n, &mut rng_from_seed(seed))
}

pub fn gr_sample_with<T: Scalar, R: Rng + ?Sized>(
    k: usize,
    n: usize,
    rng: &mut R,
) -> Result<GrassPoint<T>> {
    check_dims(k, n)?;
    if k == 0 || k == n {
        return gr_canonical(k, n);
    }
    let q = backend::haar::<T, R>(n, rng);
    // Q diag(I_k, −I) Qᴴ = 2 Q_k Q_kᴴ − I using the first k columns.
    let qk = q.columns(0, k);
    let two = T::from_real(2.0);
    let m = qk * qk.adjoint() * two - DMatrix::<T>::identity(n, n);
    Ok(GrassPoint { n, k, m })
}

pub fn gr_validate<T: Scalar>(m: &DMatrix<T>, k: usize, tol: f64) -> ValidationReport {
    let n = m.nrows();
    if m.ncols() != n || !backend::is_finite(m) {
        return ValidationReport {
            involution: f64::INFINITY,
            symmetry: f64::INFINITY,
            trace: f64::INFINITY,
            accepted: false,
        };
    }
    let involution = (m * m - DMatrix::<T>::identity(n, n)).norm();
    let symmetry = (m - m.adjoint()).norm();
    let tr = m.trace().to_c64();
    let expected = 2.0 * k as f64 - n as f64;
    let trace = (tr - expected).norm();
    let bound = tol * n.max(1) as f64;
    ValidationReport {
        involution,
        symmetry,
        trace,
        accepted: k <= n && involution <= bound && symmetry <= bound && trace <= bound,
    }
}

/// Reads k off the trace of a near-involution. Returns `None` when the
/// trace sits exactly halfway between two admissible values.
pub fn infer_k<T: Scalar>(m: &DMatrix<T>) -> Option<usize> {
    let n = m.nrows() as f64;
    let half = 0.5 * (m.trace().to_c64().re + n);
    let k = half.round();
    if ((half - k).abs() - 0.5).abs() < 1e-12 || k < 0.0 || k > n {
        return None;
    }
    Some(k as usize)
}
