//! Structured spectral decompositions of orthogonal, unitary and Hermitian
//! matrices, plus the sampling and norm helpers shared by the other modules.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::PI;

pub type RealMatrix = DMatrix<f64>;
pub type ComplexMatrix = DMatrix<Complex64>;

/// Seeded generator used for every random draw in the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn frobenius<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.norm()
}

/// `‖a − b‖_F`.
pub fn distance<T: Scalar>(a: &DMatrix<T>, b: &DMatrix<T>) -> f64 {
    (a - b).norm()
}

/// `‖mᴴm − I‖_F`.
pub fn unitarity_residual<T: Scalar>(m: &DMatrix<T>) -> f64 {
    let n = m.ncols();
    (m.adjoint() * m - DMatrix::<T>::identity(n, n)).norm()
}

pub fn is_finite<T: Scalar>(m: &DMatrix<T>) -> bool {
    m.iter().all(|x| {
        let z = x.to_c64();
        z.re.is_finite() && z.im.is_finite()
    })
}

/// Polishes a nearly orthogonal/unitary matrix toward its polar factor with
/// Newton–Schulz steps. Inputs already clean to rounding are returned as is.
pub fn polar_polish<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    let n = m.ncols();
    let target = 4.0 * f64::EPSILON * (n.max(1) as f64);
    let mut x = m.clone();
    for _ in 0..4 {
        let gram = x.adjoint() * &x;
        let res = (&gram - DMatrix::<T>::identity(n, n)).norm();
        if res <= target || res >= 0.5 {
            break;
        }
        let three = T::from_real(3.0);
        let half = T::from_real(0.5);
        let step = (DMatrix::<T>::identity(n, n) * three - gram) * half;
        x = &x * step;
    }
    x
}

/// Haar-distributed orthogonal (real) or unitary (complex) matrix: QR of a
/// Gaussian matrix with the phases of `diag(R)` moved into `Q`.
pub fn haar<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<T> {
    if n == 0 {
        return DMatrix::<T>::zeros(0, 0);
    }
    let g = DMatrix::<T>::from_fn(n, n, |_, _| T::gaussian(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let modulus = d.modulus();
        if modulus > 0.0 {
            let phase = d.unscale(modulus);
            let col = q.column(j) * phase;
            q.set_column(j, &col);
        }
    }
    q
}

/// Haar element of SO(n) or SU(n).
pub fn haar_special<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<T> {
    let mut q = haar::<T, R>(n, rng);
    if n > 0 {
        let det = q.determinant();
        let fix = det.unscale(det.modulus()).conjugate();
        let col = q.column(0) * fix;
        q.set_column(0, &col);
    }
    q
}

/// One diagonal block of a real Schur form of an orthogonal matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchurBlock {
    /// Half-angle θ of the block `[[cos2θ, sin2θ], [−sin2θ, cos2θ]]`, θ ∈ (0, π/2).
    Rotation(f64),
    /// A 1×1 block `±1`.
    Sign(i8),
}

impl SchurBlock {
    pub fn size(&self) -> usize {
        match self {
            SchurBlock::Rotation(_) => 2,
            SchurBlock::Sign(_) => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchurForm {
    pub q: RealMatrix,
    pub blocks: Vec<SchurBlock>,
}

/// The 2×2 rotation `[[cos φ, sin φ], [−sin φ, cos φ]]`.
pub fn rotation(phi: f64) -> RealMatrix {
    let (s, c) = phi.sin_cos();
    RealMatrix::from_row_slice(2, 2, &[c, s, -s, c])
}

impl SchurForm {
    /// Block-diagonal middle factor.
    pub fn middle(&self) -> RealMatrix {
        let n = self.q.nrows();
        let mut m = RealMatrix::zeros(n, n);
        let mut i = 0;
        for b in &self.blocks {
            match *b {
                SchurBlock::Rotation(theta) => {
                    m.view_mut((i, i), (2, 2)).copy_from(&rotation(2.0 * theta));
                }
                SchurBlock::Sign(s) => m[(i, i)] = s as f64,
            }
            i += b.size();
        }
        m
    }

    pub fn assemble(&self) -> RealMatrix {
        &self.q * self.middle() * self.q.transpose()
    }

    pub fn angles(&self) -> Vec<f64> {
        self.blocks
            .iter()
            .filter_map(|b| match b {
                SchurBlock::Rotation(t) => Some(*t),
                SchurBlock::Sign(_) => None,
            })
            .collect()
    }

    pub fn sign_count(&self, sign: i8) -> usize {
        self.blocks.iter().filter(|b| **b == SchurBlock::Sign(sign)).count()
    }
}

/// Schur vectors of a normal matrix together with `QᴴAQ` and a flag per
/// index marking the start of a 2×2 diagonal block.
///
/// Francis iterations without exceptional shifts can stall on matrices with
/// symmetric spectra (involutions are the typical case). Hermitian input
/// goes to the Hermitian solver; otherwise a stalled run is retried on
/// `A + cA²`, which for normal `A` and `|c| < 1/2` has the same eigenvectors
/// and keeps distinct eigenvalues at least half as far apart.
fn normal_schur<T: Scalar>(a: &DMatrix<T>) -> Option<(DMatrix<T>, DMatrix<T>, Vec<bool>)> {
    let n = a.nrows();
    if (a - a.adjoint()).norm() <= 16.0 * f64::EPSILON * n as f64 {
        let (_, q) = hermitian_eigen(a);
        let ta = q.adjoint() * a * &q;
        return Some((q, ta, vec![false; n]));
    }
    let shifts = [0.0, 0.25, -0.3, 0.4, -0.45];
    for (attempt, &c) in shifts.iter().enumerate() {
        let f = if c == 0.0 {
            a.clone()
        } else {
            let twist = Complex64::from_polar(c, 0.7 * attempt as f64);
            let coef = T::from_c64(twist).unwrap_or_else(|| T::from_real(c));
            a + (a * a) * coef
        };
        let Some(schur) = Schur::try_new(f, f64::EPSILON, 30 * n.max(10)) else {
            continue;
        };
        let (q, t) = schur.unpack();
        let mut two = vec![false; n];
        let mut i = 0;
        while i + 1 < n {
            if !t[(i + 1, i)].is_zero() {
                two[i] = true;
                i += 2;
            } else {
                i += 1;
            }
        }
        if T::FIELD == crate::scalar::Field::Complex && two.iter().any(|&b| b) {
            continue;
        }
        let ta = q.adjoint() * a * &q;
        return Some((q, ta, two));
    }
    if T::FIELD == crate::scalar::Field::Complex {
        // near-scalar inputs stall every shift; a Hermitian combination
        // (e^{iθ}A + e^{−iθ}Aᴴ)/2 shares the eigenvectors of a normal A
        for theta in [0.37, 1.91, 2.83] {
            let w = T::from_c64(Complex64::from_polar(0.5, theta)).expect("complex field");
            let h = a * w + a.adjoint() * w.conjugate();
            let (_, q) = hermitian_eigen(&h);
            let ta = q.adjoint() * a * &q;
            let off = ta.iter().enumerate().filter(|(i, _)| i % (n + 1) != 0).map(|(_, z)| z.modulus());
            if off.fold(0.0, f64::max) <= 1e-12 * n as f64 {
                return Some((q, ta, vec![false; n]));
            }
        }
    }
    None
}

/// Real Schur form of an orthogonal matrix with every 2×2 block oriented so
/// that its (1,2) entry is positive.
pub fn schur_orthogonal(z: &RealMatrix, tol: f64) -> Result<SchurForm> {
    let n = z.nrows();
    if z.ncols() != n {
        return Err(Error::BadDimensions(format!("{}x{} is not square", n, z.ncols())));
    }
    if !is_finite(z) {
        return Err(Error::NotOrthogonal(f64::INFINITY));
    }
    let res = unitarity_residual(z);
    if res > tol * n.max(1) as f64 {
        return Err(Error::NotOrthogonal(res));
    }
    if n == 0 {
        return Ok(SchurForm { q: RealMatrix::zeros(0, 0), blocks: vec![] });
    }
    let clean = polar_polish(z);
    let (mut q, t, two) = normal_schur(&clean).ok_or(Error::ConvergenceFailure)?;

    let mut blocks = Vec::with_capacity(n);
    let mut i = 0;
    while i < n {
        if two[i] {
            let b = t.view((i, i), (2, 2)).into_owned();
            if b.determinant() > 0.0 {
                let a = 0.5 * (b[(0, 0)] + b[(1, 1)]);
                let mut s = 0.5 * (b[(0, 1)] - b[(1, 0)]);
                if s < 0.0 {
                    q.column_mut(i + 1).neg_mut();
                    s = -s;
                }
                let phi = s.atan2(a);
                if phi == 0.0 {
                    blocks.extend([SchurBlock::Sign(1), SchurBlock::Sign(1)]);
                } else if phi == PI {
                    blocks.extend([SchurBlock::Sign(-1), SchurBlock::Sign(-1)]);
                } else {
                    blocks.push(SchurBlock::Rotation(0.5 * phi));
                }
            } else {
                // A reflection block: real eigenvalues +1 and −1.
                let sym = (&b + b.transpose()) * 0.5;
                let eig = SymmetricEigen::new(sym);
                let local = q.columns(i, 2) * &eig.eigenvectors;
                q.columns_mut(i, 2).copy_from(&local);
                for k in 0..2 {
                    let s = if eig.eigenvalues[k] >= 0.0 { 1 } else { -1 };
                    blocks.push(SchurBlock::Sign(s));
                }
            }
            i += 2;
        } else {
            blocks.push(SchurBlock::Sign(if t[(i, i)] >= 0.0 { 1 } else { -1 }));
            i += 1;
        }
    }

    let form = SchurForm { q, blocks };
    let rec = distance(&form.assemble(), z);
    if rec > 10.0 * tol * n as f64 {
        return Err(Error::ConvergenceFailure);
    }
    Ok(form)
}

#[derive(Debug, Clone)]
pub struct UnitaryEig {
    pub q: ComplexMatrix,
    /// Phases in (−π, π], sorted descending.
    pub phases: Vec<f64>,
}

impl UnitaryEig {
    pub fn assemble(&self) -> ComplexMatrix {
        let d = DVector::from_iterator(
            self.phases.len(),
            self.phases.iter().map(|g| Complex64::from_polar(1.0, *g)),
        );
        let mut qd = self.q.clone();
        for (j, mut col) in qd.column_iter_mut().enumerate() {
            col *= d[j];
        }
        qd * self.q.adjoint()
    }
}

/// Eigendecomposition `U = Q diag(e^{iγ}) Qᴴ` of a unitary matrix.
pub fn eig_unitary(u: &ComplexMatrix, tol: f64) -> Result<UnitaryEig> {
    let n = u.nrows();
    if u.ncols() != n {
        return Err(Error::BadDimensions(format!("{}x{} is not square", n, u.ncols())));
    }
    if !is_finite(u) {
        return Err(Error::NotUnitary(f64::INFINITY));
    }
    let res = unitarity_residual(u);
    if res > tol * n.max(1) as f64 {
        return Err(Error::NotUnitary(res));
    }
    if n == 0 {
        return Ok(UnitaryEig { q: ComplexMatrix::zeros(0, 0), phases: vec![] });
    }
    let clean = polar_polish(u);
    let (q, t, _) = normal_schur(&clean).ok_or(Error::ConvergenceFailure)?;

    let mut order: Vec<(f64, usize)> = (0..n)
        .map(|j| {
            let mut g = t[(j, j)].arg();
            if g <= -PI {
                g = PI;
            }
            (g, j)
        })
        .collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0));
    let q_sorted = ComplexMatrix::from_fn(n, n, |r, c| q[(r, order[c].1)]);
    let eig = UnitaryEig { q: q_sorted, phases: order.iter().map(|p| p.0).collect() };

    let rec = distance(&eig.assemble(), u);
    if rec > 10.0 * tol * n as f64 || unitarity_residual(&eig.q) > 10.0 * tol * n as f64 {
        return Err(Error::ConvergenceFailure);
    }
    Ok(eig)
}

/// Thin SVD `A = U diag(σ) Vᵀ` with σ descending.
pub fn svd(a: &RealMatrix) -> Result<(RealMatrix, Vec<f64>, RealMatrix)> {
    if !is_finite(a) {
        return Err(Error::ConvergenceFailure);
    }
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        let r = m.min(n);
        return Ok((RealMatrix::zeros(m, r), vec![], RealMatrix::zeros(n, r)));
    }
    let dec = SVD::try_new(a.clone(), true, true, f64::EPSILON, 0)
        .ok_or(Error::ConvergenceFailure)?;
    let u = dec.u.ok_or(Error::ConvergenceFailure)?;
    let v = dec.v_t.ok_or(Error::ConvergenceFailure)?.transpose();
    Ok((u, dec.singular_values.iter().copied().collect(), v))
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen<T: Scalar>(m: &DMatrix<T>) -> (Vec<f64>, DMatrix<T>) {
    let n = m.nrows();
    if n == 0 {
        return (vec![], DMatrix::<T>::zeros(0, 0));
    }
    let sym = (m + m.adjoint()) * T::from_real(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&j| eig.eigenvalues[j]).collect();
    let vecs = DMatrix::<T>::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Orthonormal basis of the column span (modified Gram–Schmidt with one
/// reorthogonalization pass); columns of norm below `drop` are discarded.
pub fn orthonormalize<T: Scalar>(v: &DMatrix<T>, drop: f64) -> DMatrix<T> {
    let mut out: Vec<DVector<T>> = Vec::with_capacity(v.ncols());
    for c in v.column_iter() {
        let mut w = c.into_owned();
        for _ in 0..2 {
            for b in &out {
                let proj = b.dotc(&w);
                w -= b * proj;
            }
        }
        let nrm = w.norm();
        if nrm > drop {
            out.push(w.unscale(nrm));
        }
    }
    if out.is_empty() {
        DMatrix::<T>::zeros(v.nrows(), 0)
    } else {
        DMatrix::<T>::from_columns(&out)
    }
}

/// Default tolerance for deciding that two eigenphases coincide.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// One block of a spectral normal form of an orthogonal or unitary matrix
/// whose spectrum is closed under conjugation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalBlock {
    /// A conjugate pair `e^{±iφ}`, φ ∈ (0, π). Real: the local 2×2 block is
    /// `[[cos φ, sin φ], [−sin φ, cos φ]]`. Complex: it is `diag(e^{iφ}, e^{−iφ})`.
    Pair(f64),
    Sign(i8),
}

impl NormalBlock {
    pub fn size(&self) -> usize {
        match self {
            NormalBlock::Pair(_) => 2,
            NormalBlock::Sign(_) => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NormalForm<T: Scalar> {
    pub q: DMatrix<T>,
    pub blocks: Vec<NormalBlock>,
}

impl<T: Scalar> NormalForm<T> {
    pub fn pair_count(&self) -> usize {
        self.blocks.iter().filter(|b| matches!(b, NormalBlock::Pair(_))).count()
    }

    pub fn sign_count(&self, sign: i8) -> usize {
        self.blocks.iter().filter(|b| **b == NormalBlock::Sign(sign)).count()
    }
}

pub fn normal_form_real(z: &RealMatrix, tol: f64, cluster: f64) -> Result<NormalForm<f64>> {
    let schur = schur_orthogonal(z, tol)?;
    let mut blocks = Vec::with_capacity(schur.blocks.len());
    for b in &schur.blocks {
        match *b {
            SchurBlock::Rotation(theta) => {
                let phi = 2.0 * theta;
                if phi <= cluster {
                    blocks.extend([NormalBlock::Sign(1), NormalBlock::Sign(1)]);
                } else if phi >= PI - cluster {
                    blocks.extend([NormalBlock::Sign(-1), NormalBlock::Sign(-1)]);
                } else {
                    blocks.push(NormalBlock::Pair(phi));
                }
            }
            SchurBlock::Sign(s) => blocks.push(NormalBlock::Sign(s)),
        }
    }
    Ok(NormalForm { q: schur.q, blocks })
}

/// `None` when the spectrum is not closed under complex conjugation.
pub fn normal_form_complex(
    z: &ComplexMatrix,
    tol: f64,
    cluster: f64,
) -> Result<Option<NormalForm<Complex64>>> {
    let eig = eig_unitary(z, tol)?;
    let n = eig.phases.len();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (j, &g) in eig.phases.iter().enumerate() {
        if g.abs() <= cluster {
            plus.push(j);
        } else if g.abs() >= PI - cluster {
            minus.push(j);
        } else if g > 0.0 {
            pos.push(j);
        } else {
            neg.push(j);
        }
    }
    if pos.len() != neg.len() {
        return Ok(None);
    }
    // Phases are sorted descending, so `pos` runs from the largest phase
    // down and `neg` must be walked from the most negative up.
    neg.reverse();
    let mut cols = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(n);
    for (&a, &b) in pos.iter().zip(&neg) {
        let (ga, gb) = (eig.phases[a], -eig.phases[b]);
        if (ga - gb).abs() > cluster {
            return Ok(None);
        }
        blocks.push(NormalBlock::Pair(0.5 * (ga + gb)));
        cols.extend([a, b]);
    }
    for &j in &plus {
        blocks.push(NormalBlock::Sign(1));
        cols.push(j);
    }
    for &j in &minus {
        blocks.push(NormalBlock::Sign(-1));
        cols.push(j);
    }
    let q = ComplexMatrix::from_fn(n, n, |r, c| eig.q[(r, cols[c])]);
    Ok(Some(NormalForm { q, blocks }))
}

/// Determinant of an orthogonal/unitary matrix as a complex number.
pub fn det_c64<T: Scalar>(m: &DMatrix<T>) -> Complex64 {
    if m.nrows() == 0 {
        return Complex64::new(1.0, 0.0);
    }
    m.clone().determinant().to_c64()
}
