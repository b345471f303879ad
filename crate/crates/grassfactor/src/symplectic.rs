//! Symplectic Grassmannians as involutions inside Sp(2n, F), the two
//! embeddings relating them to ordinary Grassmannians, and four-factor
//! products.
//!
//! Everything uses `J = [[0, I], [−I, 0]]` and the bilinear form `uᵀJv`
//! (transpose, never conjugate transpose), over both fields. Coordinate `i`
//! and coordinate `n + i` span the `i`-th hyperbolic plane.

use crate::backend::{self, hermitian_eigen, rng_from_seed};
use crate::error::{Error, Result};
use crate::grassmann::{gr_from_basis, GrassPoint, SubspaceBasis};
use crate::scalar::{to_complex, Field, Scalar};
use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::Rng;

type CMat = DMatrix<Complex64>;

/// Genericity thresholds: minimum eigenvalue gap and distance from `±1`.
pub const GENERIC_GAP: f64 = 1e-6;

pub fn j_matrix<T: Scalar>(n: usize) -> DMatrix<T> {
    let mut j = DMatrix::<T>::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = T::one();
        j[(n + i, i)] = -T::one();
    }
    j
}

/// `‖mᵀJm − J‖_F`.
pub fn symplectic_residual<T: Scalar>(m: &DMatrix<T>) -> f64 {
    let j = j_matrix::<T>(m.nrows() / 2);
    (m.transpose() * &j * m - j).norm()
}

/// `m⁻¹ = −J mᵀ J` for symplectic `m`.
pub fn sp_inverse<T: Scalar>(m: &DMatrix<T>) -> DMatrix<T> {
    let j = j_matrix::<T>(m.nrows() / 2);
    -(&j * m.transpose() * &j)
}

fn half_dim<T: Scalar>(m: &DMatrix<T>) -> Result<usize> {
    let (r, c) = m.shape();
    if r != c || r % 2 != 0 {
        return Err(Error::BadDimensions(format!("{r}x{c} is not square of even size")));
    }
    Ok(r / 2)
}

fn lift<T: Scalar>(z: Complex64) -> T {
    T::from_c64(z).unwrap_or_else(|| T::from_real(z.re))
}

#[derive(Debug, Clone)]
pub struct SymplecticMatrix<T: Scalar> {
    pub n: usize,
    pub m: DMatrix<T>,
}

impl<T: Scalar> SymplecticMatrix<T> {
    pub fn new(m: DMatrix<T>, tol: f64) -> Result<Self> {
        let n = half_dim(&m)?;
        let res = symplectic_residual(&m);
        if !backend::is_finite(&m) || res > tol * n.max(1) as f64 {
            return Err(Error::NotSymplectic(res));
        }
        Ok(SymplecticMatrix { n, m })
    }
}

/// A point of the symplectic Grassmannian Gr_Sp(2k, F²ⁿ): a symplectic
/// involution with trace `4k − 2n`. `k` is the half-rank.
#[derive(Debug, Clone)]
pub struct SpGrassPoint<T: Scalar> {
    pub n: usize,
    pub k: usize,
    pub m: DMatrix<T>,
}

impl<T: Scalar> SpGrassPoint<T> {
    pub fn field(&self) -> Field {
        T::FIELD
    }

    pub fn new(m: DMatrix<T>, k: usize, tol: f64) -> Result<Self> {
        let report = spgr_validate(&m, k, tol);
        if !report.accepted {
            return Err(Error::InvalidPoint(format!(
                "involution {:.3e}, symplectic {:.3e}, trace {:.3e}",
                report.involution, report.symplectic, report.trace
            )));
        }
        Ok(SpGrassPoint { n: m.nrows() / 2, k, m })
    }

    /// `−X`, a point of half-rank `n − k`.
    pub fn negate(&self) -> Self {
        SpGrassPoint { n: self.n, k: self.n - self.k, m: -&self.m }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpValidationReport {
    /// `‖m² − I‖_F`
    pub involution: f64,
    /// `‖mᵀJm − J‖_F`
    pub symplectic: f64,
    /// `|tr m − (4k − 2n)|`
    pub trace: f64,
    pub accepted: bool,
}

pub fn spgr_validate<T: Scalar>(m: &DMatrix<T>, k: usize, tol: f64) -> SpValidationReport {
    let bad = SpValidationReport {
        involution: f64::INFINITY,
        symplectic: f64::INFINITY,
        trace: f64::INFINITY,
        accepted: false,
    };
    let Ok(n) = half_dim(m) else { return bad };
    if !backend::is_finite(m) {
        return bad;
    }
    let involution = (m * m - DMatrix::<T>::identity(2 * n, 2 * n)).norm();
    let symplectic = symplectic_residual(m);
    let expected = 4.0 * k as f64 - 2.0 * n as f64;
    let trace = (m.trace().to_c64() - expected).norm();
    let bound = tol * n.max(1) as f64;
    SpValidationReport {
        involution,
        symplectic,
        trace,
        accepted: k <= n && involution <= bound && symplectic <= bound && trace <= bound,
    }
}

/// `diag(I_{k,n−k}, I_{k,n−k})`.
pub fn spgr_canonical<T: Scalar>(k: usize, n: usize) -> Result<SpGrassPoint<T>> {
    if k > n {
        return Err(Error::BadDimensions(format!("half-rank {k} exceeds n = {n}")));
    }
    let m = DMatrix::<T>::from_fn(2 * n, 2 * n, |i, j| {
        if i != j {
            T::zero()
        } else if i % n.max(1) < k {
            T::one()
        } else {
            -T::one()
        }
    });
    Ok(SpGrassPoint { n, k, m })
}

/// `q · canonical(k) · q⁻¹` for symplectic `q`.
pub fn spgr_from_conjugation<T: Scalar>(q: &DMatrix<T>, k: usize, tol: f64) -> Result<SpGrassPoint<T>> {
    let q = SymplecticMatrix::new(q.clone(), tol)?;
    let c = spgr_canonical::<T>(k, q.n)?;
    let m = &q.m * c.m * sp_inverse(&q.m);
    Ok(SpGrassPoint { n: q.n, k, m })
}

/// `exp(J·S)` for a random symmetric `S` (complex symmetric over ℂ).
pub fn sp_sample<T: Scalar>(n: usize, seed: u64) -> SymplecticMatrix<T> {
    sp_sample_with(n, &mut rng_from_seed(seed))
}

pub fn sp_sample_with<T: Scalar, R: Rng + ?Sized>(n: usize, rng: &mut R) -> SymplecticMatrix<T> {
    let g = DMatrix::<T>::from_fn(2 * n, 2 * n, |_, _| T::gaussian(rng));
    let scale = T::from_real(0.25 / (n.max(1) as f64).sqrt());
    let s = (&g + g.transpose()) * scale;
    SymplecticMatrix { n, m: hamiltonian_exp(&s) }
}

/// `exp(J·S)`.
pub fn hamiltonian_exp<T: Scalar>(s: &DMatrix<T>) -> DMatrix<T> {
    let j = j_matrix::<T>(s.nrows() / 2);
    (j * s).exp()
}

// ------------------------------------------------------------ subspaces

/// Rearranges columns spanning a symplectic subspace into a symplectic
/// basis `[v₁…v_r, w₁…w_r]` with `v_iᵀJw_j = δ_ij` and all other pairings 0.
fn symplectic_gram_schmidt<T: Scalar>(b: &DMatrix<T>) -> Result<DMatrix<T>> {
    let dim = b.nrows();
    let j = j_matrix::<T>(dim / 2);
    let mut pool: Vec<nalgebra::DVector<T>> = b.column_iter().map(|c| c.into_owned()).collect();
    let mut vs = Vec::new();
    let mut ws = Vec::new();
    while pool.len() >= 2 {
        let mut best = (0, 1, 0.0);
        for a in 0..pool.len() {
            for c in a + 1..pool.len() {
                let g = (pool[a].transpose() * &j * &pool[c])[(0, 0)];
                if g.modulus() > best.2 {
                    best = (a, c, g.modulus());
                }
            }
        }
        let (mut a, mut c, size) = best;
        if size < 1e-10 {
            return Err(Error::InvalidPoint("subspace is not symplectic".into()));
        }
        let mut g = (pool[a].transpose() * &j * &pool[c])[(0, 0)];
        if T::FIELD == Field::Real && g.real() < 0.0 {
            std::mem::swap(&mut a, &mut c);
            g = -g;
        }
        let root = g.sqrt();
        let v = &pool[a] / root;
        let w = &pool[c] / root;
        let (hi, lo) = (a.max(c), a.min(c));
        pool.remove(hi);
        pool.remove(lo);
        for u in pool.iter_mut() {
            let uw = (u.transpose() * &j * &w)[(0, 0)];
            let uv = (u.transpose() * &j * &v)[(0, 0)];
            *u = &*u - &v * uw + &w * uv;
        }
        vs.push(v);
        ws.push(w);
    }
    if !pool.is_empty() {
        return Err(Error::InvalidPoint("odd-dimensional subspace".into()));
    }
    let cols: Vec<_> = vs.into_iter().chain(ws).collect();
    Ok(DMatrix::from_columns(&cols))
}

/// Orthonormal basis of the `+1` eigenspace of an involution, `r` columns.
fn plus_eigenspace<T: Scalar>(m: &DMatrix<T>, r: usize) -> DMatrix<T> {
    let dim = m.nrows();
    let p = (DMatrix::<T>::identity(dim, dim) + m) * T::from_real(0.5);
    let (_, vecs) = hermitian_eigen(&(&p * p.adjoint()));
    vecs.columns(dim - r, r).into_owned()
}

fn validated<T: Scalar>(x: &SpGrassPoint<T>) -> Result<()> {
    let report = spgr_validate(&x.m, x.k, 1e-8);
    if !report.accepted {
        return Err(Error::InvalidPoint(format!("{report:?}")));
    }
    Ok(())
}

/// Symplectic basis `[v₁…v_k, w₁…w_k]` of the `+1` eigenspace of `x`.
pub fn symplectic_subspace<T: Scalar>(x: &SpGrassPoint<T>) -> Result<DMatrix<T>> {
    validated(x)?;
    if x.k == 0 {
        return Ok(DMatrix::zeros(2 * x.n, 0));
    }
    symplectic_gram_schmidt(&plus_eigenspace(&x.m, 2 * x.k))
}

/// A symplectic `Q` with `Q · canonical(k) · Q⁻¹ = x`.
pub fn symplectic_frame<T: Scalar>(x: &SpGrassPoint<T>) -> Result<DMatrix<T>> {
    let plus = symplectic_subspace(x)?;
    let minus = symplectic_subspace(&x.negate())?;
    let (k, r) = (x.k, x.n - x.k);
    let mut cols = Vec::with_capacity(2 * x.n);
    cols.extend(plus.columns(0, k).column_iter().map(|c| c.into_owned()));
    cols.extend(minus.columns(0, r).column_iter().map(|c| c.into_owned()));
    cols.extend(plus.columns(k, k).column_iter().map(|c| c.into_owned()));
    cols.extend(minus.columns(r, r).column_iter().map(|c| c.into_owned()));
    Ok(DMatrix::from_columns(&cols))
}

/// Realification `A + iB ↦ [[A, B], [−B, A]]` of a complex Grassmannian point.
pub fn psi1(u: &GrassPoint<Complex64>) -> Result<SpGrassPoint<f64>> {
    let report = crate::grassmann::gr_validate(&u.m, u.k, 1e-8);
    if !report.accepted {
        return Err(Error::InvalidPoint(format!("{report:?}")));
    }
    let n = u.n;
    let m = DMatrix::<f64>::from_fn(2 * n, 2 * n, |r, c| {
        let z = u.m[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => z.im,
            (false, true) => -z.im,
        }
    });
    Ok(SpGrassPoint { n, k: u.k, m })
}

/// `2VVᴴ − I` for an orthonormal basis `V` of the `+1` eigenspace.
pub fn psi2<T: Scalar>(x: &SpGrassPoint<T>) -> Result<GrassPoint<T>> {
    validated(x)?;
    let v = plus_eigenspace(&x.m, 2 * x.k);
    gr_from_basis(&SubspaceBasis { v })
}

// ------------------------------------------------------------ diagonal form

/// Splits `diag(D, D⁻¹)` into commuting factors `diag(D_j, D_j⁻¹)`, where `D_j`
/// keeps entries `2j, 2j+1` of `D` (and `2j+2` as well for the last factor
/// when `n` is odd) and puts ones elsewhere.
pub fn diag_block_split<T: Scalar>(d: &DMatrix<T>, tol: f64) -> Result<Vec<SymplecticMatrix<T>>> {
    let n = half_dim(d)?;
    if n < 2 {
        return Err(Error::BadDimensions("need n >= 2".into()));
    }
    let off = d.iter().enumerate().filter(|(i, _)| i % (2 * n + 1) != 0).map(|(_, z)| z.modulus()).fold(0.0, f64::max);
    let paired = (0..n).all(|i| (d[(i, i)] * d[(n + i, n + i)] - T::one()).modulus() <= tol);
    if off > tol || !paired {
        return Err(Error::NotDiagonalSymplectic);
    }
    let blocks = n / 2;
    let mut out = Vec::with_capacity(blocks);
    for j in 0..blocks {
        let last = if j + 1 == blocks { n } else { 2 * j + 2 };
        let mut m = DMatrix::<T>::identity(2 * n, 2 * n);
        for i in 2 * j..last {
            m[(i, i)] = d[(i, i)];
            m[(n + i, n + i)] = d[(n + i, n + i)];
        }
        out.push(SymplecticMatrix { n, m });
    }
    Ok(out)
}

// ------------------------------------------------------------ eigenvectors

/// Eigenvalues and unit eigenvectors of a complex matrix with distinct
/// eigenvalues, from the Schur form by back substitution.
fn eig_general(x: &CMat) -> Option<(Vec<Complex64>, CMat)> {
    let dim = x.nrows();
    let (q, t) = Schur::try_new(x.clone(), f64::EPSILON, 200 * dim.max(10))?.unpack();
    let vals: Vec<Complex64> = (0..dim).map(|i| t[(i, i)]).collect();
    let mut vecs = CMat::zeros(dim, dim);
    for i in 0..dim {
        let mut y = nalgebra::DVector::<Complex64>::zeros(dim);
        y[i] = Complex64::new(1.0, 0.0);
        for r in (0..i).rev() {
            let s: Complex64 = (r + 1..=i).map(|l| t[(r, l)] * y[l]).sum();
            let gap = t[(r, r)] - vals[i];
            if gap.norm() == 0.0 {
                return None;
            }
            y[r] = -s / gap;
        }
        let v = &q * y;
        let norm = v.norm();
        vecs.set_column(i, &(v / Complex64::new(norm, 0.0)));
    }
    Some((vals, vecs))
}

/// Why a symplectic matrix fails the genericity test, if it does.
pub fn genericity_defect(vals: &[Complex64]) -> Option<String> {
    for (i, a) in vals.iter().enumerate() {
        for b in &vals[i + 1..] {
            if (a - b).norm() <= GENERIC_GAP {
                return Some(format!("repeated eigenvalue near {a:.6}"));
            }
        }
        if (a - 1.0).norm() <= GENERIC_GAP || (a + 1.0).norm() <= GENERIC_GAP {
            return Some(format!("eigenvalue {a:.6} is too close to +-1"));
        }
    }
    None
}

/// `x = P diag(D, D⁻¹) P⁻¹` with `P` symplectic, for generic `x`.
fn sp_diagonalize(x: &CMat) -> Result<(Vec<Complex64>, CMat)> {
    let n = x.nrows() / 2;
    let (vals, vecs) =
        eig_general(x).ok_or_else(|| Error::NonGeneric("eigensolver did not converge".into()))?;
    if let Some(why) = genericity_defect(&vals) {
        return Err(Error::NonGeneric(why));
    }
    let mut used = vec![false; 2 * n];
    let mut pairs = Vec::with_capacity(n);
    for i in 0..2 * n {
        if used[i] {
            continue;
        }
        let partner = (0..2 * n)
            .filter(|&j| j != i && !used[j])
            .min_by(|&a, &b| {
                let ea = (vals[i] * vals[a] - 1.0).norm();
                let eb = (vals[i] * vals[b] - 1.0).norm();
                ea.total_cmp(&eb)
            })
            .ok_or_else(|| Error::NonGeneric("unpaired eigenvalue".into()))?;
        if (vals[i] * vals[partner] - 1.0).norm() > 1e-6 {
            return Err(Error::NonGeneric("spectrum is not closed under inversion".into()));
        }
        used[i] = true;
        used[partner] = true;
        let (a, b) = (vals[i], vals[partner]);
        let first = if (a.norm() - b.norm()).abs() > 1e-12 { a.norm() > b.norm() } else { a.im > b.im };
        pairs.push(if first { (i, partner) } else { (partner, i) });
    }
    pairs.sort_by(|p, q| {
        let (a, b) = (vals[p.0], vals[q.0]);
        b.norm().total_cmp(&a.norm()).then(b.arg().total_cmp(&a.arg()))
    });
    let j = j_matrix::<Complex64>(n);
    let mut p = CMat::zeros(2 * n, 2 * n);
    let mut d = Vec::with_capacity(n);
    for (slot, &(a, b)) in pairs.iter().enumerate() {
        let v = vecs.column(a);
        let w = vecs.column(b);
        let c = (v.transpose() * &j * w)[(0, 0)];
        if c.norm() < 1e-12 {
            return Err(Error::NonGeneric("degenerate eigenvector pairing".into()));
        }
        let root = c.sqrt();
        p.set_column(slot, &(v / root));
        p.set_column(n + slot, &(w / root));
        d.push(vals[a]);
    }
    Ok((d, p))
}

// ------------------------------------------------------------ two involutions

/// The involution swapping the `μ`- and `μ⁻¹`-eigenspaces of
/// `diag(μ, μ, μ⁻¹, μ⁻¹)`, in local order `(i, j, n+i, n+j)`.
fn swap_involution() -> CMat {
    let mut y = CMat::zeros(4, 4);
    let one = Complex64::new(1.0, 0.0);
    y[(0, 3)] = one;
    y[(1, 2)] = -one;
    y[(2, 1)] = -one;
    y[(3, 0)] = one;
    y
}

/// SL(2) eigenvector matrix `M` with `M diag(λ, λ⁻¹) M⁻¹ = g`, `det M = 1`.
fn sl2_eigenbasis(g: &CMat, lambda: Complex64) -> CMat {
    let pick = |mu: Complex64| {
        let a = nalgebra::Vector2::new(g[(0, 1)], mu - g[(0, 0)]);
        let b = nalgebra::Vector2::new(mu - g[(1, 1)], g[(1, 0)]);
        if a.norm() >= b.norm() {
            a
        } else {
            b
        }
    };
    let u = pick(lambda);
    let w = pick(1.0 / lambda);
    let det = u[0] * w[1] - u[1] * w[0];
    let root = det.sqrt();
    CMat::from_row_slice(2, 2, &[u[0] / root, w[0] / root, u[1] / root, w[1] / root])
}

fn sl2_inverse(m: &CMat) -> CMat {
    CMat::from_row_slice(2, 2, &[m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]])
}

/// Factors `h = (hY)·Y` of an element acting on planes `(i, j)` as
/// `(M_i, M_j) diag(μ, μ, μ⁻¹, μ⁻¹) (M_i, M_j)⁻¹`, scattered into `f_hy`, `f_y`.
fn add_doubled_block(f_hy: &mut CMat, f_y: &mut CMat, planes: (usize, usize), frames: (&CMat, &CMat), mu: Complex64) {
    let n = f_y.nrows() / 2;
    let (mi, mj) = frames;
    let embed = |a: &CMat, b: &CMat| {
        let mut m = CMat::zeros(4, 4);
        for (r, c) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            m[(2 * r, 2 * c)] = a[(r, c)];
            m[(2 * r + 1, 2 * c + 1)] = b[(r, c)];
        }
        m
    };
    let frame = embed(mi, mj);
    let frame_inv = embed(&sl2_inverse(mi), &sl2_inverse(mj));
    let lam = CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![mu, mu, 1.0 / mu, 1.0 / mu]));
    let y0 = swap_involution();
    let y = &frame * &y0 * &frame_inv;
    let hy = &frame * lam * &y0 * &frame_inv;
    let idx = [planes.0, planes.1, n + planes.0, n + planes.1];
    for r in 0..4 {
        for c in 0..4 {
            f_y[(idx[r], idx[c])] = y[(r, c)];
            f_hy[(idx[r], idx[c])] = hy[(r, c)];
        }
    }
}

fn add_idle_plane(f: &mut CMat, plane: usize) {
    let n = f.nrows() / 2;
    f[(plane, plane)] = Complex64::new(-1.0, 0.0);
    f[(n + plane, n + plane)] = Complex64::new(-1.0, 0.0);
}

/// Four factors of `diag(D, D⁻¹)`, each of half-rank `⌊n/2⌋`.
///
/// Consecutive planes are grouped in pairs. A pair `diag(d₁, d₂)` is the
/// commuting product of `diag(s, s)` and `diag(t, t⁻¹)` with `s² = d₁d₂` and
/// `st = d₁`; each has a doubled spectrum and so splits into two symplectic
/// involutions. For odd `n` the last three planes `(a, b, c)` use SL(2)
/// elements `g ~ diag(d_a, d_a⁻¹)`, `g′ ~ diag(d_c, d_c⁻¹)` with `gg′ = diag(d_b, d_b⁻¹)`:
/// the factors are `(x_a, g, 1)` and `(1, g′, x_c)`.
fn diagonal_four(d: &[Complex64]) -> [CMat; 4] {
    let n = d.len();
    let mut f: [CMat; 4] = std::array::from_fn(|_| CMat::zeros(2 * n, 2 * n));
    let id = CMat::identity(2, 2);
    let quarter_turn = CMat::from_row_slice(2, 2, &[0.0.into(), (-1.0).into(), 1.0.into(), 0.0.into()]);
    let pair_planes = if n.is_multiple_of(2) { n / 2 } else { (n - 3) / 2 };
    for b in 0..pair_planes {
        let (i, j) = (2 * b, 2 * b + 1);
        let s = (d[i] * d[j]).sqrt();
        let t = d[i] / s;
        let [f1, f2, f3, f4] = &mut f;
        add_doubled_block(f1, f2, (i, j), (&id, &id), s);
        add_doubled_block(f3, f4, (i, j), (&id, &quarter_turn), t);
    }
    if n % 2 == 1 {
        let (a, b, c) = (n - 3, n - 2, n - 1);
        let (da, db, dc) = (d[a], d[b], d[c]);
        let (ta, tc) = (da + 1.0 / da, dc + 1.0 / dc);
        let lower = (tc - ta / db) / (db - 1.0 / db);
        let upper = ta - lower;
        let off = (upper * lower - 1.0).sqrt();
        let g = CMat::from_row_slice(2, 2, &[upper, off, off, lower]);
        let xb = CMat::from_row_slice(2, 2, &[db, 0.0.into(), 0.0.into(), 1.0 / db]);
        let g2 = sl2_inverse(&g) * xb;
        let [f1, f2, f3, f4] = &mut f;
        add_doubled_block(f1, f2, (a, b), (&id, &sl2_eigenbasis(&g, da)), da);
        add_idle_plane(f1, c);
        add_idle_plane(f2, c);
        add_doubled_block(f3, f4, (b, c), (&sl2_eigenbasis(&g2, dc), &id), dc);
        add_idle_plane(f3, a);
        add_idle_plane(f4, a);
    }
    f
}

#[derive(Debug, Clone)]
pub struct InvolutionPair<T: Scalar> {
    pub y1: SpGrassPoint<T>,
    pub y2: SpGrassPoint<T>,
    /// `x = sign · y1 · y2`
    pub sign: i8,
}

/// Basis of the null space of `a`, `r` columns, or `None` if the next
/// singular value is not clearly separated.
fn null_space<T: Scalar>(a: &DMatrix<T>, r: usize) -> Option<DMatrix<T>> {
    let (vals, vecs) = hermitian_eigen(&(a.adjoint() * a));
    let scale = vals.last().copied().unwrap_or(1.0).max(1.0);
    (vals[r - 1] <= 1e-16 * scale * 1e4 && vals[r] > 1e-8 * scale).then(|| vecs.columns(0, r).into_owned())
}

/// Writes a 4×4 or 6×6 symplectic `x` as `±Y₁Y₂` with `Y₁, Y₂ ∈ Gr_Sp(2, F^{2n})`.
///
/// Only elements with a doubled spectrum `{μ, μ, μ⁻¹, μ⁻¹}` (plus a `±1`
/// pair when `n = 3`) qualify: an involution reversing `x` maps each
/// eigenline of `λ` to that of `λ⁻¹`, and on a simple spectrum this flips
/// the sign of the symplectic pairing, so it cannot be symplectic. Such
/// inputs get `NonGeneric`.
pub fn sp_two_involutions_base<T: Scalar>(x: &DMatrix<T>, tol: f64) -> Result<InvolutionPair<T>> {
    let n = half_dim(x)?;
    if n != 2 && n != 3 {
        return Err(Error::BadDimensions(format!("base case needs n = 2 or 3, got {n}")));
    }
    SymplecticMatrix::new(x.clone(), tol)?;
    let eye = DMatrix::<T>::identity(2 * n, 2 * n);
    if (x * x - &eye).norm() <= tol * n as f64 {
        return Err(Error::NonGeneric("x squares to the identity".into()));
    }
    let (vals, _) = eig_general(&to_complex(x))
        .ok_or_else(|| Error::NonGeneric("eigensolver did not converge".into()))?;
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-6;
    let mut sign = 1i8;
    let mut rest: Vec<Complex64> = vals.clone();
    if n == 3 {
        let plus = vals.iter().filter(|v| close(**v, 1.0.into())).count();
        let minus = vals.iter().filter(|v| close(**v, (-1.0).into())).count();
        if minus == 2 && plus != 2 {
            sign = -1;
        }
        let fixed = Complex64::new(sign as f64, 0.0);
        if vals.iter().filter(|v| close(**v, fixed)).count() != 2 {
            return Err(Error::NonGeneric("no two-dimensional fixed plane".into()));
        }
        rest = vals.iter().filter(|v| !close(**v, fixed)).map(|v| v * sign as f64).collect();
    }
    let mu = rest[0];
    let same = rest.iter().filter(|v| close(**v, mu)).count();
    let inverse = rest.iter().filter(|v| close(**v, 1.0 / mu)).count();
    if close(mu, 1.0 / mu) || same != 2 || inverse != 2 {
        return Err(Error::NonGeneric(
            "spectrum is not doubled, so no symplectic involution reverses x".into(),
        ));
    }
    if T::FIELD == Field::Real && mu.im.abs() > 1e-9 {
        return Err(Error::Unsupported("real input with non-real spectrum".into()));
    }
    let xs = x * T::from_real(sign as f64);
    let shifted = |m: Complex64| &xs - &eye * lift::<T>(if T::FIELD == Field::Real { m.re.into() } else { m });
    let not_diag = || Error::NonGeneric("x is not diagonalizable".into());
    let v = null_space(&shifted(mu), 2).ok_or_else(not_diag)?;
    let w = null_space(&shifted(1.0 / mu), 2).ok_or_else(not_diag)?;
    let j = j_matrix::<T>(n);
    let g = v.transpose() * &j * &w;
    let w = w * g.try_inverse().ok_or_else(not_diag)?;
    let mut cols: Vec<_> = vec![v.column(0).into_owned(), v.column(1).into_owned()];
    let mut tail = vec![w.column(0).into_owned(), w.column(1).into_owned()];
    if n == 3 {
        let u = null_space(&(&xs - &eye), 2).ok_or_else(not_diag)?;
        let c = (u.column(0).transpose() * &j * u.column(1))[(0, 0)];
        cols.push(u.column(0).into_owned());
        tail.push(u.column(1) / c);
    }
    cols.extend(tail);
    let p = DMatrix::from_columns(&cols);
    let mut y0 = DMatrix::<T>::zeros(2 * n, 2 * n);
    let local = swap_involution();
    let idx = [0, 1, n, n + 1];
    for r in 0..4 {
        for c in 0..4 {
            y0[(idx[r], idx[c])] = lift(local[(r, c)]);
        }
    }
    if n == 3 {
        y0[(2, 2)] = -T::one();
        y0[(5, 5)] = -T::one();
    }
    let y = &p * y0 * sp_inverse(&p);
    let y1 = &xs * &y;
    let check = tol.max(1e-8);
    let wrap = |m: DMatrix<T>| {
        SpGrassPoint::new(m, 1, check).map_err(|e| Error::NonGeneric(format!("ill-conditioned eigenbasis: {e}")))
    };
    Ok(InvolutionPair { y1: wrap(y1)?, y2: wrap(y)?, sign })
}

// ------------------------------------------------------------ four factors

#[derive(Debug, Clone)]
pub struct SpFactorization<T: Scalar> {
    pub target: DMatrix<T>,
    pub factors: Vec<SpGrassPoint<T>>,
    pub residual: f64,
}

impl<T: Scalar> SpFactorization<T> {
    pub fn product(&self) -> DMatrix<T> {
        let dim = self.target.nrows();
        self.factors.iter().fold(DMatrix::identity(dim, dim), |acc, f| acc * &f.m)
    }

    pub fn ks(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.k).collect()
    }
}

/// `x = Y₁Y₂Y₃Y₄` with every `Y_i ∈ Gr_Sp(2⌊n/2⌋, ℂ²ⁿ)`, for symplectic `x`
/// with simple spectrum avoiding `±1`. `±I` are handled directly; for odd `n`,
/// `−I` puts the first factor at half-rank `⌊n/2⌋ + 1`.
pub fn decompose_sp_four<T: Scalar>(x: &DMatrix<T>, tol: f64) -> Result<SpFactorization<T>> {
    if T::FIELD == Field::Real {
        return Err(Error::Unsupported("four-factor construction is over the complex field".into()));
    }
    let n = half_dim(x)?;
    SymplecticMatrix::new(x.clone(), tol)?;
    let k = n / 2;
    let eye = DMatrix::<T>::identity(2 * n, 2 * n);
    let bound = tol * n.max(1) as f64;
    for sign in [1.0, -1.0] {
        if (x - &eye * T::from_real(sign)).norm() <= bound {
            let c = spgr_canonical::<T>(k, n)?;
            let first = if sign < 0.0 { c.negate() } else { c.clone() };
            let factors = vec![first, c.clone(), c.clone(), c];
            return finish(x, factors, tol);
        }
    }
    if n < 2 {
        return Err(Error::BadDimensions("Sp(2) has no such products besides +-I".into()));
    }
    let (d, p) = sp_diagonalize(&to_complex(x))?;
    let p_inv = sp_inverse(&p);
    let factors = diagonal_four(&d)
        .iter()
        .map(|f| SpGrassPoint { n, k, m: (&p * f * &p_inv).map(lift::<T>) })
        .collect();
    finish(x, factors, tol).map_err(|e| match e {
        Error::ConvergenceFailure | Error::InvalidPoint(_) => {
            Error::NonGeneric(format!("eigenbasis too ill-conditioned: {e}"))
        }
        other => other,
    })
}

fn finish<T: Scalar>(x: &DMatrix<T>, factors: Vec<SpGrassPoint<T>>, tol: f64) -> Result<SpFactorization<T>> {
    let n = x.nrows() / 2;
    for f in &factors {
        let r = spgr_validate(&f.m, f.k, tol);
        if !r.accepted {
            return Err(Error::InvalidPoint(format!("{r:?}")));
        }
    }
    let mut out = SpFactorization { target: x.clone(), factors, residual: 0.0 };
    out.residual = backend::distance(&out.product(), x);
    if out.residual > tol * n.max(1) as f64 {
        return Err(Error::ConvergenceFailure);
    }
    Ok(out)
}
