//! Product sets Φ(k₁,…,k_d, Fⁿ) = Gr(k₁)·…·Gr(k_d).
//!
//! Two-factor products are decided spectrally: Z ∈ Φ(k, k′) exactly when
//! at most k′ of its eigenvalues come in genuine conjugate pairs and the
//! remaining `±1` eigenvalues can fill the `I_{n−k−k′, k−k′}` tail of the
//! canonical block form, with leftovers pairing up into `±I₂` blocks.

use crate::backend::{self, NormalBlock, DEFAULT_CLUSTER_TOL};
use crate::error::{Error, Result};
use crate::grassmann::GrassPoint;
use crate::scalar::{Field, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhiSignature {
    pub field: Field,
    pub n: usize,
    pub ks: Vec<usize>,
}

impl PhiSignature {
    pub fn new(field: Field, n: usize, ks: &[usize]) -> Self {
        PhiSignature { field, n, ks: ks.to_vec() }
    }

    /// Descending with `k₁ + k₂ ≤ n` and `k₁ < n`.
    pub fn is_normalized(&self) -> bool {
        let ks = &self.ks;
        !ks.is_empty()
            && ks.windows(2).all(|w| w[0] >= w[1])
            && ks[0] < self.n.max(1)
            && (ks.len() < 2 || ks[0] + ks[1] <= self.n)
    }

    fn check(&self) -> Result<()> {
        if self.ks.is_empty() {
            return Err(Error::BadSignature("empty signature".into()));
        }
        if let Some(k) = self.ks.iter().find(|&&k| k > self.n) {
            return Err(Error::BadSignature(format!("k = {k} exceeds n = {}", self.n)));
        }
        Ok(())
    }
}

/// Brings a signature into normal form. A factor `k = n` (the identity) is
/// traded for `k = 0` at the cost of a sign, since Gr(n) = −Gr(0); the pair
/// move `(k₁, k₂) → (n−k₁, n−k₂)` leaves the product set unchanged.
pub fn normalize_signature(s: &PhiSignature) -> Result<(PhiSignature, i8)> {
    s.check()?;
    let n = s.n;
    let mut sign = 1i8;
    let mut ks: Vec<usize> = s
        .ks
        .iter()
        .map(|&k| {
            if k == n && n > 0 {
                sign = -sign;
                0
            } else {
                k
            }
        })
        .collect();
    ks.sort_unstable_by(|a, b| b.cmp(a));
    while ks.len() >= 2 && ks[0] + ks[1] > n {
        ks[0] = n - ks[0];
        ks[1] = n - ks[1];
        ks.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok((PhiSignature { field: s.field, n, ks }, sign))
}

fn check_pair(k: usize, kp: usize, n: usize) -> Result<()> {
    if kp > k || k + kp > n || (k >= n && n > 0) {
        return Err(Error::BadSignature(format!("({k}, {kp}) is not normalized for n = {n}")));
    }
    Ok(())
}

/// Real dimension of Φ(k, k′, Fⁿ).
pub fn phi_dim(field: Field, k: usize, kp: usize, n: usize) -> Result<usize> {
    check_pair(k, kp, n)?;
    let base = k * (n - k) + kp * (n - kp);
    Ok(match field {
        Field::Real => base - kp,
        Field::Complex => 2 * base - kp,
    })
}

fn choose2(x: i64) -> i64 {
    x * (x - 1) / 2
}

/// Dimension of an O(n)-conjugation orbit of a canonical product: `m₀` is the
/// number of σ = 1 blocks, `blocks` lists `(p_j, q_j)` sign splits of the
/// repeated σ values in (0, 1), and `q` counts `+1` eigenvalues in the tail.
pub fn orbit_dim_real(m0: usize, blocks: &[(usize, usize)], q: usize, n: usize) -> Result<usize> {
    let m = m0 + blocks.iter().map(|(p, r)| p + r).sum::<usize>();
    if 2 * m + q > n {
        return Err(Error::BadPartition(format!("2·{m} + {q} exceeds n = {n}")));
    }
    let (n, q, m, m0) = (n as i64, q as i64, m as i64, m0 as i64);
    let stab = m0 * m0
        + blocks.iter().map(|&(p, r)| (p * p + r * r) as i64).sum::<i64>()
        + choose2(q)
        + choose2(n - q - 2 * m);
    let d = choose2(n) - stab;
    usize::try_from(d).map_err(|_| Error::BadPartition(format!("negative dimension {d}")))
}

/// Dimension of a U(n)-conjugation orbit with pair multiplicities `ms`.
pub fn orbit_dim_complex(ms: &[usize], q: usize, n: usize) -> Result<usize> {
    let m: usize = ms.iter().sum();
    if 2 * m + q > n {
        return Err(Error::BadPartition(format!("2·{m} + {q} exceeds n = {n}")));
    }
    let stab = 2 * ms.iter().map(|x| x * x).sum::<usize>() + q * q + (n - q - 2 * m).pow(2);
    (n * n)
        .checked_sub(stab)
        .ok_or_else(|| Error::BadPartition("negative dimension".into()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralProfile {
    /// Conjugate-pair angles θ ∈ (0, π) (eigenvalues `e^{±iθ}`), descending,
    /// with multiplicities.
    pub pairs: Vec<(f64, usize)>,
    pub plus_count: usize,
    pub minus_count: usize,
}

impl SpectralProfile {
    pub fn pair_total(&self) -> usize {
        self.pairs.iter().map(|p| p.1).sum()
    }
}

fn structured_normal_form<T: Scalar>(
    z: &DMatrix<T>,
    tol: f64,
) -> Result<Option<backend::NormalForm<T>>> {
    T::normal_form(z, tol, DEFAULT_CLUSTER_TOL).map_err(|e| match e {
        Error::NotOrthogonal(r) | Error::NotUnitary(r) => {
            Error::NotStructured(format!("unitarity residual {r:.3e}"))
        }
        other => other,
    })
}

pub fn spectral_profile<T: Scalar>(z: &DMatrix<T>, tol: f64) -> Result<SpectralProfile> {
    let nf = structured_normal_form(z, tol)?
        .ok_or_else(|| Error::NotStructured("spectrum is not closed under conjugation".into()))?;
    let mut angles: Vec<f64> = nf
        .blocks
        .iter()
        .filter_map(|b| match b {
            NormalBlock::Pair(phi) => Some(*phi),
            NormalBlock::Sign(_) => None,
        })
        .collect();
    angles.sort_by(|a, b| b.total_cmp(a));
    let mut pairs: Vec<(f64, usize)> = Vec::new();
    for a in angles {
        match pairs.last_mut() {
            Some((rep, mult)) if (*rep - a).abs() <= DEFAULT_CLUSTER_TOL => *mult += 1,
            _ => pairs.push((a, 1)),
        }
    }
    Ok(SpectralProfile { pairs, plus_count: nf.sign_count(1), minus_count: nf.sign_count(-1) })
}

fn profile_admits(pairs: usize, plus: usize, minus: usize, k: usize, kp: usize, n: usize) -> bool {
    let free = n - k - kp;
    pairs <= kp && plus >= free && minus >= k - kp && (plus - free).is_multiple_of(2)
}

pub fn member_phi2<T: Scalar>(z: &DMatrix<T>, k: usize, kp: usize, tol: f64) -> Result<bool> {
    let n = z.nrows();
    check_pair(k, kp, n)?;
    let Some(nf) = structured_normal_form(z, tol)? else {
        return Ok(false);
    };
    Ok(profile_admits(nf.pair_count(), nf.sign_count(1), nf.sign_count(-1), k, kp, n))
}

/// Canonical two-factor form `Z = Q·M·Qᴴ`. For real Z the middle matrix is
/// `[[√(1−Σ²)E, Σ, 0], [−Σ, √(1−Σ²)E, 0], [0, 0, I_{n−k−k′, k−k′}]]`; for
/// complex Z it is `diag(D, D̄, I_{n−k−k′, k−k′})` with `D_j = e^{iθ_j}`,
/// `sin θ_j = σ_j` and `sign cos θ_j = e_j`.
#[derive(Debug, Clone)]
pub struct CanonicalPhi2<T: Scalar> {
    pub q: DMatrix<T>,
    pub sigma: Vec<f64>,
    pub e: Vec<i8>,
    /// `(n − k − k′, k − k′)`.
    pub tail: (usize, usize),
    /// θ_j ∈ [0, π]; kept so assembly does not lose accuracy near σ = 1.
    pub angles: Vec<f64>,
}

impl<T: Scalar> CanonicalPhi2<T> {
    pub fn kp(&self) -> usize {
        self.sigma.len()
    }

    pub fn middle(&self) -> DMatrix<T> {
        let n = self.q.nrows();
        let kp = self.kp();
        let mut m = DMatrix::<T>::zeros(n, n);
        for (j, &th) in self.angles.iter().enumerate() {
            let (s, c) = th.sin_cos();
            match T::FIELD {
                Field::Real => {
                    m[(j, j)] = T::from_real(c);
                    m[(j, kp + j)] = T::from_real(s);
                    m[(kp + j, j)] = T::from_real(-s);
                    m[(kp + j, kp + j)] = T::from_real(c);
                }
                Field::Complex => {
                    m[(j, j)] = lift(Complex64::new(c, s));
                    m[(kp + j, kp + j)] = lift(Complex64::new(c, -s));
                }
            }
        }
        for i in 2 * kp..n {
            m[(i, i)] = if i < 2 * kp + self.tail.0 { T::one() } else { -T::one() };
        }
        m
    }

    pub fn assemble(&self) -> DMatrix<T> {
        &self.q * self.middle() * self.q.adjoint()
    }

    /// Middle-matrix factors `(X₀, Y₀)` with `X₀Y₀ = middle()`.
    pub fn middle_factors(&self) -> (DMatrix<T>, DMatrix<T>) {
        let n = self.q.nrows();
        let kp = self.kp();
        let mut x = DMatrix::<T>::zeros(n, n);
        let mut y = DMatrix::<T>::zeros(n, n);
        for (j, &th) in self.angles.iter().enumerate() {
            let (a, b) = (j, kp + j);
            match T::FIELD {
                Field::Real => {
                    let (s, c) = (0.5 * th).sin_cos();
                    x[(a, a)] = T::from_real(c);
                    x[(a, b)] = T::from_real(-s);
                    x[(b, a)] = T::from_real(-s);
                    x[(b, b)] = T::from_real(-c);
                    y[(a, a)] = T::from_real(c);
                    y[(a, b)] = T::from_real(s);
                    y[(b, a)] = T::from_real(s);
                    y[(b, b)] = T::from_real(-c);
                }
                Field::Complex => {
                    x[(a, b)] = T::one();
                    x[(b, a)] = T::one();
                    y[(a, b)] = lift(Complex64::from_polar(1.0, -th));
                    y[(b, a)] = lift(Complex64::from_polar(1.0, th));
                }
            }
        }
        for i in 2 * kp..n {
            let plus = i < 2 * kp + self.tail.0;
            x[(i, i)] = if plus { -T::one() } else { T::one() };
            y[(i, i)] = -T::one();
        }
        (x, y)
    }
}

fn lift<T: Scalar>(z: Complex64) -> T {
    T::from_c64(z).expect("complex entry requested for a real matrix")
}

pub fn canonical_phi2<T: Scalar>(
    z: &DMatrix<T>,
    k: usize,
    kp: usize,
    tol: f64,
) -> Result<CanonicalPhi2<T>> {
    let n = z.nrows();
    check_pair(k, kp, n)?;
    let nf = structured_normal_form(z, tol)?.ok_or(Error::NotMember)?;
    let (p, plus, minus) = (nf.pair_count(), nf.sign_count(1), nf.sign_count(-1));
    if !profile_admits(p, plus, minus, k, kp, n) {
        return Err(Error::NotMember);
    }
    let free = n - k - kp;
    let neg_tail = k - kp;

    // (angle, first column, second column) for each of the k′ blocks.
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(kp);
    let mut plus_cols = Vec::new();
    let mut minus_cols = Vec::new();
    let mut col = 0;
    for b in &nf.blocks {
        match *b {
            NormalBlock::Pair(phi) => pairs.push((phi, col, col + 1)),
            NormalBlock::Sign(1) => plus_cols.push(col),
            NormalBlock::Sign(_) => minus_cols.push(col),
        }
        col += b.size();
    }
    let plus_tail: Vec<usize> = plus_cols.drain(..free).collect();
    let minus_tail: Vec<usize> = minus_cols.drain(..neg_tail).collect();
    for c in plus_cols.chunks(2) {
        pairs.push((0.0, c[0], c[1]));
    }
    for c in minus_cols.chunks(2) {
        pairs.push((PI, c[0], c[1]));
    }
    debug_assert_eq!(pairs.len(), kp);

    let key = |phi: f64| -> (f64, i8) {
        let s = phi.sin().max(0.0);
        (s, if phi <= PI / 2.0 { 1 } else { -1 })
    };
    pairs.sort_by(|a, b| {
        let (sa, ea) = key(a.0);
        let (sb, eb) = key(b.0);
        sb.total_cmp(&sa).then(eb.cmp(&ea))
    });

    let mut order = vec![0usize; n];
    for (j, &(_, c1, c2)) in pairs.iter().enumerate() {
        order[j] = c1;
        order[kp + j] = c2;
    }
    for (i, &c) in plus_tail.iter().chain(&minus_tail).enumerate() {
        order[2 * kp + i] = c;
    }
    let q = DMatrix::<T>::from_fn(n, n, |r, c| nf.q[(r, order[c])]);
    let canon = CanonicalPhi2 {
        q,
        sigma: pairs.iter().map(|p| key(p.0).0).collect(),
        e: pairs.iter().map(|p| key(p.0).1).collect(),
        tail: (free, neg_tail),
        angles: pairs.iter().map(|p| p.0).collect(),
    };
    let res = backend::distance(&canon.assemble(), z);
    if res > tol * n.max(1) as f64 {
        return Err(Error::ConvergenceFailure);
    }
    Ok(canon)
}

/// `Z = X·Y` with `X ∈ Gr(k)` and `Y ∈ Gr(k′)`.
pub fn split_phi2<T: Scalar>(
    z: &DMatrix<T>,
    k: usize,
    kp: usize,
    tol: f64,
) -> Result<(GrassPoint<T>, GrassPoint<T>)> {
    let canon = canonical_phi2(z, k, kp, tol)?;
    let (x0, y0) = canon.middle_factors();
    let hermitize = |m: DMatrix<T>| (&m + m.adjoint()) * T::from_real(0.5);
    let qh = canon.q.adjoint();
    let x = hermitize(&canon.q * x0 * &qh);
    let y = hermitize(&canon.q * y0 * &qh);
    let n = z.nrows();
    Ok((GrassPoint { n, k, m: x }, GrassPoint { n, k: kp, m: y }))
}

/// Basis of the Lie algebra of O(n) (skew-symmetric) or U(n) (skew-Hermitian).
pub fn lie_algebra_basis<T: Scalar>(n: usize) -> Vec<DMatrix<T>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut m = DMatrix::<T>::zeros(n, n);
            m[(i, j)] = T::one();
            m[(j, i)] = -T::one();
            out.push(m);
        }
    }
    if T::FIELD == Field::Complex {
        let iu: T = lift(Complex64::i());
        for i in 0..n {
            let mut m = DMatrix::<T>::zeros(n, n);
            m[(i, i)] = iu;
            out.push(m);
            for j in i + 1..n {
                let mut m = DMatrix::<T>::zeros(n, n);
                m[(i, j)] = iu;
                m[(j, i)] = iu;
                out.push(m);
            }
        }
    }
    out
}

/// Numerical rank of the differential of `(X, Y) ↦ XY` at a point: the span
/// of `[Ω, X]·Y` and `X·[Ω, Y]` over the Lie algebra, counted in real
/// dimensions and thresholded on singular values.
pub fn product_tangent_rank<T: Scalar>(x: &DMatrix<T>, y: &DMatrix<T>, threshold: f64) -> usize {
    let n = x.nrows();
    let basis = lie_algebra_basis::<T>(n);
    let width = if T::FIELD == Field::Complex { 2 * n * n } else { n * n };
    let mut cols: Vec<f64> = Vec::with_capacity(2 * basis.len() * width);
    for om in &basis {
        let dx = (om * x - x * om) * y;
        let dy = x * (om * y - y * om);
        for d in [dx, dy] {
            for v in d.iter() {
                let c = v.to_c64();
                cols.push(c.re);
                if T::FIELD == Field::Complex {
                    cols.push(c.im);
                }
            }
        }
    }
    let a = DMatrix::<f64>::from_column_slice(width, 2 * basis.len(), &cols);
    match backend::svd(&a) {
        Ok((_, s, _)) => s.iter().filter(|&&v| v > threshold).count(),
        Err(_) => 0,
    }
}

/// Minimal number of reflections whose product is `a`, from the eigenphases.
pub fn reflection_length<T: Scalar>(a: &DMatrix<T>, tol: f64) -> Result<usize> {
    let n = a.nrows();
    let ac = crate::scalar::to_complex(a);
    let det = backend::det_c64(&ac);
    let bound = tol * n.max(1) as f64;
    if (det - 1.0).norm() > bound && (det + 1.0).norm() > bound {
        return Err(Error::NotSpecialOrAntiSpecial(format!("{det}")));
    }
    let eig = backend::eig_unitary(&ac, tol).map_err(|e| match e {
        Error::NotUnitary(r) => Error::NotStructured(format!("unitarity residual {r:.3e}")),
        other => other,
    })?;
    let (mut fwd, mut back) = (0.0, 0.0);
    for &g in &eig.phases {
        if g.abs() <= DEFAULT_CLUSTER_TOL {
            continue;
        }
        let theta = if g < 0.0 { g + 2.0 * PI } else { g };
        fwd += theta;
        back += 2.0 * PI - theta;
    }
    let x = fwd.max(back) / PI;
    let r = x.round();
    if (x - r).abs() > 1e-6 {
        return Err(Error::NotSpecialOrAntiSpecial(format!("phase sum {x}·π")));
    }
    Ok(r as usize)
}

pub fn length_upper_bound(s: &PhiSignature) -> Result<usize> {
    s.check()?;
    if !s.is_normalized() {
        return Err(Error::BadSignature("signature is not normalized".into()));
    }
    let rest: usize = s.ks[1..].iter().sum();
    Ok(if s.ks.len().is_multiple_of(2) { s.ks[0] + rest } else { s.n - s.ks[0] + rest })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phi4Class {
    SU,
    SUMinus,
    ProperSubset,
}

pub fn classify_phi4_complex(s: &PhiSignature) -> Result<Phi4Class> {
    s.check()?;
    if s.field != Field::Complex || s.ks.len() != 4 || !s.is_normalized() {
        return Err(Error::BadSignature(format!("{s:?} is not a normalized complex 4-tuple")));
    }
    let n = s.n;
    let k = n / 2;
    let t = (s.ks[0], s.ks[1], s.ks[2], s.ks[3]);
    let class = if n.is_multiple_of(2) {
        if t == (k, k, k, k)
            || (k >= 2 && t == (k, k, k - 1, k - 1))
            || (k >= 3 && t == (k, k, k, k - 2))
        {
            Phi4Class::SU
        } else if k >= 2 && t == (k, k, k, k - 1) {
            Phi4Class::SUMinus
        } else {
            Phi4Class::ProperSubset
        }
    } else if t == (k, k, k, k) {
        Phi4Class::SU
    } else if t == (k + 1, k, k, k) {
        Phi4Class::SUMinus
    } else {
        Phi4Class::ProperSubset
    };
    Ok(class)
}
