//! Explicit factorizations of SO(n), SU(n) and their determinant −1 cosets
//! into products of Grassmannian points.

use crate::backend::{self, ComplexMatrix, RealMatrix, SchurBlock, SchurForm};
use crate::error::{Error, Result};
use crate::grassmann::{gr_validate, GrassPoint};
use crate::phi::split_phi2;
use crate::scalar::Scalar;
use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::PI;

/// An ordered product of Grassmannian points together with the target it
/// reconstructs.
#[derive(Debug, Clone)]
pub struct Factorization<T: Scalar> {
    pub target: DMatrix<T>,
    pub factors: Vec<GrassPoint<T>>,
    /// `‖X₁⋯X_d − target‖_F`
    pub residual: f64,
}

impl<T: Scalar> Factorization<T> {
    /// Checks every factor and the reconstruction at `tol·n`.
    pub fn new(target: DMatrix<T>, factors: Vec<GrassPoint<T>>, tol: f64) -> Result<Self> {
        let n = target.nrows();
        for f in &factors {
            let report = gr_validate(&f.m, f.k, tol);
            if !report.accepted {
                return Err(Error::InvalidPoint(format!(
                    "factor in Gr({}) has involution {:.3e}, symmetry {:.3e}, trace {:.3e}",
                    f.k, report.involution, report.symmetry, report.trace
                )));
            }
        }
        let residual = backend::distance(&product(&factors, n), &target);
        if residual > tol * n.max(1) as f64 {
            return Err(Error::ConvergenceFailure);
        }
        Ok(Factorization { target, factors, residual })
    }

    pub fn product(&self) -> DMatrix<T> {
        product(&self.factors, self.target.nrows())
    }

    pub fn ks(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.k).collect()
    }
}

fn product<T: Scalar>(factors: &[GrassPoint<T>], n: usize) -> DMatrix<T> {
    factors.iter().fold(DMatrix::<T>::identity(n, n), |acc, f| acc * &f.m)
}

/// `sym(Q M Qᴴ)`, wrapped as a point whose `k` is read off the trace of `M`.
fn conjugated_point<T: Scalar>(q: &DMatrix<T>, middle: &DMatrix<T>) -> GrassPoint<T> {
    let n = q.nrows();
    let m = q * middle * q.adjoint();
    let m = (&m + m.adjoint()) * T::from_real(0.5);
    let trace = middle.trace().real();
    let k = ((n as f64 + trace) / 2.0).round() as usize;
    GrassPoint { n, k, m }
}

fn permute_columns<T: Scalar>(q: &DMatrix<T>, cols: &[usize]) -> DMatrix<T> {
    DMatrix::from_fn(q.nrows(), cols.len(), |r, c| q[(r, cols[c])])
}

// ---------------------------------------------------------------- SO(n)

fn reflection_pair(theta: f64) -> (RealMatrix, RealMatrix) {
    let (s, c) = theta.sin_cos();
    (
        RealMatrix::from_row_slice(2, 2, &[c, -s, -s, -c]),
        RealMatrix::from_row_slice(2, 2, &[c, s, s, -c]),
    )
}

/// Two-factor split of an orthogonal matrix from its real Schur form.
/// `tail` is the trailing 1×1 block `(R, S, T)` for odd `n`.
fn so_factors(
    z: &RealMatrix,
    form: &SchurForm,
    tail: Option<(i8, f64, f64)>,
    tol: f64,
) -> Result<Factorization<f64>> {
    let n = z.nrows();
    let mut cols = Vec::with_capacity(n);
    let mut thetas = Vec::new();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    let mut i = 0;
    for b in &form.blocks {
        match *b {
            SchurBlock::Rotation(theta) => {
                thetas.push(theta);
                cols.extend([i, i + 1]);
            }
            SchurBlock::Sign(1) => plus.push(i),
            SchurBlock::Sign(_) => minus.push(i),
        }
        i += b.size();
    }
    let tail_col = match tail {
        Some((1, _, _)) => plus.pop(),
        Some(_) => minus.pop(),
        None => None,
    };
    if plus.len() % 2 != 0 || minus.len() % 2 != 0 || (tail.is_some() && tail_col.is_none()) {
        return Err(Error::ConvergenceFailure);
    }
    for pair in plus.chunks(2) {
        thetas.push(0.0);
        cols.extend_from_slice(pair);
    }
    for pair in minus.chunks(2) {
        thetas.push(PI / 2.0);
        cols.extend_from_slice(pair);
    }
    cols.extend(tail_col);

    let mut s_mid = RealMatrix::zeros(n, n);
    let mut t_mid = RealMatrix::zeros(n, n);
    for (j, &theta) in thetas.iter().enumerate() {
        let (s, t) = reflection_pair(theta);
        s_mid.view_mut((2 * j, 2 * j), (2, 2)).copy_from(&s);
        t_mid.view_mut((2 * j, 2 * j), (2, 2)).copy_from(&t);
    }
    if let Some((_, s, t)) = tail {
        s_mid[(n - 1, n - 1)] = s;
        t_mid[(n - 1, n - 1)] = t;
    }
    let q = permute_columns(&form.q, &cols);
    let factors = vec![conjugated_point(&q, &s_mid), conjugated_point(&q, &t_mid)];
    Factorization::new(z.clone(), factors, tol)
}

fn check_square<T: Scalar>(z: &DMatrix<T>) -> Result<usize> {
    if z.nrows() != z.ncols() || z.nrows() == 0 {
        return Err(Error::BadDimensions(format!("{}x{} is not square", z.nrows(), z.ncols())));
    }
    Ok(z.nrows())
}

/// `Z = X₁X₂` with `X₁, X₂ ∈ Gr(⌊n/2⌋, ℝⁿ)` for `Z ∈ SO(n)`.
pub fn decompose_so(z: &RealMatrix, tol: f64) -> Result<Factorization<f64>> {
    let n = check_square(z)?;
    let form = backend::schur_orthogonal(z, tol)?;
    if form.sign_count(-1) % 2 != 0 {
        return Err(Error::NotSpecialOrthogonal);
    }
    let tail = (n % 2 == 1).then_some((1, -1.0, -1.0));
    so_factors(z, &form, tail, tol)
}

/// `Z = X₁X₂` for odd `n` and `det Z = −1`, with `X₁ ∈ Gr((n+1)/2)` and
/// `X₂ ∈ Gr((n−1)/2)`.
pub fn decompose_so_minus(z: &RealMatrix, tol: f64) -> Result<Factorization<f64>> {
    let n = check_square(z)?;
    let form = backend::schur_orthogonal(z, tol)?;
    if form.sign_count(-1) % 2 == 0 {
        return Err(Error::NotAntiSpecial);
    }
    if n % 2 == 0 {
        return Err(Error::Unsupported(
            "two-factor split of det -1 orthogonal matrices needs odd n".into(),
        ));
    }
    so_factors(z, &form, Some((-1, 1.0, -1.0)), tol)
}

// ---------------------------------------------------------------- SU(n)

fn k2() -> ComplexMatrix {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    ComplexMatrix::from_row_slice(2, 2, &[z, o, o, z])
}

/// `[[0, e^{−ia}], [e^{ia}, 0]]`
fn phase_swap(a: f64) -> ComplexMatrix {
    let z = Complex64::new(0.0, 0.0);
    ComplexMatrix::from_row_slice(2, 2, &[z, Complex64::from_polar(1.0, -a), Complex64::from_polar(1.0, a), z])
}

/// Block diagonal matrix from a leading scalar, 2×2 blocks and a trailing scalar.
fn block_diag(n: usize, lead: Option<f64>, blocks: &[ComplexMatrix], trail: Option<f64>) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    let mut i = 0;
    if let Some(v) = lead {
        m[(0, 0)] = Complex64::new(v, 0.0);
        i = 1;
    }
    for b in blocks {
        m.view_mut((i, i), (2, 2)).copy_from(b);
        i += 2;
    }
    if let Some(v) = trail {
        m[(i, i)] = Complex64::new(v, 0.0);
        i += 1;
    }
    debug_assert_eq!(i, n);
    m
}

/// Eigendecomposition of a unitary target whose determinant must be `±1`
/// as given by `det_sign`. Returns the eigenvectors and phases sorted
/// descending with the last phase reset so the phases sum to `0` or `π`.
fn phases_with_det(
    z: &ComplexMatrix,
    det_sign: i8,
    tol: f64,
    wrong_det: Error,
) -> Result<(ComplexMatrix, Vec<f64>)> {
    let n = check_square(z)?;
    let eig = backend::eig_unitary(z, tol)?;
    let total: f64 = eig.phases.iter().sum();
    let det = Complex64::from_polar(1.0, total);
    if (det - det_sign as f64).norm() > 10.0 * tol * n as f64 {
        return Err(wrong_det);
    }
    let mut gamma = eig.phases;
    let base = if det_sign < 0 { PI } else { 0.0 };
    gamma[n - 1] = base - gamma[..n - 1].iter().sum::<f64>();
    Ok((eig.q, gamma))
}

fn prefix_sums(gamma: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(gamma.len() + 1);
    out.push(0.0);
    for g in gamma {
        acc += g;
        out.push(acc);
    }
    out
}

fn su_factors(z: &ComplexMatrix, det_sign: i8, tol: f64) -> Result<Factorization<Complex64>> {
    let wrong = if det_sign > 0 { Error::NotSpecialUnitary } else { Error::NotAntiSpecialUnitary };
    let (q, gamma) = phases_with_det(z, det_sign, tol, wrong)?;
    let n = gamma.len();
    let sums = prefix_sums(&gamma);
    let half = n / 2;
    // α_j = γ₁+…+γ_{2j−1}, β_j = γ₁+…+γ_{2j}
    let alpha: Vec<f64> = (1..=half).map(|j| sums[2 * j - 1]).collect();
    let beta: Vec<f64> = (1..=n.div_ceil(2) - 1).map(|j| sums[2 * j]).collect();
    let swaps = |angles: &[f64]| angles.iter().map(|&a| phase_swap(a)).collect::<Vec<_>>();
    let k2s = |count: usize| vec![k2(); count];
    let minus = det_sign < 0;

    let mids = if n % 2 == 0 {
        [
            block_diag(n, None, &k2s(half), None),
            block_diag(n, None, &swaps(&alpha), None),
            block_diag(n, Some(-1.0), &k2s(half - 1), Some(1.0)),
            block_diag(n, Some(-1.0), &swaps(&beta), Some(if minus { -1.0 } else { 1.0 })),
        ]
    } else {
        [
            block_diag(n, None, &k2s(half), Some(if minus { 1.0 } else { -1.0 })),
            block_diag(n, None, &swaps(&alpha), Some(-1.0)),
            block_diag(n, Some(-1.0), &k2s(half), None),
            block_diag(n, Some(-1.0), &swaps(&beta), None),
        ]
    };
    let factors = mids.iter().map(|m| conjugated_point(&q, m)).collect();
    Factorization::new(z.clone(), factors, tol)
}

/// `Z = X₁X₂X₃X₄` with every `X_i ∈ Gr(⌊n/2⌋, ℂⁿ)` for `Z ∈ SU(n)`.
pub fn decompose_su(z: &ComplexMatrix, tol: f64) -> Result<Factorization<Complex64>> {
    su_factors(z, 1, tol)
}

/// Four-factor split of a unitary matrix with determinant −1. One factor
/// moves to the neighbouring Grassmannian.
pub fn decompose_su_minus(z: &ComplexMatrix, tol: f64) -> Result<Factorization<Complex64>> {
    su_factors(z, -1, tol)
}

// ------------------------------------------------------ signature route

fn diag_phases(entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

fn pair(a: f64) -> [Complex64; 2] {
    [Complex64::from_polar(1.0, a), Complex64::from_polar(1.0, -a)]
}

fn split_and_rotate(
    q: &ComplexMatrix,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    ks: [usize; 4],
    tol: f64,
) -> Result<Vec<GrassPoint<Complex64>>> {
    let (x1, x2) = split_phi2(a, ks[0], ks[1], tol)?;
    let (x3, x4) = split_phi2(b, ks[2], ks[3], tol)?;
    Ok([x1, x2, x3, x4]
        .iter()
        .map(|x| {
            let mut p = conjugated_point(q, &x.m);
            p.k = x.k;
            p
        })
        .collect())
}

/// `Z = X₁X₂X₃X₄` with `X_i ∈ Gr(k_i, ℂⁿ)` for the signatures whose two-factor
/// halves can be taken diagonal in the eigenbasis of `Z`:
/// `(k,k,k,k)`, `(k,k,k,k−1)`, `(k,k,k−1,k−1)` for `n = 2k` and
/// `(k,k,k,k)`, `(k+1,k,k,k)` for `n = 2k+1`. `(k,k,k,k−2)` with `n = 2k ≥ 6`
/// is forwarded to [`decompose_su_kkkk2`].
pub fn decompose_su_signature(
    z: &ComplexMatrix,
    ks: [usize; 4],
    tol: f64,
) -> Result<Factorization<Complex64>> {
    let n = check_square(z)?;
    let k = n / 2;
    let bad = || Error::BadSignature(format!("{ks:?} in dimension {n}"));
    if n < 2 {
        return Err(bad());
    }
    if n % 2 == 0 && ks == [k, k, k, k.wrapping_sub(2)] && k >= 3 {
        return decompose_su_kkkk2(z, tol);
    }
    let admissible = if n % 2 == 0 {
        ks[0] == k && ks[1] == k && [(k, k), (k, k - 1), (k - 1, k - 1)].contains(&(ks[2], ks[3]))
    } else {
        (ks[0] == k || ks[0] == k + 1) && ks[1..].iter().all(|&x| x == k)
    };
    if !admissible {
        return Err(bad());
    }
    let odd_sum = ks.iter().sum::<usize>() % 2 == 1;
    let det_sign = if odd_sum { -1 } else { 1 };
    let (q, gamma) = phases_with_det(z, det_sign, tol, Error::DeterminantMismatch)?;
    let sums = prefix_sums(&gamma);
    let one = Complex64::new(1.0, 0.0);
    let sign = |d: usize| if d.is_multiple_of(2) { one } else { -one };

    let mut a = Vec::with_capacity(n);
    let mut b = vec![one];
    for j in 1..=k {
        a.extend(pair(sums[2 * j - 1]));
    }
    let beta_count = if n % 2 == 0 { k - 1 } else { k };
    for j in 1..=beta_count {
        b.extend(pair(sums[2 * j]));
    }
    if n % 2 == 0 {
        b.push(sign(ks[2] - ks[3]));
    } else {
        a.push(sign(ks[0] - ks[1]));
    }
    let factors = split_and_rotate(&q, &diag_phases(&a), &diag_phases(&b), ks, tol)?;
    Factorization::new(z.clone(), factors, tol)
}

// ------------------------------------------------------ phase system

/// Solution of `e^{iθ_{τ(1)}}x − e^{iθ_{τ(2)}}(1−x) = e^{−iθ_{τ(3)}}(2y−1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSolution {
    /// `tau[s]` is the 0-based index of the angle placed in slot `s`.
    pub tau: [usize; 4],
    pub x: f64,
    pub y: f64,
}

fn phase_equation_residual(a: f64, b: f64, c: f64, x: f64, y: f64) -> f64 {
    let lhs = Complex64::from_polar(x, a) - Complex64::from_polar(1.0 - x, b);
    let rhs = Complex64::from_polar(2.0 * y - 1.0, -c);
    (lhs - rhs).norm()
}

/// Residual of a candidate solution against the angles it was computed for.
pub fn phase_residual(theta: [f64; 4], sol: &PhaseSolution) -> f64 {
    let t = sol.tau;
    phase_equation_residual(theta[t[0]], theta[t[1]], theta[t[2]], sol.x, sol.y)
}

/// The left side traces the chord from `−e^{ib}` to `e^{ia}` as `x` runs over
/// `[0, 1]`; the right side is the diameter along `e^{−ic}`. Their crossing
/// gives `x`, and the chord lies inside the unit disk so `y ∈ [0, 1]`.
fn solve_fixed(a: f64, b: f64, c: f64) -> Option<(f64, f64)> {
    const SLACK: f64 = 1e-12;
    let offset = -(b + c).sin();
    let slope = (a + c).sin() + (b + c).sin();
    let x = if slope.abs() > 1e-14 {
        let x = -offset / slope;
        if !(-SLACK..=1.0 + SLACK).contains(&x) {
            return None;
        }
        x.clamp(0.0, 1.0)
    } else if offset.abs() <= SLACK {
        1.0
    } else {
        return None;
    };
    let w = Complex64::from_polar(x, a) - Complex64::from_polar(1.0 - x, b);
    let along = (w * Complex64::from_polar(1.0, c)).re;
    let y = ((along + 1.0) / 2.0).clamp(0.0, 1.0);
    (phase_equation_residual(a, b, c, x, y) <= 1e-9).then_some((x, y))
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    if distinct {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Finds a slot assignment `τ` and `(x, y) ∈ [0,1]²` solving the phase
/// equation for zero-sum angles. Assignments fixing the third slot come
/// first, in lexicographic order.
pub fn solve_phase_system(theta: [f64; 4]) -> Result<PhaseSolution> {
    let total: f64 = theta.iter().sum();
    if total.abs() > 1e-9 || theta.iter().any(|t| !t.is_finite()) {
        return Err(Error::PhaseSumNonzero(total));
    }
    let (fixed, rest): (Vec<_>, Vec<_>) = permutations4().into_iter().partition(|p| p[2] == 2);
    for tau in fixed.into_iter().chain(rest) {
        if let Some((x, y)) = solve_fixed(theta[tau[0]], theta[tau[1]], theta[tau[2]]) {
            return Ok(PhaseSolution { tau, x, y });
        }
    }
    Err(Error::NoSolutionFound)
}

// ------------------------------------------------------ Φ(k,k,k,k−2)

/// The two structured halves `C = A·B` for the phases `gamma` of a diagonal
/// `C ∈ SU(2k)`, with `A ∈ Φ(k,k)` and `B ∈ Φ(k,k−2)`. The last three phases
/// play the roles of the lone angles; everything before them is summed.
/// `y` is `|x_B|²` from the phase equation.
fn kkkk2_halves(gamma: &[f64], y: f64) -> (ComplexMatrix, ComplexMatrix) {
    let n = gamma.len();
    let k = n / 2;
    let one = Complex64::new(1.0, 0.0);
    let e = |t: f64| Complex64::from_polar(1.0, t);
    // 1-based tail sums Σ_{i=from}^{2k−3} γ_i
    let tail_sum = |from: usize| gamma[from - 1..2 * k - 3].iter().sum::<f64>();
    let alpha = |j: usize| tail_sum(2 * j + 1);
    let beta = |j: usize| tail_sum(2 * j);
    let head = tail_sum(1);
    let lone = gamma[2 * k - 3] + PI;
    let (p3, p4) = (gamma[2 * k - 2], gamma[2 * k - 1]);

    let mut a = ComplexMatrix::zeros(n, n);
    let mut b = ComplexMatrix::zeros(n, n);
    let mut a_diag = vec![e(head)];
    for j in 1..=k - 3 {
        a_diag.extend([e(-alpha(j)), e(alpha(j))]);
    }
    a_diag.extend([e(-alpha(k - 2)), e(alpha(k - 2)), e(lone)]);
    let mut b_diag = Vec::with_capacity(n - 2);
    for j in 1..=k - 2 {
        b_diag.extend([e(-beta(j)), e(beta(j))]);
    }
    b_diag.extend([one, -one]);
    for (i, v) in a_diag.iter().enumerate() {
        a[(i, i)] = *v;
    }
    for (i, v) in b_diag.iter().enumerate() {
        b[(i, i)] = *v;
    }

    // Lower 2×2 blocks: the reflection N = V_B diag(1,−1) V_Bᴴ with
    // V_B = [[√y, √(1−y)], [−√(1−y), √y]], and M = D·N, which is unitarily
    // similar to diag(e^{−iα_{k−1}}, e^{−iα_k}) whenever (x, y) solves the
    // phase equation.
    let off = -2.0 * (y * (1.0 - y)).sqrt();
    let refl = ComplexMatrix::from_row_slice(
        2,
        2,
        &[(2.0 * y - 1.0).into(), off.into(), off.into(), (1.0 - 2.0 * y).into()],
    );
    let d = ComplexMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[e(p3), e(p4)]));
    a.view_mut((n - 2, n - 2), (2, 2)).copy_from(&(d * &refl));
    b.view_mut((n - 2, n - 2), (2, 2)).copy_from(&refl);
    (a, b)
}

/// Picks three phases for the lone slots so the phase equation is solvable
/// with the identity slot assignment. Ordered triples are tried
/// lexicographically; the remaining phases keep their order.
fn kkkk2_ordering(gamma: &[f64]) -> Option<(Vec<usize>, f64)> {
    let n = gamma.len();
    let total: f64 = gamma.iter().sum();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                let head = total - gamma[a] - gamma[b] - gamma[c];
                if let Some((_, y)) = solve_fixed(head, gamma[a], gamma[b]) {
                    let mut order: Vec<usize> = (0..n).filter(|i| ![a, b, c].contains(i)).collect();
                    order.extend([a, b, c]);
                    return Some((order, y));
                }
            }
        }
    }
    None
}

/// `Z = X₁X₂X₃X₄` with `X₁, X₂, X₃ ∈ Gr(k, ℂ^{2k})` and `X₄ ∈ Gr(k−2, ℂ^{2k})`
/// for `Z ∈ SU(2k)`, `k ≥ 3`.
pub fn decompose_su_kkkk2(z: &ComplexMatrix, tol: f64) -> Result<Factorization<Complex64>> {
    let n = check_square(z)?;
    if n % 2 != 0 || n < 6 {
        return Err(Error::BadDimensions(format!("need n = 2k with k >= 3, got n = {n}")));
    }
    let k = n / 2;
    let (q, gamma) = phases_with_det(z, 1, tol, Error::NotSpecialUnitary)?;
    let (order, y) = kkkk2_ordering(&gamma).ok_or_else(|| {
        Error::Unsupported("no ordering of the eigenphases admits the Φ(k,k,k,k-2) split".into())
    })?;
    let permuted: Vec<f64> = order.iter().map(|&i| gamma[i]).collect();
    let (a, b) = kkkk2_halves(&permuted, y);
    let q = permute_columns(&q, &order);
    let factors = split_and_rotate(&q, &a, &b, [k, k, k, k - 2], tol)?;
    Factorization::new(z.clone(), factors, tol)
}
