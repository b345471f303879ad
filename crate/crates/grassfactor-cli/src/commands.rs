use crate::document::{to_json, AnyMatrix, FactorDocument, FactorizationDocument, MatrixDocument};
use crate::{EmbedMap, FieldArg, Group, Model, SampleKind};
use grassfactor::backend::{det_c64, haar, haar_special, rng_from_seed};
use grassfactor::decompose::{self, Factorization};
use grassfactor::grassmann::{gr_sample, gr_validate, GrassPoint};
use grassfactor::phi::{member_phi2, phi_dim, reflection_length};
use grassfactor::symplectic::{self, spgr_validate, SpFactorization, SpGrassPoint};
use grassfactor::{Error, Field, Scalar};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::path::Path;

pub const EXIT_IO: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub code: u8,
}

#[derive(Debug)]
pub struct Failure {
    pub message: String,
    pub code: u8,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: EXIT_IO }
    }

    fn invalid(message: impl Into<String>) -> Self {
        Failure { message: message.into(), code: EXIT_INVALID }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Unsupported(_) | Error::NonGeneric(_) | Error::ConvergenceFailure | Error::NoSolutionFound => {
                EXIT_UNSUPPORTED
            }
            _ => EXIT_INVALID,
        };
        Failure { message: e.to_string(), code }
    }
}

type Outcome = Result<Output, Failure>;

fn ok<S: Serialize>(value: &S) -> Outcome {
    Ok(Output { stdout: to_json(value), code: 0 })
}

fn field_of(f: FieldArg) -> Field {
    match f {
        FieldArg::Real => Field::Real,
        FieldArg::Complex => Field::Complex,
    }
}

fn read_matrix(path: &Path) -> Result<AnyMatrix, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    let doc: MatrixDocument =
        serde_json::from_str(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))?;
    doc.to_matrix().map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn require_real(m: &AnyMatrix, what: &str) -> Result<DMatrix<f64>, Failure> {
    match m {
        AnyMatrix::Real(r) => Ok(r.clone()),
        AnyMatrix::Complex(_) => Err(Failure::invalid(format!("{what} needs a real matrix"))),
    }
}

/// A matrix in the field chosen on the command line; real input is promoted
/// to complex, complex input is rejected for the real field.
fn in_field(m: &AnyMatrix, field: Field) -> Result<AnyMatrix, Failure> {
    match field {
        Field::Real => require_real(m, "the real field").map(AnyMatrix::Real),
        Field::Complex => Ok(AnyMatrix::Complex(m.complex())),
    }
}

fn factor_doc<T: Scalar>(m: &DMatrix<T>, model: &str, k: usize) -> FactorDocument {
    FactorDocument { matrix: MatrixDocument::from_matrix(m), model: model.into(), k }
}

fn gr_document<T: Scalar>(f: &Factorization<T>, group: &str) -> FactorizationDocument {
    FactorizationDocument {
        target: MatrixDocument::from_matrix(&f.target),
        factors: f.factors.iter().map(|x| factor_doc(&x.m, "gr", x.k)).collect(),
        residual: f.residual,
        group: group.into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
    }
}

fn sp_document<T: Scalar>(f: &SpFactorization<T>) -> FactorizationDocument {
    FactorizationDocument {
        target: MatrixDocument::from_matrix(&f.target),
        factors: f.factors.iter().map(|x| factor_doc(&x.m, "grsp", x.k)).collect(),
        residual: f.residual,
        group: "sp".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
    }
}

pub fn decompose(group: Group, input: &Path, tol: f64, signature: Option<&[usize]>) -> Outcome {
    let m = read_matrix(input)?;
    let doc = match group {
        Group::So => gr_document(&decompose::decompose_so(&require_real(&m, "so")?, tol)?, "so"),
        Group::SoMinus => gr_document(&decompose::decompose_so_minus(&require_real(&m, "so-")?, tol)?, "so-"),
        Group::Su => gr_document(&decompose::decompose_su(&m.complex(), tol)?, "su"),
        Group::SuMinus => gr_document(&decompose::decompose_su_minus(&m.complex(), tol)?, "su-"),
        Group::SuKkkk2 => gr_document(&decompose::decompose_su_kkkk2(&m.complex(), tol)?, "su"),
        Group::SuSig => {
            let ks: [usize; 4] = signature
                .and_then(|s| s.try_into().ok())
                .ok_or_else(|| Failure::io("--signature k1,k2,k3,k4 is required for su-sig"))?;
            let z = m.complex();
            let f = decompose::decompose_su_signature(&z, ks, tol)?;
            let label = if det_c64(&z).re < 0.0 { "su-" } else { "su" };
            gr_document(&f, label)
        }
        Group::Sp => sp_document(&symplectic::decompose_sp_four(&m.complex(), tol)?),
    };
    eprintln!("residual {:.3e}", doc.residual);
    ok(&doc)
}

#[derive(Serialize)]
struct GrReport {
    model: &'static str,
    k: usize,
    involution: f64,
    symmetry: f64,
    trace: f64,
    accepted: bool,
}

#[derive(Serialize)]
struct GrSpReport {
    model: &'static str,
    k: usize,
    involution: f64,
    symplectic: f64,
    trace: f64,
    accepted: bool,
}

fn verify_in<T: Scalar>(model: Model, k: usize, m: &DMatrix<T>, tol: f64) -> Outcome {
    let (json, accepted) = match model {
        Model::Gr => {
            let r = gr_validate(m, k, tol);
            let report = GrReport {
                model: "gr",
                k,
                involution: r.involution,
                symmetry: r.symmetry,
                trace: r.trace,
                accepted: r.accepted,
            };
            (to_json(&report), r.accepted)
        }
        Model::Grsp => {
            let r = spgr_validate(m, k, tol);
            let report = GrSpReport {
                model: "grsp",
                k,
                involution: r.involution,
                symplectic: r.symplectic,
                trace: r.trace,
                accepted: r.accepted,
            };
            (to_json(&report), r.accepted)
        }
    };
    Ok(Output { stdout: json, code: if accepted { 0 } else { EXIT_INVALID } })
}

pub fn verify(model: Model, k: usize, input: &Path, tol: f64) -> Outcome {
    match read_matrix(input)? {
        AnyMatrix::Real(m) => verify_in(model, k, &m, tol),
        AnyMatrix::Complex(m) => verify_in(model, k, &m, tol),
    }
}

#[derive(Serialize)]
struct MemberAnswer {
    member: bool,
}

pub fn member(field: FieldArg, k: usize, kprime: usize, input: &Path, tol: f64) -> Outcome {
    let member = match in_field(&read_matrix(input)?, field_of(field))? {
        AnyMatrix::Real(m) => member_phi2(&m, k, kprime, tol)?,
        AnyMatrix::Complex(m) => member_phi2(&m, k, kprime, tol)?,
    };
    ok(&MemberAnswer { member })
}

#[derive(Serialize)]
struct DimAnswer {
    dim: usize,
}

pub fn dim(field: FieldArg, k: usize, kprime: usize, n: usize) -> Outcome {
    ok(&DimAnswer { dim: phi_dim(field_of(field), k, kprime, n)? })
}

#[derive(Serialize)]
struct LengthAnswer {
    length: usize,
}

pub fn length(input: &Path, tol: f64) -> Outcome {
    let length = match read_matrix(input)? {
        AnyMatrix::Real(m) => reflection_length(&m, tol)?,
        AnyMatrix::Complex(m) => reflection_length(&m, tol)?,
    };
    ok(&LengthAnswer { length })
}

fn sample_in<T: Scalar>(kind: SampleKind, n: usize, k: usize, seed: u64) -> Outcome {
    if n == 0 {
        return Err(Error::BadDimensions("n must be positive".into()).into());
    }
    let mut rng = rng_from_seed(seed);
    let m: DMatrix<T> = match kind {
        SampleKind::Gr => gr_sample::<T>(k, n, seed)?.m,
        SampleKind::Grsp => {
            let q = symplectic::sp_sample::<T>(n, seed);
            symplectic::spgr_from_conjugation(&q.m, k, 1e-8)?.m
        }
        SampleKind::Haar => haar::<T, _>(n, &mut rng),
        SampleKind::Special => haar_special::<T, _>(n, &mut rng),
        SampleKind::Antispecial => {
            let mut m = haar_special::<T, _>(n, &mut rng);
            m.column_mut(0).neg_mut();
            m
        }
        SampleKind::Sp => symplectic::sp_sample::<T>(n, seed).m,
    };
    ok(&MatrixDocument::from_matrix(&m))
}

pub fn sample(kind: SampleKind, field: FieldArg, n: usize, k: usize, seed: u64) -> Outcome {
    match field {
        FieldArg::Real => sample_in::<f64>(kind, n, k, seed),
        FieldArg::Complex => sample_in::<Complex64>(kind, n, k, seed),
    }
}

pub fn embed(map: EmbedMap, k: usize, input: &Path) -> Outcome {
    let m = read_matrix(input)?;
    let n = m.complex().nrows();
    let out = match map {
        EmbedMap::Psi1 => {
            let u = GrassPoint { n, k, m: m.complex() };
            MatrixDocument::from_matrix(&symplectic::psi1(&u)?.m)
        }
        EmbedMap::Psi2 => match m {
            AnyMatrix::Real(r) => {
                MatrixDocument::from_matrix(&symplectic::psi2(&SpGrassPoint { n: n / 2, k, m: r })?.m)
            }
            AnyMatrix::Complex(c) => {
                MatrixDocument::from_matrix(&symplectic::psi2(&SpGrassPoint { n: n / 2, k, m: c })?.m)
            }
        },
    };
    ok(&out)
}
