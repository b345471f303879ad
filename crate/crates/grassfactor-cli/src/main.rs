mod commands;
mod document;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "grassfactor", version, about = "Factor matrix groups into products of Grassmannian involutions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct Tolerance {
    /// Absolute tolerance, scaled by n where a check is size dependent
    #[arg(long, env = "GRASSFACTOR_TOL", default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Group {
    So,
    #[value(name = "so-")]
    SoMinus,
    Su,
    #[value(name = "su-")]
    SuMinus,
    SuSig,
    SuKkkk2,
    Sp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Gr,
    Grsp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldArg {
    Real,
    Complex,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleKind {
    /// Grassmannian point with k = --k
    Gr,
    /// Symplectic Grassmannian point of half-rank --k in dimension 2n
    Grsp,
    /// Haar orthogonal or unitary matrix
    Haar,
    /// Haar sample with determinant +1
    Special,
    /// Haar sample with determinant -1
    Antispecial,
    /// exp(J S) for random symmetric S, size 2n
    Sp,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbedMap {
    /// Realification of a complex Grassmannian point
    Psi1,
    /// Symplectic Grassmannian point to its projector involution
    Psi2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factor a group element into Grassmannian points
    Decompose {
        #[arg(long, value_enum)]
        group: Group,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        tol: Tolerance,
        /// Accepted for interface stability; every construction is deterministic
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// k1,k2,k3,k4 (su-sig only)
        #[arg(long, value_delimiter = ',', num_args = 4)]
        signature: Option<Vec<usize>>,
    },
    /// Check that a matrix is a (symplectic) Grassmannian point
    Verify {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Decide membership in Gr(k)·Gr(k')
    Member {
        #[arg(long, value_enum)]
        field: FieldArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kprime: usize,
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Dimension of Gr(k)·Gr(k') in dimension n
    Dim {
        #[arg(long, value_enum)]
        field: FieldArg,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        kprime: usize,
        #[arg(long)]
        n: usize,
    },
    /// Reflection length of an orthogonal or unitary matrix with det ±1
    Length {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        tol: Tolerance,
    },
    /// Draw a random matrix
    Sample {
        #[arg(long, value_enum)]
        kind: SampleKind,
        #[arg(long, value_enum, default_value = "real")]
        field: FieldArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Map a Grassmannian point through one of the embeddings
    Embed {
        #[arg(long, value_enum, default_value = "psi1")]
        map: EmbedMap,
        #[arg(long)]
        k: usize,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Decompose { group, input, tol, seed: _, signature } => {
            commands::decompose(group, &input, tol.tol, signature.as_deref())
        }
        Command::Verify { model, k, input, tol } => commands::verify(model, k, &input, tol.tol),
        Command::Member { field, k, kprime, input, tol } => commands::member(field, k, kprime, &input, tol.tol),
        Command::Dim { field, k, kprime, n } => commands::dim(field, k, kprime, n),
        Command::Length { input, tol } => commands::length(&input, tol.tol),
        Command::Sample { kind, field, n, k, seed } => commands::sample(kind, field, n, k, seed),
        Command::Embed { map, k, input } => commands::embed(map, k, &input),
    };
    match outcome {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
