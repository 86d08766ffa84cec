use std::path::PathBuf;

use bellcopies::bell::{Permutation, Representation};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "bellcopies",
    version,
    about = "Entanglement of n copies of an equal Bell mixture: exact values, LOCC simulation, separability checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    /// Override the tolerance of every quantitative check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Include wall-clock time in the result (breaks byte-identical reruns).
    #[arg(long, global = true)]
    #[serde(skip)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Structured,
}

impl From<Method> for Representation {
    fn from(m: Method) -> Self {
        match m {
            Method::Dense => Representation::Dense,
            Method::Structured => Representation::Structured,
        }
    }
}

impl Method {
    pub fn default_tolerance(self) -> f64 {
        match self {
            Method::Dense => 1e-8,
            Method::Structured => 1e-12,
        }
    }
}

/// Closed-form relative-entropy checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerifyTarget {
    /// S(rho_2m || rho_2^(x)m) = 2m-2
    #[value(alias = "eq5")]
    EvenCopies,
    /// S(rho_(2m+1)^(x)2 || rho_2^(x)(2m+1)) against 4m-2, halved against n-2
    #[value(alias = "eq10")]
    OddDoubled,
    /// S(rho_n^(x)2 || rho_2^(x)n) = 2n-4
    ErPair,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExploreTarget {
    /// Separable-state search for the relative entropy of entanglement.
    Er,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Compare a computed relative entropy with its closed form.
    Verify {
        #[arg(value_enum)]
        target: VerifyTarget,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: Option<u64>,
        #[arg(long, value_enum, default_value_t = Method::Structured)]
        method: Method,
    },
    /// Run the distillation protocol (n >= 3) or report the zero-yield evidence (n = 1, 2).
    Distill {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=10))]
        n: u64,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the two-copy Bell discrimination protocol on random Bell pairs.
    Discriminate {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Separability evidence for one or two copies.
    Separability {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=2))]
        n: u64,
    },
    /// Realize all 24 Bell-basis permutations with local unitaries.
    Permutations,
    /// Exploratory numerics; never fails on the value found.
    Explore {
        #[arg(value_enum)]
        target: ExploreTarget,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..=6))]
        n: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        restarts: u64,
        /// Objective evaluations per restart (default depends on n).
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: Option<u64>,
        /// Product terms in the separable ansatz.
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        terms: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Undo per-copy Bell relabelings with local unitaries.
    SigmaEquiv {
        /// Comma-separated one-line permutations, one per copy, e.g. 2134,3412,1234.
        #[arg(long, value_delimiter = ',', required = true)]
        perms: Vec<Permutation>,
        #[arg(long, value_enum, default_value_t = Method::Dense)]
        method: Method,
    },
}
