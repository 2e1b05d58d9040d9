//! Argument parsing.

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::read_config;
use crate::error::CliResult;
use crate::spec::{ExperimentSpec, Kind};

#[derive(Debug, Parser)]
#[command(name = "chebias", version, about = "Prime race and bias experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalized race sums over residue classes modulo q.
    DirichletBias(Experiment),
    /// Partial Euler products of a Dirichlet L-function at the central point.
    EulerProduct(Experiment),
    /// Split versus inert primes in a quadratic field.
    SplitBias(Experiment),
    /// Primes represented by the principal form versus the other classes.
    ClassBias(Experiment),
    /// Degree-ordered races among residue classes of F_q[T].
    FfBias(Experiment),
    /// Partial Euler products of a function-field L-function.
    FfEuler(Experiment),
    /// Sums of normalized Ramanujan tau values over primes.
    TauBias(Experiment),
    /// Races between groups of residue classes, with logarithmic densities.
    Density(Experiment),
    /// Runs built-in checks and prints one JSON line per check.
    Verify {
        /// Checks to run; all when omitted.
        checks: Vec<String>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Experiment {
    /// Key = value file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub limit: Option<String>,
    #[arg(long)]
    pub x_min: Option<String>,
    #[arg(long)]
    pub grid_ratio: Option<String>,
    #[arg(long)]
    pub threads: Option<String>,
    #[arg(long)]
    pub segment_size: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// Continue from the saved state in the output directory.
    #[arg(long)]
    pub resume: bool,
    #[arg(long)]
    pub q: Option<String>,
    /// Comma-separated residues.
    #[arg(long)]
    pub classes: Option<String>,
    /// Two residues `a,b`.
    #[arg(long)]
    pub pair: Option<String>,
    /// Character label `q:e1,e2,..` or a fundamental discriminant; an index
    /// for function-field runs.
    #[arg(long, allow_hyphen_values = true)]
    pub character: Option<String>,
    /// Fundamental discriminant.
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Coefficients from the constant term up, comma-separated.
    #[arg(long)]
    pub modulus: Option<String>,
    #[arg(long)]
    pub n_max: Option<String>,
    #[arg(long)]
    pub tau_cache: Option<String>,
    /// Groups of residues, e.g. `1,6;2,5;3,4`.
    #[arg(long)]
    pub groups: Option<String>,
}

impl Experiment {
    fn flags(&self) -> Vec<(&'static str, Option<String>)> {
        vec![
            ("limit", self.limit.clone()),
            ("x-min", self.x_min.clone()),
            ("grid-ratio", self.grid_ratio.clone()),
            ("threads", self.threads.clone()),
            ("segment-size", self.segment_size.clone()),
            ("out", self.out.clone()),
            ("resume", self.resume.then(|| "true".to_string())),
            ("q", self.q.clone()),
            ("classes", self.classes.clone()),
            ("pair", self.pair.clone()),
            ("character", self.character.clone()),
            ("d", self.d.clone()),
            ("modulus", self.modulus.clone()),
            ("n-max", self.n_max.clone()),
            ("tau-cache", self.tau_cache.clone()),
            ("groups", self.groups.clone()),
        ]
    }

    pub fn spec(&self, kind: Kind) -> CliResult<ExperimentSpec> {
        let config = match &self.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        ExperimentSpec::new(kind, config, self.flags())
    }
}

impl Command {
    /// The experiment kind and its flags; `None` for `verify`.
    pub fn experiment(&self) -> Option<(Kind, &Experiment)> {
        Some(match self {
            Command::DirichletBias(e) => (Kind::DirichletBias, e),
            Command::EulerProduct(e) => (Kind::EulerProduct, e),
            Command::SplitBias(e) => (Kind::SplitBias, e),
            Command::ClassBias(e) => (Kind::ClassBias, e),
            Command::FfBias(e) => (Kind::FfBias, e),
            Command::FfEuler(e) => (Kind::FfEuler, e),
            Command::TauBias(e) => (Kind::TauBias, e),
            Command::Density(e) => (Kind::Density, e),
            Command::Verify { .. } => return None,
        })
    }
}
