/*
Copyright 2026 The slrcov Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "slrcov",
    version,
    about = "Sparse and low-rank covariance estimation by ADMM"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a population covariance and, with --n, Gaussian samples.
    Gen(GenArgs),
    /// Fit the estimator to a sample covariance CSV.
    Fit(FitArgs),
    /// Compare an estimate with the true covariance.
    Eval(EvalArgs),
    /// Run seeded replications and write per-run and summary tables.
    Experiment(ExperimentArgs),
    /// Mean Frobenius error over a grid of sample sizes, with a log-log fit.
    Rate(RateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Block,
    Banded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Zero,
    Soft,
}

/// Flags shared by every subcommand. Each one may also come from the JSON
/// file given by --config; flags win.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iter: Option<usize>,
    #[arg(long, value_enum)]
    pub init: Option<InitKind>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Record the per-iteration trace (fit only).
    #[arg(long)]
    pub trace: bool,
    /// JSON file with default values for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Sample size(s); only settable from the config file, the subcommands
    /// carry their own --n.
    #[arg(skip)]
    pub n: Option<SampleSizes>,
}

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum SampleSizes {
    One(usize),
    Many(Vec<usize>),
}

impl Params {
    pub fn or(self, file: Params) -> Params {
        Params {
            model: self.model.or(file.model),
            p: self.p.or(file.p),
            k: self.k.or(file.k),
            lambda: self.lambda.or(file.lambda),
            tau: self.tau.or(file.tau),
            mu: self.mu.or(file.mu),
            tol: self.tol.or(file.tol),
            max_iter: self.max_iter.or(file.max_iter),
            init: self.init.or(file.init),
            reps: self.reps.or(file.reps),
            seed: self.seed.or(file.seed),
            out: self.out.or(file.out),
            trace: self.trace || file.trace,
            config: self.config,
            n: self.n.or(file.n),
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub params: Params,
    /// Also draw this many samples and write their covariance.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub params: Params,
    /// Sample covariance, headerless CSV.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub params: Params,
    /// True covariance, headerless CSV.
    #[arg(long)]
    pub truth: PathBuf,
    /// Estimate, headerless CSV.
    #[arg(long)]
    pub estimate: PathBuf,
    /// Entries with magnitude at or below this count as zero.
    #[arg(long, default_value_t = 0.0)]
    pub zero_tol: f64,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub params: Params,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RateArgs {
    #[command(flatten)]
    pub params: Params,
    /// Comma-separated sample sizes, at least three.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub n: Vec<usize>,
    /// Treat --lambda and --tau as the values at this sample size and
    /// scale them by `√(n₀/n)` at each n.
    #[arg(long)]
    pub reference_n: Option<usize>,
    /// Replace the Monte-Carlo errors by exact `1/√n` values.
    #[arg(long, hide = true)]
    pub synthetic: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let flags = Params {
            p: Some(10),
            trace: false,
            ..Params::default()
        };
        let file: Params = serde_json::from_str(
            r#"{"p": 4, "k": 2, "model": "banded", "trace": true, "n": [1, 2, 3]}"#,
        )
        .unwrap();
        let merged = flags.or(file);
        assert_eq!(merged.p, Some(10));
        assert_eq!(merged.k, Some(2));
        assert_eq!(merged.model, Some(ModelKind::Banded));
        assert!(merged.trace);
        assert_eq!(merged.n, Some(SampleSizes::Many(vec![1, 2, 3])));
    }

    #[test]
    fn config_rejects_unknown_keys() {
        assert!(serde_json::from_str::<Params>(r#"{"lamda": 1.0}"#).is_err());
        assert!(serde_json::from_str::<Params>(r#"{"init": "warm"}"#).is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
