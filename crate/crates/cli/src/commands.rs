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

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use slrcov::datagen::{derive_seed, sample_covariance, sample_gaussian};
use slrcov::experiment::{
    run_experiment, run_rate, synthetic_rate, ExperimentSpec, PopulationModel, RateOutcome,
    RateSpec,
};
use slrcov::io::{read_matrix_csv, write_matrix_csv, write_samples_csv, write_table};
use slrcov::linalg::{approximate_rank, DEFAULT_RANK_GAMMA};
use slrcov::metrics::{fpr_tpr, frobenius_error, sparsity, RateFit};
use slrcov::solver::{solve, InitMode, KktResiduals, SolverConfig};
use slrcov::SymMatrix;

use crate::args::{
    EvalArgs, ExperimentArgs, FitArgs, GenArgs, InitKind, ModelKind, Params, RateArgs, SampleSizes,
};
use crate::error::{CliError, CliResult};

const DEFAULT_N: usize = 50;
const DEFAULT_REPS: usize = 100;

/// Merges the flags with the --config file, if any.
pub fn resolve(params: Params) -> CliResult<Params> {
    let Some(path) = params.config.clone() else {
        return Ok(params);
    };
    let text = fs::read_to_string(&path).map_err(|source| CliError::Io {
        path: path.clone(),
        source,
    })?;
    let file: Params =
        serde_json::from_str(&text).map_err(|source| CliError::Config { path, source })?;
    Ok(params.or(file))
}

fn required<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

fn model(params: &Params) -> CliResult<PopulationModel> {
    let p = required(params.p, "p")?;
    match required(params.model, "model")? {
        ModelKind::Block => {
            let k = required(params.k, "k")?;
            if k > p {
                return Err(CliError::Usage(format!("k exceeds p ({k} > {p})")));
            }
            Ok(PopulationModel::Block { p, k })
        }
        ModelKind::Banded => Ok(PopulationModel::Banded { p }),
    }
}

fn solver_config(params: &Params) -> CliResult<SolverConfig> {
    let mut config = SolverConfig::new(
        required(params.lambda, "lambda")?,
        required(params.tau, "tau")?,
    );
    if let Some(mu) = params.mu {
        config = config.with_mu(mu);
    }
    if let Some(tol) = params.tol {
        config = config.with_tol(tol);
    }
    if let Some(max_iter) = params.max_iter {
        config = config.with_max_iter(max_iter);
    }
    if params.init == Some(InitKind::Soft) {
        config = config.with_init(InitMode::SoftThreshold);
    }
    if params.trace {
        config = config.with_trace();
    }
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(config)
}

fn single_n(flag: Option<usize>, params: &Params) -> CliResult<Option<usize>> {
    match (flag, &params.n) {
        (Some(n), _) => Ok(Some(n)),
        (None, Some(SampleSizes::One(n))) => Ok(Some(*n)),
        (None, None) => Ok(None),
        (None, Some(SampleSizes::Many(_))) => {
            Err(CliError::Usage("--n takes a single value here".into()))
        }
    }
}

fn out_dir(params: &Params) -> CliResult<PathBuf> {
    let dir = params.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(|source| CliError::Io {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

/// Runs `write` against a fresh file, naming the path in any I/O error.
fn write_file(
    path: &Path,
    write: impl FnOnce(&mut BufWriter<File>) -> slrcov::Result<()>,
) -> CliResult<()> {
    let mut file = create(path)?;
    let io_error = |source: std::io::Error| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    match write(&mut file) {
        Ok(()) => file.flush().map_err(io_error),
        Err(slrcov::Error::Io(source)) => Err(io_error(source)),
        Err(other) => Err(CliError::Core(other)),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult<()> {
    let mut file = create(path)?;
    serde_json::to_writer_pretty(&mut file, value)
        .map_err(std::io::Error::from)
        .and_then(|()| writeln!(file))
        .and_then(|()| file.flush())
        .map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn read_matrix(path: &Path) -> CliResult<SymMatrix> {
    let file = File::open(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_matrix_csv(BufReader::new(file)).map_err(|source| match source {
        slrcov::Error::Io(source) => CliError::Io {
            path: path.to_path_buf(),
            source,
        },
        source => CliError::Input {
            path: path.to_path_buf(),
            source,
        },
    })
}

pub fn gen(args: GenArgs) -> CliResult<()> {
    let params = resolve(args.params)?;
    let n = single_n(args.n, &params)?;
    let model = model(&params)?;
    let seed = params.seed.unwrap_or(0);
    let truth = model.generate(seed)?;
    let dir = out_dir(&params)?;
    write_file(&dir.join("sigma0.csv"), |w| write_matrix_csv(w, &truth))?;
    if let Some(n) = n {
        if n < 2 {
            return Err(CliError::Usage(format!("n must be at least 2, got {n}")));
        }
        let samples = sample_gaussian(&truth, n, derive_seed(seed, 1))?;
        write_file(&dir.join("samples.csv"), |w| write_samples_csv(w, &samples))?;
        let cov = sample_covariance(&samples)?;
        write_file(&dir.join("sample_cov.csv"), |w| write_matrix_csv(w, &cov))?;
    }
    println!(
        "sp_true={} ar_true={}",
        sparsity(&truth, 0.0),
        approximate_rank(&truth, DEFAULT_RANK_GAMMA)?
    );
    Ok(())
}

#[derive(Serialize)]
struct FitRecord {
    p: usize,
    lambda: f64,
    tau: f64,
    mu: f64,
    tol: f64,
    max_iter: usize,
    init: &'static str,
    iterations: usize,
    converged: bool,
    residual_gamma: f64,
    residual_sigma: f64,
    primal_gap: f64,
    kkt: KktResiduals,
    objective: f64,
    sp_est: f64,
    ar_est: usize,
    wall_seconds: f64,
}

pub fn fit(args: FitArgs) -> CliResult<()> {
    let params = resolve(args.params)?;
    let config = solver_config(&params)?;
    let sample_cov = read_matrix(&args.input)?;
    let dir = out_dir(&params)?;
    let result = solve(&sample_cov, &config)?;
    write_file(&dir.join("estimate.csv"), |w| {
        write_matrix_csv(w, &result.estimate)
    })?;
    write_file(&dir.join("sparse_estimate.csv"), |w| {
        write_matrix_csv(w, &result.sparse_estimate)
    })?;
    if let Some(trace) = &result.trace {
        write_file(&dir.join("trace.csv"), |w| write_table(w, trace))?;
    }
    let record = FitRecord {
        p: sample_cov.dim(),
        lambda: config.lambda,
        tau: config.tau,
        mu: config.mu,
        tol: config.tol,
        max_iter: config.max_iter,
        init: if config.init_mode == InitMode::SoftThreshold {
            "soft"
        } else {
            "zero"
        },
        iterations: result.iterations,
        converged: result.converged,
        residual_gamma: result.final_residuals.0,
        residual_sigma: result.final_residuals.1,
        primal_gap: result.primal_gap,
        kkt: result.kkt_residuals,
        objective: result.objective,
        sp_est: sparsity(&result.sparse_estimate, 0.0),
        ar_est: approximate_rank(&result.estimate, DEFAULT_RANK_GAMMA)?,
        wall_seconds: result.wall_seconds,
    };
    write_json(&dir.join("result.json"), &record)?;
    println!(
        "converged={} iterations={} objective={}",
        record.converged, record.iterations, record.objective
    );
    Ok(())
}

#[derive(Serialize)]
struct EvalRecord {
    frob_error: f64,
    sp_true: f64,
    sp_est: f64,
    ar_true: usize,
    ar_est: usize,
    fpr: f64,
    tpr: f64,
    fpr_undefined: bool,
    tpr_undefined: bool,
    conventional_fpr: f64,
    conventional_tpr: f64,
}

pub fn eval(args: EvalArgs) -> CliResult<()> {
    let params = resolve(args.params)?;
    if !(args.zero_tol >= 0.0) {
        return Err(CliError::Usage(format!(
            "--zero-tol must be non-negative, got {}",
            args.zero_tol
        )));
    }
    let truth = read_matrix(&args.truth)?;
    let estimate = read_matrix(&args.estimate)?;
    let rates = fpr_tpr(&truth, &estimate, args.zero_tol)?;
    let record = EvalRecord {
        frob_error: frobenius_error(&truth, &estimate)?,
        sp_true: sparsity(&truth, 0.0),
        sp_est: sparsity(&estimate, args.zero_tol),
        ar_true: approximate_rank(&truth, DEFAULT_RANK_GAMMA)?,
        ar_est: approximate_rank(&estimate, DEFAULT_RANK_GAMMA)?,
        fpr: rates.fpr,
        tpr: rates.tpr,
        fpr_undefined: rates.fpr_undefined,
        tpr_undefined: rates.tpr_undefined,
        conventional_fpr: rates.conventional_fpr,
        conventional_tpr: rates.conventional_tpr,
    };
    if params.out.is_some() {
        write_json(&out_dir(&params)?.join("metrics.json"), &record)?;
    }
    let text = serde_json::to_string_pretty(&record).expect("metrics serialize");
    println!("{text}");
    Ok(())
}

pub fn experiment(args: ExperimentArgs) -> CliResult<()> {
    let params = resolve(args.params)?;
    let spec = ExperimentSpec {
        model: model(&params)?,
        n: single_n(args.n, &params)?.unwrap_or(DEFAULT_N),
        solver: solver_config(&params)?,
        replications: params.reps.unwrap_or(DEFAULT_REPS),
        base_seed: params.seed.unwrap_or(0),
    };
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let dir = out_dir(&params)?;
    let outcome = run_experiment(&spec)?;
    write_file(&dir.join("runs.csv"), |w| write_table(w, &outcome.runs))?;
    write_file(&dir.join("summary.csv"), |w| {
        write_table(w, &[outcome.summary])
    })?;
    let s = outcome.summary;
    println!(
        "p={} ar_true={} ar_est={} sp_true={} sp_est={} fpr={} tpr={} time_s={} converged={}/{}",
        s.p,
        s.ar_true,
        s.ar_est,
        s.sp_true,
        s.sp_est,
        s.fpr,
        s.tpr,
        s.time_s,
        outcome.converged_runs(),
        outcome.runs.len()
    );
    Ok(())
}

pub fn rate(args: RateArgs) -> CliResult<()> {
    let params = resolve(args.params)?;
    let sizes = match (args.n.is_empty(), &params.n) {
        (false, _) => args.n.clone(),
        (true, Some(SampleSizes::Many(v))) => v.clone(),
        (true, Some(SampleSizes::One(n))) => vec![*n],
        (true, None) => Vec::new(),
    };
    if sizes.len() < 3 {
        return Err(CliError::Usage(format!(
            "rate needs at least 3 sample sizes in --n, got {}",
            sizes.len()
        )));
    }
    let outcome: RateOutcome = if args.synthetic {
        synthetic_rate(&sizes, 1.0).map_err(|e| CliError::Usage(e.to_string()))?
    } else {
        let spec = RateSpec {
            model: model(&params)?,
            sample_sizes: sizes,
            solver: solver_config(&params)?,
            replications: params.reps.unwrap_or(DEFAULT_REPS),
            base_seed: params.seed.unwrap_or(0),
            penalty_reference_n: args.reference_n,
        };
        if spec.replications == 0 {
            return Err(CliError::Usage("replications must be at least 1".into()));
        }
        run_rate(&spec).map_err(|e| match e {
            slrcov::Error::InvalidArgument(msg) => CliError::Usage(msg),
            other => CliError::Core(other),
        })?
    };
    let dir = out_dir(&params)?;
    write_file(&dir.join("rate.csv"), |w| write_table(w, &outcome.points))?;
    let RateFit { slope, intercept } = outcome.fit;
    write_json(&dir.join("rate_fit.json"), &outcome.fit)?;
    println!("slope={slope} intercept={intercept}");
    Ok(())
}
