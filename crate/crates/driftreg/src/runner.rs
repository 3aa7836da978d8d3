//! Runs single experiments and whole matrices.

use std::path::{Path, PathBuf};
use std::time::Instant;

use driftreg_core::Engine;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentMatrix};
use crate::dataset::{self, Manifest, StreamRecord};
use crate::metrics::{finalize_run, RunInfo, RunResult, StepRecord};
use crate::report;
use crate::stream::make_stream;
use crate::synthetic::{self, PiecewiseLinear};
use crate::{Error, Result};

/// Environment variable naming the default data directory.
pub const DATA_DIR_ENV: &str = "DRIFTREG_DATA";

/// `$DRIFTREG_DATA`, or `data` in the working directory.
pub fn default_data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV).map_or_else(|| PathBuf::from("data"), PathBuf::from)
}

/// Resolves datasets through a manifest; dataset files live in
/// `<data_dir>/<dataset name>/`.
#[derive(Debug, Clone)]
pub struct Runner {
    pub manifest: Manifest,
    pub data_dir: PathBuf,
    /// Keep the per-point trace even when no trace file is requested.
    pub keep_trace: bool,
}

impl Runner {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        Self {
            manifest: Manifest::builtin(),
            data_dir: data_dir.into(),
            keep_trace: false,
        }
    }

    /// Loads the records an experiment streams over.
    pub fn records(&self, cfg: &ExperimentConfig) -> Result<Vec<StreamRecord>> {
        if cfg.dataset == synthetic::DATASET_NAME {
            if cfg.target != synthetic::TARGET_NAME {
                return Err(Error::UnknownTarget {
                    dataset: cfg.dataset.clone(),
                    target: cfg.target.clone(),
                });
            }
            let generator = PiecewiseLinear {
                working_points: cfg.working_points,
                ..PiecewiseLinear::with_seed(cfg.seed.unwrap_or(0))
            };
            return Ok(generator.generate());
        }
        let entry = self.manifest.dataset(&cfg.dataset)?;
        let spec = entry.spec(&self.data_dir.join(&entry.name), &cfg.target, cfg.sentinel_policy)?;
        Ok(dataset::load(&spec)?.records)
    }

    /// load → split → prime → stream → evaluate. Errors carry the label.
    /// Writes the trace and result files named in `cfg`.
    pub fn run_experiment(&self, cfg: &ExperimentConfig) -> Result<RunResult> {
        self.run_inner(cfg).map_err(|e| e.in_experiment(&cfg.label))
    }

    fn run_inner(&self, cfg: &ExperimentConfig) -> Result<RunResult> {
        let engine_config = cfg.engine_config()?;
        let records = self.records(cfg)?;
        let result = run_records(cfg, engine_config, &records, self.keep_trace || cfg.trace.is_some())?;
        if let Some(path) = &cfg.trace {
            report::emit_plot_data(&result, path)?;
        }
        if let Some(path) = &cfg.out {
            report::write_results(path, std::slice::from_ref(&result))?;
        }
        Ok(result)
    }

    /// Runs every experiment on a pool of `parallelism` threads. Results come
    /// back in matrix order; a failed experiment does not stop the others.
    pub fn run_matrix(&self, matrix: &ExperimentMatrix, parallelism: usize) -> Vec<Result<RunResult>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism.max(1))
            .build()
            .expect("thread pool");
        pool.install(|| {
            matrix
                .experiments
                .par_iter()
                .map(|cfg| self.run_experiment(cfg))
                .collect()
        })
    }

    pub fn data_dir(&self) -> &Path {
        &self.data_dir
    }
}

/// Runs one experiment over already-loaded records.
pub fn run_records(
    cfg: &ExperimentConfig,
    engine_config: driftreg_core::EngineConfig,
    records: &[StreamRecord],
    keep_trace: bool,
) -> Result<RunResult> {
    let prepared = make_stream(records, cfg.working_points)?;
    let mut engine = Engine::new(engine_config)?;
    for row in prepared.labeled {
        engine.prime(row)?;
    }
    let mut steps = Vec::with_capacity(prepared.unlabeled.len());
    let start = Instant::now();
    for features in &prepared.unlabeled {
        let out = engine.step(features)?;
        steps.push(StepRecord {
            prediction: out.prediction,
            drift_event: out.drift_event,
        });
    }
    let elapsed = start.elapsed();
    let info = RunInfo {
        label: cfg.label.clone(),
        dataset: cfg.dataset.clone(),
        target: cfg.target.clone(),
        detector: cfg.detector.to_string(),
    };
    finalize_run(
        info,
        &engine.snapshot(),
        &steps,
        prepared.unlabeled.first_index(),
        prepared.truths,
        elapsed,
        keep_trace,
    )
}
