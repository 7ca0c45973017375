//! Search for level matrices on which the two pipelines rank objects
//! differently.
//!
//! Instance `i` of a randomized search draws from a ChaCha stream keyed by
//! `(seed, i)`, so results do not depend on how trials are spread across
//! threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::compare::{self, DivergenceReport, PipelineConfig};
use crate::error::{Error, Result};
use crate::scale::LevelMatrix;

/// Largest number of instances exhaustive mode will enumerate.
pub const EXHAUSTIVE_LIMIT: u64 = 10_000_000;

const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    #[default]
    Randomized,
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSpec {
    pub n: usize,
    pub cfg: PipelineConfig,
    pub trials: u64,
    pub seed: u64,
    /// Probability that an off-diagonal cell is above the weakest level.
    pub density: f64,
    pub mode: SearchMode,
    /// Cap on stored divergent instances; all are still counted.
    pub keep: Option<usize>,
}

impl SearchSpec {
    pub fn randomized(n: usize, trials: u64, seed: u64, density: f64) -> Self {
        Self {
            n,
            cfg: PipelineConfig::default(),
            trials,
            seed,
            density,
            mode: SearchMode::Randomized,
            keep: None,
        }
    }

    pub fn exhaustive(n: usize) -> Self {
        Self {
            mode: SearchMode::Exhaustive,
            ..Self::randomized(n, 1, 0, 1.0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidSearchSpec(format!(
                "n must be at least 2, got {}",
                self.n
            )));
        }
        if self.trials < 1 {
            return Err(Error::InvalidSearchSpec("trials must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.density) {
            return Err(Error::InvalidSearchSpec(format!(
                "density must lie in [0, 1], got {}",
                self.density
            )));
        }
        Ok(())
    }

    /// Number of instances the search will evaluate.
    pub fn instance_count(&self) -> Result<u64> {
        match self.mode {
            SearchMode::Randomized => Ok(self.trials),
            SearchMode::Exhaustive => exhaustive_size(self.n, self.cfg.scale.len()),
        }
    }
}

/// `levels^(n(n-1))`, or `SearchSpaceTooLarge` past [`EXHAUSTIVE_LIMIT`].
pub fn exhaustive_size(n: usize, levels: usize) -> Result<u64> {
    let cells = n * n.saturating_sub(1);
    let too_large = Error::SearchSpaceTooLarge {
        levels,
        cells,
        limit: EXHAUSTIVE_LIMIT,
    };
    let exp = u32::try_from(cells).map_err(|_| too_large)?;
    match (levels as u64).checked_pow(exp) {
        Some(size) if size <= EXHAUSTIVE_LIMIT => Ok(size),
        _ => Err(Error::SearchSpaceTooLarge {
            levels,
            cells,
            limit: EXHAUSTIVE_LIMIT,
        }),
    }
}

/// Random level matrix for instance `index` of the stream keyed by `seed`.
///
/// Off-diagonal cells are level 0 with probability `1 - density`, otherwise
/// uniform over levels `1..levels`.
pub fn random_instance(
    n: usize,
    density: f64,
    levels: usize,
    seed: u64,
    index: u64,
) -> LevelMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut cells = vec![vec![0; n]; n];
    for (i, row) in cells.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j && levels > 1 && rng.gen_bool(density) {
                *cell = rng.gen_range(1..levels);
            }
        }
    }
    LevelMatrix::with_default_names(cells).expect("well-formed random instance")
}

/// The `index`-th assignment of levels to the off-diagonal cells, row-major,
/// first cell varying fastest.
pub fn enumerated_instance(n: usize, levels: usize, index: u64) -> LevelMatrix {
    let mut rest = index;
    let mut cells = vec![vec![0; n]; n];
    for (i, row) in cells.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = (rest % levels as u64) as usize;
                rest /= levels as u64;
            }
        }
    }
    LevelMatrix::with_default_names(cells).expect("well-formed enumerated instance")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergentInstance {
    pub index: u64,
    pub matrix: LevelMatrix,
    pub report: DivergenceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub n: usize,
    pub mode: SearchMode,
    pub seed: u64,
    pub density: f64,
    pub trials_run: u64,
    pub errors_skipped: u64,
    pub divergent_count: u64,
    pub divergent_instances: Vec<DivergentInstance>,
}

enum Trial {
    Skipped,
    Agreed,
    Diverged(Box<DivergenceReport>),
}

fn instance(spec: &SearchSpec, index: u64) -> LevelMatrix {
    let levels = spec.cfg.scale.len();
    match spec.mode {
        SearchMode::Randomized => random_instance(spec.n, spec.density, levels, spec.seed, index),
        SearchMode::Exhaustive => enumerated_instance(spec.n, levels, index),
    }
}

fn run_trial(m: &LevelMatrix, cfg: &PipelineConfig) -> Trial {
    let crisp = compare::run_defuzzify_first(m, cfg);
    let fuzzy = compare::run_defuzzify_last(m, cfg);
    match (crisp, fuzzy) {
        (Ok(c), Ok(f)) => match compare::compare_results(c, f) {
            Ok(rep) if rep.diverged => Trial::Diverged(Box::new(rep)),
            Ok(_) => Trial::Agreed,
            Err(_) => Trial::Skipped,
        },
        _ => Trial::Skipped,
    }
}

/// Runs the search on the current rayon pool.
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome> {
    spec.validate()?;
    let total = spec.instance_count()?;
    let mut outcome = SearchOutcome {
        n: spec.n,
        mode: spec.mode,
        seed: spec.seed,
        density: spec.density,
        trials_run: total,
        errors_skipped: 0,
        divergent_count: 0,
        divergent_instances: Vec::new(),
    };
    let mut start = 0;
    while start < total {
        let end = (start + CHUNK).min(total);
        let trials: Vec<Trial> = (start..end)
            .into_par_iter()
            .map(|i| run_trial(&instance(spec, i), &spec.cfg))
            .collect();
        for (i, trial) in (start..end).zip(trials) {
            match trial {
                Trial::Skipped => outcome.errors_skipped += 1,
                Trial::Agreed => {}
                Trial::Diverged(report) => {
                    outcome.divergent_count += 1;
                    if spec
                        .keep
                        .is_none_or(|k| outcome.divergent_instances.len() < k)
                    {
                        outcome.divergent_instances.push(DivergentInstance {
                            index: i,
                            matrix: instance(spec, i),
                            report: *report,
                        });
                    }
                }
            }
        }
        start = end;
    }
    Ok(outcome)
}

/// Runs the search on a dedicated pool of `workers` threads.
pub fn search_with_workers(spec: &SearchSpec, workers: usize) -> Result<SearchOutcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::InvalidSearchSpec(format!("cannot start {workers} workers: {e}")))?;
    pool.install(|| search(spec))
}

/// True iff every stored instance still diverges when re-run from scratch.
pub fn reverify(outcome: &SearchOutcome, cfg: &PipelineConfig) -> bool {
    outcome
        .divergent_instances
        .iter()
        .all(|inst| matches!(compare::compare(&inst.matrix, cfg), Ok(rep) if rep.diverged))
}
