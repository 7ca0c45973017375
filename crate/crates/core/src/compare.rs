//! Defuzzify-first versus defuzzify-last on the same level matrix.

use serde::{Deserialize, Serialize};

use crate::dematel::{self, AnalysisResult, NormalizationMode};
use crate::error::{Error, PipelineId, Result};
use crate::fuzzy_dematel::{self, FuzzyScaling};
use crate::scale::{self, CrispSource, LevelMatrix, LinguisticScale};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub scale: LinguisticScale,
    pub crisp_source: CrispSource,
    pub normalization: NormalizationMode,
    pub fuzzy_scaling: FuzzyScaling,
}

impl PipelineConfig {
    pub fn with_scale(scale: LinguisticScale) -> Self {
        Self {
            scale,
            ..Self::default()
        }
    }
}

/// Crisp model: defuzzify each evaluation, then run crisp DEMATEL.
pub fn run_defuzzify_first(m: &LevelMatrix, cfg: &PipelineConfig) -> Result<AnalysisResult> {
    let run = || {
        let a = scale::encode_crisp(m, &cfg.scale, cfg.crisp_source)?;
        dematel::analyze(&a, cfg.normalization)
    };
    run().map_err(|e| e.in_pipeline(PipelineId::DefuzzifyFirst))
}

/// Fuzzy model: run DEMATEL per TFN component, defuzzify the row and column
/// sums at the end.
pub fn run_defuzzify_last(m: &LevelMatrix, cfg: &PipelineConfig) -> Result<AnalysisResult> {
    let run = || {
        let f = scale::encode_fuzzy(m, &cfg.scale)?;
        fuzzy_dematel::analyze_fuzzy(&f, cfg.fuzzy_scaling, cfg.normalization)
    };
    run()
        .map(|fa| fa.result)
        .map_err(|e| e.in_pipeline(PipelineId::DefuzzifyLast))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub min: f64,
    pub max: f64,
}

impl ValueRange {
    fn of(values: &[f64]) -> Self {
        values.iter().fold(
            ValueRange {
                min: f64::INFINITY,
                max: f64::NEG_INFINITY,
            },
            |r, &v| ValueRange {
                min: r.min.min(v),
                max: r.max.max(v),
            },
        )
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRanges {
    pub prominence: ValueRange,
    pub relation: ValueRange,
}

impl IndicatorRanges {
    fn of(r: &AnalysisResult) -> Self {
        Self {
            prominence: ValueRange::of(&r.prominence),
            relation: ValueRange::of(&r.relation),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRanges {
    pub crisp: IndicatorRanges,
    pub fuzzy: IndicatorRanges,
}

/// Pair of object names, in object order.
pub type ObjectPair = [String; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceReport {
    pub objects: Vec<String>,
    /// Defuzzify-first result.
    pub crisp_result: AnalysisResult,
    /// Defuzzify-last result.
    pub fuzzy_result: AnalysisResult,
    pub prominence_flips: Vec<ObjectPair>,
    pub relation_flips: Vec<ObjectPair>,
    /// Kendall tau-b between the two rank vectors; `None` when one of them is
    /// entirely tied.
    pub kendall_tau_prominence: Option<f64>,
    pub kendall_tau_relation: Option<f64>,
    pub value_ranges: ValueRanges,
    pub diverged: bool,
}

fn order(a: f64, b: f64) -> i8 {
    // rank 1 is the largest value, so a smaller rank means "above"
    if a < b {
        1
    } else if a > b {
        -1
    } else {
        0
    }
}

/// Index pairs `(i, j)`, `i < j`, strictly ordered one way in `x` and
/// strictly the other way in `y`.
pub fn flipped_pairs(x: &[f64], y: &[f64]) -> Vec<(usize, usize)> {
    let n = x.len().min(y.len());
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if order(x[i], x[j]) * order(y[i], y[j]) < 0 {
                out.push((i, j));
            }
        }
    }
    out
}

/// Kendall tau-b with the usual tie correction.
pub fn kendall_tau_b(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len().min(y.len());
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut tied_x, mut tied_y) = (0i64, 0i64);
    for i in 0..n {
        for j in (i + 1)..n {
            let (sx, sy) = (order(x[i], x[j]), order(y[i], y[j]));
            if sx == 0 {
                tied_x += 1;
            }
            if sy == 0 {
                tied_y += 1;
            }
            match sx * sy {
                1 => concordant += 1,
                -1 => discordant += 1,
                _ => {}
            }
        }
    }
    let pairs = (n * n.saturating_sub(1) / 2) as i64;
    let denom = (((pairs - tied_x) * (pairs - tied_y)) as f64).sqrt();
    if denom == 0.0 {
        return None;
    }
    Some((concordant - discordant) as f64 / denom)
}

/// Compares two already computed results over the same objects.
pub fn compare_results(crisp: AnalysisResult, fuzzy: AnalysisResult) -> Result<DivergenceReport> {
    if crisp.objects != fuzzy.objects {
        return Err(Error::InvalidMatrix(
            "compared results cover different objects".into(),
        ));
    }
    let objects = crisp.objects.clone();
    let named = |pairs: Vec<(usize, usize)>| -> Vec<ObjectPair> {
        pairs
            .into_iter()
            .map(|(i, j)| [objects[i].clone(), objects[j].clone()])
            .collect()
    };
    let prominence_flips = named(flipped_pairs(
        &crisp.prominence_rank,
        &fuzzy.prominence_rank,
    ));
    let relation_flips = named(flipped_pairs(&crisp.relation_rank, &fuzzy.relation_rank));
    let diverged = !prominence_flips.is_empty() || !relation_flips.is_empty();
    Ok(DivergenceReport {
        kendall_tau_prominence: kendall_tau_b(&crisp.prominence_rank, &fuzzy.prominence_rank),
        kendall_tau_relation: kendall_tau_b(&crisp.relation_rank, &fuzzy.relation_rank),
        value_ranges: ValueRanges {
            crisp: IndicatorRanges::of(&crisp),
            fuzzy: IndicatorRanges::of(&fuzzy),
        },
        objects,
        crisp_result: crisp,
        fuzzy_result: fuzzy,
        prominence_flips,
        relation_flips,
        diverged,
    })
}

/// Runs both pipelines and reports where their rankings disagree.
pub fn compare(m: &LevelMatrix, cfg: &PipelineConfig) -> Result<DivergenceReport> {
    let (crisp, fuzzy) = rayon::join(
        || run_defuzzify_first(m, cfg),
        || run_defuzzify_last(m, cfg),
    );
    compare_results(crisp?, fuzzy?)
}
