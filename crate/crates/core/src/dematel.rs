//! Crisp DEMATEL: normalization, total-relation matrix, prominence and
//! relation indicators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// Pivots smaller than this make `I - N` count as singular.
pub const PIVOT_TOLERANCE: f64 = 1e-12;

/// Upper bound on `max |N + N T - T|` for an accepted total-relation matrix.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Relative gap below which two indicator values are ranked as tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Non-negative direct-influence magnitudes between named objects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectInfluenceMatrix {
    objects: Vec<String>,
    entries: Matrix,
}

impl DirectInfluenceMatrix {
    pub fn new(objects: Vec<String>, entries: Matrix) -> Result<Self> {
        if objects.len() != entries.dim() {
            return Err(Error::InvalidMatrix(format!(
                "{} objects for a {}x{} matrix",
                objects.len(),
                entries.dim(),
                entries.dim()
            )));
        }
        if let Some(v) = entries.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidMatrix(format!(
                "entries must be finite and non-negative, found {v}"
            )));
        }
        Ok(Self { objects, entries })
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// Multiplies every entry by `k > 0`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(Error::NegativeScaleFactor(k));
        }
        Self::new(self.objects.clone(), self.entries.scaled(k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationMode {
    /// Divide by the largest row sum.
    #[default]
    MaxRow,
    /// Divide by the larger of the largest row sum and the largest column sum.
    MaxRowCol,
}

impl NormalizationMode {
    pub fn factor(self, m: &Matrix) -> f64 {
        let max = |v: Vec<f64>| v.into_iter().fold(0.0, f64::max);
        match self {
            NormalizationMode::MaxRow => max(m.row_sums()),
            NormalizationMode::MaxRowCol => max(m.row_sums()).max(max(m.col_sums())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationResult {
    pub objects: Vec<String>,
    pub normalized: Matrix,
    pub factor: f64,
    pub mode: NormalizationMode,
}

pub fn normalize(
    a: &DirectInfluenceMatrix,
    mode: NormalizationMode,
) -> Result<NormalizationResult> {
    let factor = mode.factor(&a.entries);
    if !(factor > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    Ok(normalize_with_factor(a, mode, factor))
}

/// Divides by an externally chosen factor (used for shared fuzzy scaling).
pub(crate) fn normalize_with_factor(
    a: &DirectInfluenceMatrix,
    mode: NormalizationMode,
    factor: f64,
) -> NormalizationResult {
    NormalizationResult {
        objects: a.objects.clone(),
        normalized: a.entries.map(|v| v / factor),
        factor,
        mode,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotalRelationMatrix {
    pub objects: Vec<String>,
    pub entries: Matrix,
    /// `max |N + N T - T|`.
    pub residual: f64,
}

/// `T = N (I - N)^-1`, i.e. the sum of all positive powers of `N`.
///
/// Fails with `NonConvergent` when `I - N` is numerically singular, when the
/// fixed-point residual exceeds [`RESIDUAL_TOLERANCE`], or when `T` comes out
/// negative (impossible for a non-negative `N` with spectral radius below 1).
pub fn total_relation(n: &NormalizationResult) -> Result<TotalRelationMatrix> {
    let norm = &n.normalized;
    let dim = norm.dim();
    let inv = Matrix::identity(dim)
        .sub(norm)
        .inverse(PIVOT_TOLERANCE)
        .ok_or_else(|| {
            Error::NonConvergent("I - N is singular; spectral radius of N is 1".into())
        })?;
    let t = norm.matmul(&inv);
    let residual = norm.add(&norm.matmul(&t)).max_abs_diff(&t);
    if !(residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::NonConvergent(format!(
            "fixed-point residual {residual:e} exceeds {RESIDUAL_TOLERANCE:e}"
        )));
    }
    if let Some(v) = t.iter().find(|v| **v < -RESIDUAL_TOLERANCE) {
        return Err(Error::NonConvergent(format!(
            "negative total-relation entry {v:e}; spectral radius of N is at least 1"
        )));
    }
    Ok(TotalRelationMatrix {
        objects: n.objects.clone(),
        entries: t,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NeumannSeries {
    pub sum: Matrix,
    /// Max-norm of the last added power.
    pub last_term_norm: f64,
    pub converged: bool,
}

/// Truncated series `N + N^2 + ... + N^terms`, computed by repeated
/// multiplication. Independent of [`total_relation`]; used to check it.
pub fn neumann_oracle(n: &NormalizationResult, terms: usize, tol: f64) -> NeumannSeries {
    let norm = &n.normalized;
    let mut power = norm.clone();
    let mut sum = norm.clone();
    for _ in 1..terms.max(1) {
        power = power.matmul(norm);
        sum = sum.add(&power);
    }
    let last_term_norm = power.max_norm();
    NeumannSeries {
        sum,
        last_term_norm,
        converged: last_term_norm < tol,
    }
}

/// Per-object indicators of one pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub objects: Vec<String>,
    pub r: Vec<f64>,
    pub c: Vec<f64>,
    pub prominence: Vec<f64>,
    pub relation: Vec<f64>,
    pub prominence_rank: Vec<f64>,
    pub relation_rank: Vec<f64>,
}

impl AnalysisResult {
    /// Builds prominence `R + C`, relation `R - C` and their ranks from row
    /// and column sums.
    pub fn from_sums(objects: Vec<String>, r: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        if r.len() != objects.len() || c.len() != objects.len() {
            return Err(Error::InvalidMatrix(format!(
                "{} objects but {} row sums and {} column sums",
                objects.len(),
                r.len(),
                c.len()
            )));
        }
        let prominence: Vec<f64> = r.iter().zip(&c).map(|(a, b)| a + b).collect();
        let relation: Vec<f64> = r.iter().zip(&c).map(|(a, b)| a - b).collect();
        let prominence_rank = rank(&prominence);
        let relation_rank = rank(&relation);
        Ok(Self {
            objects,
            r,
            c,
            prominence,
            relation,
            prominence_rank,
            relation_rank,
        })
    }

    /// `sum(R - C)`; zero up to rounding for any total-relation matrix.
    pub fn relation_sum(&self) -> f64 {
        self.relation.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    /// Largest absolute difference between numeric fields of two results.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let fields = |a: &Self| {
            [
                a.r.clone(),
                a.c.clone(),
                a.prominence.clone(),
                a.relation.clone(),
                a.prominence_rank.clone(),
                a.relation_rank.clone(),
            ]
        };
        fields(self)
            .iter()
            .zip(fields(other).iter())
            .flat_map(|(x, y)| x.iter().zip(y).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max)
    }
}

pub fn indicators(t: &TotalRelationMatrix) -> AnalysisResult {
    AnalysisResult::from_sums(
        t.objects.clone(),
        t.entries.row_sums(),
        t.entries.col_sums(),
    )
    .expect("sums match object count")
}

pub(crate) fn ties(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOLERANCE * 1f64.max(a.abs()).max(b.abs())
}

/// Descending fractional ranking: 1 = largest, tied values share the mean of
/// the ranks they span. Values within [`TIE_TOLERANCE`] (relative) of the
/// first value of a run are tied.
pub fn rank(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let head = values[order[start]];
        let mut end = start + 1;
        while end < order.len() && ties(head, values[order[end]]) {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let shared = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = shared;
        }
        start = end;
    }
    ranks
}

/// Crisp DEMATEL end to end.
pub fn analyze(a: &DirectInfluenceMatrix, mode: NormalizationMode) -> Result<AnalysisResult> {
    let n = normalize(a, mode)?;
    let t = total_relation(&n)?;
    Ok(indicators(&t))
}
