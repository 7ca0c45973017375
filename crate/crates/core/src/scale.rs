//! Linguistic evaluation scales and the expert's level matrix.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::dematel::DirectInfluenceMatrix;
use crate::error::{Error, Result};
use crate::fuzzy::TriangularFuzzyNumber;
use crate::fuzzy_dematel::FuzzyMatrix;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleLevel {
    pub label: String,
    pub crisp: f64,
    pub tfn: TriangularFuzzyNumber,
}

impl ScaleLevel {
    pub fn new(label: impl Into<String>, crisp: f64, tfn: TriangularFuzzyNumber) -> Self {
        Self {
            label: label.into(),
            crisp,
            tfn,
        }
    }
}

/// Ordered evaluation levels, weakest first.
///
/// Both the crisp anchors and the defuzzified TFNs are strictly increasing,
/// so the crisp and the fuzzy reading induce the same order on levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScale")]
pub struct LinguisticScale {
    levels: Vec<ScaleLevel>,
}

#[derive(Deserialize)]
struct RawScale {
    levels: Vec<ScaleLevel>,
}

impl TryFrom<RawScale> for LinguisticScale {
    type Error = Error;

    fn try_from(raw: RawScale) -> Result<Self> {
        Self::new(raw.levels)
    }
}

impl LinguisticScale {
    /// Validates a candidate list of levels.
    pub fn new(levels: Vec<ScaleLevel>) -> Result<Self> {
        if levels.len() < 2 {
            return Err(Error::TooFewLevels(levels.len()));
        }
        let mut seen = HashSet::new();
        for level in &levels {
            if level.label.trim().is_empty() || !seen.insert(level.label.as_str()) {
                return Err(Error::DuplicateLabel(level.label.clone()));
            }
            if !level.crisp.is_finite() {
                return Err(Error::NonMonotoneScale(format!(
                    "level {:?} has non-finite crisp value",
                    level.label
                )));
            }
        }
        for pair in levels.windows(2) {
            let (lo, hi) = (&pair[0], &pair[1]);
            if !(lo.crisp < hi.crisp) {
                return Err(Error::NonMonotoneScale(format!(
                    "crisp value of {:?} ({}) is not below {:?} ({})",
                    lo.label, lo.crisp, hi.label, hi.crisp
                )));
            }
            if !(lo.tfn.defuzzify() < hi.tfn.defuzzify()) {
                return Err(Error::NonMonotoneScale(format!(
                    "defuzzified value of {:?} ({}) is not below {:?} ({})",
                    lo.label,
                    lo.tfn.defuzzify(),
                    hi.label,
                    hi.tfn.defuzzify()
                )));
            }
        }
        Ok(Self { levels })
    }

    /// Four integer-anchored overlapping triangles on `[0, 3]`:
    /// N=(0,0,1), L=(0,1,2), H=(1,2,3), S=(2,3,3).
    pub fn default_scale() -> Self {
        let level = |label: &str, crisp: f64, l: f64, m: f64, u: f64| {
            ScaleLevel::new(label, crisp, TriangularFuzzyNumber::new(l, m, u).unwrap())
        };
        Self::new(vec![
            level("N", 0.0, 0.0, 0.0, 1.0),
            level("L", 1.0, 0.0, 1.0, 2.0),
            level("H", 2.0, 1.0, 2.0, 3.0),
            level("S", 3.0, 2.0, 3.0, 3.0),
        ])
        .expect("default scale is valid")
    }

    /// The default labels with every TFN collapsed onto its crisp anchor.
    pub fn degenerate_default() -> Self {
        Self::default_scale().degenerate()
    }

    /// Copy of this scale where each level's TFN is `(c, c, c)` for its
    /// crisp anchor `c`.
    pub fn degenerate(&self) -> Self {
        let levels = self
            .levels
            .iter()
            .map(|l| {
                ScaleLevel::new(
                    l.label.clone(),
                    l.crisp,
                    TriangularFuzzyNumber::from_crisp(l.crisp).expect("finite anchor"),
                )
            })
            .collect();
        Self::new(levels).expect("strictly increasing anchors")
    }

    pub fn levels(&self) -> &[ScaleLevel] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn is_degenerate(&self) -> bool {
        self.levels.iter().all(|l| l.tfn.is_degenerate())
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.levels.iter().position(|l| l.label == label)
    }

    pub fn label(&self, index: usize) -> Option<&str> {
        self.levels.get(index).map(|l| l.label.as_str())
    }

    fn level_at(&self, m: &LevelMatrix, row: usize, col: usize) -> Result<&ScaleLevel> {
        let index = m.cells[row][col];
        self.levels.get(index).ok_or(Error::LevelIndexOutOfRange {
            row,
            col,
            index,
            levels: self.levels.len(),
        })
    }
}

impl Default for LinguisticScale {
    fn default() -> Self {
        Self::default_scale()
    }
}

/// The expert's raw evaluation: `cells[i][j]` is the level index of the
/// direct influence of object `i` on object `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawLevelMatrix")]
pub struct LevelMatrix {
    objects: Vec<String>,
    cells: Vec<Vec<usize>>,
}

#[derive(Deserialize)]
struct RawLevelMatrix {
    objects: Vec<String>,
    cells: Vec<Vec<usize>>,
}

impl TryFrom<RawLevelMatrix> for LevelMatrix {
    type Error = Error;

    fn try_from(raw: RawLevelMatrix) -> Result<Self> {
        Self::new(raw.objects, raw.cells)
    }
}

impl LevelMatrix {
    pub fn new(objects: Vec<String>, cells: Vec<Vec<usize>>) -> Result<Self> {
        let n = objects.len();
        if n < 2 {
            return Err(Error::InvalidLevelMatrix(format!(
                "need at least 2 objects, got {n}"
            )));
        }
        let mut seen = HashSet::new();
        for name in &objects {
            if name.trim().is_empty() || !seen.insert(name.as_str()) {
                return Err(Error::InvalidLevelMatrix(format!(
                    "object name {name:?} is empty or duplicated"
                )));
            }
        }
        if cells.len() != n {
            return Err(Error::InvalidLevelMatrix(format!(
                "{} rows for {n} objects",
                cells.len()
            )));
        }
        for (i, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidLevelMatrix(format!(
                    "row {} ({}) has {} cells, expected {n}",
                    i + 1,
                    objects[i],
                    row.len()
                )));
            }
            if row[i] != 0 {
                return Err(Error::InvalidLevelMatrix(format!(
                    "diagonal cell ({0}, {0}) for object {1} has level {2}; self-influence must be the weakest level",
                    i + 1,
                    objects[i],
                    row[i]
                )));
            }
        }
        Ok(Self { objects, cells })
    }

    /// Objects named `A`, `B`, ... (then `O27`, `O28`, ... past `Z`).
    pub fn default_names(n: usize) -> Vec<String> {
        (0..n)
            .map(|i| {
                if i < 26 {
                    char::from(b'A' + i as u8).to_string()
                } else {
                    format!("O{}", i + 1)
                }
            })
            .collect()
    }

    pub fn with_default_names(cells: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(Self::default_names(cells.len()), cells)
    }

    pub fn dim(&self) -> usize {
        self.objects.len()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.cells[row][col]
    }

    /// True when `cells[i][j] == cells[j][i]` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.cells[i][j] == self.cells[j][i]))
    }

    /// Relabeled copy: new object `i` is old object `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let objects = perm.iter().map(|&p| self.objects[p].clone()).collect();
        let cells = perm
            .iter()
            .map(|&pi| perm.iter().map(|&pj| self.cells[pi][pj]).collect())
            .collect();
        Self::new(objects, cells)
    }

    /// Copy with the lower triangle mirrored onto the upper one.
    #[allow(clippy::needless_range_loop)]
    pub fn symmetrized(&self) -> Self {
        let n = self.dim();
        let mut cells = self.cells.clone();
        for i in 0..n {
            for j in (i + 1)..n {
                cells[i][j] = cells[j][i];
            }
        }
        Self {
            objects: self.objects.clone(),
            cells,
        }
    }
}

/// Where the defuzzify-first pipeline takes its crisp cell values from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CrispSource {
    /// `defuzzify(level.tfn)`.
    #[default]
    Defuzzified,
    /// The level's crisp anchor.
    Levels,
}

/// Maps each cell to a real value. The diagonal maps to the weakest level's
/// value, which is non-zero under `Defuzzified` when that level's TFN has
/// positive spread.
pub fn encode_crisp(
    m: &LevelMatrix,
    s: &LinguisticScale,
    source: CrispSource,
) -> Result<DirectInfluenceMatrix> {
    let n = m.dim();
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let level = s.level_at(m, i, j)?;
            out[(i, j)] = match source {
                CrispSource::Defuzzified => level.tfn.defuzzify(),
                CrispSource::Levels => level.crisp,
            };
        }
    }
    DirectInfluenceMatrix::new(m.objects.clone(), out)
}

pub fn encode_fuzzy(m: &LevelMatrix, s: &LinguisticScale) -> Result<FuzzyMatrix> {
    let n = m.dim();
    let mut lower = Matrix::zeros(n);
    let mut medium = Matrix::zeros(n);
    let mut upper = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let tfn = s.level_at(m, i, j)?.tfn;
            lower[(i, j)] = tfn.lower();
            medium[(i, j)] = tfn.medium();
            upper[(i, j)] = tfn.upper();
        }
    }
    FuzzyMatrix::new(m.objects.clone(), lower, medium, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn tfn(l: f64, m: f64, u: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(l, m, u).unwrap()
    }

    fn rows(m: &Matrix) -> Vec<Vec<f64>> {
        m.rows()
    }

    // [., H; L, .]
    fn two_by_two() -> LevelMatrix {
        LevelMatrix::with_default_names(vec![vec![0, 2], vec![1, 0]]).unwrap()
    }

    #[test]
    fn default_scale_defuzzified_levels() {
        let s = LinguisticScale::default_scale();
        let n = &s.levels()[s.index_of("N").unwrap()];
        let l = &s.levels()[s.index_of("L").unwrap()];
        assert_abs_diff_eq!(n.tfn.defuzzify(), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(l.tfn.defuzzify(), 1.0);
        assert_eq!(LinguisticScale::new(s.levels().to_vec()).unwrap(), s);
    }

    #[test]
    fn equal_tfns_are_non_monotone() {
        let err = LinguisticScale::new(vec![
            ScaleLevel::new("N", 0.0, tfn(0.0, 0.0, 1.0)),
            ScaleLevel::new("L", 1.0, tfn(0.0, 0.0, 1.0)),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::NonMonotoneScale(_)));
    }

    #[test]
    fn non_strict_crisp_order_rejected() {
        let mut levels = LinguisticScale::default_scale().levels().to_vec();
        levels[2].crisp = 1.0;
        assert!(matches!(
            LinguisticScale::new(levels),
            Err(Error::NonMonotoneScale(_))
        ));
    }

    #[test]
    fn duplicate_and_too_few() {
        let mut levels = LinguisticScale::default_scale().levels().to_vec();
        levels[3].label = "N".into();
        assert!(matches!(
            LinguisticScale::new(levels.clone()),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            LinguisticScale::new(levels[..1].to_vec()),
            Err(Error::TooFewLevels(1))
        ));
    }

    #[test]
    fn scale_json_layout() {
        let json = r#"{ "levels": [
            { "label": "N", "crisp": 0, "tfn": [0, 0, 1] },
            { "label": "L", "crisp": 1, "tfn": [0, 1, 2] },
            { "label": "H", "crisp": 2, "tfn": [1, 2, 3] },
            { "label": "S", "crisp": 3, "tfn": [2, 3, 3] } ] }"#;
        let s: LinguisticScale = serde_json::from_str(json).unwrap();
        assert_eq!(s, LinguisticScale::default_scale());
        let bad = json.replace("\"crisp\": 2", "\"crisp\": 1");
        assert!(serde_json::from_str::<LinguisticScale>(&bad).is_err());
    }

    #[test]
    fn encode_crisp_two_by_two() {
        let s = LinguisticScale::default_scale();
        let d = encode_crisp(&two_by_two(), &s, CrispSource::Defuzzified).unwrap();
        let third = 1.0 / 3.0;
        let expected = [[third, 2.0], [1.0, third]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(d.entries()[(i, j)], expected[i][j], epsilon = 1e-15);
            }
        }
        let d = encode_crisp(&two_by_two(), &s, CrispSource::Levels).unwrap();
        assert_eq!(rows(d.entries()), vec![vec![0.0, 2.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn encode_all_weakest() {
        let s = LinguisticScale::default_scale();
        let m = LevelMatrix::with_default_names(vec![vec![0; 3]; 3]).unwrap();
        let levels = encode_crisp(&m, &s, CrispSource::Levels).unwrap();
        assert!(levels.entries().iter().all(|&v| v == 0.0));
        let defuzz = encode_crisp(&m, &s, CrispSource::Defuzzified).unwrap();
        assert!(defuzz.entries().iter().all(|&v| v == 1.0 / 3.0));
    }

    #[test]
    fn encode_fuzzy_two_by_two() {
        let f = encode_fuzzy(&two_by_two(), &LinguisticScale::default_scale()).unwrap();
        assert_eq!(rows(f.lower()), vec![vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(rows(f.medium()), vec![vec![0.0, 2.0], vec![1.0, 0.0]]);
        assert_eq!(rows(f.upper()), vec![vec![1.0, 3.0], vec![2.0, 1.0]]);
    }

    #[test]
    fn encode_fuzzy_degenerate_scale_gives_identical_components() {
        let f = encode_fuzzy(&two_by_two(), &LinguisticScale::degenerate_default()).unwrap();
        assert_eq!(f.lower(), f.medium());
        assert_eq!(f.medium(), f.upper());
    }

    #[test]
    fn encode_fuzzy_then_defuzzify_matches_encode_crisp() {
        let s = LinguisticScale::default_scale();
        let m = LevelMatrix::with_default_names(vec![
            vec![0, 3, 1, 2],
            vec![2, 0, 0, 1],
            vec![3, 3, 0, 2],
            vec![1, 0, 2, 0],
        ])
        .unwrap();
        let f = encode_fuzzy(&m, &s).unwrap();
        let c = encode_crisp(&m, &s, CrispSource::Defuzzified).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let t = tfn(f.lower()[(i, j)], f.medium()[(i, j)], f.upper()[(i, j)]);
                assert_eq!(t.defuzzify(), c.entries()[(i, j)]);
            }
        }
    }

    #[test]
    fn out_of_range_level() {
        let s = LinguisticScale::default_scale();
        let m = LevelMatrix::with_default_names(vec![vec![0, 4], vec![1, 0]]).unwrap();
        assert!(matches!(
            encode_crisp(&m, &s, CrispSource::Levels),
            Err(Error::LevelIndexOutOfRange {
                row: 0,
                col: 1,
                index: 4,
                levels: 4
            })
        ));
        assert!(matches!(
            encode_fuzzy(&m, &s),
            Err(Error::LevelIndexOutOfRange { .. })
        ));
    }

    #[test]
    fn level_matrix_validation() {
        assert!(LevelMatrix::with_default_names(vec![vec![0]]).is_err());
        assert!(LevelMatrix::with_default_names(vec![vec![1, 0], vec![0, 0]]).is_err());
        assert!(LevelMatrix::with_default_names(vec![vec![0, 0], vec![0]]).is_err());
        assert!(
            LevelMatrix::new(vec!["A".into(), "A".into()], vec![vec![0, 1], vec![1, 0]]).is_err()
        );
    }

    #[test]
    fn permutation_permutes_encoding() {
        let s = LinguisticScale::default_scale();
        let m = LevelMatrix::with_default_names(vec![vec![0, 3, 1], vec![2, 0, 0], vec![1, 2, 0]])
            .unwrap();
        let perm = [2, 0, 1];
        let pm = m.permuted(&perm).unwrap();
        let a = encode_crisp(&m, &s, CrispSource::Defuzzified).unwrap();
        let b = encode_crisp(&pm, &s, CrispSource::Defuzzified).unwrap();
        assert_eq!(a.entries().permuted(&perm), *b.entries());
        let fa = encode_fuzzy(&m, &s).unwrap();
        let fb = encode_fuzzy(&pm, &s).unwrap();
        assert_eq!(fa.upper().permuted(&perm), *fb.upper());
    }
}
