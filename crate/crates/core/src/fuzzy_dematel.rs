//! Fuzzy DEMATEL: the crisp machinery applied to the lower, medium and upper
//! components separately, with defuzzification at the very end.

use serde::{Deserialize, Serialize};

use crate::dematel::{
    self, AnalysisResult, DirectInfluenceMatrix, NormalizationMode, TotalRelationMatrix,
};
use crate::error::{Error, Result};
use crate::fuzzy::TriangularFuzzyNumber;
use crate::matrix::Matrix;

/// Three component matrices of a matrix of TFNs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyMatrix {
    objects: Vec<String>,
    lower: Matrix,
    medium: Matrix,
    upper: Matrix,
}

impl FuzzyMatrix {
    pub fn new(objects: Vec<String>, lower: Matrix, medium: Matrix, upper: Matrix) -> Result<Self> {
        let n = objects.len();
        if lower.dim() != n || medium.dim() != n || upper.dim() != n {
            return Err(Error::InvalidMatrix(format!(
                "component dimensions {}/{}/{} do not match {n} objects",
                lower.dim(),
                medium.dim(),
                upper.dim()
            )));
        }
        for i in 0..n {
            for j in 0..n {
                let (l, m, u) = (lower[(i, j)], medium[(i, j)], upper[(i, j)]);
                if !(l.is_finite() && u.is_finite() && 0.0 <= l && l <= m && m <= u) {
                    return Err(Error::InvalidMatrix(format!(
                        "cell ({}, {}) = ({l}, {m}, {u}) is not an ordered non-negative TFN",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self {
            objects,
            lower,
            medium,
            upper,
        })
    }

    /// All three components equal to `a`.
    pub fn from_crisp(a: &DirectInfluenceMatrix) -> Self {
        Self {
            objects: a.objects().to_vec(),
            lower: a.entries().clone(),
            medium: a.entries().clone(),
            upper: a.entries().clone(),
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    pub fn medium(&self) -> &Matrix {
        &self.medium
    }

    pub fn upper(&self) -> &Matrix {
        &self.upper
    }

    pub fn cell(&self, i: usize, j: usize) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(self.lower[(i, j)], self.medium[(i, j)], self.upper[(i, j)])
            .expect("validated on construction")
    }

    fn component(&self, m: &Matrix) -> DirectInfluenceMatrix {
        DirectInfluenceMatrix::new(self.objects.clone(), m.clone())
            .expect("validated on construction")
    }
}

/// How the three components are normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzyScaling {
    /// Every component divided by the upper component's factor. Keeps
    /// `T_lower <= T_medium <= T_upper` elementwise.
    #[default]
    SharedUpper,
    /// Every component divided by its own factor.
    Independent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyTotalRelation {
    pub lower: TotalRelationMatrix,
    pub medium: TotalRelationMatrix,
    pub upper: TotalRelationMatrix,
}

impl FuzzyTotalRelation {
    /// True if `lower <= medium <= upper` holds in every cell.
    pub fn is_ordered(&self) -> bool {
        let (l, m, u) = (
            &self.lower.entries,
            &self.medium.entries,
            &self.upper.entries,
        );
        let n = l.dim();
        (0..n).all(|i| (0..n).all(|j| l[(i, j)] <= m[(i, j)] && m[(i, j)] <= u[(i, j)]))
    }
}

pub fn fuzzy_total_relation(
    f: &FuzzyMatrix,
    scaling: FuzzyScaling,
    mode: NormalizationMode,
) -> Result<FuzzyTotalRelation> {
    let upper_factor = mode.factor(&f.upper);
    if !(upper_factor > 0.0) {
        return Err(Error::ZeroMatrix);
    }
    let solve = |m: &Matrix| -> Result<TotalRelationMatrix> {
        let component = f.component(m);
        let factor = match scaling {
            FuzzyScaling::SharedUpper => upper_factor,
            // An all-zero lower or medium component has no factor of its
            // own; its total relation is zero under any positive divisor.
            FuzzyScaling::Independent => match mode.factor(m) {
                x if x > 0.0 => x,
                _ => 1.0,
            },
        };
        dematel::total_relation(&dematel::normalize_with_factor(&component, mode, factor))
    };
    Ok(FuzzyTotalRelation {
        lower: solve(&f.lower)?,
        medium: solve(&f.medium)?,
        upper: solve(&f.upper)?,
    })
}

/// Fuzzy row and column sums, plus the indicators of their defuzzified
/// values.
///
/// `r[i]` and `c[i]` are `[lower, medium, upper]` triples. They are valid
/// TFNs under [`FuzzyScaling::SharedUpper`]; independent scaling can break
/// the ordering, so they are kept as raw triples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzyAnalysis {
    pub r: Vec<[f64; 3]>,
    pub c: Vec<[f64; 3]>,
    pub result: AnalysisResult,
}

fn centroid(t: &[f64; 3]) -> f64 {
    (t[0] + t[1] + t[2]) / 3.0
}

impl FuzzyAnalysis {
    pub fn r_tfn(&self, i: usize) -> Result<TriangularFuzzyNumber> {
        TriangularFuzzyNumber::try_from(self.r[i])
    }

    pub fn c_tfn(&self, i: usize) -> Result<TriangularFuzzyNumber> {
        TriangularFuzzyNumber::try_from(self.c[i])
    }

    /// Prominence and relation from the other order: form `R + C` and
    /// `R - C` componentwise on the triples, then defuzzify.
    pub fn combine_then_defuzzify(&self) -> (Vec<f64>, Vec<f64>) {
        self.r
            .iter()
            .zip(&self.c)
            .map(|(r, c)| {
                let plus = [r[0] + c[0], r[1] + c[1], r[2] + c[2]];
                let minus = [r[0] - c[0], r[1] - c[1], r[2] - c[2]];
                (centroid(&plus), centroid(&minus))
            })
            .unzip()
    }
}

pub fn fuzzy_indicators(components: &FuzzyTotalRelation) -> FuzzyAnalysis {
    let triples = |f: fn(&Matrix) -> Vec<f64>| -> Vec<[f64; 3]> {
        let l = f(&components.lower.entries);
        let m = f(&components.medium.entries);
        let u = f(&components.upper.entries);
        (0..l.len()).map(|i| [l[i], m[i], u[i]]).collect()
    };
    let r = triples(Matrix::row_sums);
    let c = triples(Matrix::col_sums);
    let result = AnalysisResult::from_sums(
        components.medium.objects.clone(),
        r.iter().map(centroid).collect(),
        c.iter().map(centroid).collect(),
    )
    .expect("sums match object count");
    FuzzyAnalysis { r, c, result }
}

/// Fuzzy DEMATEL end to end.
pub fn analyze_fuzzy(
    f: &FuzzyMatrix,
    scaling: FuzzyScaling,
    mode: NormalizationMode,
) -> Result<FuzzyAnalysis> {
    Ok(fuzzy_indicators(&fuzzy_total_relation(f, scaling, mode)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scale::{encode_fuzzy, LevelMatrix, LinguisticScale};

    fn two_by_two() -> FuzzyMatrix {
        let m = LevelMatrix::with_default_names(vec![vec![0, 2], vec![1, 0]]).unwrap();
        encode_fuzzy(&m, &LinguisticScale::default_scale()).unwrap()
    }

    #[test]
    fn rejects_unordered_cells() {
        let z = Matrix::zeros(2);
        let one = Matrix::from_fn(2, |_, _| 1.0);
        let names = vec!["A".to_string(), "B".to_string()];
        assert!(FuzzyMatrix::new(names.clone(), one.clone(), z.clone(), one.clone()).is_err());
        assert!(FuzzyMatrix::new(names, z.clone(), z, one).is_ok());
    }

    #[test]
    fn degenerate_components_match_crisp() {
        let entries = Matrix::from_rows(vec![
            vec![0.0, 3.0, 1.0],
            vec![2.0, 0.0, 0.0],
            vec![1.0, 2.0, 0.0],
        ])
        .unwrap();
        let a = DirectInfluenceMatrix::new(LevelMatrix::default_names(3), entries).unwrap();
        let crisp_t =
            dematel::total_relation(&dematel::normalize(&a, NormalizationMode::MaxRow).unwrap())
                .unwrap();
        let f = FuzzyMatrix::from_crisp(&a);
        for scaling in [FuzzyScaling::SharedUpper, FuzzyScaling::Independent] {
            let t = fuzzy_total_relation(&f, scaling, NormalizationMode::MaxRow).unwrap();
            assert_eq!(t.lower.entries, crisp_t.entries);
            assert_eq!(t.medium.entries, crisp_t.entries);
            assert_eq!(t.upper.entries, crisp_t.entries);
            let fa = fuzzy_indicators(&t);
            let crisp = dematel::indicators(&crisp_t);
            assert!(fa.result.max_abs_diff(&crisp) <= 1e-12);
        }
    }

    #[test]
    fn shared_upper_preserves_ordering() {
        let t = fuzzy_total_relation(
            &two_by_two(),
            FuzzyScaling::SharedUpper,
            NormalizationMode::MaxRow,
        )
        .unwrap();
        assert!(t.is_ordered());
        let fa = fuzzy_indicators(&t);
        for i in 0..2 {
            assert!(fa.r_tfn(i).is_ok());
            assert!(fa.c_tfn(i).is_ok());
        }
    }

    #[test]
    fn independent_scaling_runs() {
        fuzzy_total_relation(
            &two_by_two(),
            FuzzyScaling::Independent,
            NormalizationMode::MaxRow,
        )
        .unwrap();
    }

    #[test]
    fn zero_upper_is_zero_matrix() {
        let z = Matrix::zeros(2);
        let f = FuzzyMatrix::new(vec!["A".into(), "B".into()], z.clone(), z.clone(), z).unwrap();
        assert!(matches!(
            fuzzy_total_relation(&f, FuzzyScaling::SharedUpper, NormalizationMode::MaxRow),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn table_fuzzy_row_e() {
        let res = AnalysisResult::from_sums(vec!["E".into()], vec![8.157], vec![7.437]).unwrap();
        assert!((res.prominence[0] - 15.594).abs() < 1e-9);
        assert!((res.relation[0] - 0.720).abs() < 1e-9);
    }

    #[test]
    fn defuzzification_order_is_immaterial() {
        let m = LevelMatrix::with_default_names(vec![
            vec![0, 3, 1, 2],
            vec![2, 0, 0, 1],
            vec![3, 3, 0, 2],
            vec![1, 0, 2, 0],
        ])
        .unwrap();
        let f = encode_fuzzy(&m, &LinguisticScale::default_scale()).unwrap();
        let fa = analyze_fuzzy(&f, FuzzyScaling::SharedUpper, NormalizationMode::MaxRow).unwrap();
        let (p, r) = fa.combine_then_defuzzify();
        for i in 0..4 {
            assert!((p[i] - fa.result.prominence[i]).abs() <= 1e-12);
            assert!((r[i] - fa.result.relation[i]).abs() <= 1e-12);
        }
        assert!(fa.result.relation_sum().abs() < 1e-9);
    }
}
