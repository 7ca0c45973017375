//! Triangular fuzzy numbers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A triangular fuzzy number `(lower, medium, upper)`.
///
/// Construction checks `lower <= medium <= upper` and finiteness; unordered
/// components are rejected rather than sorted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TriangularFuzzyNumber {
    lower: f64,
    medium: f64,
    upper: f64,
}

impl TriangularFuzzyNumber {
    pub fn new(lower: f64, medium: f64, upper: f64) -> Result<Self> {
        let finite = lower.is_finite() && medium.is_finite() && upper.is_finite();
        if !finite || lower > medium || medium > upper {
            return Err(Error::InvalidTfn {
                lower,
                medium,
                upper,
            });
        }
        Ok(Self {
            lower,
            medium,
            upper,
        })
    }

    /// Degenerate embedding `(x, x, x)`.
    pub fn from_crisp(x: f64) -> Result<Self> {
        Self::new(x, x, x)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn medium(&self) -> f64 {
        self.medium
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_degenerate(&self) -> bool {
        self.lower == self.upper
    }

    /// Centroid defuzzification, `(l + m + u) / 3`.
    pub fn defuzzify(&self) -> f64 {
        (self.lower + self.medium + self.upper) / 3.0
    }

    /// The expanded centroid expression
    /// `m + (u^2 + 2m(l - u) - l^2) / (3(u - l))`.
    ///
    /// Only defined for `upper > lower`; kept for cross-checking
    /// [`defuzzify`](Self::defuzzify), which is what the pipelines use.
    pub fn defuzzify_long_form(&self) -> Option<f64> {
        let (l, m, u) = (self.lower, self.medium, self.upper);
        if u <= l {
            return None;
        }
        Some(m + (u * u + 2.0 * m * (l - u) - l * l) / (3.0 * (u - l)))
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        Self {
            lower: self.lower + other.lower,
            medium: self.medium + other.medium,
            upper: self.upper + other.upper,
        }
    }

    /// Componentwise multiplication by `k >= 0`.
    pub fn scale(&self, k: f64) -> Result<Self> {
        if k < 0.0 || !k.is_finite() {
            return Err(Error::NegativeScaleFactor(k));
        }
        Ok(Self {
            lower: self.lower * k,
            medium: self.medium * k,
            upper: self.upper * k,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.lower, self.medium, self.upper]
    }
}

impl std::ops::Add for TriangularFuzzyNumber {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        TriangularFuzzyNumber::add(&self, &rhs)
    }
}

impl TryFrom<[f64; 3]> for TriangularFuzzyNumber {
    type Error = Error;

    fn try_from(c: [f64; 3]) -> Result<Self> {
        Self::new(c[0], c[1], c[2])
    }
}

impl From<TriangularFuzzyNumber> for [f64; 3] {
    fn from(t: TriangularFuzzyNumber) -> Self {
        t.components()
    }
}

impl fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.lower, self.medium, self.upper)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tfn(l: f64, m: f64, u: f64) -> TriangularFuzzyNumber {
        TriangularFuzzyNumber::new(l, m, u).unwrap()
    }

    fn sorted_tfn() -> impl Strategy<Value = TriangularFuzzyNumber> {
        prop::array::uniform3(0.0f64..10.0).prop_map(|mut c| {
            c.sort_by(|a, b| a.partial_cmp(b).unwrap());
            tfn(c[0], c[1], c[2])
        })
    }

    #[test]
    fn defuzzify_examples() {
        assert_eq!(tfn(0.0, 1.0, 2.0).defuzzify(), 1.0);
        assert_abs_diff_eq!(tfn(2.0, 3.0, 3.0).defuzzify(), 8.0 / 3.0, epsilon = 1e-15);
        assert_eq!(tfn(2.0, 2.0, 2.0).defuzzify(), 2.0);
    }

    #[test]
    fn long_form_undefined_when_degenerate() {
        assert_eq!(tfn(2.0, 2.0, 2.0).defuzzify_long_form(), None);
        assert_abs_diff_eq!(
            tfn(2.0, 3.0, 3.0).defuzzify_long_form().unwrap(),
            8.0 / 3.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn from_crisp_examples() {
        assert_eq!(
            TriangularFuzzyNumber::from_crisp(0.0).unwrap(),
            tfn(0.0, 0.0, 0.0)
        );
        assert_eq!(
            TriangularFuzzyNumber::from_crisp(3.0).unwrap(),
            tfn(3.0, 3.0, 3.0)
        );
        assert!(TriangularFuzzyNumber::from_crisp(f64::NAN).is_err());
    }

    #[test]
    fn add_examples() {
        assert_eq!(tfn(0.0, 1.0, 2.0) + tfn(1.0, 2.0, 3.0), tfn(1.0, 3.0, 5.0));
        assert_eq!(tfn(0.0, 0.0, 0.0) + tfn(1.0, 2.0, 3.0), tfn(1.0, 2.0, 3.0));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(tfn(1.0, 2.0, 3.0).scale(0.5).unwrap(), tfn(0.5, 1.0, 1.5));
        assert_eq!(tfn(1.0, 2.0, 3.0).scale(0.0).unwrap(), tfn(0.0, 0.0, 0.0));
        assert!(matches!(
            tfn(1.0, 2.0, 3.0).scale(-1.0),
            Err(Error::NegativeScaleFactor(_))
        ));
    }

    #[test]
    fn rejects_unordered_components() {
        assert!(TriangularFuzzyNumber::new(1.0, 0.0, 2.0).is_err());
        assert!(TriangularFuzzyNumber::new(0.0, 3.0, 2.0).is_err());
        assert!(TriangularFuzzyNumber::new(0.0, 1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn serializes_as_array() {
        let t = tfn(0.0, 1.0, 2.0);
        assert_eq!(serde_json::to_string(&t).unwrap(), "[0.0,1.0,2.0]");
        let back: TriangularFuzzyNumber = serde_json::from_str("[0,1,2]").unwrap();
        assert_eq!(back, t);
        assert!(serde_json::from_str::<TriangularFuzzyNumber>("[2,1,0]").is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn long_and_short_forms_agree(t in sorted_tfn()) {
            prop_assume!(t.upper() > t.lower());
            let long = t.defuzzify_long_form().unwrap();
            prop_assert!((long - t.defuzzify()).abs() <= 1e-12);
        }

        #[test]
        fn defuzzify_is_additive(a in sorted_tfn(), b in sorted_tfn()) {
            let sum = a + b;
            prop_assert!(sum.lower() <= sum.medium() && sum.medium() <= sum.upper());
            prop_assert!((sum.defuzzify() - (a.defuzzify() + b.defuzzify())).abs() <= 1e-12);
        }

        #[test]
        fn defuzzify_is_homogeneous(a in sorted_tfn(), k in 0.0f64..100.0) {
            let s = a.scale(k).unwrap();
            prop_assert!(s.lower() <= s.medium() && s.medium() <= s.upper());
            prop_assert!((s.defuzzify() - k * a.defuzzify()).abs() <= 1e-10);
        }

        #[test]
        fn crisp_round_trip(x in -1e6f64..1e6) {
            let back = TriangularFuzzyNumber::from_crisp(x).unwrap().defuzzify();
            prop_assert!((back - x).abs() <= 4.0 * f64::EPSILON * x.abs());
        }
    }
}
