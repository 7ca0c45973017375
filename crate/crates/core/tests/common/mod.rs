#![allow(dead_code)]

use std::path::PathBuf;

use fuzzy_dematel::search::random_instance;
use fuzzy_dematel::LevelMatrix;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// `count` random 4-level matrices with `n` cycling through 3..=8 and
/// density through 0.5..=1.0.
pub fn random_instances(count: u64, seed: u64) -> Vec<LevelMatrix> {
    (0..count)
        .map(|i| {
            let n = 3 + (i % 6) as usize;
            let density = 0.5 + 0.1 * (i % 6) as f64;
            random_instance(n, density, 4, seed, i)
        })
        .collect()
}

pub const OBJECTS: [&str; 5] = ["A", "B", "C", "D", "E"];

pub fn objects() -> Vec<String> {
    OBJECTS.iter().map(|s| s.to_string()).collect()
}

// Reference R and C columns.
pub const CRISP_R: [f64; 5] = [6.801, 9.202, 6.770, 8.956, 8.474];
pub const CRISP_C: [f64; 5] = [7.868, 8.864, 7.632, 7.960, 7.878];
pub const FUZZY_R: [f64; 5] = [6.527, 8.749, 6.454, 8.384, 8.157];
pub const FUZZY_C: [f64; 5] = [7.372, 8.256, 7.481, 7.725, 7.437];
