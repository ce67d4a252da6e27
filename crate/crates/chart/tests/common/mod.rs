#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weyl_chart::Chart;

pub fn fixture(name: &str) -> Chart {
    let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
    Chart::from_json_str(&text).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// ϑ(x) = 0.3 + 0.1 sin x and its first two derivatives.
pub fn theta(x: f64) -> (f64, f64, f64) {
    (0.3 + 0.1 * x.sin(), 0.1 * x.cos(), -0.1 * x.sin())
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
