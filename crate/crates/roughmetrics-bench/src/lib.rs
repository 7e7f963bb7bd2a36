//! Shared input builders for the benchmarks.

use roughmetrics::ordered::OrderedSet;
use roughmetrics::space::Norm;
use roughmetrics::FiniteMetricSpace;

/// Logarithmic spiral discretization r = e^{-b kφ} at angles kφ.
pub fn spiral(n: usize, b: f64, phi: f64) -> OrderedSet {
    let coords: Vec<Vec<f64>> = (0..n)
        .map(|k| {
            let t = k as f64 * phi;
            let r = (-b * t).exp();
            vec![r * t.cos(), r * t.sin()]
        })
        .collect();
    OrderedSet::identity(FiniteMetricSpace::from_points("spiral", coords, Norm::Euclidean).unwrap())
        .unwrap()
}
