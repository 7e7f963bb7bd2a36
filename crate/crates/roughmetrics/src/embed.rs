//! Explicit embeddings with measured bi-Lipschitz distortion: the Schoenberg
//! Gram construction (isometric for every ultrametric input), the ℓ¹ tree map
//! that folds branch directions onto M residue axes, the combined map for
//! ultrametric spaces accumulating at one limit point, and the sequence
//! conditions governing when the tree map applies.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::constructions::tree_distance;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, Norm};

/// Raw expansion/contraction plus the bi-Lipschitz constant after the best
/// uniform rescaling of the image.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Distortion {
    /// max ‖F(x) − F(y)‖ / d(x, y).
    pub expansion: f64,
    /// max d(x, y) / ‖F(x) − F(y)‖.
    pub contraction: f64,
    /// Minimal L with (1/L)d ≤ s‖F(x) − F(y)‖ ≤ L·d over all scalings s,
    /// namely √(expansion·contraction).
    pub l: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EmbeddingResult {
    /// One coordinate row per point.
    pub coords: Vec<Vec<f64>>,
    pub target_norm: Norm,
    pub distortion: Distortion,
    /// Isometric within 1e−9.
    pub exact: bool,
}

/// Exact pairwise distortion of given coordinates against a space.
pub fn distortion(space: &FiniteMetricSpace, coords: &[Vec<f64>], norm: Norm) -> Result<Distortion> {
    let n = space.len();
    if coords.len() != n {
        return Err(Error::Structure(format!(
            "{} coordinate rows for {} points",
            coords.len(),
            n
        )));
    }
    let mut expansion = 0.0_f64;
    let mut contraction = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = space.dist(i, j);
            let image = norm.distance(&coords[i], &coords[j]);
            if d == 0.0 {
                if image > 0.0 {
                    return Err(Error::Structure(format!(
                        "points {i}, {j} coincide but their images do not"
                    )));
                }
                continue;
            }
            expansion = expansion.max(image / d);
            contraction = contraction.max(d / image);
        }
    }
    if expansion == 0.0 {
        // at most one distinct point
        expansion = 1.0;
        contraction = 1.0;
    }
    Ok(Distortion {
        expansion,
        contraction,
        l: (expansion * contraction).sqrt(),
    })
}

fn is_exact(d: &Distortion, space: &FiniteMetricSpace, coords: &[Vec<f64>], norm: Norm) -> bool {
    let n = space.len();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((norm.distance(&coords[i], &coords[j]) - space.dist(i, j)).abs());
        }
    }
    worst <= 1e-9 && d.l <= 1.0 + 1e-9
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SchoenbergOutcome {
    Embedded(EmbeddingResult),
    /// The Gram matrix has a genuinely negative eigenvalue: the space is not
    /// a Euclidean subset. A valid result, not an error.
    NotEuclidean { min_eigenvalue: f64 },
}

/// Isometric embedding into Euclidean space via the Gram construction:
/// G_ij = (d(x₀,x_i)² + d(x₀,x_j)² − d(x_i,x_j)²)/2 over the points other
/// than the base x₀. If G is positive semidefinite (eigenvalues ≥ −1e−9,
/// small negatives clamped), the rows of V·Λ^{1/2} are coordinates in
/// dimension rank(G) ≤ n−1. Ultrametric inputs always succeed.
pub fn schoenberg_embed(space: &FiniteMetricSpace, base: usize) -> Result<SchoenbergOutcome> {
    let n = space.len();
    if n == 0 || base >= n {
        return Err(Error::Precondition(format!(
            "base index {base} for {n} points"
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != base).collect();
    let m = others.len();
    if m == 0 {
        return Ok(SchoenbergOutcome::Embedded(EmbeddingResult {
            coords: vec![Vec::new()],
            target_norm: Norm::Euclidean,
            distortion: Distortion {
                expansion: 1.0,
                contraction: 1.0,
                l: 1.0,
            },
            exact: true,
        }));
    }
    let gram = DMatrix::from_fn(m, m, |a, b| {
        let (i, j) = (others[a], others[b]);
        let (di, dj, dij) = (space.dist(base, i), space.dist(base, j), space.dist(i, j));
        (di * di + dj * dj - dij * dij) / 2.0
    });
    let eigen = SymmetricEigen::new(gram);
    let max_abs = eigen
        .eigenvalues
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let tol = 1e-9 * max_abs.max(1.0);
    let min_eigenvalue = eigen.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if min_eigenvalue < -tol {
        return Ok(SchoenbergOutcome::NotEuclidean { min_eigenvalue });
    }
    let kept: Vec<usize> = (0..m).filter(|&c| eigen.eigenvalues[c] > tol).collect();
    let dim = kept.len();
    let mut coords = vec![vec![0.0; dim]; n];
    for (a, &i) in others.iter().enumerate() {
        for (col, &c) in kept.iter().enumerate() {
            coords[i][col] = eigen.eigenvectors[(a, c)] * eigen.eigenvalues[c].max(0.0).sqrt();
        }
    }
    let d = distortion(space, &coords, Norm::Euclidean)?;
    let exact = is_exact(&d, space, &coords, Norm::Euclidean);
    Ok(SchoenbergOutcome::Embedded(EmbeddingResult {
        coords,
        target_norm: Norm::Euclidean,
        distortion: d,
        exact,
    }))
}

/// The ℓ¹ tree map into dimension M+1: a trunk point at abscissa x goes to
/// x·e₀ and a point at height y·t_k on segment k goes to
/// t_k e₀ + y t_k e_{m₀}, where m₀ ∈ {1..M} is the residue class of k.
/// Requires t_{k+M} ≤ t_k/2, under which the measured distortion against the
/// intrinsic tree metric is at most 4; the map never expands.
pub fn tree_embed_f(
    ts: &[f64],
    m_residues: usize,
    points: &[(usize, f64)],
) -> Result<EmbeddingResult> {
    if m_residues == 0 || ts.is_empty() {
        return Err(Error::Domain("need M >= 1 and a nonempty sequence".into()));
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) || ts.iter().any(|t| *t <= 0.0) {
        return Err(Error::Domain("heights must be positive and strictly decreasing".into()));
    }
    for k in 0..ts.len().saturating_sub(m_residues) {
        if ts[k + m_residues] > ts[k] / 2.0 {
            return Err(Error::Domain(format!(
                "halving condition fails at k = {}: t_{} > t_{}/2",
                k + 1,
                k + 1 + m_residues,
                k + 1
            )));
        }
    }
    for &(seg, pos) in points {
        if seg > ts.len() || pos < 0.0 || (seg >= 1 && pos > 1.0) {
            return Err(Error::Structure(format!("invalid tree point ({seg}, {pos})")));
        }
    }
    let n = points.len();
    let mut matrix = vec![vec![0.0; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let d = tree_distance(ts, points[a], points[b]);
            matrix[a][b] = d;
            matrix[b][a] = d;
        }
    }
    let space = FiniteMetricSpace::from_matrix("tree_sample", None, matrix)?;
    let coords: Vec<Vec<f64>> = points
        .iter()
        .map(|&(seg, pos)| {
            let mut v = vec![0.0; m_residues + 1];
            if seg == 0 {
                v[0] = pos;
            } else {
                let t = ts[seg - 1];
                v[0] = t;
                v[1 + (seg - 1) % m_residues] = pos * t;
            }
            v
        })
        .collect();
    let d = distortion(&space, &coords, Norm::Taxicab)?;
    let exact = is_exact(&d, &space, &coords, Norm::Taxicab);
    Ok(EmbeddingResult {
        coords,
        target_norm: Norm::Taxicab,
        distortion: d,
        exact,
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SequenceConditions {
    /// t_{k+m} ≤ (1−δ) t_k throughout the prefix.
    pub cond3: bool,
    /// max over k of the largest m′ with t_{k+m′} > t_k/2 on the prefix.
    pub cond4_sup: usize,
}

/// Checks the branch-length decay conditions on a finite prefix.
pub fn sequence_condition_check(ts: &[f64], delta: f64, m: usize) -> Result<SequenceConditions> {
    if !(0.0 < delta && delta < 1.0) || m == 0 {
        return Err(Error::Domain(format!(
            "need delta in (0, 1) and m >= 1, got delta={delta}, m={m}"
        )));
    }
    let cond3 = (0..ts.len().saturating_sub(m)).all(|k| ts[k + m] <= (1.0 - delta) * ts[k]);
    let mut cond4_sup = 0;
    for k in 0..ts.len() {
        let mut sup = 0;
        for mp in 1..(ts.len() - k) {
            if ts[k + mp] > ts[k] / 2.0 {
                sup = mp;
            }
        }
        cond4_sup = cond4_sup.max(sup);
    }
    Ok(SequenceConditions { cond3, cond4_sup })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneLimitEmbedding {
    pub result: EmbeddingResult,
    /// (min, max) of ‖G(p) − G(q)‖ / d(p, q) over pairs from distinct levels;
    /// guaranteed within [1/(4L), L + 1/(4L)].
    pub cross_level: (f64, f64),
    /// (min, max) ratio over within-cluster pairs, measured and reported:
    /// the per-cluster charts are scaled by 1/(8L).
    pub within_cluster: Option<(f64, f64)>,
}

/// Embedding of an ultrametric space accumulating at one limit point. Level
/// k is a cluster Z_k of at most J points, all at distance 2t_k from the
/// limit, so points from distinct levels k < ℓ are at distance 2t_k. Given
/// an L-bi-Lipschitz ℓ¹ image of one representative per level, the combined
/// map appends the Gram-construction chart of each cluster (translated so
/// the representative sits at the origin) scaled by 1/(8L), using J−1 extra
/// coordinates.
pub fn one_limit_embed_g(
    clusters: &[FiniteMetricSpace],
    ts: &[f64],
    j_cap: usize,
    l_bilip: f64,
    f_coords: &[Vec<f64>],
) -> Result<OneLimitEmbedding> {
    if clusters.len() != ts.len() || f_coords.len() != ts.len() {
        return Err(Error::Structure(
            "clusters, heights and representative images must align".into(),
        ));
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) || ts.iter().any(|t| *t <= 0.0) {
        return Err(Error::Domain("heights must be positive and strictly decreasing".into()));
    }
    if l_bilip < 1.0 {
        return Err(Error::Domain(format!("L = {l_bilip} below 1")));
    }
    for (k, z) in clusters.iter().enumerate() {
        if z.is_empty() || z.len() > j_cap {
            return Err(Error::Domain(format!(
                "cluster {k} has {} points, outside 1..={j_cap}",
                z.len()
            )));
        }
    }
    let f_dim = f_coords.first().map_or(0, |c| c.len());
    let extra = j_cap - 1;
    let scale = 1.0 / (8.0 * l_bilip);
    // assemble the ambient space and the images
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut level_of: Vec<usize> = Vec::new();
    let mut blocks: Vec<Vec<Vec<f64>>> = Vec::new();
    for (k, z) in clusters.iter().enumerate() {
        let chart = match schoenberg_embed(z, 0)? {
            SchoenbergOutcome::Embedded(r) => r.coords,
            SchoenbergOutcome::NotEuclidean { min_eigenvalue } => {
                return Err(Error::Precondition(format!(
                    "cluster {k} is not Euclidean-embeddable (eigenvalue {min_eigenvalue})"
                )));
            }
        };
        blocks.push(chart);
        for _ in 0..z.len() {
            level_of.push(k);
        }
    }
    for (k, chart) in blocks.iter().enumerate() {
        for row in chart {
            let mut v = Vec::with_capacity(f_dim + extra);
            v.extend_from_slice(&f_coords[k]);
            for col in 0..extra {
                v.push(scale * row.get(col).copied().unwrap_or(0.0));
            }
            coords.push(v);
        }
    }
    let n = coords.len();
    let mut matrix = vec![vec![0.0; n]; n];
    let mut offset_of_level = vec![0usize; clusters.len()];
    {
        let mut off = 0;
        for (k, z) in clusters.iter().enumerate() {
            offset_of_level[k] = off;
            off += z.len();
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            let (ka, kb) = (level_of[a], level_of[b]);
            let d = if ka == kb {
                let z = &clusters[ka];
                z.dist(a - offset_of_level[ka], b - offset_of_level[kb])
            } else {
                2.0 * ts[ka.min(kb)]
            };
            matrix[a][b] = d;
            matrix[b][a] = d;
        }
    }
    let space = FiniteMetricSpace::from_matrix("one_limit", None, matrix)?;
    let full = distortion(&space, &coords, Norm::Taxicab)?;
    let mut cross = (f64::INFINITY, 0.0_f64);
    let mut within: Option<(f64, f64)> = None;
    for a in 0..n {
        for b in (a + 1)..n {
            let d = space.dist(a, b);
            if d == 0.0 {
                continue;
            }
            let ratio = Norm::Taxicab.distance(&coords[a], &coords[b]) / d;
            if level_of[a] == level_of[b] {
                within = Some(match within {
                    None => (ratio, ratio),
                    Some((lo, hi)) => (lo.min(ratio), hi.max(ratio)),
                });
            } else {
                cross = (cross.0.min(ratio), cross.1.max(ratio));
            }
        }
    }
    let exact = is_exact(&full, &space, &coords, Norm::Taxicab);
    Ok(OneLimitEmbedding {
        result: EmbeddingResult {
            coords,
            target_norm: Norm::Taxicab,
            distortion: full,
            exact,
        },
        cross_level: cross,
        within_cluster: within,
    })
}
