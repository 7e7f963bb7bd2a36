//! Finite metric spaces: representation, validation, snowflaking, L^p-metric
//! exponents, comparison angles and doubling probes.
//!
//! Distances are stored as 64-bit floats and every inequality check takes an
//! explicit tolerance with signed residuals. A snowflake wrapper keeps its
//! base space and evaluates d^α lazily from the base distances, so repeated
//! snowflaking composes exponents instead of compounding rounding.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Target norm for coordinate-backed spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    Euclidean,
    Taxicab,
}

impl Norm {
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Norm::Taxicab => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
        }
    }
}

#[derive(Debug, Clone)]
enum Source {
    Matrix,
    Coords { coords: Vec<Vec<f64>>, norm: Norm },
    Snowflake { base: Box<FiniteMetricSpace>, alpha: f64 },
}

/// A finite metric space: labeled points plus a cached pairwise distance
/// matrix, with the originating source retained for lazy re-evaluation and
/// faithful serialization.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    name: String,
    labels: Vec<String>,
    source: Source,
    matrix: Vec<Vec<f64>>,
}

impl PartialEq for FiniteMetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.labels == other.labels && self.matrix == other.matrix
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl FiniteMetricSpace {
    /// Builds a space from an explicit distance matrix. Checks structure
    /// (squareness, nonnegativity) but not the metric axioms; run
    /// [`validate`](Self::validate) for those.
    pub fn from_matrix(
        name: impl Into<String>,
        labels: Option<Vec<String>>,
        matrix: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = matrix.len();
        for row in &matrix {
            if row.len() != n {
                return Err(Error::Structure(format!(
                    "matrix is not square: {} rows, a row of length {}",
                    n,
                    row.len()
                )));
            }
            if let Some(v) = row.iter().find(|v| **v < 0.0 || !v.is_finite()) {
                return Err(Error::Structure(format!("invalid distance entry {v}")));
            }
        }
        let labels = labels.unwrap_or_else(|| default_labels(n));
        if labels.len() != n {
            return Err(Error::Structure(format!(
                "{} labels for {} points",
                labels.len(),
                n
            )));
        }
        Ok(Self {
            name: name.into(),
            labels,
            source: Source::Matrix,
            matrix,
        })
    }

    /// Builds a space from coordinates under the given norm.
    pub fn from_points(
        name: impl Into<String>,
        coords: Vec<Vec<f64>>,
        norm: Norm,
    ) -> Result<Self> {
        let n = coords.len();
        let dim = coords.first().map_or(0, |c| c.len());
        if coords.iter().any(|c| c.len() != dim) {
            return Err(Error::Structure("coordinate rows of unequal length".into()));
        }
        let mut matrix = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = norm.distance(&coords[i], &coords[j]);
                matrix[i][j] = d;
                matrix[j][i] = d;
            }
        }
        Ok(Self {
            name: name.into(),
            labels: default_labels(n),
            source: Source::Coords { coords, norm },
            matrix,
        })
    }

    /// Convenience builder for points on the real line.
    pub fn from_line(name: impl Into<String>, xs: &[f64]) -> Result<Self> {
        Self::from_points(name, xs.iter().map(|x| vec![*x]).collect(), Norm::Euclidean)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rename(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Structure(format!(
                "{} labels for {} points",
                labels.len(),
                self.len()
            )));
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    /// Restriction of the space to the given point indices, as a matrix space.
    pub fn restrict(&self, indices: &[usize]) -> Result<Self> {
        let mut matrix = vec![vec![0.0; indices.len()]; indices.len()];
        for (a, &i) in indices.iter().enumerate() {
            if i >= self.len() {
                return Err(Error::Structure(format!("point index {i} out of range")));
            }
            for (b, &j) in indices.iter().enumerate() {
                matrix[a][b] = self.dist(i, j);
            }
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        Self::from_matrix(format!("{}|restricted", self.name), Some(labels), matrix)
    }

    /// Checks the metric axioms (identity, positivity, symmetry, triangle
    /// inequality) and reports every violation exceeding `tol`.
    pub fn validate(&self, tol: f64) -> ValidationReport {
        let n = self.len();
        let mut violations = Vec::new();
        for i in 0..n {
            if self.matrix[i][i].abs() > tol {
                violations.push(Violation {
                    check: Check::Identity,
                    indices: vec![i],
                    residual: self.matrix[i][i],
                });
            }
            for j in (i + 1)..n {
                let residual = (self.matrix[i][j] - self.matrix[j][i]).abs();
                if residual > tol {
                    violations.push(Violation {
                        check: Check::Symmetry,
                        indices: vec![i, j],
                        residual,
                    });
                }
                if self.matrix[i][j] <= tol {
                    violations.push(Violation {
                        check: Check::Positivity,
                        indices: vec![i, j],
                        residual: self.matrix[i][j],
                    });
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let residual = self.dist(i, j) - self.dist(i, k) - self.dist(k, j);
                    if residual > tol {
                        violations.push(Violation {
                            check: Check::Triangle,
                            indices: vec![i, j, k],
                            residual,
                        });
                    }
                }
            }
        }
        ValidationReport {
            passed: violations.is_empty(),
            violations,
        }
    }

    /// Snowflake transform d ↦ d^α for α ∈ (0,1]. The power of a metric with
    /// exponent at most one is again a metric. Snowflaking a snowflake
    /// composes the exponents on the original base.
    pub fn snowflake(&self, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::Domain(format!(
                "snowflake exponent {alpha} outside (0, 1]"
            )));
        }
        let (base, exponent) = match &self.source {
            Source::Snowflake { base, alpha: a0 } => (base.as_ref().clone(), a0 * alpha),
            _ => (self.clone(), alpha),
        };
        let n = base.len();
        let mut matrix = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                matrix[i][j] = base.matrix[i][j].powf(exponent);
            }
        }
        Ok(Self {
            name: format!("{}^{}", base.name, exponent),
            labels: base.labels.clone(),
            source: Source::Snowflake {
                base: Box::new(base),
                alpha: exponent,
            },
            matrix,
        })
    }

    /// Snowflake exponent if this space is a snowflake wrapper.
    pub fn snowflake_exponent(&self) -> Option<f64> {
        match &self.source {
            Source::Snowflake { alpha, .. } => Some(*alpha),
            _ => None,
        }
    }

    /// The largest p such that d^p still satisfies the triangle inequality on
    /// every triple, i.e. d is an L^p-metric. Per triple with strictly
    /// largest side C and other sides A, B this is the unique root of
    /// (A/C)^p + (B/C)^p = 1; a triple whose largest side is not unique never
    /// constrains p. Bisection brackets [1, 64]; roots beyond 64 and
    /// ultrametric spaces report infinity.
    pub fn max_lp_exponent(&self) -> f64 {
        let n = self.len();
        let mut p_star = f64::INFINITY;
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let mut s = [self.dist(i, j), self.dist(i, k), self.dist(j, k)];
                    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let (a, b, c) = (s[0], s[1], s[2]);
                    if c <= b || c == 0.0 {
                        continue; // largest side tied: no constraint
                    }
                    let (ra, rb) = (a / c, b / c);
                    let f = |p: f64| ra.powf(p) + rb.powf(p) - 1.0;
                    if f(64.0) > 0.0 {
                        continue; // root beyond the bracket, treated as infinite
                    }
                    let (mut lo, mut hi) = (1.0_f64, 64.0_f64);
                    if f(lo) <= 0.0 {
                        p_star = p_star.min(1.0);
                        continue;
                    }
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if f(mid) > 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    p_star = p_star.min(0.5 * (lo + hi));
                }
            }
        }
        p_star
    }

    /// Angles of the planar comparison triangle for the given triple, in the
    /// order (at i, at j, at k). Degenerate (metrically collinear) triples
    /// return {0, 0, π} with the straight angle at the middle point, flagged.
    pub fn comparison_angles(&self, i: usize, j: usize, k: usize) -> Result<([f64; 3], bool)> {
        if i == j || j == k || i == k {
            return Err(Error::Precondition("triple must be distinct".into()));
        }
        let a = self.dist(j, k); // opposite i
        let b = self.dist(i, k); // opposite j
        let c = self.dist(i, j); // opposite k
        let tol = 1e-12 * (a + b + c);
        // Collinearity: one side equals the sum of the other two.
        let mut angles = [0.0_f64; 3];
        let degenerate = (a - b - c).abs() <= tol
            || (b - a - c).abs() <= tol
            || (c - a - b).abs() <= tol;
        if degenerate {
            if a >= b && a >= c {
                angles = [std::f64::consts::PI, 0.0, 0.0];
            } else if b >= a && b >= c {
                angles = [0.0, std::f64::consts::PI, 0.0];
            } else {
                angles = [0.0, 0.0, std::f64::consts::PI];
            }
            return Ok((angles, true));
        }
        if a > b + c || b > a + c || c > a + b {
            return Err(Error::Precondition(
                "triple violates the triangle inequality; no comparison triangle".into(),
            ));
        }
        let cos_i = ((b * b + c * c - a * a) / (2.0 * b * c)).clamp(-1.0, 1.0);
        let cos_j = ((a * a + c * c - b * b) / (2.0 * a * c)).clamp(-1.0, 1.0);
        let cos_k = ((a * a + b * b - c * c) / (2.0 * a * b)).clamp(-1.0, 1.0);
        angles[0] = cos_i.acos();
        angles[1] = cos_j.acos();
        angles[2] = cos_k.acos();
        Ok((angles, false))
    }

    /// Greedy packing probe: for every center x and radius r in the grid,
    /// grows a maximal r/2-separated subset of the closed ball B(x, r) by a
    /// single index-order sweep. Returns the maximum count over all centers
    /// and radii, a lower bound for the doubling constant.
    pub fn doubling_probe(&self, radius_grid: &[f64]) -> Result<usize> {
        if radius_grid.is_empty() {
            return Err(Error::Domain("empty radius grid".into()));
        }
        let n = self.len();
        let mut best = 0usize;
        for &r in radius_grid {
            for x in 0..n {
                let mut chosen: Vec<usize> = Vec::new();
                for y in 0..n {
                    if self.dist(x, y) <= r
                        && chosen.iter().all(|&c| self.dist(y, c) >= r / 2.0)
                    {
                        chosen.push(y);
                    }
                }
                best = best.max(chosen.len());
            }
        }
        Ok(best)
    }

    /// Faithful file representation (see the space file schema).
    pub fn to_file(&self) -> SpaceFile {
        let mut file = SpaceFile {
            name: self.name.clone(),
            kind: String::new(),
            points: Some(self.labels.clone()),
            matrix: None,
            coords: None,
            alpha: None,
            base: None,
            family: None,
            params: None,
        };
        match &self.source {
            Source::Matrix => {
                file.kind = "matrix".into();
                file.matrix = Some(self.matrix.clone());
            }
            Source::Coords { coords, norm } => {
                file.kind = match norm {
                    Norm::Euclidean => "euclidean".into(),
                    Norm::Taxicab => "taxicab".into(),
                };
                file.coords = Some(coords.clone());
            }
            Source::Snowflake { base, alpha } => {
                file.kind = "snowflake".into();
                file.alpha = Some(*alpha);
                file.base = Some(Box::new(base.to_file()));
            }
        }
        file
    }
}

/// Which metric axiom a violation concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Identity,
    Symmetry,
    Positivity,
    Triangle,
}

/// One reported violation: the offending indices plus the signed residual of
/// the failed inequality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Violation {
    pub check: Check,
    pub indices: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub violations: Vec<Violation>,
}

/// On-disk space description:
/// `{"name", "kind": "matrix"|"euclidean"|"taxicab"|"snowflake"|"construction",
///   "points", "matrix"/"coords"/"alpha"+"base"/"family"+"params"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceFile {
    pub name: String,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<Box<SpaceFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

impl SpaceFile {
    /// Materializes the described space.
    pub fn build(&self) -> Result<FiniteMetricSpace> {
        let space = match self.kind.as_str() {
            "matrix" => FiniteMetricSpace::from_matrix(
                self.name.clone(),
                self.points.clone(),
                self.matrix
                    .clone()
                    .ok_or_else(|| Error::Structure("matrix kind without matrix field".into()))?,
            )?,
            "euclidean" | "taxicab" => {
                let norm = if self.kind == "euclidean" {
                    Norm::Euclidean
                } else {
                    Norm::Taxicab
                };
                let coords = self
                    .coords
                    .clone()
                    .ok_or_else(|| Error::Structure("coordinate kind without coords".into()))?;
                let mut s = FiniteMetricSpace::from_points(self.name.clone(), coords, norm)?;
                if let Some(points) = self.points.clone() {
                    s = s.with_labels(points)?;
                }
                s
            }
            "snowflake" => {
                let base = self
                    .base
                    .as_ref()
                    .ok_or_else(|| Error::Structure("snowflake kind without base".into()))?
                    .build()?;
                let alpha = self
                    .alpha
                    .ok_or_else(|| Error::Structure("snowflake kind without alpha".into()))?;
                base.snowflake(alpha)?.rename(self.name.clone())
            }
            "construction" => {
                let family = self
                    .family
                    .as_ref()
                    .ok_or_else(|| Error::Structure("construction kind without family".into()))?;
                let params = self.params.clone().unwrap_or(serde_json::Value::Null);
                crate::constructions::build(family, &params)?.rename(self.name.clone())
            }
            other => {
                return Err(Error::Structure(format!("unknown space kind {other:?}")));
            }
        };
        Ok(space)
    }
}
