//! Ordered finite sets: rough λ-self-contraction and expansion, the medial
//! ordered SRA condition, bounded turning and discrete length.
//!
//! An ordered set is a finite metric space together with a visiting order
//! x_1, ..., x_m. It is rough λ-self-contracting when
//! d(x_2, x_3) ≤ d(x_1, x_3) + λ d(x_1, x_2) for all positions 1 ≤ 2 ≤ 3 in
//! the order, rough λ-self-expanding when the reversed order is contracting,
//! and medial ordered SRA(θ) when d(x_1, x_3) ≤ d(x_1, x_2) + θ d(x_2, x_3).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// A finite metric space with a visiting order (a permutation of its points).
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedSet {
    space: FiniteMetricSpace,
    order: Vec<usize>,
}

impl OrderedSet {
    /// Wraps a space with a visiting order. The order must be a permutation
    /// of the point indices and the visited points must be pairwise distinct
    /// (non-injective fragments are locally constant, hence excluded).
    pub fn new(space: FiniteMetricSpace, order: Vec<usize>) -> Result<Self> {
        let n = space.len();
        if order.len() != n {
            return Err(Error::Structure(format!(
                "order has {} entries for {} points",
                order.len(),
                n
            )));
        }
        let mut seen = vec![false; n];
        for &i in &order {
            if i >= n {
                return Err(Error::Structure(format!("order index {i} out of range")));
            }
            if seen[i] {
                return Err(Error::Structure(format!("order repeats index {i}")));
            }
            seen[i] = true;
        }
        for a in 0..n {
            for b in (a + 1)..n {
                if space.dist(a, b) == 0.0 {
                    return Err(Error::Structure(format!(
                        "duplicate points {a} and {b}: zero distance"
                    )));
                }
            }
        }
        Ok(Self { space, order })
    }

    /// The identity order on a space.
    pub fn identity(space: FiniteMetricSpace) -> Result<Self> {
        let order = (0..space.len()).collect();
        Self::new(space, order)
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Distance between the points at positions `a` and `b` of the order.
    #[inline]
    pub fn pdist(&self, a: usize, b: usize) -> f64 {
        self.space.dist(self.order[a], self.order[b])
    }

    /// The same set visited backwards.
    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        Self {
            space: self.space.clone(),
            order,
        }
    }

    /// Restriction to the given positions (kept in order).
    pub fn select_positions(&self, positions: &[usize]) -> Result<Self> {
        let indices: Vec<usize> = positions.iter().map(|&p| self.order[p]).collect();
        let space = self.space.restrict(&indices)?;
        let order = (0..indices.len()).collect();
        Self::new(space, order)
    }
}

/// Minimal λ such that the set is rough λ-self-contracting: the maximum over
/// positions a < b < c of (d(x_b, x_c) − d(x_a, x_c)) / d(x_a, x_b), floored
/// at −1 (below −1 the condition is vacuous). Fewer than 3 points yield −1.
pub fn lambda_required_contracting(s: &OrderedSet) -> f64 {
    let m = s.len();
    let mut lam = -1.0_f64;
    for a in 0..m {
        for b in (a + 1)..m {
            let dab = s.pdist(a, b);
            for c in (b + 1)..m {
                lam = lam.max((s.pdist(b, c) - s.pdist(a, c)) / dab);
            }
        }
    }
    lam
}

/// Minimal λ such that the set is rough λ-self-expanding; equals the
/// contracting requirement of the reversed order.
pub fn lambda_required_expanding(s: &OrderedSet) -> f64 {
    lambda_required_contracting(&s.reversed())
}

/// Minimal θ for the medial ordered SRA(θ) condition: the maximum over
/// positions a < b < c of (d(x_a, x_c) − d(x_a, x_b)) / d(x_b, x_c).
pub fn medial_theta_required(s: &OrderedSet) -> f64 {
    let m = s.len();
    let mut theta = 0.0_f64;
    for a in 0..m {
        for b in (a + 1)..m {
            for c in (b + 1)..m {
                theta = theta.max((s.pdist(a, c) - s.pdist(a, b)) / s.pdist(b, c));
            }
        }
    }
    theta
}

/// Bounded turning constant: max over order-pairs x ≤ y of the diameter of
/// the visited interval [x, y] divided by d(x, y). Always ≥ 1.
pub fn bounded_turning_constant(s: &OrderedSet) -> f64 {
    let m = s.len();
    let mut best = 1.0_f64;
    for a in 0..m {
        for b in (a + 1)..m {
            let mut diam = 0.0_f64;
            for u in a..=b {
                for v in (u + 1)..=b {
                    diam = diam.max(s.pdist(u, v));
                }
            }
            best = best.max(diam / s.pdist(a, b));
        }
    }
    best
}

/// Turning bound guaranteed by rough λ-self-monotonicity:
/// M_λ = 2(1+λ)/(1−λ) for 0 ≤ λ < 1 and M_λ = 2 for −1 ≤ λ < 0.
pub fn m_lambda(lambda: f64) -> Result<f64> {
    if !(-1.0..1.0).contains(&lambda) {
        return Err(Error::Domain(format!("lambda {lambda} outside [−1, 1)")));
    }
    if lambda < 0.0 {
        Ok(2.0)
    } else {
        Ok(2.0 * (1.0 + lambda) / (1.0 - lambda))
    }
}

/// L(S): the sum of consecutive distances along the order.
pub fn discrete_length(s: &OrderedSet) -> f64 {
    (1..s.len()).map(|k| s.pdist(k - 1, k)).sum()
}

/// D(S): the distance between the first and last points of the order.
pub fn discrete_diameter(s: &OrderedSet) -> f64 {
    if s.len() < 2 {
        0.0
    } else {
        s.pdist(0, s.len() - 1)
    }
}

/// Outcome of [`elementary_combination_check`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CombinationOutcome {
    /// Whether the preconditions (λ-contracting, λ-expanding, medial θ ≤ λ)
    /// hold; when false the check is not performed.
    pub preconditions_met: bool,
    /// Brute-force SRA(λ) confirmation on the underlying space.
    pub sra_holds: Option<bool>,
}

/// An ordered set that is simultaneously rough λ-self-contracting, rough
/// λ-self-expanding and medial ordered SRA(λ) satisfies SRA(λ) as a plain
/// metric space. Verifies the conclusion by brute force; unmet preconditions
/// are reported, not errors.
pub fn elementary_combination_check(s: &OrderedSet, lambda: f64, tol: f64) -> CombinationOutcome {
    let ok = lambda_required_contracting(s) <= lambda + tol
        && lambda_required_expanding(s) <= lambda + tol
        && medial_theta_required(s) <= lambda + tol;
    if !ok {
        return CombinationOutcome {
            preconditions_met: false,
            sra_holds: None,
        };
    }
    let holds = crate::sra::sra_check(s.space(), lambda, tol).0;
    debug_assert!(holds, "combination property violated");
    CombinationOutcome {
        preconditions_met: true,
        sra_holds: Some(holds),
    }
}

/// On-disk ordered set: a space description (inline object) plus the order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrderedSetFile {
    pub space: crate::space::SpaceFile,
    pub order: Vec<usize>,
}

impl OrderedSetFile {
    pub fn build(&self) -> Result<OrderedSet> {
        OrderedSet::new(self.space.build()?, self.order.clone())
    }
}
