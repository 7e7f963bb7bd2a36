//! Constructive machinery for rough self-monotone ordered sets: derived
//! constants, the index-walk iteration that either finds a medial ordered
//! SRA(θ) subset or certifies L(S) ≤ C·D(S), the per-step weighted-sum
//! inequality, the red/blue triple coloring with monochromatic clique search,
//! the short-prefix index bound, and the end-to-end extraction of a verified
//! SRA(α) subset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordered::{
    bounded_turning_constant, lambda_required_contracting, lambda_required_expanding,
    medial_theta_required, OrderedSet,
};
use crate::sra::sra_check;

/// Strictness tolerance for medial violations inside the iteration.
const MEDIAL_TOL: f64 = 1e-12;

/// Closed-form constants attached to a medial parameter θ and subset size m,
/// optionally specialized to a target SRA parameter α.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantsBundle {
    pub theta: f64,
    pub m: usize,
    /// Weighting factor ρ = 3m(m+1)/θ.
    pub rho: f64,
    /// C₁ = (ρ^{m−1} − 1)/(ρ − 1).
    pub c1: f64,
    /// λ₁ = 1/(2m·C₁), the self-expansion threshold of the step inequality.
    pub lambda1: f64,
    /// C = 12(m(m−1)/2 · ρ^{m−2} + m), the length-versus-diameter constant.
    pub big_c: f64,
    /// M* = (1+α)/(1−α/2); requires α.
    pub m_star: Option<f64>,
    /// Short-prefix size p of the index bound; requires α.
    pub p: Option<usize>,
    /// Informational 3-uniform Ramsey bound exp(c·m^{p−2} log m) with c = 1.
    pub ramsey_bound: Option<f64>,
    /// λ₀ = min((2α−1)/3 − 1e−12, λ₁); requires α.
    pub lambda0: Option<f64>,
}

/// Evaluates the constant bundle. The geometric constants (ρ, C₁, λ₁, C)
/// depend only on (θ, m); passing α additionally fills M*, p, λ₀ and the
/// Ramsey bound, enforcing the premise α > (1 − 1/M*)(1+θ)/(1−θ).
pub fn constants(theta: f64, m: usize, alpha: Option<f64>) -> Result<ConstantsBundle> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(Error::Domain(format!("theta {theta} outside (0, 1)")));
    }
    if m < 3 {
        return Err(Error::Domain(format!("m = {m} must be at least 3")));
    }
    let mf = m as f64;
    let rho = 3.0 * mf * (mf + 1.0) / theta;
    let c1 = (rho.powi(m as i32 - 1) - 1.0) / (rho - 1.0);
    let lambda1 = 1.0 / (2.0 * mf * c1);
    let big_c = 12.0 * (mf * (mf - 1.0) / 2.0 * rho.powi(m as i32 - 2) + mf);
    let (mut m_star, mut p, mut ramsey, mut lambda0) = (None, None, None, None);
    if let Some(alpha) = alpha {
        if !(0.5 < alpha && alpha < 1.0) {
            return Err(Error::Domain(format!("alpha {alpha} outside (1/2, 1)")));
        }
        let ms = (1.0 + alpha) / (1.0 - alpha / 2.0);
        let pv = witness_prefix_length(theta, ms, alpha)?;
        m_star = Some(ms);
        p = Some(pv);
        ramsey = ramsey_upper_bound(pv.max(3), m.max(3), 1.0).ok();
        lambda0 = Some(((2.0 * alpha - 1.0) / 3.0 - 1e-12).min(lambda1));
    }
    Ok(ConstantsBundle {
        theta,
        m,
        rho,
        c1,
        lambda1,
        big_c,
        m_star,
        p,
        ramsey_bound: ramsey,
        lambda0,
    })
}

/// Medial parameter chosen from α as the midpoint of the feasible interval:
/// with r = α/(1 − 1/M*), θ = ½·(r−1)/(r+1). The premise
/// α > (1 − 1/M*)(1+θ)/(1−θ) then holds strictly.
pub fn theta_from_alpha(alpha: f64) -> Result<f64> {
    if !(0.5 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (1/2, 1)")));
    }
    let m_star = (1.0 + alpha) / (1.0 - alpha / 2.0);
    let r = alpha / (1.0 - 1.0 / m_star);
    debug_assert!(r > 1.0);
    Ok(0.5 * (r - 1.0) / (r + 1.0))
}

/// Short-prefix size for the index bound: the least integer strictly above
/// 2 + (−log(1 − (1+θ)/(1−θ)·(1 − 1/M)/α)) / log(2/(1−θ)), valid under the
/// premise α > (1 − 1/M)(1+θ)/(1−θ).
pub fn witness_prefix_length(theta: f64, m_big: f64, alpha: f64) -> Result<usize> {
    if !(0.0 < theta && theta < 1.0) {
        return Err(Error::Domain(format!("theta {theta} outside (0, 1)")));
    }
    let ratio = (1.0 + theta) / (1.0 - theta) * (1.0 - 1.0 / m_big);
    if alpha <= ratio {
        return Err(Error::Domain(format!(
            "premise alpha > (1 - 1/M)(1+theta)/(1-theta) fails: {alpha} <= {ratio}"
        )));
    }
    let bound = 2.0 + (-(1.0 - ratio / alpha).ln()) / (2.0 / (1.0 - theta)).ln();
    Ok(bound.floor() as usize + 1)
}

/// Informational 3-uniform Ramsey upper bound exp(c·K^{p−2} log K); may
/// saturate to ∞.
pub fn ramsey_upper_bound(p: usize, k: usize, c: f64) -> Result<f64> {
    if p < 3 || k < 3 || c <= 0.0 {
        return Err(Error::Domain(format!(
            "need p >= 3, K >= 3, c > 0, got p={p}, K={k}, c={c}"
        )));
    }
    let kf = k as f64;
    Ok((c * kf.powi(p as i32 - 2) * kf.ln()).exp())
}

/// Weighted pair sum 𝒮 = Σ_{1≤a<b≤m} ρ^{m−1−a} d(x_{p_a}, x_{p_b}) over an
/// m-subset P of order positions (strictly increasing).
pub fn weighted_sum(s: &OrderedSet, p_set: &[usize], rho: f64) -> Result<f64> {
    if p_set.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Structure("positions must be strictly increasing".into()));
    }
    if p_set.iter().any(|&p| p >= s.len()) {
        return Err(Error::Structure("position out of range".into()));
    }
    let m = p_set.len();
    if m < 2 {
        return Ok(0.0);
    }
    let mut total = 0.0;
    for a in 0..m {
        let weight = rho.powi((m - 2 - a) as i32); // exponent m−1−a, 1-based a
        for b in (a + 1)..m {
            total += weight * s.pdist(p_set[a], p_set[b]);
        }
        if a == m - 2 {
            break; // last a with nonempty b-range
        }
    }
    Ok(total)
}

/// One recorded state of the index walk: the current m-subset (order
/// positions), its weighted sum, and the selected medial violation if the
/// walk advanced from here.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessStep {
    pub p_set: Vec<usize>,
    pub weighted_sum: f64,
    /// Violating positions (i, j, k) maximizing d(x_i,x_k) − d(x_i,x_j) − θ d(x_j,x_k).
    pub violation: Option<(usize, usize, usize)>,
    /// Number of removed positions #(P ∩ [j, k)), also the shift of p_m.
    pub d_t: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkOutcome {
    /// The subset at step `step` (1-based) satisfies the medial condition.
    MedialSubset { step: usize, subset: Vec<usize> },
    /// The walk ran past the end of the order (Case 1) at step `step`.
    Terminated { step: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessTrace {
    pub theta: f64,
    pub m: usize,
    pub rho: f64,
    pub steps: Vec<WitnessStep>,
    pub outcome: WalkOutcome,
}

/// The index walk: start from the first m positions; while the current
/// subset violates the medial ordered SRA(θ) condition, pick the violation
/// (i, j, k) with maximal residual (lexicographic ties), drop the positions
/// in [j, k) and append the next d_t unused positions; stop when the order
/// is exhausted (Case 1) or a medial subset is found. Sequential by nature.
pub fn index_walk(s: &OrderedSet, theta: f64, m: usize) -> Result<WitnessTrace> {
    let n = s.len();
    if n < m {
        return Err(Error::Precondition(format!(
            "need at least m = {m} points, got {n}"
        )));
    }
    if m < 3 {
        return Err(Error::Domain(format!("m = {m} must be at least 3")));
    }
    let rho = 3.0 * (m as f64) * (m as f64 + 1.0) / theta;
    let mut p_set: Vec<usize> = (0..m).collect();
    let mut steps: Vec<WitnessStep> = Vec::new();
    loop {
        let step_no = steps.len() + 1;
        let wsum = weighted_sum(s, &p_set, rho)?;
        // worst medial violation over position triples of the subset
        let mut worst: Option<((usize, usize, usize), f64)> = None;
        for a in 0..m {
            for b in (a + 1)..m {
                for c in (b + 1)..m {
                    let (i, j, k) = (p_set[a], p_set[b], p_set[c]);
                    let r = s.pdist(i, k) - s.pdist(i, j) - theta * s.pdist(j, k);
                    if r > MEDIAL_TOL && worst.map_or(true, |(_, best)| r > best) {
                        worst = Some(((i, j, k), r));
                    }
                }
            }
        }
        let Some(((i, j, k), _)) = worst else {
            steps.push(WitnessStep {
                p_set: p_set.clone(),
                weighted_sum: wsum,
                violation: None,
                d_t: None,
            });
            return Ok(WitnessTrace {
                theta,
                m,
                rho,
                steps,
                outcome: WalkOutcome::MedialSubset {
                    step: step_no,
                    subset: p_set,
                },
            });
        };
        let d_t = p_set.iter().filter(|&&p| j <= p && p < k).count();
        let p_m = *p_set.last().unwrap();
        steps.push(WitnessStep {
            p_set: p_set.clone(),
            weighted_sum: wsum,
            violation: Some((i, j, k)),
            d_t: Some(d_t),
        });
        if p_m + d_t > n - 1 {
            return Ok(WitnessTrace {
                theta,
                m,
                rho,
                steps,
                outcome: WalkOutcome::Terminated { step: step_no },
            });
        }
        p_set.retain(|&p| !(j <= p && p < k));
        p_set.extend(p_m + 1..=p_m + d_t);
        debug_assert_eq!(p_set.len(), m);
    }
}

/// Per-step verdict of the weighted-sum inequality.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepCheck {
    pub step: usize,
    pub holds: bool,
    /// RHS − LHS; nonnegative (up to tolerance) when the inequality holds.
    pub residual: f64,
}

/// Checks, at every executed advance of the trace, the step inequality
/// 𝒮^t ≤ 𝒮^{t+1} − Σ_{u=p_m^t}^{p_m^{t+1}−1} d(x_u, x_{u+1})
///        + C₁ λ Σ_b d(x_{p_b^t}, x_{p_b^{t+1}}),
/// which drives the length bound for rough λ-self-expanding sets. Requires
/// lambda_required_expanding(S) ≤ λ.
pub fn walk_step_check(
    trace: &WitnessTrace,
    s: &OrderedSet,
    lambda: f64,
    tol: f64,
) -> Result<Vec<StepCheck>> {
    let required = lambda_required_expanding(s);
    if required > lambda {
        return Err(Error::Precondition(format!(
            "set is not rough {lambda}-self-expanding (required {required})"
        )));
    }
    let bundle = constants(trace.theta, trace.m, None)?;
    let mut checks = Vec::new();
    for (t, pair) in trace.steps.windows(2).enumerate() {
        let (cur, next) = (&pair[0], &pair[1]);
        let pm_cur = *cur.p_set.last().unwrap();
        let pm_next = *next.p_set.last().unwrap();
        let walked: f64 = (pm_cur..pm_next).map(|u| s.pdist(u, u + 1)).sum();
        let moved: f64 = cur
            .p_set
            .iter()
            .zip(&next.p_set)
            .map(|(&a, &b)| s.pdist(a, b))
            .sum();
        let rhs = next.weighted_sum - walked + bundle.c1 * lambda * moved;
        let residual = rhs - cur.weighted_sum;
        checks.push(StepCheck {
            step: t + 1,
            holds: residual >= -tol,
            residual,
        });
    }
    Ok(checks)
}

/// 2-coloring of the ordered position triples of an ordered set: a triple
/// i < j < k is red when d(x_j, x_k) ≤ d(x_i, x_k) + α d(x_i, x_j) and blue
/// otherwise; equality boundaries are red, preserving the contracting
/// conclusion of the red case.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleColoring {
    pub n: usize,
    pub alpha: f64,
    /// Red flags in lexicographic (i, j, k) order.
    red: Vec<bool>,
}

impl TripleColoring {
    fn index(&self, i: usize, j: usize, k: usize) -> usize {
        // rank of (i, j, k), i < j < k, in lexicographic order
        let n = self.n;
        let c3 = |x: usize| x * (x.saturating_sub(1)) * (x.saturating_sub(2)) / 6;
        let c2 = |x: usize| x * (x.saturating_sub(1)) / 2;
        c3(n) - c3(n - i) + c2(n - i - 1) - c2(n - j) + (k - j - 1)
    }

    pub fn is_red(&self, i: usize, j: usize, k: usize) -> bool {
        self.red[self.index(i, j, k)]
    }

    pub fn red_fraction(&self) -> f64 {
        if self.red.is_empty() {
            return 1.0;
        }
        self.red.iter().filter(|r| **r).count() as f64 / self.red.len() as f64
    }
}

pub fn color_triples(s: &OrderedSet, alpha: f64) -> Result<TripleColoring> {
    let n = s.len();
    if n < 3 {
        return Err(Error::Precondition("need at least three points".into()));
    }
    let mut red = Vec::with_capacity(n * (n - 1) * (n - 2) / 6);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                red.push(s.pdist(j, k) <= s.pdist(i, k) + alpha * s.pdist(i, j));
            }
        }
    }
    Ok(TripleColoring { n, alpha, red })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CliqueOutcome {
    /// Positions forming an all-red K-subset.
    Red(Vec<usize>),
    /// Positions forming an all-blue p-subset.
    Blue(Vec<usize>),
    /// Neither exists among the explored nodes (definitive when not budgeted out).
    Neither { budget_exhausted: bool },
}

fn mono_clique_dfs(
    coloring: &TripleColoring,
    want_red: bool,
    size: usize,
    chosen: &mut Vec<usize>,
    start: usize,
    budget: &mut u64,
) -> Option<Vec<usize>> {
    if chosen.len() == size {
        return Some(chosen.clone());
    }
    for c in start..coloring.n {
        if chosen.len() + (coloring.n - c) < size {
            break;
        }
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        let ok = chosen.iter().enumerate().all(|(ai, &a)| {
            chosen[ai + 1..]
                .iter()
                .all(|&b| coloring.is_red(a, b, c) == want_red)
        });
        if ok {
            chosen.push(c);
            if let Some(found) = mono_clique_dfs(coloring, want_red, size, chosen, c + 1, budget) {
                return Some(found);
            }
            chosen.pop();
        }
    }
    None
}

/// Searches for an all-red K-subset, then an all-blue p-subset, by
/// lexicographic backtracking (monochromatic subsets are hereditary).
pub fn mono_clique_search(
    coloring: &TripleColoring,
    k: usize,
    p: usize,
    budget: u64,
) -> CliqueOutcome {
    let mut budget_red = budget;
    if let Some(found) =
        mono_clique_dfs(coloring, true, k, &mut Vec::new(), 0, &mut budget_red)
    {
        return CliqueOutcome::Red(found);
    }
    let mut budget_blue = budget;
    if let Some(found) =
        mono_clique_dfs(coloring, false, p, &mut Vec::new(), 0, &mut budget_blue)
    {
        return CliqueOutcome::Blue(found);
    }
    CliqueOutcome::Neither {
        budget_exhausted: budget_red == 0 || budget_blue == 0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WitnessIndexOutcome {
    /// 1-based index i < p−1 with d(z_{i+1}, z_p) < d(z_i, z_p) + α d(z_i, z_{i+1}).
    WitnessIndex(usize),
    /// The set is smaller than p; nothing is guaranteed.
    TooSmall { size: usize, p: usize },
    /// Premises hold and |Z| ≥ p yet no index exists: a falsification artifact.
    NoIndexFound,
}

/// The short-prefix index bound: an M-bounded-turning, medial ordered SRA(θ)
/// set of size ≥ p must contain an index i, 1 ≤ i < p−1, with
/// d(z_{i+1}, z_p) < d(z_i, z_p) + α d(z_i, z_{i+1}), provided
/// α > (1 − 1/M)(1+θ)/(1−θ).
pub fn witness_index_check(z: &OrderedSet, theta: f64, m_big: f64, alpha: f64) -> Result<WitnessIndexOutcome> {
    let p = witness_prefix_length(theta, m_big, alpha)?;
    let turning = bounded_turning_constant(z);
    if turning > m_big + 1e-9 {
        return Err(Error::Precondition(format!(
            "turning constant {turning} exceeds M = {m_big}"
        )));
    }
    let medial = medial_theta_required(z);
    if medial > theta + 1e-9 {
        return Err(Error::Precondition(format!(
            "medial requirement {medial} exceeds theta = {theta}"
        )));
    }
    if z.len() < p {
        return Ok(WitnessIndexOutcome::TooSmall { size: z.len(), p });
    }
    let last = p - 1; // 0-based position of z_p
    for i in 1..(p - 1) {
        // 1-based i, 0-based positions i−1 and i
        if z.pdist(i, last) < z.pdist(i - 1, last) + alpha * z.pdist(i - 1, i) {
            return Ok(WitnessIndexOutcome::WitnessIndex(i));
        }
    }
    Ok(WitnessIndexOutcome::NoIndexFound)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ExtractOutcome {
    /// Point indices (into the underlying space) of a verified SRA(α) subset.
    Certified {
        subset: Vec<usize>,
        theta: f64,
        required_alpha: f64,
    },
    /// An all-blue subset survived; it contradicts the index bound unless the
    /// re-check also fails, in which case `falsification` is set.
    BlueClique {
        subset: Vec<usize>,
        index_check: WitnessIndexOutcome,
        falsification: bool,
    },
    /// A pipeline stage ran out of material; names the stage.
    Exhausted { stage: String },
}

/// End-to-end extraction of a K-point SRA(α) subset from a rough
/// self-monotone ordered set: choose θ from α, derive the constants, walk the
/// index iteration with m = max(K, p) to a medial subset, color its triples
/// and search for a red K-clique (certified by brute force) or a blue
/// p-clique (re-checked against the index bound). Contracting inputs are
/// reversed first; the self-expansion requirement λ ≤ λ₀ is enforced.
pub fn extract_sra_subset(
    s: &OrderedSet,
    alpha: f64,
    k: usize,
    budget: u64,
) -> Result<ExtractOutcome> {
    if k < 2 {
        return Err(Error::Domain(format!("K = {k} must be at least 2")));
    }
    let theta = theta_from_alpha(alpha)?;
    let m_star = (1.0 + alpha) / (1.0 - alpha / 2.0);
    let p = witness_prefix_length(theta, m_star, alpha)?;
    let m = k.max(p).max(3);
    let bundle = constants(theta, m, Some(alpha))?;
    let lambda0 = bundle.lambda0.unwrap();
    let expanding = lambda_required_expanding(s);
    let oriented;
    let set = if expanding <= lambda0 {
        s
    } else {
        let contracting = lambda_required_contracting(s);
        if contracting <= lambda0 {
            oriented = s.reversed();
            &oriented
        } else {
            return Err(Error::Precondition(format!(
                "set is neither rough {lambda0}-self-expanding (required {expanding}) \
                 nor -contracting (required {contracting})"
            )));
        }
    };
    if set.len() < m {
        return Ok(ExtractOutcome::Exhausted {
            stage: format!("need {m} points for the index walk, have {}", set.len()),
        });
    }
    let trace = index_walk(set, theta, m)?;
    let medial_positions = match trace.outcome {
        WalkOutcome::MedialSubset { subset, .. } => subset,
        WalkOutcome::Terminated { step } => {
            return Ok(ExtractOutcome::Exhausted {
                stage: format!("medial subset search: index walk terminated at step {step}"),
            });
        }
    };
    let medial = set.select_positions(&medial_positions)?;
    let coloring = color_triples(&medial, alpha)?;
    match mono_clique_search(&coloring, k, p, budget) {
        CliqueOutcome::Red(positions) => {
            let indices: Vec<usize> = positions
                .iter()
                .map(|&q| set.order()[medial_positions[q]])
                .collect();
            let restricted = set.space().restrict(&indices)?;
            let report = crate::sra::sra_required_alpha(&restricted)?;
            debug_assert!(sra_check(&restricted, alpha, MEDIAL_TOL).0);
            Ok(ExtractOutcome::Certified {
                subset: indices,
                theta,
                required_alpha: report.required_alpha,
            })
        }
        CliqueOutcome::Blue(positions) => {
            let blue = medial.select_positions(&positions)?;
            let index_check = witness_index_check(&blue, theta, m_star, alpha)?;
            let falsification = index_check == WitnessIndexOutcome::NoIndexFound;
            let indices = positions
                .iter()
                .map(|&q| set.order()[medial_positions[q]])
                .collect();
            Ok(ExtractOutcome::BlueClique {
                subset: indices,
                index_check,
                falsification,
            })
        }
        CliqueOutcome::Neither { budget_exhausted } => {
            if budget_exhausted {
                Err(Error::Budget(
                    "monochromatic clique search budget exhausted".into(),
                ))
            } else {
                Ok(ExtractOutcome::Exhausted {
                    stage: "monochromatic clique search: neither color present".into(),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteMetricSpace;

    fn spiral(points: usize, b: f64, phi: f64) -> OrderedSet {
        // inward logarithmic spiral r = e^{−bθ}, sampled at angles kφ
        let coords: Vec<Vec<f64>> = (0..points)
            .map(|k| {
                let t = k as f64 * phi;
                let r = (-b * t).exp();
                vec![r * t.cos(), r * t.sin()]
            })
            .collect();
        let space =
            FiniteMetricSpace::from_points("spiral", coords, crate::space::Norm::Euclidean)
                .unwrap();
        OrderedSet::identity(space).unwrap()
    }

    fn equilateral(n: usize) -> OrderedSet {
        let mut matrix = vec![vec![1.0; n]; n];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        OrderedSet::identity(FiniteMetricSpace::from_matrix("eq", None, matrix).unwrap()).unwrap()
    }

    #[test]
    fn constants_golden_values() {
        let b = constants(0.8, 3, None).unwrap();
        assert_eq!(b.rho, 45.0);
        assert_eq!(b.c1, 46.0);
        assert!((b.lambda1 - 1.0 / 276.0).abs() < 1e-18);
        assert_eq!(b.big_c, 1656.0);
        assert!(b.p.is_none());
        assert!(constants(0.8, 2, None).is_err());
        assert!(constants(1.2, 3, None).is_err());
    }

    #[test]
    fn constants_with_alpha() {
        let theta = theta_from_alpha(0.8).unwrap();
        let b = constants(theta, 4, Some(0.8)).unwrap();
        assert!((b.m_star.unwrap() - 3.0).abs() < 1e-15);
        let lambda0 = b.lambda0.unwrap();
        assert!(lambda0 <= (2.0 * 0.8 - 1.0) / 3.0);
        assert!(lambda0 <= b.lambda1);
        // infeasible premise
        assert!(constants(0.8, 3, Some(0.9)).is_err());
    }

    #[test]
    fn theta_choice() {
        let theta = theta_from_alpha(0.8).unwrap();
        assert!((theta - 1.0 / 22.0).abs() < 1e-15);
        // premise strict at the chosen theta
        let lhs = (1.0 - 1.0 / 3.0) * (1.0 + theta) / (1.0 - theta);
        assert!(0.8 > lhs);
        assert!(theta_from_alpha(0.4).is_err());
        assert!(theta_from_alpha(0.5001).unwrap() < 0.01);
    }

    #[test]
    fn p_golden_value() {
        assert_eq!(witness_prefix_length(0.1, 3.0, 0.9).unwrap(), 5);
        assert!(witness_prefix_length(0.8, 3.0, 0.9).is_err());
    }

    #[test]
    fn ramsey_bound_values() {
        assert!((ramsey_upper_bound(3, 4, 1.0).unwrap() - 256.0).abs() < 1e-9);
        assert!((ramsey_upper_bound(4, 3, 1.0).unwrap() - 19683.0).abs() < 1e-6);
        assert!(ramsey_upper_bound(3, 1, 1.0).is_err());
    }

    #[test]
    fn weighted_sum_values() {
        let eq = equilateral(3);
        assert_eq!(weighted_sum(&eq, &[0, 1, 2], 45.0).unwrap(), 91.0);
        let pair = equilateral(2);
        assert_eq!(weighted_sum(&pair, &[0, 1], 45.0).unwrap(), 1.0);
        // scaling linearity
        let line = OrderedSet::identity(
            FiniteMetricSpace::from_line("l", &[0.0, 1.0, 3.0]).unwrap(),
        )
        .unwrap();
        let scaled = OrderedSet::identity(
            FiniteMetricSpace::from_line("l", &[0.0, 2.0, 6.0]).unwrap(),
        )
        .unwrap();
        let (a, b) = (
            weighted_sum(&line, &[0, 1, 2], 10.0).unwrap(),
            weighted_sum(&scaled, &[0, 1, 2], 10.0).unwrap(),
        );
        assert!((b - 2.0 * a).abs() < 1e-12);
        assert!(weighted_sum(&eq, &[0, 0, 1], 45.0).is_err());
    }

    #[test]
    fn walk_stops_immediately_on_medial_input() {
        let eq = equilateral(5);
        let trace = index_walk(&eq, 0.3, 3).unwrap();
        assert_eq!(
            trace.outcome,
            WalkOutcome::MedialSubset {
                step: 1,
                subset: vec![0, 1, 2]
            }
        );
    }

    #[test]
    fn collinear_walk_terminates_with_length_bound() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let s = OrderedSet::identity(FiniteMetricSpace::from_line("c", &xs).unwrap()).unwrap();
        let trace = index_walk(&s, 0.5, 3).unwrap();
        let WalkOutcome::Terminated { step } = trace.outcome else {
            panic!("collinear sets have medial kernel 1 > 0.5");
        };
        // trace invariants
        let t_count = trace.steps.len();
        assert_eq!(step, t_count);
        assert!(step >= (20 - 3 + 1) / (3 + 1));
        for pair in trace.steps.windows(2) {
            for (a, b) in pair[0].p_set.iter().zip(&pair[1].p_set) {
                assert!(b >= a);
            }
            let shift =
                pair[1].p_set.last().unwrap() - pair[0].p_set.last().unwrap();
            assert_eq!(shift, pair[0].d_t.unwrap());
        }
        let p_m_last = *trace.steps.last().unwrap().p_set.last().unwrap();
        assert!(p_m_last + 1 <= 3 * t_count + (t_count - 1));
        // contrapositive: L(S) ≤ C·D(S)
        let bundle = constants(0.5, 3, None).unwrap();
        let l = crate::ordered::discrete_length(&s);
        let d = crate::ordered::discrete_diameter(&s);
        assert!(l <= bundle.big_c * d);
        // geodesic input: the step inequality applies with λ = 0
        let checks = walk_step_check(&trace, &s, 0.0, 1e-9).unwrap();
        assert!(checks.iter().all(|c| c.holds));
    }

    #[test]
    fn spiral_walk_finds_a_medial_subset() {
        let s = spiral(64, 0.1, 0.7).reversed();
        let trace = index_walk(&s, 0.1, 4).unwrap();
        let WalkOutcome::MedialSubset { subset, .. } = &trace.outcome else {
            panic!("expected a medial subset");
        };
        let medial = s.select_positions(subset).unwrap();
        assert!(medial_theta_required(&medial) <= 0.1 + 1e-12);
    }

    #[test]
    fn coloring_basics() {
        let line = OrderedSet::identity(
            FiniteMetricSpace::from_line("l", &[0.0, 1.0, 2.0]).unwrap(),
        )
        .unwrap();
        let coloring = color_triples(&line, 0.8).unwrap();
        assert!(coloring.is_red(0, 1, 2)); // 1 ≤ 2 + 0.8
        assert_eq!(coloring.red_fraction(), 1.0);
        // boundary: d(j,k) = d(i,k) + α d(i,j) exactly → red
        let boundary = OrderedSet::identity(
            FiniteMetricSpace::from_matrix(
                "b",
                None,
                vec![
                    vec![0.0, 1.0, 1.0],
                    vec![1.0, 0.0, 1.8],
                    vec![1.0, 1.8, 0.0],
                ],
            )
            .unwrap(),
        )
        .unwrap();
        assert!(color_triples(&boundary, 0.8).unwrap().is_red(0, 1, 2));
    }

    #[test]
    fn coloring_index_covers_all_triples() {
        let s = spiral(7, 0.2, 1.1);
        let coloring = color_triples(&s, 0.6).unwrap();
        let mut rank = 0;
        for i in 0..7 {
            for j in (i + 1)..7 {
                for k in (j + 1)..7 {
                    assert_eq!(coloring.index(i, j, k), rank);
                    rank += 1;
                }
            }
        }
    }

    #[test]
    fn clique_search_monochromatic_extremes() {
        let eq = equilateral(6); // every triple red at any α ≥ 0
        let coloring = color_triples(&eq, 0.5).unwrap();
        assert_eq!(
            mono_clique_search(&coloring, 4, 3, 1_000_000),
            CliqueOutcome::Red(vec![0, 1, 2, 3])
        );
        // α = −2 colors every collinear triple blue (d(j,k) > d(i,k) − 2d(i,j))
        let line = OrderedSet::identity(
            FiniteMetricSpace::from_line("l", &[0.0, 1.0, 2.0, 3.0]).unwrap(),
        )
        .unwrap();
        let coloring = color_triples(&line, -2.0).unwrap();
        assert_eq!(
            mono_clique_search(&coloring, 4, 3, 1_000_000),
            CliqueOutcome::Blue(vec![0, 1, 2])
        );
    }

    #[test]
    fn witness_index_equilateral_and_small_sets() {
        let eq = equilateral(6);
        let out = witness_index_check(&eq, 0.1, 3.0, 0.9).unwrap();
        assert_eq!(out, WitnessIndexOutcome::WitnessIndex(1));
        let pair = equilateral(2);
        assert_eq!(
            witness_index_check(&pair, 0.1, 3.0, 0.9).unwrap(),
            WitnessIndexOutcome::TooSmall { size: 2, p: 5 }
        );
        // precondition: collinear medial kernel is 1 > θ
        let line = OrderedSet::identity(
            FiniteMetricSpace::from_line("l", &[0.0, 1.0, 2.0]).unwrap(),
        )
        .unwrap();
        assert!(witness_index_check(&line, 0.1, 3.0, 0.9).is_err());
    }

    #[test]
    fn extract_certifies_a_spiral_subset() {
        let s = spiral(128, 0.3, 1.5);
        let out = extract_sra_subset(&s, 0.8, 4, 10_000_000).unwrap();
        let ExtractOutcome::Certified {
            subset,
            required_alpha,
            ..
        } = out
        else {
            panic!("expected a certified subset, got {out:?}");
        };
        assert_eq!(subset.len(), 4);
        assert!(required_alpha <= 0.8 + 1e-12);
    }

    #[test]
    fn extract_diagnoses_collinear_input() {
        let xs: Vec<f64> = (0..64).map(|i| i as f64).collect();
        let s = OrderedSet::identity(FiniteMetricSpace::from_line("c", &xs).unwrap()).unwrap();
        let out = extract_sra_subset(&s, 0.8, 4, 1_000_000).unwrap();
        let ExtractOutcome::Exhausted { stage } = out else {
            panic!("collinear input cannot produce a medial subset, got {out:?}");
        };
        assert!(stage.contains("medial"));
    }

    #[test]
    fn extract_rejects_wild_orders() {
        // shuffled points are neither contracting nor expanding at λ₀
        let xs = [0.0, 5.0, 1.0, 4.0, 2.0, 3.0, 2.5, 4.5, 0.5, 3.5];
        let space = FiniteMetricSpace::from_line("z", &xs).unwrap();
        let s = OrderedSet::identity(space).unwrap();
        assert!(matches!(
            extract_sra_subset(&s, 0.8, 3, 1_000_000),
            Err(Error::Precondition(_))
        ));
    }
}
