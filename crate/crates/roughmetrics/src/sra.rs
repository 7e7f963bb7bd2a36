//! Small rough angles (SRA) quantification and related closed forms.
//!
//! A space satisfies SRA(α) when every triple obeys
//! d(x,y) ≤ max{d(x,z) + α d(z,y), α d(x,z) + d(z,y)}.
//! Since max{A + αB, αA + B} = max(A,B) + α·min(A,B), the minimal feasible α
//! for a single role assignment (x,y | z) with legs A = d(x,z), B = d(z,y) is
//! (d(x,y) − max(A,B)) / min(A,B) clamped at zero, and the required α of a
//! space is the maximum over all role assignments of all triples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

/// Required SRA parameter with the extremal triple, plus an optional
/// per-triple table of kernel values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SraReport {
    /// Minimal α ≥ 0 such that the space satisfies SRA(α).
    pub required_alpha: f64,
    /// (endpoint, endpoint, middle) realizing the maximum, if any triple exists.
    pub argmax_triple: Option<(usize, usize, usize)>,
    /// Per unordered triple (i, j, k): its required α. Populated on request.
    pub per_triple_table: Option<Vec<TripleEntry>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TripleEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub required_alpha: f64,
}

/// Minimal α for the role assignment with endpoints x, y and middle z.
#[inline]
fn role_alpha(dxy: f64, a: f64, b: f64) -> f64 {
    let hi = a.max(b);
    let lo = a.min(b);
    if dxy <= hi {
        return 0.0;
    }
    if lo == 0.0 {
        // d(x,y) > max leg with a zero leg is impossible in a valid metric;
        // surface it as an unbounded requirement rather than panic.
        return f64::INFINITY;
    }
    (dxy - hi) / lo
}

/// Minimal α over the three role assignments of the unordered triple.
pub fn triple_required_alpha(space: &FiniteMetricSpace, i: usize, j: usize, k: usize) -> f64 {
    let (dij, dik, djk) = (space.dist(i, j), space.dist(i, k), space.dist(j, k));
    role_alpha(dij, dik, djk)
        .max(role_alpha(dik, dij, djk))
        .max(role_alpha(djk, dij, dik))
}

fn report(space: &FiniteMetricSpace, with_table: bool) -> Result<SraReport> {
    if space.len() < 2 {
        return Err(Error::Precondition(
            "required-α needs at least two points".into(),
        ));
    }
    let n = space.len();
    let mut best = 0.0_f64;
    let mut argmax: Option<(usize, usize, usize)> = None;
    let mut table = with_table.then(Vec::new);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (dij, dik, djk) = (space.dist(i, j), space.dist(i, k), space.dist(j, k));
                let roles = [
                    (role_alpha(dij, dik, djk), (i, j, k)),
                    (role_alpha(dik, dij, djk), (i, k, j)),
                    (role_alpha(djk, dij, dik), (j, k, i)),
                ];
                let mut local = 0.0_f64;
                for (alpha, triple) in roles {
                    local = local.max(alpha);
                    if alpha > best {
                        best = alpha;
                        argmax = Some(triple);
                    }
                }
                if let Some(t) = table.as_mut() {
                    t.push(TripleEntry {
                        i,
                        j,
                        k,
                        required_alpha: local,
                    });
                }
            }
        }
    }
    Ok(SraReport {
        required_alpha: best,
        argmax_triple: argmax,
        per_triple_table: table,
    })
}

/// Minimal α such that the space satisfies SRA(α), with the extremal triple.
pub fn sra_required_alpha(space: &FiniteMetricSpace) -> Result<SraReport> {
    report(space, false)
}

/// Like [`sra_required_alpha`] but also fills the per-triple table.
pub fn sra_required_alpha_table(space: &FiniteMetricSpace) -> Result<SraReport> {
    report(space, true)
}

/// True iff the space satisfies SRA(α) up to `tol`; on failure returns the
/// first violating role assignment (endpoint, endpoint, middle) in
/// lexicographic triple order.
pub fn sra_check(
    space: &FiniteMetricSpace,
    alpha: f64,
    tol: f64,
) -> (bool, Option<(usize, usize, usize)>) {
    let n = space.len();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let (dij, dik, djk) = (space.dist(i, j), space.dist(i, k), space.dist(j, k));
                for (alpha_req, triple) in [
                    (role_alpha(dij, dik, djk), (i, j, k)),
                    (role_alpha(dik, dij, djk), (i, k, j)),
                    (role_alpha(djk, dij, dik), (j, k, i)),
                ] {
                    if alpha_req > alpha + tol {
                        return (false, Some(triple));
                    }
                }
            }
        }
    }
    (true, None)
}

/// SRA(0), i.e. every triangle is acute isosceles with the two longest sides
/// equal.
pub fn is_ultrametric(space: &FiniteMetricSpace, tol: f64) -> bool {
    sra_check(space, 0.0, tol).0
}

/// SRA parameter guaranteed for any α-snowflake: 2^α − 1, sharp on the
/// arithmetic triple {0, 1, 2}.
pub fn snowflake_sra_parameter(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "snowflake exponent {alpha} outside (0, 1)"
        )));
    }
    Ok(2.0_f64.powf(alpha) - 1.0)
}

/// Per-pair outcome of a uniform non-convexity check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UncPair {
    pub x: usize,
    pub y: usize,
    pub passed: bool,
    /// Feasible λ ∈ (δ, 1−δ), midpoint of the largest uncovered gap.
    pub witness_lambda: Option<f64>,
    /// The blocking λ-intervals, one closed interval per third point.
    pub blocked: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UncReport {
    pub passed: bool,
    pub per_pair: Vec<UncPair>,
}

/// δ-uniform non-convexity: for each pair (x, y) there must exist
/// λ ∈ (δ, 1−δ) such that no z lies in both closed balls
/// B(x, λ·d(x,y) + δ·d(x,y)) and B(y, (1−λ)·d(x,y) + δ·d(x,y)); each z blocks
/// the closed λ-interval [d(x,z)/D − δ, 1 + δ − d(y,z)/D]. The pair passes
/// iff the union of blocked intervals fails to cover the open window
/// (δ, 1−δ); openness is enforced with a 1e−12 strictness margin.
pub fn unc_check(space: &FiniteMetricSpace, delta: f64) -> Result<UncReport> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain(format!("delta {delta} outside (0, 1/2)")));
    }
    const STRICT: f64 = 1e-12;
    let n = space.len();
    let mut per_pair = Vec::new();
    let mut all = true;
    for x in 0..n {
        for y in (x + 1)..n {
            let d = space.dist(x, y);
            let mut blocked: Vec<(f64, f64)> = Vec::new();
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let lo = space.dist(x, z) / d - delta;
                let hi = 1.0 + delta - space.dist(y, z) / d;
                if lo <= hi {
                    blocked.push((lo, hi));
                }
            }
            blocked.sort_by(|a, b| a.partial_cmp(b).unwrap());
            // Sweep the window (δ, 1−δ) and record the largest free gap.
            let (win_lo, win_hi) = (delta, 1.0 - delta);
            let mut cursor = win_lo;
            let mut best_gap = (0.0_f64, f64::NAN); // (length, midpoint)
            for &(lo, hi) in &blocked {
                if lo > cursor {
                    let gap_hi = lo.min(win_hi);
                    if gap_hi - cursor > best_gap.0 {
                        best_gap = (gap_hi - cursor, 0.5 * (cursor + gap_hi));
                    }
                }
                cursor = cursor.max(hi);
                if cursor >= win_hi {
                    break;
                }
            }
            if win_hi > cursor && win_hi - cursor > best_gap.0 {
                best_gap = (win_hi - cursor, 0.5 * (cursor + win_hi));
            }
            let passed = best_gap.0 > STRICT;
            all &= passed;
            per_pair.push(UncPair {
                x,
                y,
                passed,
                witness_lambda: passed.then_some(best_gap.1),
                blocked,
            });
        }
    }
    Ok(UncReport {
        passed: all,
        per_pair,
    })
}

/// δ guaranteed by SRA(α): δ = ½ (1−α)/(1+α). The endpoints α = 0, 1 map to
/// the excluded limits 1/2 and 0.
pub fn unc_delta_from_sra(alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1]")));
    }
    Ok(0.5 * (1.0 - alpha) / (1.0 + alpha))
}

/// Snowflake exponent guaranteed for an SRA(α) space:
/// q(α) = log 2 / log(1 + 2α/(1+α²)). Tends to ∞ as α → 0.
pub fn snowflake_exponent_q(alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1)")));
    }
    if alpha == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(2.0_f64.ln() / (1.0 + 2.0 * alpha / (1.0 + alpha * alpha)).ln())
}

/// Snowflake exponent for a δ-uniformly non-convex space:
/// q(δ) = log 2 / (log 2 − log(1 + 4δ²)).
pub fn tw_exponent_q(delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(Error::Domain(format!("delta {delta} outside (0, 1/2)")));
    }
    let ln2 = 2.0_f64.ln();
    Ok(ln2 / (ln2 - (1.0 + 4.0 * delta * delta).ln()))
}

/// Cardinality window for a full SRA(α) set in R^n: any such set has at least
/// 2^{(π/(π−β))^{n−1}} points realizable and at most 2^{(4π/(π−β))^{n−1}},
/// where β = π − arccos(α). Values beyond double precision saturate to ∞
/// with the flag set.
pub fn ef_bounds(n: usize, alpha: f64) -> Result<EfBounds> {
    if n < 1 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha {alpha} outside [0, 1)")));
    }
    let gap = alpha.acos(); // π − β
    let e = (n - 1) as f64;
    let lower = 2.0_f64.powf((std::f64::consts::PI / gap).powf(e));
    let upper = 2.0_f64.powf((4.0 * std::f64::consts::PI / gap).powf(e));
    Ok(EfBounds {
        lower,
        upper,
        overflowed: lower.is_infinite() || upper.is_infinite(),
    })
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct EfBounds {
    pub lower: f64,
    pub upper: f64,
    /// True when either bound saturated past double precision.
    pub overflowed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteMetricSpace;

    const SQRT2M1: f64 = std::f64::consts::SQRT_2 - 1.0;

    fn line012() -> FiniteMetricSpace {
        FiniteMetricSpace::from_line("arith", &[0.0, 1.0, 2.0]).unwrap()
    }

    fn triple(a: f64, b: f64, c: f64) -> FiniteMetricSpace {
        FiniteMetricSpace::from_matrix(
            "t",
            None,
            vec![
                vec![0.0, a, b],
                vec![a, 0.0, c],
                vec![b, c, 0.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn collinear_equally_spaced_requires_one() {
        let r = sra_required_alpha(&line012()).unwrap();
        assert!((r.required_alpha - 1.0).abs() < 1e-15);
        assert_eq!(r.argmax_triple, Some((0, 2, 1)));
    }

    #[test]
    fn snowflaked_arithmetic_triple_is_sharp() {
        let flake = line012().snowflake(0.5).unwrap();
        let r = sra_required_alpha(&flake).unwrap();
        assert!((r.required_alpha - SQRT2M1).abs() < 1e-12);
    }

    #[test]
    fn right_isosceles_requires_sqrt2_minus_1() {
        let s = 0.5_f64.sqrt();
        let r = sra_required_alpha(&triple(1.0, s, s)).unwrap();
        assert!((r.required_alpha - SQRT2M1).abs() < 1e-12);
    }

    #[test]
    fn check_matches_required_alpha() {
        let flake = line012().snowflake(0.5).unwrap();
        assert!(sra_check(&flake, SQRT2M1, 1e-12).0);
        let (ok, witness) = sra_check(&flake, SQRT2M1 - 1e-6, 1e-12);
        assert!(!ok);
        assert_eq!(witness, Some((0, 2, 1)));
        assert!(sra_check(&flake, 1.0, 0.0).0);
    }

    #[test]
    fn ultrametric_detection() {
        assert!(is_ultrametric(&triple(2.0, 2.0, 1.0), 0.0));
        assert!(!is_ultrametric(&line012(), 1e-9));
        assert!(sra_check(&triple(2.0, 2.0, 1.0), 0.0, 0.0).0);
    }

    #[test]
    fn snowflake_parameter_closed_form() {
        assert!((snowflake_sra_parameter(0.5).unwrap() - 0.4142136).abs() < 1e-7);
        assert!((snowflake_sra_parameter(0.6).unwrap() - 0.5157166).abs() < 1e-7);
        assert!(snowflake_sra_parameter(1.0).is_err());
        assert!((snowflake_sra_parameter(1.0 - 1e-12).unwrap() - 1.0).abs() < 1e-11);
    }

    #[test]
    fn unc_two_point_space_passes_with_midpoint() {
        let pair = FiniteMetricSpace::from_line("pair", &[0.0, 1.0]).unwrap();
        let report = unc_check(&pair, 0.2).unwrap();
        assert!(report.passed);
        assert!((report.per_pair[0].witness_lambda.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn unc_collinear_witness_avoids_center() {
        let space = FiniteMetricSpace::from_line("c", &[0.0, 0.5, 1.0]).unwrap();
        let report = unc_check(&space, 0.1).unwrap();
        assert!(report.passed);
        let endpoints = report
            .per_pair
            .iter()
            .find(|p| p.x == 0 && p.y == 2)
            .unwrap();
        let lam = endpoints.witness_lambda.unwrap();
        assert!(!(0.4..=0.6).contains(&lam), "witness {lam} not outside [0.4, 0.6]");
    }

    #[test]
    fn unc_fails_on_a_dense_line() {
        // 11 equally spaced points: for the endpoint pair, the interior
        // points block all of (δ, 1−δ)
        let xs: Vec<f64> = (0..11).map(|i| i as f64 / 10.0).collect();
        let dense = FiniteMetricSpace::from_line("dense", &xs).unwrap();
        let report = unc_check(&dense, 0.1).unwrap();
        assert!(!report.passed);
        let endpoints = report
            .per_pair
            .iter()
            .find(|p| p.x == 0 && p.y == 10)
            .unwrap();
        assert!(!endpoints.passed);
        assert!(endpoints.witness_lambda.is_none());
    }

    #[test]
    fn unc_delta_closed_form() {
        assert!((unc_delta_from_sra(0.5).unwrap() - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(unc_delta_from_sra(0.0).unwrap(), 0.5);
        assert_eq!(unc_delta_from_sra(1.0).unwrap(), 0.0);
        assert!(unc_delta_from_sra(1.5).is_err());
    }

    #[test]
    fn exponent_identity_at_half() {
        let q = snowflake_exponent_q(0.5).unwrap();
        assert!((q - 1.1793).abs() < 1e-4);
        let q_tw = tw_exponent_q(1.0 / 6.0).unwrap();
        assert!((q_tw - q).abs() < 1e-12);
        assert!(snowflake_exponent_q(0.0).unwrap().is_infinite());
    }

    #[test]
    fn ef_bounds_values() {
        let b = ef_bounds(2, 0.0).unwrap();
        assert_eq!((b.lower, b.upper), (4.0, 256.0));
        let b = ef_bounds(1, 0.7).unwrap();
        assert_eq!((b.lower, b.upper), (2.0, 2.0));
        let b = ef_bounds(3, 0.0).unwrap();
        assert_eq!(b.lower, 16.0);
        assert_eq!(b.upper, 2.0_f64.powi(64));
        assert!(!b.overflowed);
        let b = ef_bounds(9, 0.9).unwrap();
        assert!(b.overflowed && b.upper.is_infinite());
    }
}
