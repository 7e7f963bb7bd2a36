//! Exact maximum-cardinality SRA(α) subset search.
//!
//! SRA feasibility is hereditary (every subset of an SRA(α) set is SRA(α)),
//! so a depth-first branch and bound over lexicographically ordered
//! extensions is exact: a candidate point only needs checking against pairs
//! of already-chosen points, since any new violating triple must contain it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;
use crate::sra::{sra_check, triple_required_alpha};

/// Feasibility tolerance: a triple is admissible iff its required α does not
/// exceed the target by more than this, so exact boundary configurations
/// count as feasible.
const FEAS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub cardinality: usize,
    /// Lexicographically smallest optimal subset (point indices, ascending).
    pub subset: Vec<usize>,
    pub nodes_explored: u64,
    /// False iff the node budget ran out; the subset is then only an incumbent.
    pub proved_optimal: bool,
}

struct Dfs<'a> {
    space: &'a FiniteMetricSpace,
    alpha: f64,
    budget: u64,
    nodes: u64,
    exhausted: bool,
    best: Vec<usize>,
}

impl Dfs<'_> {
    fn feasible_extension(&self, chosen: &[usize], c: usize) -> bool {
        for (idx, &a) in chosen.iter().enumerate() {
            for &b in &chosen[idx + 1..] {
                if triple_required_alpha(self.space, a, b, c) > self.alpha + FEAS_TOL {
                    return false;
                }
            }
        }
        true
    }

    fn explore(&mut self, chosen: &mut Vec<usize>, start: usize) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.exhausted = true;
            return;
        }
        if chosen.len() > self.best.len() {
            self.best = chosen.clone();
        }
        let n = self.space.len();
        for c in start..n {
            // remaining points cannot beat the incumbent
            if chosen.len() + (n - c) <= self.best.len() {
                break;
            }
            if self.feasible_extension(chosen, c) {
                chosen.push(c);
                self.explore(chosen, c + 1);
                chosen.pop();
                if self.exhausted {
                    return;
                }
            }
        }
    }
}

fn thread_count() -> usize {
    std::env::var("ROUGHMETRICS_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or(1)
}

/// Largest subset satisfying SRA(α), by branch and bound. Deterministic: the
/// lexicographically smallest optimal subset is returned. When the node
/// budget runs out, the best incumbent is returned with
/// `proved_optimal = false`. Root branches are distributed over up to
/// `ROUGHMETRICS_THREADS` workers (default 1), each with an equal budget
/// share, and merged by (cardinality, lexicographic) order, so the result
/// does not depend on scheduling.
pub fn max_sra_subset(space: &FiniteMetricSpace, alpha: f64, budget: u64) -> Result<SearchResult> {
    if alpha < 0.0 {
        return Err(Error::Domain(format!("alpha {alpha} negative")));
    }
    let n = space.len();
    if n <= 2 {
        return Ok(SearchResult {
            cardinality: n,
            subset: (0..n).collect(),
            nodes_explored: 1,
            proved_optimal: true,
        });
    }
    let threads = thread_count().min(n);
    if threads == 1 {
        let mut dfs = Dfs {
            space,
            alpha,
            budget,
            nodes: 0,
            exhausted: false,
            best: Vec::new(),
        };
        dfs.explore(&mut Vec::new(), 0);
        return Ok(SearchResult {
            cardinality: dfs.best.len(),
            subset: dfs.best,
            nodes_explored: dfs.nodes,
            proved_optimal: !dfs.exhausted,
        });
    }
    // one subtree per first element, distributed round-robin
    let share = (budget / threads as u64).max(1);
    let results: Vec<(Vec<usize>, u64, bool)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| {
                scope.spawn(move || {
                    let mut dfs = Dfs {
                        space,
                        alpha,
                        budget: share,
                        nodes: 0,
                        exhausted: false,
                        best: Vec::new(),
                    };
                    let mut root_exhausted = false;
                    for root in (t..n).step_by(threads) {
                        let mut chosen = vec![root];
                        dfs.explore(&mut chosen, root + 1);
                        if dfs.exhausted {
                            root_exhausted = true;
                            break;
                        }
                    }
                    (dfs.best, dfs.nodes, root_exhausted)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0;
    let mut exhausted = false;
    for (subset, n_nodes, ex) in results {
        nodes += n_nodes;
        exhausted |= ex;
        if subset.len() > best.len() || (subset.len() == best.len() && subset < best) {
            best = subset;
        }
    }
    Ok(SearchResult {
        cardinality: best.len(),
        subset: best,
        nodes_explored: nodes,
        proved_optimal: !exhausted,
    })
}

/// Exhaustive enumeration over all subsets; reference oracle for small n.
pub fn max_sra_subset_exhaustive(space: &FiniteMetricSpace, alpha: f64) -> Result<SearchResult> {
    let n = space.len();
    if n > 24 {
        return Err(Error::Budget(format!(
            "exhaustive enumeration limited to 24 points, got {n}"
        )));
    }
    let mut best: Vec<usize> = Vec::new();
    let mut nodes = 0u64;
    for mask in 0u32..(1u32 << n) {
        nodes += 1;
        if (mask.count_ones() as usize) <= best.len() {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        let restricted = space.restrict(&subset)?;
        if restricted.len() < 3 || sra_check(&restricted, alpha, FEAS_TOL).0 {
            best = subset;
        }
    }
    Ok(SearchResult {
        cardinality: best.len(),
        subset: best,
        nodes_explored: nodes,
        proved_optimal: true,
    })
}

/// Maximum SRA(α) cardinality across a size-indexed family of spaces.
/// Finite evidence only: it cannot certify SRA fullness.
pub fn sra_growth_profile<F>(
    generator: F,
    alpha: f64,
    sizes: &[usize],
    budget: u64,
) -> Result<Vec<(usize, SearchResult)>>
where
    F: Fn(usize) -> Result<FiniteMetricSpace>,
{
    let mut table = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let space = generator(size)?;
        table.push((size, max_sra_subset(&space, alpha, budget)?));
    }
    Ok(table)
}

/// Whether the whole α-snowflake of the space satisfies SRA(2^α − 1); this is
/// the finite mechanism forcing bounded SRA cardinality of snowflaked sets
/// inside SRA-free hosts. Always true for valid metrics.
pub fn snowflake_embeddability_cardinality_check(
    space: &FiniteMetricSpace,
    alpha: f64,
) -> Result<bool> {
    let flake = space.snowflake(alpha)?;
    let target = 2.0_f64.powf(alpha) - 1.0;
    Ok(sra_check(&flake, target, FEAS_TOL).0)
}
