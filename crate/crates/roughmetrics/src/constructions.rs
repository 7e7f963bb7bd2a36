//! Builders for the example metric families: geometric SRA sequences,
//! Cantor-set approximations under snowflaked line metrics, Laakso levels,
//! metric trees with ultrametric apex sets, Hilbert-space sequences, the
//! Heisenberg t-axis, triangle families with no q-power-metric structure,
//! dyadic doubling samples and regular simplices with their centers.
//!
//! Every builder returns an ordinary [`FiniteMetricSpace`] whose headline
//! property (SRA parameter, ultrametricity, power-metric failure) can be
//! verified by brute force with the analysis modules.

use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, Norm};

/// Root a ∈ (0,1) of g(x) = (1−x)^α + ε x^α − 1 by bisection.
///
/// g vanishes at 0, rises, and is negative at 1, so the interior root is
/// unique. It satisfies ε = (1 − (1−a)^α)/a^α, the relation tying the common
/// ratio of a geometric SRA(ε) sequence to its parameters.
pub fn solve_root_a(eps: f64, alpha: f64) -> Result<f64> {
    if !(0.0 < eps && eps < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "need 0 < eps < alpha < 1, got eps={eps}, alpha={alpha}"
        )));
    }
    let g = |x: f64| (1.0 - x).powf(alpha) + eps * x.powf(alpha) - 1.0;
    let (mut lo, mut hi) = (1e-15, 1.0 - 1e-15);
    if g(lo) <= 0.0 || g(hi) >= 0.0 {
        return Err(Error::Domain("root bracket failed".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = 0.5 * (lo + hi);
    debug_assert!(g(a).abs() < 1e-12);
    debug_assert!((eps - (1.0 - (1.0 - a).powf(alpha)) / a.powf(alpha)).abs() < 1e-10);
    Ok(a)
}

/// The geometric sequence a, a², ..., a^count on the α-snowflaked line,
/// where a = a(ε, α) is the [`solve_root_a`] root. Satisfies SRA(ε).
pub fn geometric_sra_sequence(eps: f64, alpha: f64, count: usize) -> Result<FiniteMetricSpace> {
    if count < 2 {
        return Err(Error::Domain("count must be at least 2".into()));
    }
    let a = solve_root_a(eps, alpha)?;
    let xs: Vec<f64> = (1..=count).map(|m| a.powi(m as i32)).collect();
    FiniteMetricSpace::from_line(format!("geometric(eps={eps},alpha={alpha})"), &xs)?
        .snowflake(alpha)
}

/// ε′(α, a) = ((1−a)^α − (1−2a)^α) / a^α, the sharp SRA parameter of the
/// self-similar set C_a under the α-snowflaked line metric (a < 1/2).
pub fn eps_prime(alpha: f64, a: f64) -> Result<f64> {
    if !(0.0 < a && a < 0.5 && 0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!(
            "need a in (0, 1/2) and alpha in (0, 1), got a={a}, alpha={alpha}"
        )));
    }
    Ok(((1.0 - a).powf(alpha) - (1.0 - 2.0 * a).powf(alpha)) / a.powf(alpha))
}

/// Endpoints of the level-`level` intervals of the self-similar Cantor set
/// C_a (contractions x ↦ ax and x ↦ 1−a+ax) under |x−y|^α, where
/// a = a(ε, α). Requires ε < 2^α − 1 so that a < 1/2; the space satisfies
/// SRA(ε′) sharply, attained at the triple (0, a, 1−a).
pub fn cantor_approx(alpha: f64, eps: f64, level: u32) -> Result<FiniteMetricSpace> {
    if level > 10 {
        return Err(Error::Domain("level capped at 10".into()));
    }
    if !(0.0 < eps && eps < 2.0_f64.powf(alpha) - 1.0) {
        return Err(Error::Domain(format!(
            "need 0 < eps < 2^alpha - 1 = {}, got {eps}",
            2.0_f64.powf(alpha) - 1.0
        )));
    }
    let a = solve_root_a(eps, alpha)?;
    let mut intervals = vec![(0.0_f64, 1.0_f64)];
    for _ in 0..level {
        let mut next = Vec::with_capacity(intervals.len() * 2);
        for (lo, hi) in intervals {
            let len = hi - lo;
            next.push((lo, lo + a * len));
            next.push((hi - a * len, hi));
        }
        intervals = next;
    }
    let mut xs = Vec::with_capacity(intervals.len() * 2);
    for (lo, hi) in intervals {
        xs.push(lo);
        xs.push(hi);
    }
    FiniteMetricSpace::from_line(format!("cantor(alpha={alpha},eps={eps},level={level})"), &xs)?
        .snowflake(alpha)
}

/// Exact Laakso-level distance numerator: d = num(k) / (3·4^m) with
/// num(0) = 6 and num(k) = 4(4^k − 1) otherwise.
fn laakso_numerator(k: u32) -> u64 {
    if k == 0 {
        6
    } else {
        4 * (4u64.pow(k) - 1)
    }
}

/// The level-m Laakso space F_m: 2^m points indexed by binary words, with
/// d(v, w) = c(k)/4^m where k = m − 1 − (first differing bit position),
/// c(0) = 2 and c(k) = (4/3)(4^k − 1). Distances are computed in exact
/// integers over the common denominator 3·4^m and converted once; the space
/// is ultrametric.
pub fn laakso_level(m: u32) -> Result<FiniteMetricSpace> {
    if !(1..=10).contains(&m) {
        return Err(Error::Domain(format!("laakso level {m} outside 1..=10")));
    }
    let n = 1usize << m;
    let denom = 3.0 * 4.0_f64.powi(m as i32);
    let mut matrix = vec![vec![0.0; n]; n];
    for v in 0..n {
        for w in (v + 1)..n {
            // k = m − 1 − (first differing position from the left), which is
            // the highest set bit of the xor
            let diff = (v ^ w) as u32;
            let k = 31 - diff.leading_zeros();
            let d = laakso_numerator(k) as f64 / denom;
            matrix[v][w] = d;
            matrix[w][v] = d;
        }
    }
    let labels = (0..n)
        .map(|v| format!("{v:0width$b}", width = m as usize))
        .collect();
    FiniteMetricSpace::from_matrix(format!("laakso_F{m}"), Some(labels), matrix)
}

/// Two parallel slices of F_m at abscissae q and q′ = q + diam(F_m):
/// within-slice distances are the Laakso distances, cross-slice distances are
/// max(d_F(v, w), q′ − q), which is constantly diam(F_m). The abscissa
/// defaults to 6/4^m (the documented level-2 value scaled by level).
pub fn laakso_doubled(m: u32, q: Option<f64>) -> Result<FiniteMetricSpace> {
    let base = laakso_level(m)?;
    let n = base.len();
    let q = q.unwrap_or(6.0 / 4.0_f64.powi(m as i32));
    if q <= 0.0 {
        return Err(Error::Domain(format!("abscissa {q} must be positive")));
    }
    let diam = (0..n)
        .flat_map(|v| (0..n).map(move |w| (v, w)))
        .map(|(v, w)| base.dist(v, w))
        .fold(0.0, f64::max);
    let total = 2 * n;
    let mut matrix = vec![vec![0.0; total]; total];
    for v in 0..n {
        for w in 0..n {
            let d = base.dist(v, w);
            matrix[v][w] = d;
            matrix[n + v][n + w] = d;
            let cross = d.max(diam);
            matrix[v][n + w] = cross;
            matrix[n + v][w] = cross;
        }
    }
    let labels = (0..total)
        .map(|i| {
            let (slice, v) = if i < n { (q, i) } else { (q + diam, i - n) };
            format!("{}@{slice}", base.labels()[v])
        })
        .collect();
    FiniteMetricSpace::from_matrix(format!("laakso_F{m}_doubled"), Some(labels), matrix)
}

/// Intrinsic path distance on the metric tree with heights `ts`: a point is
/// (segment, position) with segment 0 the trunk (position = abscissa) and
/// segment i ≥ 1 the vertical line at ts[i−1] (position = height fraction
/// in [0, 1], apex at 1).
pub(crate) fn tree_distance(ts: &[f64], p: (usize, f64), q: (usize, f64)) -> f64 {
    match (p.0, q.0) {
        (0, 0) => (p.1 - q.1).abs(),
        (0, j) => (p.1 - ts[j - 1]).abs() + q.1 * ts[j - 1],
        (i, 0) => (q.1 - ts[i - 1]).abs() + p.1 * ts[i - 1],
        (i, j) if i == j => (p.1 - q.1).abs() * ts[i - 1],
        (i, j) => p.1 * ts[i - 1] + (ts[i - 1] - ts[j - 1]).abs() + q.1 * ts[j - 1],
    }
}

/// A metric tree: a horizontal trunk [0, 1] with a vertical segment of
/// height t_i attached at abscissa t_i for each entry of the strictly
/// decreasing sequence `ts`. Returns the sampled space (trunk plus
/// `samples_per_segment` points per segment, apex included) and the indices
/// of the apexes p_i, which form an ultrametric set with
/// d(p_i, p_j) = 2 t_min(i,j).
pub fn metric_tree(
    ts: &[f64],
    samples_per_segment: usize,
) -> Result<(FiniteMetricSpace, Vec<usize>)> {
    if ts.is_empty() || samples_per_segment == 0 {
        return Err(Error::Domain("need segments and a positive sample count".into()));
    }
    if ts.windows(2).any(|w| w[1] >= w[0]) || ts.iter().any(|t| *t <= 0.0 || *t > 1.0) {
        return Err(Error::Domain(
            "heights must be strictly decreasing in (0, 1]".into(),
        ));
    }
    // Point = (segment, position). Segment 0 is the trunk with abscissa x;
    // segment i ≥ 1 is the vertical line at ts[i−1] with height fraction
    // y ∈ (0, 1], apex at y = 1.
    let s = samples_per_segment;
    let mut points: Vec<(usize, f64)> = Vec::new();
    for k in 0..s {
        points.push((0, (k as f64 + 0.5) / s as f64));
    }
    let mut apexes = Vec::new();
    for i in 1..=ts.len() {
        for k in 1..=s {
            let y = k as f64 / s as f64;
            if y == 1.0 {
                apexes.push(points.len());
            }
            points.push((i, y));
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
    let labels = points
        .iter()
        .map(|(seg, pos)| format!("s{seg}:{pos}"))
        .collect();
    let space = FiniteMetricSpace::from_matrix("metric_tree", Some(labels), matrix)?;
    Ok((space, apexes))
}

/// The sequence x_k = c_k e_k in Hilbert space for a strictly decreasing
/// positive sequence: d(x_k, x_ℓ) = √(c_k² + c_ℓ²). Satisfies SRA(√2 − 1).
pub fn hilbert_sequence(c: &[f64]) -> Result<FiniteMetricSpace> {
    if c.len() < 2 {
        return Err(Error::Domain("need at least two terms".into()));
    }
    if c.iter().any(|v| *v <= 0.0) || c.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Domain(
            "terms must be positive and strictly decreasing".into(),
        ));
    }
    let n = c.len();
    let mut matrix = vec![vec![0.0; n]; n];
    for k in 0..n {
        for l in (k + 1)..n {
            let d = (c[k] * c[k] + c[l] * c[l]).sqrt();
            matrix[k][l] = d;
            matrix[l][k] = d;
        }
    }
    FiniteMetricSpace::from_matrix("hilbert_sequence", None, matrix)
}

/// Sample of the Heisenberg-group t-axis: d(s, t) = c·|s − t|^{1/2}. This is
/// an L²-metric; the scale c defaults to 1 since every derived quantity is
/// scale-invariant.
pub fn heisenberg_axis(ts: &[f64], c: f64) -> Result<FiniteMetricSpace> {
    if c <= 0.0 {
        return Err(Error::Domain(format!("scale {c} must be positive")));
    }
    let n = ts.len();
    let mut matrix = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if ts[i] == ts[j] {
                return Err(Error::Structure(format!("duplicate parameter {}", ts[i])));
            }
            let d = c * (ts[i] - ts[j]).abs().sqrt();
            matrix[i][j] = d;
            matrix[j][i] = d;
        }
    }
    FiniteMetricSpace::from_matrix("heisenberg_axis", None, matrix)
}

/// A disjoint union of triangles with sides (1, δ_m, 1 + βδ_m) at mutual
/// distance 2. The space satisfies SRA(β) for every m, yet for any fixed
/// q > 1 the q-th powers eventually violate the triangle inequality; the
/// returned index is the first 1-based m (if any) with
/// (1 + βδ_m)^q > 1 + δ_m^q.
pub fn no_converse_family(
    beta: f64,
    deltas: &[f64],
    q: f64,
) -> Result<(FiniteMetricSpace, Option<usize>)> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(Error::Domain(format!("beta {beta} outside (0, 1)")));
    }
    if deltas.is_empty()
        || deltas.iter().any(|d| *d <= 0.0 || *d > 1.0)
        || deltas.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::Domain(
            "deltas must be strictly decreasing in (0, 1]".into(),
        ));
    }
    if q <= 1.0 {
        return Err(Error::Domain(format!("power {q} must exceed 1")));
    }
    let m_count = deltas.len();
    let n = 3 * m_count;
    let mut matrix = vec![vec![2.0; n]; n];
    for (m, &delta) in deltas.iter().enumerate() {
        let (x, y, z) = (3 * m, 3 * m + 1, 3 * m + 2);
        matrix[x][x] = 0.0;
        matrix[y][y] = 0.0;
        matrix[z][z] = 0.0;
        matrix[x][y] = 1.0;
        matrix[y][x] = 1.0;
        matrix[y][z] = delta;
        matrix[z][y] = delta;
        matrix[x][z] = 1.0 + beta * delta;
        matrix[z][x] = 1.0 + beta * delta;
    }
    for i in 0..n {
        matrix[i][i] = 0.0;
    }
    let first_violation = deltas
        .iter()
        .position(|&d| (1.0 + beta * d).powf(q) > 1.0 + d.powf(q))
        .map(|i| i + 1);
    let space = FiniteMetricSpace::from_matrix(format!("no_converse(beta={beta})"), None, matrix)?;
    Ok((space, first_violation))
}

/// Sample of the dyadic doubling space [0,1) × ℕ: within level n two points
/// are at |x − y| when they share a dyadic 2^{−n}-interval and otherwise at
/// the dyadic ultrametric distance d_∞(x, y) = 2^{−(common prefix length)};
/// points on different levels m ≠ n are at |m − n|. Abscissae are
/// k/resolution for a power-of-two resolution.
pub fn dyadic_doubling_space(levels: &[u32], resolution: usize) -> Result<FiniteMetricSpace> {
    if levels.is_empty() {
        return Err(Error::Domain("need at least one level".into()));
    }
    if resolution == 0 || !resolution.is_power_of_two() {
        return Err(Error::Domain(format!(
            "resolution {resolution} is not a power of two"
        )));
    }
    let mut pts: Vec<(f64, u32)> = Vec::new();
    for &n in levels {
        for k in 0..resolution {
            pts.push((k as f64 / resolution as f64, n));
        }
    }
    let d_inf = |x: f64, y: f64| -> f64 {
        // 2^{-j} for the largest j with x, y in one dyadic 2^{-j}-interval
        let mut j = 0u32;
        while (x * 2.0_f64.powi(j as i32 + 1)).floor() == (y * 2.0_f64.powi(j as i32 + 1)).floor()
        {
            j += 1;
        }
        2.0_f64.powi(-(j as i32))
    };
    let n_pts = pts.len();
    let mut matrix = vec![vec![0.0; n_pts]; n_pts];
    for a in 0..n_pts {
        for b in (a + 1)..n_pts {
            let ((x, m), (y, n)) = (pts[a], pts[b]);
            let d = if m != n {
                (m as f64 - n as f64).abs()
            } else if (x * 2.0_f64.powi(n as i32)).floor() == (y * 2.0_f64.powi(n as i32)).floor()
            {
                (x - y).abs()
            } else {
                d_inf(x, y)
            };
            matrix[a][b] = d;
            matrix[b][a] = d;
        }
    }
    let labels = pts.iter().map(|(x, n)| format!("{x}@{n}")).collect();
    FiniteMetricSpace::from_matrix("dyadic_doubling", Some(labels), matrix)
}

/// Minimal admissible spread R for [`hilbert_triangles`]: the maximum of the
/// five separation restrictions
/// 1 + 2/α, 1 + 1/√2, 1 + √(1 + 1/(8α²)),
/// (4α² + 1 + α√(16α² + 10)) / (4α² − 2) and
/// (2α² + 1 + α√(4α² + 6)) / (2α² − 1). Defined for α > 1/√2.
pub fn r_min(alpha: f64) -> Result<f64> {
    if !(alpha > std::f64::consts::FRAC_1_SQRT_2 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (1/√2, 1)")));
    }
    let a2 = alpha * alpha;
    let bounds = [
        1.0 + 2.0 / alpha,
        1.0 + std::f64::consts::FRAC_1_SQRT_2,
        1.0 + (1.0 + 1.0 / (8.0 * a2)).sqrt(),
        (4.0 * a2 + 1.0 + alpha * (16.0 * a2 + 10.0).sqrt()) / (4.0 * a2 - 2.0),
        (2.0 * a2 + 1.0 + alpha * (4.0 * a2 + 6.0).sqrt()) / (2.0 * a2 - 1.0),
    ];
    Ok(bounds.into_iter().fold(f64::NEG_INFINITY, f64::max))
}

/// A family of triangles in Euclidean coordinates: for each m the points
/// x_m = R e_{2m−1}, y_m = x_m + e_{2m}, z_m = x_m + δ_m w_m with w_m the
/// unit vector in span{e_{2m−1}, e_{2m}} making the sides (1, δ_m, 1 + αδ_m).
/// With R ≥ r_min(α) the whole space satisfies SRA(α) but is not a q-power
/// metric for any q > 1.
pub fn hilbert_triangles(alpha: f64, big_r: f64, deltas: &[f64]) -> Result<FiniteMetricSpace> {
    let rmin = r_min(alpha)?;
    if big_r < rmin {
        return Err(Error::Precondition(format!(
            "R = {big_r} below the minimal admissible spread {rmin}"
        )));
    }
    if deltas.is_empty() || deltas.iter().any(|d| *d <= 0.0 || *d > 1.0) {
        return Err(Error::Domain("deltas must lie in (0, 1]".into()));
    }
    let m_count = deltas.len();
    let dim = 2 * m_count;
    let mut coords = Vec::with_capacity(3 * m_count);
    for (m, &delta) in deltas.iter().enumerate() {
        let (ax, ay) = (2 * m, 2 * m + 1); // e_{2m−1}, e_{2m} (0-based)
        // w·e_{2m} from |y − z|² = (1 + αδ)² with |w| = 1
        let w2 = (delta * (1.0 - alpha * alpha) - 2.0 * alpha) / 2.0;
        if w2.abs() > 1.0 {
            return Err(Error::Domain(format!(
                "no planar triangle with sides (1, {delta}, {})",
                1.0 + alpha * delta
            )));
        }
        let w1 = (1.0 - w2 * w2).sqrt();
        let mut x = vec![0.0; dim];
        x[ax] = big_r;
        let mut y = x.clone();
        y[ay] = 1.0;
        let mut z = x.clone();
        z[ax] += delta * w1;
        z[ay] += delta * w2;
        coords.push(x);
        coords.push(y);
        coords.push(z);
    }
    FiniteMetricSpace::from_points(
        format!("hilbert_triangles(alpha={alpha},R={big_r})"),
        coords,
        Norm::Euclidean,
    )
}

/// A unit-side regular n-simplex together with its circumcenter, realized in
/// R^{n+1} as the points e_i/√2 plus their centroid. The required SRA
/// parameter is √(2(n+1)/n) − 1.
pub fn simplex_with_center(n: usize) -> Result<FiniteMetricSpace> {
    if n < 2 {
        return Err(Error::Domain("simplex dimension must be at least 2".into()));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut coords = Vec::with_capacity(n + 2);
    for i in 0..=n {
        let mut v = vec![0.0; n + 1];
        v[i] = s;
        coords.push(v);
    }
    coords.push(vec![s / (n as f64 + 1.0); n + 1]);
    FiniteMetricSpace::from_points(format!("simplex_center(n={n})"), coords, Norm::Euclidean)
}

fn param_f64(params: &serde_json::Value, key: &str) -> Result<f64> {
    params
        .get(key)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| Error::Structure(format!("missing or non-numeric parameter {key:?}")))
}

fn param_usize(params: &serde_json::Value, key: &str) -> Result<usize> {
    params
        .get(key)
        .and_then(|v| v.as_u64())
        .map(|v| v as usize)
        .ok_or_else(|| Error::Structure(format!("missing or non-integer parameter {key:?}")))
}

fn param_vec(params: &serde_json::Value, key: &str) -> Result<Vec<f64>> {
    params
        .get(key)
        .and_then(|v| v.as_array())
        .map(|a| a.iter().filter_map(|v| v.as_f64()).collect::<Vec<_>>())
        .ok_or_else(|| Error::Structure(format!("missing or non-array parameter {key:?}")))
}

/// Dispatcher for the "construction" kind of the space file format: family
/// names and parameter keys match the builder signatures.
pub fn build(family: &str, params: &serde_json::Value) -> Result<FiniteMetricSpace> {
    match family {
        "geometric_sra_sequence" => geometric_sra_sequence(
            param_f64(params, "eps")?,
            param_f64(params, "alpha")?,
            param_usize(params, "count")?,
        ),
        "cantor_approx" => cantor_approx(
            param_f64(params, "alpha")?,
            param_f64(params, "eps")?,
            param_usize(params, "level")? as u32,
        ),
        "laakso_level" => laakso_level(param_usize(params, "m")? as u32),
        "laakso_doubled" => laakso_doubled(
            param_usize(params, "m")? as u32,
            params.get("q").and_then(|v| v.as_f64()),
        ),
        "metric_tree" => Ok(metric_tree(
            &param_vec(params, "t")?,
            param_usize(params, "samples_per_segment")?,
        )?
        .0),
        "hilbert_sequence" => hilbert_sequence(&param_vec(params, "c")?),
        "heisenberg_axis" => heisenberg_axis(
            &param_vec(params, "ts")?,
            params.get("c").and_then(|v| v.as_f64()).unwrap_or(1.0),
        ),
        "no_converse" => Ok(no_converse_family(
            param_f64(params, "beta")?,
            &param_vec(params, "deltas")?,
            params.get("q").and_then(|v| v.as_f64()).unwrap_or(2.0),
        )?
        .0),
        "dyadic_doubling" => {
            let levels: Vec<u32> = param_vec(params, "levels")?
                .into_iter()
                .map(|v| v as u32)
                .collect();
            dyadic_doubling_space(&levels, param_usize(params, "resolution")?)
        }
        "hilbert_triangles" => hilbert_triangles(
            param_f64(params, "alpha")?,
            param_f64(params, "R")?,
            &param_vec(params, "deltas")?,
        ),
        "simplex_with_center" => simplex_with_center(param_usize(params, "n")?),
        other => Err(Error::Structure(format!("unknown family {other:?}"))),
    }
}
