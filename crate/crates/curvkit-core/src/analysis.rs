//! Empirical geometry studies: curvature distributions, betweenness
//! centrality, Girvan-Newman communities, density correlations, and the
//! hub/community curvature patterns.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("no unique maximum-betweenness node (top scores tie)")]
    NoUniqueHub,
}

/// Histogram + kernel density summary of a sample.
#[derive(Debug, Clone, Serialize)]
pub struct DistributionSummary {
    /// `bins + 1` edges spanning the (possibly widened) sample range.
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub density_x: Vec<f64>,
    pub density_y: Vec<f64>,
    pub mean: f64,
    /// Population standard deviation.
    pub std: f64,
    /// Population skewness; 0 for constant samples.
    pub skewness: f64,
    /// Fraction of strictly positive values.
    pub positive_fraction: f64,
    pub bandwidth: f64,
}

/// Gaussian-kernel density with Silverman bandwidth (unless given) plus a
/// histogram over `[min, max]`. Degenerate all-equal samples get a unit-wide
/// window so the histogram still has one occupied bin.
pub fn summarize_distribution(
    values: &[f64],
    bins: usize,
    bandwidth: Option<f64>,
) -> Result<DistributionSummary, AnalysisError> {
    if values.len() < 2 {
        return Err(AnalysisError::TooFewSamples(values.len()));
    }
    assert!(bins >= 1, "need at least one bin");
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let std = m2.sqrt();
    let skewness = if m2 > 0.0 {
        let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
        m3 / m2.powf(1.5)
    } else {
        0.0
    };
    let positive_fraction = values.iter().filter(|&&v| v > 0.0).count() as f64 / n;

    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let degenerate = max - min < f64::EPSILON * max.abs().max(1.0);
    let (lo, hi) = if degenerate { (min - 0.5, max + 0.5) } else { (min, max) };

    let width = (hi - lo) / bins as f64;
    let bin_edges: Vec<f64> = (0..=bins).map(|b| lo + b as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }

    let bandwidth = bandwidth.unwrap_or_else(|| {
        let sample_std = if values.len() > 1 { (m2 * n / (n - 1.0)).sqrt() } else { 0.0 };
        let iqr = quantile(values, 0.75) - quantile(values, 0.25);
        let spread = if iqr > 0.0 { sample_std.min(iqr / 1.34) } else { sample_std };
        let h = 0.9 * spread * n.powf(-0.2);
        if h > 0.0 { h } else { 1e-3 * mean.abs().max(1.0) }
    });

    // grid wide enough to capture essentially all kernel mass, fine enough
    // for the trapezoid integral to stay within 1e-3 of 1
    let grid_lo = min - 5.0 * bandwidth;
    let grid_hi = max + 5.0 * bandwidth;
    let span = grid_hi - grid_lo;
    let points = ((span / (bandwidth / 4.0)).ceil() as usize).clamp(200, 4000);
    let step = span / (points - 1) as f64;
    let norm = 1.0 / (n * bandwidth * (2.0 * std::f64::consts::PI).sqrt());
    let mut density_x = Vec::with_capacity(points);
    let mut density_y = Vec::with_capacity(points);
    for p in 0..points {
        let x = grid_lo + p as f64 * step;
        let y: f64 = values
            .iter()
            .map(|&v| (-0.5 * ((x - v) / bandwidth).powi(2)).exp())
            .sum::<f64>()
            * norm;
        density_x.push(x);
        density_y.push(y);
    }

    Ok(DistributionSummary {
        bin_edges,
        counts,
        density_x,
        density_y,
        mean,
        std,
        skewness,
        positive_fraction,
        bandwidth,
    })
}

/// Linear-interpolated quantile of an unsorted sample.
fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Exact node betweenness (Brandes over unweighted shortest paths), raw
/// pair-count convention: each unordered pair contributes total credit 1
/// split over equal-length paths.
pub fn betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let mut score = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        for p in &mut preds {
            p.clear();
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, _) in g.neighbors(u) {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
        for &w in order.iter().rev() {
            for &p in &preds[w] {
                delta[p] += sigma[p] / sigma[w] * (1.0 + delta[w]);
            }
            if w != s {
                score[w] += delta[w];
            }
        }
    }
    // each undirected pair was visited from both endpoints
    for x in &mut score {
        *x *= 0.5;
    }
    score
}

/// Exact edge betweenness under the same conventions as [`betweenness`],
/// aligned with `Graph::edges()`.
pub fn edge_betweenness(g: &Graph) -> Vec<f64> {
    let n = g.n();
    let edge_index: std::collections::HashMap<(usize, usize), usize> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(idx, e)| ((e.u.min(e.v), e.u.max(e.v)), idx))
        .collect();
    let mut score = vec![0.0; g.edge_count()];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![-1i64; n];
    let mut delta = vec![0.0f64; n];
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(-1);
        delta.fill(0.0);
        for p in &mut preds {
            p.clear();
        }
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &(v, _) in g.neighbors(u) {
                if dist[v] < 0 {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
                if dist[v] == dist[u] + 1 {
                    sigma[v] += sigma[u];
                    preds[v].push(u);
                }
            }
        }
        for &w in order.iter().rev() {
            for &p in &preds[w] {
                let credit = sigma[p] / sigma[w] * (1.0 + delta[w]);
                delta[p] += credit;
                let idx = edge_index[&(p.min(w), p.max(w))];
                score[idx] += credit;
            }
        }
    }
    for x in &mut score {
        *x *= 0.5;
    }
    score
}

/// Connected components as sorted node lists, ordered by smallest member.
pub fn components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adjacency.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    comp.push(v);
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Weighted modularity of a partition with respect to `g`.
pub fn modularity(g: &Graph, partition: &[Vec<usize>]) -> f64 {
    let total: f64 = g.edges().iter().map(|e| e.w).sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut comm = vec![usize::MAX; g.n()];
    for (c, members) in partition.iter().enumerate() {
        for &m in members {
            comm[m] = c;
        }
    }
    let degrees = g.weighted_degrees();
    let mut intra = vec![0.0; partition.len()];
    let mut deg_sum = vec![0.0; partition.len()];
    for e in g.edges() {
        if comm[e.u] == comm[e.v] {
            intra[comm[e.u]] += e.w;
        }
    }
    for (i, &d) in degrees.iter().enumerate() {
        deg_sum[comm[i]] += d;
    }
    intra
        .iter()
        .zip(&deg_sum)
        .map(|(&ein, &dsum)| ein / total - (dsum / (2.0 * total)).powi(2))
        .sum()
}

/// Girvan-Newman divisive communities: repeatedly remove the edge with the
/// highest betweenness (ties broken by lexicographic (u, v)). With a target
/// count, stop as soon as that many components exist; otherwise return the
/// modularity-maximal partition along the removal sequence.
pub fn girvan_newman(g: &Graph, target_communities: Option<usize>) -> Vec<Vec<usize>> {
    assert!(g.is_connected(), "girvan_newman expects a connected graph");
    if let Some(t) = target_communities {
        assert!(t >= 1 && t <= g.n(), "target must be in 1..=n");
        if t == 1 {
            return vec![(0..g.n()).collect()];
        }
    }

    let mut work = g.clone();
    let mut best_partition = vec![(0..g.n()).collect::<Vec<usize>>()];
    let mut best_q = modularity(g, &best_partition);

    loop {
        let adjacency: Vec<Vec<usize>> = (0..work.n())
            .map(|u| work.neighbors(u).iter().map(|&(v, _)| v).collect())
            .collect();
        let comps = components(&adjacency);
        match target_communities {
            Some(t) => {
                if comps.len() >= t {
                    return comps;
                }
            }
            None => {
                let q = modularity(g, &comps);
                if q > best_q + 1e-12 {
                    best_q = q;
                    best_partition = comps.clone();
                }
            }
        }
        if work.edge_count() == 0 {
            return match target_communities {
                Some(_) => comps,
                None => best_partition,
            };
        }
        let eb = edge_betweenness(&work);
        let mut pick = 0usize;
        for idx in 1..eb.len() {
            let better = eb[idx] > eb[pick] + 1e-9
                || ((eb[idx] - eb[pick]).abs() <= 1e-9
                    && key(&work, idx) < key(&work, pick));
            if better {
                pick = idx;
            }
        }
        let keep: Vec<(usize, usize, f64)> = work
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pick)
            .map(|(_, e)| (e.u, e.v, e.w))
            .collect();
        work = Graph::new(work.n(), keep).expect("edge removal keeps the graph valid");
    }
}

fn key(g: &Graph, idx: usize) -> (usize, usize) {
    let e = g.edges()[idx];
    (e.u.min(e.v), e.u.max(e.v))
}

/// One row of the positive-curvature-share vs density table.
#[derive(Debug, Clone, Serialize)]
pub struct DensityRatioRow {
    pub graph_id: usize,
    pub density: f64,
    pub positive_fraction: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityRatioTable {
    pub rows: Vec<DensityRatioRow>,
    /// Spearman rank correlation between density and positive fraction
    /// (NaN-free; 0 when fewer than 2 rows).
    pub spearman: f64,
}

/// Positive-curvature fraction per graph against graph density.
pub fn positive_ratio_vs_density(entries: &[(&Graph, &[f64])]) -> DensityRatioTable {
    let rows: Vec<DensityRatioRow> = entries
        .iter()
        .enumerate()
        .map(|(graph_id, (g, curv))| DensityRatioRow {
            graph_id,
            density: g.density(),
            positive_fraction: if curv.is_empty() {
                0.0
            } else {
                curv.iter().filter(|&&k| k > 0.0).count() as f64 / curv.len() as f64
            },
        })
        .collect();
    let spearman = spearman(
        &rows.iter().map(|r| r.density).collect::<Vec<_>>(),
        &rows.iter().map(|r| r.positive_fraction).collect::<Vec<_>>(),
    );
    DensityRatioTable { rows, spearman }
}

/// Spearman rank correlation with average ranks on ties; 0 if degenerate.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return 0.0;
    }
    let rx = ranks(xs);
    let ry = ranks(ys);
    let n = rx.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for i in 0..rx.len() {
        let dx = rx[i] - mx;
        let dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..xs.len()).collect();
    order.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).unwrap());
    let mut out = vec![0.0; xs.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && xs[order[j + 1]] == xs[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = avg;
        }
        i = j + 1;
    }
    out
}

/// Mean/min/max curvature of one edge group keyed by community size.
#[derive(Debug, Clone, Serialize)]
pub struct CommunityCurvatureStat {
    pub community: usize,
    pub size: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub edges: usize,
}

/// Pattern fulfillment for one graph.
#[derive(Debug, Clone, Serialize)]
pub struct PatternReport {
    pub hub: usize,
    pub density: f64,
    pub community_sizes: Vec<usize>,
    /// Within-community mean curvature decreases with community size.
    pub pattern1_resistance: bool,
    pub pattern1_or: bool,
    /// Hub-to-community resistance curvature means decrease with size.
    pub pattern21: bool,
    /// Hub-to-community Ollivier-Ricci means increase with size.
    pub pattern22: bool,
    /// Every hub-incident resistance curvature is negative.
    pub pattern31: bool,
    /// Every hub-incident Ollivier-Ricci curvature is positive.
    pub pattern32: bool,
    /// Percent of hub-incident edges with negative resistance curvature.
    pub hub_negative_rate: f64,
    /// Percent of hub-incident edges with positive OR curvature.
    pub hub_positive_rate: f64,
    pub hub_groups_resistance: Vec<CommunityCurvatureStat>,
    pub hub_groups_or: Vec<CommunityCurvatureStat>,
    pub within_resistance: Vec<CommunityCurvatureStat>,
    pub within_or: Vec<CommunityCurvatureStat>,
}

/// Check the hub/community curvature patterns on one graph. `k_res` is the
/// normalized resistance curvature, `k_or` the raw Ollivier-Ricci curvature,
/// both aligned with `g.edges()`; `partition` comes from [`girvan_newman`].
pub fn pattern_check(
    g: &Graph,
    k_res: &[f64],
    k_or: &[f64],
    partition: &[Vec<usize>],
) -> Result<PatternReport, AnalysisError> {
    assert_eq!(k_res.len(), g.edge_count());
    assert_eq!(k_or.len(), g.edge_count());
    let bc = betweenness(g);
    let hub = unique_argmax(&bc).ok_or(AnalysisError::NoUniqueHub)?;

    let mut comm = vec![usize::MAX; g.n()];
    for (c, members) in partition.iter().enumerate() {
        for &m in members {
            comm[m] = c;
        }
    }

    // hub-incident edges grouped by the community of the far endpoint;
    // for the hub's own community the relevant size excludes the hub itself
    let group_size = |c: usize| {
        let raw = partition[c].len();
        if comm[hub] == c { raw - 1 } else { raw }
    };
    let mut hub_res: Vec<Vec<f64>> = vec![Vec::new(); partition.len()];
    let mut hub_or: Vec<Vec<f64>> = vec![Vec::new(); partition.len()];
    let mut within_res: Vec<Vec<f64>> = vec![Vec::new(); partition.len()];
    let mut within_or: Vec<Vec<f64>> = vec![Vec::new(); partition.len()];
    let mut hub_neg = 0usize;
    let mut hub_pos = 0usize;
    let mut hub_edges = 0usize;
    for (idx, e) in g.edges().iter().enumerate() {
        if e.u == hub || e.v == hub {
            let other = if e.u == hub { e.v } else { e.u };
            hub_res[comm[other]].push(k_res[idx]);
            hub_or[comm[other]].push(k_or[idx]);
            hub_edges += 1;
            if k_res[idx] < 0.0 {
                hub_neg += 1;
            }
            if k_or[idx] > 0.0 {
                hub_pos += 1;
            }
        } else if comm[e.u] == comm[e.v] {
            within_res[comm[e.u]].push(k_res[idx]);
            within_or[comm[e.u]].push(k_or[idx]);
        }
    }

    let stats = |groups: &[Vec<f64>]| -> Vec<CommunityCurvatureStat> {
        groups
            .iter()
            .enumerate()
            .filter(|(_, vals)| !vals.is_empty())
            .map(|(c, vals)| CommunityCurvatureStat {
                community: c,
                size: group_size(c),
                mean: vals.iter().sum::<f64>() / vals.len() as f64,
                min: vals.iter().copied().fold(f64::INFINITY, f64::min),
                max: vals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                edges: vals.len(),
            })
            .collect()
    };
    let hub_groups_resistance = stats(&hub_res);
    let hub_groups_or = stats(&hub_or);
    let within_resistance = stats(&within_res);
    let within_or_stats = stats(&within_or);

    Ok(PatternReport {
        hub,
        density: g.density(),
        community_sizes: partition.iter().map(|c| c.len()).collect(),
        pattern1_resistance: monotone_with_size(&within_resistance, false),
        pattern1_or: monotone_with_size(&within_or_stats, false),
        pattern21: monotone_with_size(&hub_groups_resistance, false),
        pattern22: monotone_with_size(&hub_groups_or, true),
        pattern31: hub_edges > 0 && hub_neg == hub_edges,
        pattern32: hub_edges > 0 && hub_pos == hub_edges,
        hub_negative_rate: 100.0 * hub_neg as f64 / hub_edges.max(1) as f64,
        hub_positive_rate: 100.0 * hub_pos as f64 / hub_edges.max(1) as f64,
        hub_groups_resistance,
        hub_groups_or,
        within_resistance,
        within_or: within_or_stats,
    })
}

/// Strict argmax with a relative tolerance for ties; `None` on a tie.
fn unique_argmax(scores: &[f64]) -> Option<usize> {
    let mut best = 0usize;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    let tol = 1e-9 * scores[best].abs().max(1.0);
    let ties = scores
        .iter()
        .filter(|&&s| (s - scores[best]).abs() <= tol)
        .count();
    (ties == 1).then_some(best)
}

/// Mean curvature ordered against community size: `increasing = false`
/// demands non-increasing means as size grows (pairs with equal size are not
/// constrained).
fn monotone_with_size(stats: &[CommunityCurvatureStat], increasing: bool) -> bool {
    for a in stats {
        for b in stats {
            if a.size < b.size {
                let ok = if increasing { a.mean <= b.mean } else { a.mean >= b.mean };
                if !ok {
                    return false;
                }
            }
        }
    }
    true
}

/// `distribution.csv`: bin_left,bin_right,count,density_x,density_y with the
/// shorter columns padded by empty cells.
pub fn distribution_csv(summary: &DistributionSummary) -> String {
    let mut out = String::from("bin_left,bin_right,count,density_x,density_y\n");
    let rows = summary.counts.len().max(summary.density_x.len());
    for i in 0..rows {
        if i < summary.counts.len() {
            write!(
                out,
                "{},{},{}",
                summary.bin_edges[i],
                summary.bin_edges[i + 1],
                summary.counts[i]
            )
            .unwrap();
        } else {
            out.push_str(",,");
        }
        if i < summary.density_x.len() {
            writeln!(out, ",{},{}", summary.density_x[i], summary.density_y[i]).unwrap();
        } else {
            out.push_str(",,\n");
        }
    }
    out
}

/// `patterns.csv`: graph_id,density,p21,p22,p31,p32 (booleans as 0/1).
pub fn patterns_csv(reports: &[(usize, PatternReport)]) -> String {
    let mut out = String::from("graph_id,density,p21,p22,p31,p32\n");
    for (id, r) in reports {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            id,
            r.density,
            u8::from(r.pattern21),
            u8::from(r.pattern22),
            u8::from(r.pattern31),
            u8::from(r.pattern32)
        )
        .unwrap();
    }
    out
}

/// `density_ratio.csv`: graph_id,density,positive_fraction.
pub fn density_ratio_csv(table: &DensityRatioTable) -> String {
    let mut out = String::from("graph_id,density,positive_fraction\n");
    for r in &table.rows {
        writeln!(out, "{},{},{}", r.graph_id, r.density, r.positive_fraction).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::load_edge_list;
    use approx::assert_abs_diff_eq;

    #[test]
    fn distribution_degenerate_and_symmetric() {
        let s = summarize_distribution(&[0.0, 0.0, 0.0], 5, None).unwrap();
        assert_eq!(s.positive_fraction, 0.0);
        assert_eq!(s.std, 0.0);
        assert_eq!(s.skewness, 0.0);
        assert_eq!(s.counts.iter().filter(|&&c| c > 0).count(), 1);

        let s = summarize_distribution(&[-1.0, 1.0], 4, None).unwrap();
        assert_abs_diff_eq!(s.skewness, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.mean, 0.0, epsilon = 1e-12);

        // K_10 normalized curvature: all 0.2
        let s = summarize_distribution(&[0.2; 45], 7, None).unwrap();
        assert_eq!(s.counts.iter().filter(|&&c| c > 0).count(), 1);
        assert_eq!(s.counts.iter().sum::<usize>(), 45);
    }

    #[test]
    fn kde_integrates_to_one() {
        let samples: Vec<f64> = (0..300)
            .map(|i| ((i * 2654435761u64.wrapping_mul(i as u64 + 1) as usize) % 997) as f64 / 99.7)
            .collect();
        let s = summarize_distribution(&samples, 20, None).unwrap();
        let mut integral = 0.0;
        for i in 1..s.density_x.len() {
            integral += 0.5 * (s.density_y[i] + s.density_y[i - 1])
                * (s.density_x[i] - s.density_x[i - 1]);
        }
        assert!((integral - 1.0).abs() < 1e-3, "integral {integral}");
    }

    #[test]
    fn positive_fraction_scale_invariant() {
        let vals = [-2.0, -0.5, 0.0, 0.4, 1.7];
        let a = summarize_distribution(&vals, 4, None).unwrap();
        let scaled: Vec<f64> = vals.iter().map(|v| v * 17.0).collect();
        let b = summarize_distribution(&scaled, 4, None).unwrap();
        assert_eq!(a.positive_fraction, b.positive_fraction);
    }

    #[test]
    fn too_few_samples() {
        assert!(matches!(
            summarize_distribution(&[1.0], 3, None),
            Err(AnalysisError::TooFewSamples(1))
        ));
    }

    #[test]
    fn betweenness_golden() {
        let p3 = load_edge_list("0 1\n1 2").unwrap();
        let b = betweenness(&p3);
        assert_abs_diff_eq!(b[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b[0], 0.0, epsilon = 1e-12);

        let star = load_edge_list("0 1\n0 2\n0 3\n0 4").unwrap();
        let b = betweenness(&star);
        assert_abs_diff_eq!(b[0], 6.0, epsilon = 1e-12);

        let c4 = load_edge_list("0 1\n1 2\n2 3\n3 0").unwrap();
        let b = betweenness(&c4);
        for &x in &b {
            assert_abs_diff_eq!(x, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn edge_betweenness_bridge_dominates() {
        // two triangles joined by a bridge
        let g = load_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5").unwrap();
        let eb = edge_betweenness(&g);
        let bridge = g.edges().iter().position(|e| (e.u, e.v) == (2, 3)).unwrap();
        for (i, &x) in eb.iter().enumerate() {
            if i != bridge {
                assert!(eb[bridge] > x);
            }
        }
    }

    #[test]
    fn girvan_newman_splits_bridged_triangles() {
        let g = load_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5").unwrap();
        let parts = girvan_newman(&g, Some(2));
        assert_eq!(parts, vec![vec![0, 1, 2], vec![3, 4, 5]]);

        // no target: modularity peak is the same split
        let parts = girvan_newman(&g, None);
        assert_eq!(parts.len(), 2);

        let k4 = load_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        assert_eq!(girvan_newman(&k4, Some(1)), vec![vec![0, 1, 2, 3]]);

        let p4 = load_edge_list("0 1\n1 2\n2 3").unwrap();
        assert_eq!(girvan_newman(&p4, Some(2)), vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn girvan_newman_reaches_any_target() {
        let g = load_edge_list("0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n3 5").unwrap();
        for t in 1..=6 {
            assert_eq!(girvan_newman(&g, Some(t)).len(), t);
        }
    }

    #[test]
    fn density_table_and_spearman() {
        let k3 = load_edge_list("0 1\n1 2\n0 2").unwrap();
        let k5 = {
            let mut e = Vec::new();
            for i in 0..5 {
                for j in (i + 1)..5 {
                    e.push((i, j, 1.0));
                }
            }
            Graph::new(5, e).unwrap()
        };
        let curv3 = vec![0.5; 3];
        let curv5 = vec![0.4; 10];
        let table = positive_ratio_vs_density(&[(&k3, &curv3), (&k5, &curv5)]);
        assert_eq!(table.rows.len(), 2);
        assert_eq!(table.rows[0].positive_fraction, 1.0);
        assert_eq!(table.rows[1].positive_fraction, 1.0);

        let empty = positive_ratio_vs_density(&[]);
        assert!(empty.rows.is_empty());

        assert_abs_diff_eq!(
            spearman(&[1.0, 2.0, 3.0, 4.0], &[2.0, 4.0, 5.0, 9.0]),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            spearman(&[1.0, 2.0, 3.0], &[5.0, 3.0, 1.0]),
            -1.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pattern_check_no_unique_hub_on_k4() {
        let k4 = load_edge_list("0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        let k = vec![0.1; 6];
        let parts = vec![vec![0, 1, 2, 3]];
        assert!(matches!(
            pattern_check(&k4, &k, &k, &parts),
            Err(AnalysisError::NoUniqueHub)
        ));
    }

    #[test]
    fn pattern_check_star_sign_tests() {
        // star with 5 leaves: hub is the center, all hub edges share curvature
        let g = load_edge_list("0 1\n0 2\n0 3\n0 4\n0 5").unwrap();
        let k_res = vec![-0.25; 5];
        let k_or = vec![0.3; 5];
        let parts = girvan_newman(&g, None);
        let rep = pattern_check(&g, &k_res, &k_or, &parts).unwrap();
        assert_eq!(rep.hub, 0);
        assert!(rep.pattern31);
        assert!(rep.pattern32);
        assert_eq!(rep.hub_negative_rate, 100.0);
    }

    #[test]
    fn brute_force_betweenness_matches_on_random_graphs() {
        // enumerate all shortest paths explicitly on small graphs
        fn brute(g: &Graph) -> Vec<f64> {
            let n = g.n();
            let mut score = vec![0.0; n];
            for s in 0..n {
                for t in (s + 1)..n {
                    let dist = g.shortest_path_distances(s, crate::graph::Cost::Unit);
                    if dist[t].is_infinite() {
                        continue;
                    }
                    let mut paths: Vec<Vec<usize>> = Vec::new();
                    let mut stack = vec![vec![t]];
                    while let Some(path) = stack.pop() {
                        let head = *path.last().unwrap();
                        if head == s {
                            let mut p = path.clone();
                            p.reverse();
                            paths.push(p);
                            continue;
                        }
                        for &(u, _) in g.neighbors(head) {
                            if dist[u] == dist[head] - 1.0 {
                                let mut p = path.clone();
                                p.push(u);
                                stack.push(p);
                            }
                        }
                    }
                    let credit = 1.0 / paths.len() as f64;
                    for p in &paths {
                        for &inner in &p[1..p.len() - 1] {
                            score[inner] += credit;
                        }
                    }
                }
            }
            score
        }

        for seed in 0..6 {
            let g = crate::generators::generate(&crate::generators::GenSpec::new(
                crate::generators::Model::Nw { n: 11, k: 2, p: 0.4 },
                seed,
            ))
            .unwrap();
            let fast = betweenness(&g);
            let slow = brute(&g);
            for (a, b) in fast.iter().zip(&slow) {
                assert!((a - b).abs() < 1e-9, "seed {seed}: {a} vs {b}");
            }
        }
    }
}
