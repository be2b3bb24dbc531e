//! Seeded random graph generators: ring lattices, Watts-Strogatz rewiring,
//! Newman-Watts shortcuts, a ring-based Kleinberg model, stochastic block
//! models, random regular graphs, and the complete/path baselines.
//!
//! All randomness flows through ChaCha8 keyed by the 64-bit seed, so a
//! `GenSpec` reproduces the same edge list on every platform. Produced graphs
//! are simple and unweighted (w = 1); draws that would create a self-loop or
//! duplicate edge are re-drawn.

use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("generation failed: {0}")]
    Failure(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Graph model with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    /// Cycle with each node joined to its `k` nearest neighbors (`k` even).
    Ring { n: usize, k: usize },
    /// Watts-Strogatz: ring edges rewired with probability `p`.
    Ws { n: usize, k: usize, p: f64 },
    /// Newman-Watts: ring plus random shortcuts added with probability `p`
    /// per ring edge; never removes edges.
    Nw { n: usize, k: usize, p: f64 },
    /// Ring plus one long-range contact per node, drawn with probability
    /// proportional to (ring distance)^-exponent.
    KleinbergRing { n: usize, k: usize, exponent: f64 },
    /// Stochastic block model: intra-block probability `p_intra`, inter-block
    /// `q_inter`.
    Sbm { sizes: Vec<usize>, p_intra: f64, q_inter: f64 },
    /// Uniform random graph where every node has degree exactly `d`
    /// (pairing model with rejection).
    RandomRegular { n: usize, d: usize },
    Complete { n: usize },
    Path { n: usize },
}

/// A model plus the seed that pins its output.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub model: Model,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, seed: u64) -> Self {
        GenSpec { model, seed }
    }

    /// `(model name, n, nominal degree)` for bench descriptors and CSV rows.
    pub fn descriptor(&self) -> (&'static str, usize, usize) {
        match &self.model {
            Model::Ring { n, k } => ("ring", *n, *k),
            Model::Ws { n, k, .. } => ("ws", *n, *k),
            Model::Nw { n, k, .. } => ("nw", *n, *k),
            Model::KleinbergRing { n, k, .. } => ("kleinberg-ring", *n, *k),
            Model::Sbm { sizes, p_intra, q_inter } => {
                let n: usize = sizes.iter().sum();
                let s = sizes.first().copied().unwrap_or(0) as f64;
                let deg = p_intra * (s - 1.0).max(0.0) + q_inter * (n as f64 - s);
                ("sbm", n, deg.round() as usize)
            }
            Model::RandomRegular { n, d } => ("random-regular", *n, *d),
            Model::Complete { n } => ("complete", *n, n.saturating_sub(1)),
            Model::Path { n } => ("path", *n, 2),
        }
    }
}

fn validate_ring(n: usize, k: usize) -> Result<(), GenError> {
    if k == 0 || k % 2 != 0 {
        return Err(GenError::InvalidSpec(format!("k must be even and > 0, got {k}")));
    }
    if k >= n {
        return Err(GenError::InvalidSpec(format!("need k < n, got k={k}, n={n}")));
    }
    Ok(())
}

fn validate_prob(name: &str, p: f64) -> Result<(), GenError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GenError::InvalidSpec(format!("{name} must be in [0,1], got {p}")));
    }
    Ok(())
}

/// Generate the graph described by `spec`. Deterministic for a fixed spec.
pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match &spec.model {
        Model::Ring { n, k } => {
            validate_ring(*n, *k)?;
            finish(*n, ring_edges(*n, *k))
        }
        Model::Ws { n, k, p } => {
            validate_ring(*n, *k)?;
            validate_prob("p", *p)?;
            let (n, k, p) = (*n, *k, *p);
            let mut edges: HashSet<(usize, usize)> = ring_edges(n, k).into_iter().collect();
            let mut degree = vec![k; n];
            for j in 1..=(k / 2) {
                for i in 0..n {
                    if !rng.random_bool(p) {
                        continue;
                    }
                    let old = norm(i, (i + j) % n);
                    if !edges.contains(&old) {
                        continue; // already rewired away
                    }
                    if degree[i] >= n - 1 {
                        continue;
                    }
                    let target = loop {
                        let w = rng.random_range(0..n);
                        if w != i && !edges.contains(&norm(i, w)) {
                            break w;
                        }
                    };
                    edges.remove(&old);
                    degree[old.0] -= 1;
                    degree[old.1] -= 1;
                    edges.insert(norm(i, target));
                    degree[i] += 1;
                    degree[target] += 1;
                }
            }
            finish(n, edges.into_iter().collect())
        }
        Model::Nw { n, k, p } => {
            validate_ring(*n, *k)?;
            validate_prob("p", *p)?;
            let (n, k, p) = (*n, *k, *p);
            let ring = ring_edges(n, k);
            let mut edges: HashSet<(usize, usize)> = ring.iter().copied().collect();
            let mut degree = vec![k; n];
            for &(u, _) in &ring {
                if !rng.random_bool(p) || degree[u] >= n - 1 {
                    continue;
                }
                let target = loop {
                    let w = rng.random_range(0..n);
                    if w != u && !edges.contains(&norm(u, w)) {
                        break w;
                    }
                };
                edges.insert(norm(u, target));
                degree[u] += 1;
                degree[target] += 1;
            }
            finish(n, edges.into_iter().collect())
        }
        Model::KleinbergRing { n, k, exponent } => {
            validate_ring(*n, *k)?;
            let (n, k, exponent) = (*n, *k, *exponent);
            if !(exponent.is_finite() && exponent >= 0.0) {
                return Err(GenError::InvalidSpec(format!(
                    "exponent must be ≥ 0, got {exponent}"
                )));
            }
            let d_min = k / 2 + 1;
            let d_max = n / 2;
            if d_min > d_max {
                return Err(GenError::InvalidSpec(format!(
                    "no long-range distances available for n={n}, k={k}"
                )));
            }
            // cumulative weights: each distance counts once per distinct target
            let mut cumulative = Vec::with_capacity(d_max - d_min + 1);
            let mut total = 0.0;
            for d in d_min..=d_max {
                let sides = if 2 * d == n { 1.0 } else { 2.0 };
                total += sides * (d as f64).powf(-exponent);
                cumulative.push(total);
            }
            let mut edges: HashSet<(usize, usize)> = ring_edges(n, k).into_iter().collect();
            for i in 0..n {
                for _attempt in 0..100 {
                    let u01: f64 = rng.random::<f64>() * total;
                    let idx = cumulative.partition_point(|&c| c <= u01).min(cumulative.len() - 1);
                    let d = d_min + idx;
                    let forward = 2 * d == n || rng.random_bool(0.5);
                    let target = if forward { (i + d) % n } else { (i + n - d) % n };
                    if target != i && !edges.contains(&norm(i, target)) {
                        edges.insert(norm(i, target));
                        break;
                    }
                }
            }
            finish(n, edges.into_iter().collect())
        }
        Model::Sbm { sizes, p_intra, q_inter } => {
            if sizes.is_empty() || sizes.iter().any(|&s| s == 0) {
                return Err(GenError::InvalidSpec("block sizes must be positive".into()));
            }
            validate_prob("p", *p_intra)?;
            validate_prob("q", *q_inter)?;
            let n: usize = sizes.iter().sum();
            let mut block = vec![0usize; n];
            let mut at = 0;
            for (b, &s) in sizes.iter().enumerate() {
                for x in &mut block[at..at + s] {
                    *x = b;
                }
                at += s;
            }
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let p = if block[i] == block[j] { *p_intra } else { *q_inter };
                    if p > 0.0 && rng.random_bool(p) {
                        edges.push((i, j));
                    }
                }
            }
            finish(n, edges)
        }
        Model::RandomRegular { n, d } => {
            let (n, d) = (*n, *d);
            if d == 0 || d >= n {
                return Err(GenError::InvalidSpec(format!("need 0 < d < n, got d={d}, n={n}")));
            }
            if n * d % 2 != 0 {
                return Err(GenError::InvalidSpec(format!("n·d must be even, got {n}·{d}")));
            }
            // pairing (configuration) model: keep valid pairs, reshuffle the
            // leftover stubs, restart when stuck
            for _attempt in 0..200 {
                let mut stubs: Vec<usize> =
                    (0..n).flat_map(|i| std::iter::repeat(i).take(d)).collect();
                let mut seen: HashSet<(usize, usize)> = HashSet::with_capacity(n * d / 2);
                while !stubs.is_empty() {
                    shuffle(&mut stubs, &mut rng);
                    let mut leftover = Vec::new();
                    let mut progress = false;
                    for pair in stubs.chunks_exact(2) {
                        let (u, v) = (pair[0], pair[1]);
                        if u != v && seen.insert(norm(u, v)) {
                            progress = true;
                        } else {
                            leftover.push(u);
                            leftover.push(v);
                        }
                    }
                    if !progress {
                        break;
                    }
                    stubs = leftover;
                }
                if stubs.is_empty() {
                    return finish(n, seen.into_iter().collect());
                }
            }
            Err(GenError::Failure(format!(
                "random-regular pairing exceeded 200 retries for n={n}, d={d}"
            )))
        }
        Model::Complete { n } => {
            if *n == 0 {
                return Err(GenError::InvalidSpec("n must be ≥ 1".into()));
            }
            let mut edges = Vec::new();
            for i in 0..*n {
                for j in (i + 1)..*n {
                    edges.push((i, j));
                }
            }
            finish(*n, edges)
        }
        Model::Path { n } => {
            if *n == 0 {
                return Err(GenError::InvalidSpec("n must be ≥ 1".into()));
            }
            finish(*n, (1..*n).map(|i| (i - 1, i)).collect())
        }
    }
}

/// Like [`generate`] but retries with derived seeds (seed + attempt) until
/// the output is connected, up to `retries` extra attempts.
pub fn generate_connected(spec: &GenSpec, retries: usize) -> Result<Graph, GenError> {
    for attempt in 0..=retries as u64 {
        let derived = GenSpec {
            model: spec.model.clone(),
            seed: spec.seed.wrapping_add(attempt),
        };
        let g = generate(&derived)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GenError::Failure(format!(
        "no connected sample within {retries} retries of seed {}",
        spec.seed
    )))
}

/// Parameters of one SBM grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbmParams {
    pub p: f64,
    pub q: f64,
    pub seed: u64,
}

/// One graph per (p, q, seed) triple, in deterministic p-major order. `n`
/// nodes split into `blocks` near-equal communities.
pub fn sbm_grid(
    p_values: &[f64],
    q_values: &[f64],
    n: usize,
    blocks: usize,
    seeds: &[u64],
) -> Result<Vec<(SbmParams, Graph)>, GenError> {
    if blocks == 0 || n < blocks {
        return Err(GenError::InvalidSpec(format!(
            "need 1 ≤ blocks ≤ n, got blocks={blocks}, n={n}"
        )));
    }
    let base = n / blocks;
    let extra = n % blocks;
    let sizes: Vec<usize> = (0..blocks).map(|b| base + usize::from(b < extra)).collect();
    let mut out = Vec::with_capacity(p_values.len() * q_values.len() * seeds.len());
    for &p in p_values {
        for &q in q_values {
            for &seed in seeds {
                let spec = GenSpec::new(
                    Model::Sbm { sizes: sizes.clone(), p_intra: p, q_inter: q },
                    seed,
                );
                out.push((SbmParams { p, q, seed }, generate(&spec)?));
            }
        }
    }
    Ok(out)
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

fn ring_edges(n: usize, k: usize) -> Vec<(usize, usize)> {
    let mut edges = Vec::with_capacity(n * k / 2);
    for j in 1..=(k / 2) {
        for i in 0..n {
            edges.push(norm(i, (i + j) % n));
        }
    }
    edges
}

/// Fisher-Yates with the generator's own stream (keeps the output stable even
/// if the rand crate reshuffles its slice helpers).
fn shuffle(xs: &mut [usize], rng: &mut ChaCha8Rng) {
    for i in (1..xs.len()).rev() {
        let j = rng.random_range(0..=i);
        xs.swap(i, j);
    }
}

fn finish(n: usize, mut edges: Vec<(usize, usize)>) -> Result<Graph, GenError> {
    edges.sort_unstable();
    Ok(Graph::new(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)).collect())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_is_a_cycle_at_k2() {
        let g = generate(&GenSpec::new(Model::Ring { n: 6, k: 2 }, 0)).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!((0..6).all(|i| g.degree(i) == 2));
    }

    #[test]
    fn ws_with_zero_p_is_the_ring() {
        let ws = generate(&GenSpec::new(Model::Ws { n: 40, k: 6, p: 0.0 }, 9)).unwrap();
        let ring = generate(&GenSpec::new(Model::Ring { n: 40, k: 6 }, 9)).unwrap();
        assert_eq!(ws.edges(), ring.edges());
    }

    #[test]
    fn nw_only_adds_edges() {
        let nw = generate(&GenSpec::new(Model::Nw { n: 60, k: 4, p: 0.3 }, 3)).unwrap();
        let ring = generate(&GenSpec::new(Model::Ring { n: 60, k: 4 }, 3)).unwrap();
        assert!(nw.edge_count() >= ring.edge_count());
        for e in ring.edges() {
            assert!(nw.has_edge(e.u, e.v));
        }
        assert!(nw.is_connected());
    }

    #[test]
    fn sbm_density_close_to_parameters() {
        let sizes = vec![60usize, 60];
        let (p, q) = (0.25, 0.02);
        let mut intra = 0usize;
        let mut inter = 0usize;
        let seeds = 10;
        for seed in 0..seeds {
            let g = generate(&GenSpec::new(
                Model::Sbm { sizes: sizes.clone(), p_intra: p, q_inter: q },
                seed,
            ))
            .unwrap();
            for e in g.edges() {
                if (e.u < 60) == (e.v < 60) {
                    intra += 1;
                } else {
                    inter += 1;
                }
            }
        }
        let intra_pairs = (2 * 60 * 59 / 2 * seeds as usize) as f64;
        let inter_pairs = (60 * 60 * seeds as usize) as f64;
        assert!((intra as f64 / intra_pairs - p).abs() < 0.02);
        assert!((inter as f64 / inter_pairs - q).abs() < 0.005);
    }

    #[test]
    fn random_regular_has_exact_degrees() {
        let g = generate(&GenSpec::new(Model::RandomRegular { n: 100, d: 10 }, 4)).unwrap();
        assert!((0..100).all(|i| g.degree(i) == 10));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        for model in [
            Model::Ws { n: 50, k: 4, p: 0.3 },
            Model::Nw { n: 50, k: 4, p: 0.3 },
            Model::KleinbergRing { n: 50, k: 4, exponent: 1.0 },
            Model::Sbm { sizes: vec![25, 25], p_intra: 0.2, q_inter: 0.02 },
            Model::RandomRegular { n: 50, d: 4 },
        ] {
            let a = generate(&GenSpec::new(model.clone(), 1234)).unwrap();
            let b = generate(&GenSpec::new(model.clone(), 1234)).unwrap();
            assert_eq!(a.edges(), b.edges(), "{model:?}");
            let c = generate(&GenSpec::new(model.clone(), 1235)).unwrap();
            assert!(a.edges() != c.edges() || a.edge_count() == c.edge_count());
        }
    }

    #[test]
    fn invalid_specs_rejected() {
        assert!(matches!(
            generate(&GenSpec::new(Model::Ring { n: 6, k: 3 }, 0)),
            Err(GenError::InvalidSpec(_))
        ));
        assert!(matches!(
            generate(&GenSpec::new(Model::Ring { n: 4, k: 4 }, 0)),
            Err(GenError::InvalidSpec(_))
        ));
        assert!(matches!(
            generate(&GenSpec::new(Model::Ws { n: 10, k: 2, p: 1.5 }, 0)),
            Err(GenError::InvalidSpec(_))
        ));
        assert!(matches!(
            generate(&GenSpec::new(Model::RandomRegular { n: 5, d: 3 }, 0)),
            Err(GenError::InvalidSpec(_))
        ));
    }

    #[test]
    fn sbm_grid_shape_and_determinism() {
        let grid = sbm_grid(&[0.2, 0.3], &[0.01, 0.02, 0.03], 40, 2, &[1, 2]).unwrap();
        assert_eq!(grid.len(), 12);
        let again = sbm_grid(&[0.2, 0.3], &[0.01, 0.02, 0.03], 40, 2, &[1, 2]).unwrap();
        assert_eq!(grid[5].1.edges(), again[5].1.edges());

        assert!(sbm_grid(&[0.2], &[], 40, 2, &[1]).unwrap().is_empty());
    }

    #[test]
    fn kleinberg_long_range_decays_with_distance() {
        // pool long-range edges over seeds, then fit ln(count) ~ -α ln(d)
        let (n, k, alpha) = (1000usize, 2usize, 1.0f64);
        let mut counts = std::collections::BTreeMap::new();
        for seed in 0..20 {
            let g = generate(&GenSpec::new(
                Model::KleinbergRing { n, k, exponent: alpha },
                seed,
            ))
            .unwrap();
            for e in g.edges() {
                let d = (e.v - e.u).min(n - (e.v - e.u));
                if d > k / 2 && 2 * d != n {
                    *counts.entry(d).or_insert(0usize) += 1;
                }
            }
        }
        // geometric bins over [2, n/2)
        let mut pts = Vec::new();
        let mut lo = 2.0f64;
        while lo < (n / 2) as f64 {
            let hi = (lo * 1.9).min((n / 2) as f64);
            let total: usize = counts
                .iter()
                .filter(|(&d, _)| (d as f64) >= lo && (d as f64) < hi)
                .map(|(_, &c)| c)
                .sum();
            if total > 0 {
                let mid = (lo * hi).sqrt();
                pts.push((mid, total as f64 / (hi - lo)));
            }
            lo = hi;
        }
        let slope = crate::oracles::log_log_slope(&pts);
        assert!(
            (slope + alpha).abs() < 0.3,
            "fitted exponent {slope}, expected ≈ {}",
            -alpha
        );
    }

    #[test]
    fn generate_connected_retries() {
        // sparse SBM is often disconnected; the retry loop must find one
        let spec = GenSpec::new(
            Model::Sbm { sizes: vec![30, 30], p_intra: 0.15, q_inter: 0.01 },
            0,
        );
        let g = generate_connected(&spec, 50).unwrap();
        assert!(g.is_connected());
    }
}
