//! Graph representation, ingestion and basic graph algorithms.
//!
//! Graphs are simple, undirected, weighted, with contiguous node ids
//! `0..n`. Instances are immutable after construction, so they can be shared
//! freely across threads.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::matrix::SymMatrix;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    Validation(String),
    #[error("missing dataset file: {0}")]
    MissingFile(String),
    #[error("edge ({u}, {v}) crosses graph ids {gu} and {gv}")]
    InconsistentIndicator { u: usize, v: usize, gu: usize, gv: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// One undirected edge with a strictly positive weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: f64,
}

/// Immutable weighted undirected graph.
///
/// Invariants, enforced at construction:
/// - `u, v < n`, `u != v`, at most one edge per unordered pair;
/// - every weight is finite and `> 0`;
/// - the cached adjacency is symmetric with sorted neighbor lists.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(usize, f64)>>,
}

/// Cost convention for shortest-path distances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cost {
    /// Hop counts (BFS).
    Unit,
    /// Sum of edge weights (Dijkstra, weights must be positive).
    Weight,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Validation("node count must be >= 1".into()));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        let mut out = Vec::with_capacity(edges.len());
        let mut adj = vec![Vec::new(); n];
        for (u, v, w) in edges {
            if u >= n || v >= n {
                return Err(GraphError::Validation(format!(
                    "edge ({u}, {v}) out of range for n={n}"
                )));
            }
            if u == v {
                return Err(GraphError::Validation(format!("self-loop at node {u}")));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(GraphError::Validation(format!(
                    "edge ({u}, {v}) has non-positive weight {w}"
                )));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::Validation(format!(
                    "duplicate edge ({u}, {v})"
                )));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
            out.push(Edge { u, v, w });
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(j, _)| j);
        }
        Ok(Graph { n, edges: out, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted `(neighbor, weight)` list of `u`.
    pub fn neighbors(&self, u: usize) -> &[(usize, f64)] {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search_by_key(&v, |&(j, _)| j).is_ok()
    }

    /// Edge density `2m / (n(n-1))`; zero for a single node.
    pub fn density(&self) -> f64 {
        if self.n < 2 {
            return 0.0;
        }
        2.0 * self.edges.len() as f64 / (self.n as f64 * (self.n as f64 - 1.0))
    }

    /// Weighted degree vector `a_i = Σ_{j~i} c_ij`.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .map(|list| list.iter().map(|&(_, w)| w).sum())
            .collect()
    }

    /// Graph Laplacian `L = D - C`: `L_ii = a_i`, `L_ij = -c_ij` on edges.
    pub fn laplacian(&self) -> SymMatrix {
        let mut m = nalgebra::DMatrix::zeros(self.n, self.n);
        for e in &self.edges {
            m[(e.u, e.v)] = -e.w;
            m[(e.v, e.u)] = -e.w;
            m[(e.u, e.u)] += e.w;
            m[(e.v, e.v)] += e.w;
        }
        SymMatrix::new_unchecked(m)
    }

    /// True iff a single BFS component covers all nodes.
    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &(v, _) in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    queue.push_back(v);
                }
            }
        }
        count == self.n
    }

    /// Exact single-source distances; unreachable nodes are `f64::INFINITY`.
    pub fn shortest_path_distances(&self, source: usize, cost: Cost) -> Vec<f64> {
        assert!(source < self.n, "source {source} out of range");
        match cost {
            Cost::Unit => {
                let mut dist = vec![f64::INFINITY; self.n];
                dist[source] = 0.0;
                let mut queue = VecDeque::from([source]);
                while let Some(u) = queue.pop_front() {
                    for &(v, _) in &self.adj[u] {
                        if dist[v].is_infinite() {
                            dist[v] = dist[u] + 1.0;
                            queue.push_back(v);
                        }
                    }
                }
                dist
            }
            Cost::Weight => {
                let mut dist = vec![f64::INFINITY; self.n];
                dist[source] = 0.0;
                let mut heap = std::collections::BinaryHeap::new();
                heap.push(DijkstraEntry { dist: 0.0, node: source });
                while let Some(DijkstraEntry { dist: d, node: u }) = heap.pop() {
                    if d > dist[u] {
                        continue;
                    }
                    for &(v, w) in &self.adj[u] {
                        let nd = d + w;
                        if nd < dist[v] {
                            dist[v] = nd;
                            heap.push(DijkstraEntry { dist: nd, node: v });
                        }
                    }
                }
                dist
            }
        }
    }

    /// Copy of the graph with one edge replaced by a different weight set.
    /// Used by reweighting; topology is preserved.
    pub fn with_weights(&self, weights: &[f64]) -> Result<Self, GraphError> {
        if weights.len() != self.edges.len() {
            return Err(GraphError::Validation(format!(
                "expected {} weights, got {}",
                self.edges.len(),
                weights.len()
            )));
        }
        let edges = self
            .edges
            .iter()
            .zip(weights)
            .map(|(e, &w)| (e.u, e.v, w))
            .collect();
        Graph::new(self.n, edges)
    }
}

#[derive(PartialEq)]
struct DijkstraEntry {
    dist: f64,
    node: usize,
}

impl Eq for DijkstraEntry {}

impl Ord for DijkstraEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // min-heap on distance, deterministic tie-break on node id
        other
            .dist
            .partial_cmp(&self.dist)
            .unwrap()
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for DijkstraEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Parse the plain edge-list format: one `u v [w]` per line, `#` comments,
/// whitespace separated, 0-indexed, missing weight defaults to 1.
/// `n` is the largest node id plus one.
pub fn load_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut edges = Vec::new();
    let mut max_id = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(GraphError::Parse {
                line: idx + 1,
                msg: format!("expected `u v [w]`, got {} fields", fields.len()),
            });
        }
        let parse_id = |s: &str| {
            s.parse::<usize>().map_err(|_| GraphError::Parse {
                line: idx + 1,
                msg: format!("bad node id `{s}`"),
            })
        };
        let u = parse_id(fields[0])?;
        let v = parse_id(fields[1])?;
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| GraphError::Parse {
                line: idx + 1,
                msg: format!("bad weight `{s}`"),
            })?,
            None => 1.0,
        };
        max_id = max_id.max(u).max(v);
        edges.push((u, v, w));
    }
    if edges.is_empty() {
        return Err(GraphError::Parse {
            line: 0,
            msg: "no edges in input".into(),
        });
    }
    Graph::new(max_id + 1, edges)
}

/// Inverse of [`load_edge_list`]: `u v w` per line in edge order.
/// Weights print in shortest round-trip form, so parse∘serialize is identity.
pub fn serialize_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.w).unwrap();
    }
    out
}

/// Load a TUDataset-style directory: `<prefix>_A.txt` holds comma-separated
/// 1-indexed directed edge pairs, `<prefix>_graph_indicator.txt` maps each
/// node to its graph id. Directed duplicates merge into one undirected edge
/// with weight 1; node ids are re-based to `0..n_g` per graph.
pub fn load_tu_dataset(dir: &Path) -> Result<Vec<Graph>, GraphError> {
    let a_path = find_suffix(dir, "_A.txt")?;
    let prefix = a_path
        .file_name()
        .and_then(|s| s.to_str())
        .unwrap_or("")
        .trim_end_matches("_A.txt")
        .to_string();
    let ind_path = dir.join(format!("{prefix}_graph_indicator.txt"));
    if !ind_path.is_file() {
        return Err(GraphError::MissingFile(ind_path.display().to_string()));
    }

    let indicator: Vec<usize> = std::fs::read_to_string(&ind_path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(idx, l)| {
            l.trim().parse::<usize>().map_err(|_| GraphError::Parse {
                line: idx + 1,
                msg: format!("bad graph id `{}`", l.trim()),
            })
        })
        .collect::<Result<_, _>>()?;
    if indicator.is_empty() {
        return Err(GraphError::Parse {
            line: 0,
            msg: "empty graph indicator".into(),
        });
    }

    // graph ids may be arbitrary positive integers; keep them in sorted order
    let mut graph_ids: Vec<usize> = indicator.iter().copied().collect::<HashSet<_>>().into_iter().collect();
    graph_ids.sort_unstable();
    let gid_index: BTreeMap<usize, usize> = graph_ids.iter().enumerate().map(|(i, &g)| (g, i)).collect();

    // local (re-based) id of each node within its graph
    let mut local = vec![0usize; indicator.len()];
    let mut sizes = vec![0usize; graph_ids.len()];
    for (node, &gid) in indicator.iter().enumerate() {
        let gi = gid_index[&gid];
        local[node] = sizes[gi];
        sizes[gi] += 1;
    }

    let mut edge_sets: Vec<HashSet<(usize, usize)>> = vec![HashSet::new(); graph_ids.len()];
    for (idx, raw) in std::fs::read_to_string(&a_path)?.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split(',').map(str::trim);
        let parse = |s: Option<&str>| {
            s.and_then(|t| t.parse::<usize>().ok())
                .ok_or(GraphError::Parse {
                    line: idx + 1,
                    msg: format!("bad edge row `{line}`"),
                })
        };
        let u1 = parse(parts.next())?;
        let v1 = parse(parts.next())?;
        if u1 == 0 || v1 == 0 || u1 > indicator.len() || v1 > indicator.len() {
            return Err(GraphError::Parse {
                line: idx + 1,
                msg: format!("node id out of range in `{line}`"),
            });
        }
        let (u, v) = (u1 - 1, v1 - 1);
        if indicator[u] != indicator[v] {
            return Err(GraphError::InconsistentIndicator {
                u: u1,
                v: v1,
                gu: indicator[u],
                gv: indicator[v],
            });
        }
        if u == v {
            continue; // TU files occasionally carry self-loops; formulas never use them
        }
        let gi = gid_index[&indicator[u]];
        let (a, b) = (local[u].min(local[v]), local[u].max(local[v]));
        edge_sets[gi].insert((a, b));
    }

    sizes
        .iter()
        .zip(edge_sets)
        .map(|(&n, set)| {
            let mut edges: Vec<(usize, usize, f64)> =
                set.into_iter().map(|(u, v)| (u, v, 1.0)).collect();
            edges.sort_unstable_by_key(|&(u, v, _)| (u, v));
            Graph::new(n, edges)
        })
        .collect()
}

fn find_suffix(dir: &Path, suffix: &str) -> Result<std::path::PathBuf, GraphError> {
    let mut hits: Vec<_> = std::fs::read_dir(dir)
        .map_err(|_| GraphError::MissingFile(format!("{} (not a readable directory)", dir.display())))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.file_name()
                .and_then(|s| s.to_str())
                .is_some_and(|s| s.ends_with(suffix))
        })
        .collect();
    hits.sort();
    hits.into_iter()
        .next()
        .ok_or_else(|| GraphError::MissingFile(format!("{}/*{suffix}", dir.display())))
}
