//! Wall-clock comparison of resistance curvature vs Ollivier-Ricci curvature
//! on generated graphs: warm-up excluded, generation and I/O excluded,
//! Laplacian construction included (it is part of what a user pays per
//! method). Times come from the monotonic clock; the checksum over output
//! bits proves the work happened and pins determinism across repetitions.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::generators::{generate_connected, GenSpec};
use crate::ollivier::{or_curvature, Metric};
use crate::resistance::{resistance_curvature, SolveMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureMethod {
    Resistance,
    Ollivier,
}

impl CurvatureMethod {
    pub fn name(self) -> &'static str {
        match self {
            CurvatureMethod::Resistance => "resistance",
            CurvatureMethod::Ollivier => "ollivier",
        }
    }
}

/// One timing measurement series for a (method, graph) pair.
#[derive(Debug, Clone, Serialize)]
pub struct BenchRecord {
    pub method: CurvatureMethod,
    pub model: String,
    pub n: usize,
    pub degree: usize,
    pub seed: u64,
    pub reps: usize,
    pub mean_s: f64,
    pub std_s: f64,
    /// Median of the repetition times, robust to scheduler noise.
    pub median_s: f64,
    pub threads: usize,
    /// FNV-1a over the output curvature bits, stable for a fixed seed.
    pub checksum: String,
}

/// Mean-time ratio OR / resistance for one spec.
#[derive(Debug, Clone, Serialize)]
pub struct SpeedupRow {
    pub model: String,
    pub n: usize,
    pub degree: usize,
    pub seed: u64,
    pub speedup: f64,
}

#[derive(Debug, Serialize)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    pub speedups: Vec<SpeedupRow>,
    /// Specs that failed to generate or compute, with the error text; they
    /// abort only their own rows.
    pub failures: Vec<(String, String)>,
}

/// Time both curvature methods on every spec. Repetition 0 is a discarded
/// warm-up.
pub fn bench_compare(specs: &[GenSpec], repetitions: usize) -> BenchOutcome {
    assert!(repetitions >= 1, "need at least one repetition");
    let mut records = Vec::new();
    let mut speedups = Vec::new();
    let mut failures = Vec::new();

    for spec in specs {
        let (model, n, degree) = spec.descriptor();
        let label = format!("{model} n={n} deg={degree} seed={}", spec.seed);
        let graph = match generate_connected(spec, 20) {
            Ok(g) => g,
            Err(e) => {
                failures.push((label, e.to_string()));
                continue;
            }
        };

        let mut mean_by_method = [0.0f64; 2];
        let mut spec_failed = false;
        for (mi, method) in [CurvatureMethod::Resistance, CurvatureMethod::Ollivier]
            .into_iter()
            .enumerate()
        {
            let run = || -> Result<u64, String> {
                match method {
                    CurvatureMethod::Resistance => {
                        let rc = resistance_curvature(&graph, None, SolveMode::Auto)
                            .map_err(|e| e.to_string())?;
                        Ok(fnv1a64(&rc.edge_curvature))
                    }
                    CurvatureMethod::Ollivier => {
                        let or = or_curvature(&graph, 0.5, Metric::Unit)
                            .map_err(|e| e.to_string())?;
                        Ok(fnv1a64(&or.kappa))
                    }
                }
            };

            let warm = match run() {
                Ok(c) => c,
                Err(e) => {
                    failures.push((label.clone(), format!("{}: {e}", method.name())));
                    spec_failed = true;
                    break;
                }
            };
            let mut times = Vec::with_capacity(repetitions);
            let mut checksum = warm;
            for _ in 0..repetitions {
                let t0 = Instant::now();
                checksum = run().expect("warmed-up run cannot fail");
                times.push(t0.elapsed().as_secs_f64());
            }
            let mean = times.iter().sum::<f64>() / times.len() as f64;
            let var = times.iter().map(|t| (t - mean).powi(2)).sum::<f64>() / times.len() as f64;
            let mut sorted = times.clone();
            sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let median = sorted[sorted.len() / 2];
            mean_by_method[mi] = mean;
            records.push(BenchRecord {
                method,
                model: model.to_string(),
                n,
                degree,
                seed: spec.seed,
                reps: repetitions,
                mean_s: mean,
                std_s: var.sqrt(),
                median_s: median,
                threads: rayon::current_num_threads(),
                checksum: format!("{checksum:016x}"),
            });
        }
        if !spec_failed {
            speedups.push(SpeedupRow {
                model: model.to_string(),
                n,
                degree,
                seed: spec.seed,
                speedup: mean_by_method[1] / mean_by_method[0],
            });
        }
    }

    BenchOutcome { records, speedups, failures }
}

/// FNV-1a over the raw bits of an f64 slice.
pub fn fnv1a64(values: &[f64]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for v in values {
        for b in v.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// CSV with the fixed column set
/// `method,model,n,degree,seed,reps,mean_s,std_s,threads,checksum`.
pub fn records_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("method,model,n,degree,seed,reps,mean_s,std_s,threads,checksum\n");
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.method.name(),
            r.model,
            r.n,
            r.degree,
            r.seed,
            r.reps,
            r.mean_s,
            r.std_s,
            r.threads,
            r.checksum
        )
        .unwrap();
    }
    out
}
