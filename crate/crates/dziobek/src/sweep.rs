//! Batch sweeps over mass space and exponent: one solve per grid point,
//! theorem-level reports per accepted solution, byte-stable CSV output, and
//! a violation-count summary.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{convexity_class, ordering_report, symmetry_report, Classification};
use crate::delta::{Exponent, Residuals, Tolerances};
use crate::error::{Error, Result};
use crate::geometry::MassVector;
use crate::io::format_f64;
use crate::solver::{derive_seed, solve_all, SignPattern, SolverOptions};

/// Sweep description. Each mass axis is either a fixed value (`"1"`) or an
/// inclusive range with a count (`"0.5:2:5"`); the grid is their cartesian
/// product with the last axis fastest, crossed with every exponent
/// (exponent innermost).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub masses: Vec<String>,
    pub exponents: Vec<f64>,
    pub pattern: String,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses the default pool.
    #[serde(default)]
    pub parallelism: usize,
    #[serde(default = "default_starts")]
    pub starts: usize,
}

fn default_starts() -> usize {
    16
}

/// Parses one mass axis: a bare number, or `start:end:count`.
pub fn parse_axis(text: &str) -> Result<Vec<f64>> {
    let text = text.trim();
    if let Ok(v) = text.parse::<f64>() {
        return Ok(vec![v]);
    }
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!(
            "mass axis must be a number or start:end:count, got '{}'",
            text
        )));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad axis start '{}'", parts[0])))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad axis end '{}'", parts[1])))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad axis count '{}'", parts[2])))?;
    if count == 0 {
        return Err(Error::InvalidInput("axis count must be >= 1".into()));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count)
        .map(|i| start + (end - start) * i as f64 / (count - 1) as f64)
        .collect())
}

/// One grid point's outcome.
#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub index: usize,
    pub masses: Vec<f64>,
    pub a: f64,
    /// "accepted", "spurious_only", "no_convergence", or "error".
    pub outcome: String,
    pub accepted_count: usize,
    /// Coordinates of the first accepted solution (NaN otherwise).
    pub deltas: Vec<f64>,
    /// Upper-triangle squared distances s_ij, i < j in row order.
    pub distances: Vec<f64>,
    pub residuals: Option<Residuals>,
    /// Mirror verdicts in the order produced by the symmetry report.
    pub symmetric: Vec<bool>,
    pub ordering_consistent: Option<bool>,
    pub convexity: String,
    /// Wall time per point; diagnostic only, never written to the CSV.
    pub wall_ms: f64,
}

/// Aggregate verdicts over a sweep. Violation counts are expected to be
/// zero: a symmetry violation is an accepted solution whose mirror verdict
/// contradicts its mass pattern (equal masses asymmetric, or masses apart
/// by at least 5% symmetric); an ordering violation is an accepted solution
/// with an inconsistent sign chain.
#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub spec_hash: String,
    pub rows: usize,
    pub accepted: usize,
    pub no_convergence: usize,
    pub spurious_only: usize,
    pub errors: usize,
    pub symmetry_violations: usize,
    pub ordering_violations: usize,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

fn classification_label(c: &Classification) -> String {
    match c {
        Classification::ConvexDiagonal { pair } => format!("convex_diagonal_{}_{}", pair.0, pair.1),
        Classification::ConvexOther => "convex_other".into(),
        Classification::Nonconvex { interior } => format!("nonconvex_{}", interior),
        Classification::Degenerate { .. } => "degenerate".into(),
    }
}

fn run_point(index: usize, masses: &[f64], a: f64, spec: &SweepSpec) -> RunRecord {
    let started = std::time::Instant::now();
    let n = masses.len();
    let nan_deltas = vec![f64::NAN; n];
    let nan_distances = vec![f64::NAN; n * (n - 1) / 2];
    let mut record = RunRecord {
        index,
        masses: masses.to_vec(),
        a,
        outcome: "error".into(),
        accepted_count: 0,
        deltas: nan_deltas,
        distances: nan_distances,
        residuals: None,
        symmetric: Vec::new(),
        ordering_consistent: None,
        convexity: String::new(),
        wall_ms: 0.0,
    };
    let mut run = || -> Result<()> {
        let m = MassVector::new(masses.to_vec())?;
        let e = Exponent::new_unguaranteed(a)?;
        let pattern = SignPattern::parse(&spec.pattern)?;
        let opts = SolverOptions {
            seed: derive_seed(spec.seed, index as u64),
            starts: spec.starts,
            tolerances: spec.tolerances,
            ..SolverOptions::default()
        };
        let outcome = solve_all(&m, &e, &pattern, &opts)?;
        record.accepted_count = outcome.accepted.len();
        if let Some(sol) = outcome.accepted.first() {
            record.outcome = "accepted".into();
            record.deltas = sol.deltas.as_slice().to_vec();
            record.distances = {
                let mut d = Vec::with_capacity(n * (n - 1) / 2);
                for i in 0..n {
                    for j in (i + 1)..n {
                        d.push(sol.distances.get(i, j));
                    }
                }
                d
            };
            record.residuals = Some(sol.residuals);
            if n == 4 || n == 5 {
                if let Ok(mirrors) = symmetry_report(sol, crate::analysis::SYMMETRY_TOL) {
                    record.symmetric = mirrors.iter().map(|r| r.symmetric).collect();
                }
                if let Ok(ordering) = ordering_report(sol) {
                    record.ordering_consistent = Some(ordering.consistent);
                }
            }
            record.convexity = classification_label(&convexity_class(&sol.deltas).classification);
        } else if !outcome.spurious.is_empty() {
            record.outcome = "spurious_only".into();
        } else {
            record.outcome = "no_convergence".into();
        }
        Ok(())
    };
    if let Err(e) = run() {
        record.outcome = "error".into();
        record.convexity = e.to_string();
    }
    record.wall_ms = started.elapsed().as_secs_f64() * 1e3;
    record
}

/// Runs the sweep. Grid points are dispatched to a worker pool and the
/// records are returned in grid order regardless of scheduling; per-point
/// solver seeds derive from the spec seed and the point index, so the
/// output is a pure function of (spec, seed).
pub fn run_sweep(spec: &SweepSpec) -> Result<(Vec<RunRecord>, SweepSummary)> {
    if spec.masses.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 mass axes".into()));
    }
    if spec.exponents.is_empty() {
        return Err(Error::InvalidInput("need at least one exponent".into()));
    }
    let axes: Vec<Vec<f64>> = spec
        .masses
        .iter()
        .map(|t| parse_axis(t))
        .collect::<Result<_>>()?;
    if axes.iter().any(|a| a.is_empty()) {
        return Err(Error::InvalidInput("empty mass axis".into()));
    }
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        let mut next = Vec::with_capacity(grid.len() * axis.len());
        for point in &grid {
            for &v in axis {
                let mut p = point.clone();
                p.push(v);
                next.push(p);
            }
        }
        grid = next;
    }
    let points: Vec<(usize, Vec<f64>, f64)> = grid
        .iter()
        .flat_map(|masses| spec.exponents.iter().map(|&a| (masses.clone(), a)))
        .enumerate()
        .map(|(i, (masses, a))| (i, masses, a))
        .collect();

    let work = |points: &[(usize, Vec<f64>, f64)]| -> Vec<RunRecord> {
        points
            .par_iter()
            .map(|(i, masses, a)| run_point(*i, masses, *a, spec))
            .collect()
    };
    let records = if spec.parallelism > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.parallelism)
            .build()
            .map_err(|e| Error::InvalidInput(format!("worker pool: {}", e)))?;
        pool.install(|| work(&points))
    } else {
        work(&points)
    };

    let spec_text = serde_json::to_string(spec).expect("spec serializes");
    let mut summary = SweepSummary {
        spec_hash: format!("{:016x}", fnv1a(spec_text.as_bytes())),
        rows: records.len(),
        accepted: 0,
        no_convergence: 0,
        spurious_only: 0,
        errors: 0,
        symmetry_violations: 0,
        ordering_violations: 0,
    };
    for record in &records {
        match record.outcome.as_str() {
            "accepted" => summary.accepted += 1,
            "no_convergence" => summary.no_convergence += 1,
            "spurious_only" => summary.spurious_only += 1,
            _ => summary.errors += 1,
        }
        if record.outcome == "accepted" && !record.symmetric.is_empty() {
            let m1 = record.masses[0];
            let m2 = record.masses[1];
            let gap = (m1 - m2).abs() / (m1 + m2);
            let symmetric = record.symmetric[0];
            if (gap < 1e-12 && !symmetric) || (gap >= 0.05 && symmetric) {
                summary.symmetry_violations += 1;
            }
            if record.ordering_consistent == Some(false) {
                summary.ordering_violations += 1;
            }
        }
    }
    Ok((records, summary))
}

/// Fixed-order CSV header for n bodies.
pub fn csv_header(n: usize) -> String {
    let mut cols = vec!["index".to_string()];
    cols.extend((1..=n).map(|i| format!("m{}", i)));
    cols.push("a".into());
    cols.push("outcome".into());
    cols.push("accepted_count".into());
    cols.extend((1..=n).map(|i| format!("delta{}", i)));
    for i in 1..=n {
        for j in (i + 1)..=n {
            cols.push(format!("s{}{}", i, j));
        }
    }
    cols.extend(
        ["t_spread", "dziobek_fit", "cayley_menger", "direct"]
            .iter()
            .map(|s| s.to_string()),
    );
    match n {
        4 => {
            cols.push("sym_q3q4".into());
            cols.push("sym_q1q2".into());
        }
        5 => cols.push("sym_q3q4q5".into()),
        _ => {}
    }
    cols.push("ordering_consistent".into());
    cols.push("convexity".into());
    cols.join(",")
}

/// One CSV row; floats carry 17 significant digits so rows are bit-faithful.
pub fn csv_row(record: &RunRecord) -> String {
    let n = record.masses.len();
    let mut cols = vec![record.index.to_string()];
    cols.extend(record.masses.iter().map(|&v| format_f64(v)));
    cols.push(format_f64(record.a));
    cols.push(record.outcome.clone());
    cols.push(record.accepted_count.to_string());
    cols.extend(record.deltas.iter().map(|&v| format_f64(v)));
    cols.extend(record.distances.iter().map(|&v| format_f64(v)));
    match &record.residuals {
        Some(r) => {
            cols.push(format_f64(r.t_spread));
            cols.push(format_f64(r.dziobek_fit));
            cols.push(format_f64(r.cayley_menger));
            cols.push(format_f64(r.direct));
        }
        None => cols.extend(std::iter::repeat("NaN".to_string()).take(4)),
    }
    let mirror_count = match n {
        4 => 2,
        5 => 1,
        _ => 0,
    };
    for k in 0..mirror_count {
        cols.push(
            record
                .symmetric
                .get(k)
                .map(|b| b.to_string())
                .unwrap_or_default(),
        );
    }
    cols.push(
        record
            .ordering_consistent
            .map(|b| b.to_string())
            .unwrap_or_default(),
    );
    cols.push(record.convexity.clone());
    cols.join(",")
}

/// Full CSV text: header plus one row per record, `\n` line endings.
pub fn to_csv(records: &[RunRecord], n: usize) -> String {
    let mut out = csv_header(n);
    out.push('\n');
    for record in records {
        out.push_str(&csv_row(record));
        out.push('\n');
    }
    out
}
