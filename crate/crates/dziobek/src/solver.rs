//! Root finding for the normalized coordinate system, plus the shared
//! damped-Newton and Levenberg-Marquardt kernels.
//!
//! The unknowns are Delta in R^n; the square residual system is
//!
//! ```text
//! F(Delta) = [ sum_i Delta_i,  t_1 - t_2,  ...,  t_{n-1} - t_n ]
//! ```
//!
//! with the mutual distances substituted from the coordinate map. Every root
//! is post-validated (realizability and the acceleration condition); roots
//! that solve the system but fail validation are reported as spurious, never
//! silently dropped.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::delta::{assemble_solution, CCSolution, DziobekCoords, Exponent, Tolerances};
use crate::error::{Error, Result};
use crate::geometry::MassVector;

/// Fraction of the pair bound m_i m_j that iterates must stay below.
const DOMAIN_MARGIN: f64 = 1.0 - 1e-9;

/// Requested signs for the solved coordinates, one per particle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern(Vec<i8>);

impl SignPattern {
    /// Entries must be +1 or -1 with at least one of each sign.
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "sign pattern needs n >= 3 entries, got {}",
                signs.len()
            )));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidInput("sign pattern entries must be +1 or -1".into()));
        }
        let neg = signs.iter().filter(|&&s| s < 0).count();
        if neg == 0 || neg == signs.len() {
            return Err(Error::InvalidInput(
                "sign pattern must mix signs (coordinates sum to zero)".into(),
            ));
        }
        Ok(Self(signs))
    }

    /// Parses strings like `--++` or `-+++`.
    pub fn parse(text: &str) -> Result<Self> {
        let signs: Result<Vec<i8>> = text
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                other => Err(Error::InvalidInput(format!(
                    "sign pattern may contain only '+' and '-', got '{}'",
                    other
                ))),
            })
            .collect();
        Self::new(signs?)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> i8 {
        self.0[i]
    }

    pub fn negative_indices(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&s| -s).collect())
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != n = {}",
                perm.len(),
                self.len()
            )));
        }
        Self::new(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl std::fmt::Display for SignPattern {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &s in &self.0 {
            write!(f, "{}", if s > 0 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

/// Multi-start solver configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Number of seeded starts (start 0 is the unjittered ansatz).
    pub starts: usize,
    pub seed: u64,
    /// Relative jitter applied per coordinate to starts >= 1.
    pub jitter: f64,
    pub max_iter: usize,
    /// Infinity-norm target for the residual system.
    pub f_tol: f64,
    /// Weight of the realizability residual in the least-squares fallback.
    pub cm_weight: f64,
    /// Acceptance tolerances for post-validation.
    pub tolerances: Tolerances,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            starts: 16,
            seed: 0,
            jitter: 0.3,
            max_iter: 120,
            f_tol: 1e-13,
            cm_weight: 1.0,
            tolerances: Tolerances::default(),
        }
    }
}

/// A root of the coordinate system that failed post-validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpuriousDiagnostic {
    pub deltas: Vec<f64>,
    pub reason: String,
}

/// Everything a solve produced: validated solutions, rejected roots, and
/// bookkeeping for diagnostics.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    /// Accepted solutions, sorted lexicographically by coordinates.
    pub accepted: Vec<CCSolution>,
    /// Roots that solved the system but failed realizability validation.
    pub spurious: Vec<SpuriousDiagnostic>,
    /// Converged roots whose signs match neither the pattern nor its negation.
    pub off_pattern: usize,
    /// Best residual infinity-norm over all starts (converged or not).
    pub best_residual: f64,
    /// Starts whose iteration reached the residual tolerance.
    pub starts_converged: usize,
}

/// SplitMix64, used to derive independent per-start RNG streams.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master
        .wrapping_add(stream.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Generic kernels
// ---------------------------------------------------------------------------

/// Result of an iterative solve: best point, its residual infinity norm, and
/// whether the tolerance was reached.
#[derive(Debug, Clone)]
pub struct IterateResult {
    pub x: DVector<f64>,
    pub residual_inf: f64,
    pub converged: bool,
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Finite-difference Jacobian. Central differences where both side points
/// are inside the domain, one-sided otherwise; `None` if a column cannot be
/// evaluated at all.
fn fd_jacobian<F>(f: &F, x: &DVector<f64>, fx: &DVector<f64>) -> Option<DMatrix<f64>>
where
    F: Fn(&DVector<f64>) -> Option<DVector<f64>>,
{
    let n = x.len();
    let m = fx.len();
    let mut jac = DMatrix::zeros(m, n);
    for j in 0..n {
        let h = 6e-6 * x[j].abs().max(1e-2);
        let mut xp = x.clone();
        xp[j] += h;
        let mut xm = x.clone();
        xm[j] -= h;
        let fp = f(&xp);
        let fm = f(&xm);
        let col = match (fp, fm) {
            (Some(fp), Some(fm)) => (fp - fm) / (2.0 * h),
            (Some(fp), None) => (fp - fx) / h,
            (None, Some(fm)) => (fx - fm) / h,
            (None, None) => return None,
        };
        jac.set_column(j, &col);
    }
    Some(jac)
}

/// Damped Newton iteration on a square system with a domain guard: the step
/// is halved until the trial point is inside the domain and the residual
/// norm decreases.
pub fn damped_newton<F>(f: &F, x0: DVector<f64>, max_iter: usize, f_tol: f64) -> Option<IterateResult>
where
    F: Fn(&DVector<f64>) -> Option<DVector<f64>>,
{
    let mut x = x0;
    let mut r = f(&x)?;
    for _ in 0..max_iter {
        let norm = inf_norm(&r);
        if norm < f_tol {
            return Some(IterateResult {
                x,
                residual_inf: norm,
                converged: true,
            });
        }
        let jac = fd_jacobian(f, &x, &r)?;
        let step = match jac.clone().lu().solve(&(-&r)) {
            Some(s) => s,
            None => {
                // Singular Jacobian: Tikhonov-regularized normal equations.
                let jt = jac.transpose();
                let mut a = &jt * &jac;
                let reg = 1e-12 * a.diagonal().iter().cloned().fold(1e-300, f64::max);
                for i in 0..a.nrows() {
                    a[(i, i)] += reg;
                }
                a.lu().solve(&(&jt * (-&r)))?
            }
        };
        let cost = r.norm_squared();
        let mut beta = 1.0;
        let mut advanced = false;
        for _ in 0..40 {
            let x_try = &x + &step * beta;
            if let Some(r_try) = f(&x_try) {
                if r_try.norm_squared() <= cost * (1.0 - 1e-4 * beta) {
                    x = x_try;
                    r = r_try;
                    advanced = true;
                    break;
                }
            }
            beta *= 0.5;
        }
        if !advanced {
            return Some(IterateResult {
                residual_inf: inf_norm(&r),
                x,
                converged: false,
            });
        }
    }
    let norm = inf_norm(&r);
    Some(IterateResult {
        x,
        residual_inf: norm,
        converged: norm < f_tol,
    })
}

/// Levenberg-Marquardt on a (possibly rectangular) residual vector with a
/// domain guard: trial points outside the domain count as failed steps.
pub fn levenberg_marquardt<F>(
    f: &F,
    x0: DVector<f64>,
    max_iter: usize,
    f_tol: f64,
) -> Option<IterateResult>
where
    F: Fn(&DVector<f64>) -> Option<DVector<f64>>,
{
    let mut x = x0;
    let mut r = f(&x)?;
    let mut cost = r.norm_squared();
    let mut lambda = 1e-3;
    let mut stagnant = 0;
    for _ in 0..max_iter {
        if inf_norm(&r) < f_tol {
            break;
        }
        let jac = match fd_jacobian(f, &x, &r) {
            Some(j) => j,
            None => break,
        };
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * &r;
        let mut accepted = false;
        for _ in 0..25 {
            let mut a = jtj.clone();
            for i in 0..a.nrows() {
                a[(i, i)] += lambda * jtj[(i, i)].max(1e-12);
            }
            let step = match a.lu().solve(&(-&g)) {
                Some(s) => s,
                None => {
                    lambda *= 4.0;
                    continue;
                }
            };
            let x_try = &x + &step;
            if let Some(r_try) = f(&x_try) {
                let cost_try = r_try.norm_squared();
                if cost_try < cost {
                    let improvement = (cost - cost_try) / cost.max(1e-300);
                    x = x_try;
                    r = r_try;
                    cost = cost_try;
                    lambda = (lambda * 0.25).max(1e-12);
                    accepted = true;
                    stagnant = if improvement < 1e-14 { stagnant + 1 } else { 0 };
                    break;
                }
            }
            lambda *= 4.0;
            if lambda > 1e14 {
                break;
            }
        }
        if !accepted || stagnant > 4 {
            break;
        }
    }
    let norm = inf_norm(&r);
    Some(IterateResult {
        x,
        residual_inf: norm,
        converged: norm < f_tol,
    })
}

// ---------------------------------------------------------------------------
// The coordinate-system solve
// ---------------------------------------------------------------------------

/// Residual of the square system [sum Delta; consecutive t gaps], `None`
/// outside the pair-product domain.
fn system_residual(x: &DVector<f64>, m: &MassVector, alpha: f64) -> Option<DVector<f64>> {
    let n = x.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if x[i] * x[j] >= DOMAIN_MARGIN * m.get(i) * m.get(j) {
                return None;
            }
        }
    }
    let mut s = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = (1.0 - x[i] * x[j] / (m.get(i) * m.get(j))).powf(alpha);
            s[i * n + j] = v;
            s[j * n + i] = v;
        }
    }
    let t: Vec<f64> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| x[j] * s[i * n + j]).sum())
        .collect();
    let mut r = DVector::zeros(n);
    r[0] = x.sum();
    for k in 0..(n - 1) {
        r[k + 1] = t[k] - t[k + 1];
    }
    Some(r)
}

/// Scale-relative realizability residual of the distance matrix built from
/// `x`, used to steer the least-squares fallback toward realizable roots.
fn realizability_residual(x: &DVector<f64>, m: &MassVector, alpha: f64) -> f64 {
    let n = x.len();
    let mut b = DMatrix::zeros(n + 1, n + 1);
    let mut scale = 0.0f64;
    for i in 1..=n {
        b[(0, i)] = 1.0;
        b[(i, 0)] = 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = (1.0 - x[i] * x[j] / (m.get(i) * m.get(j))).powf(alpha);
                b[(i + 1, j + 1)] = v;
                scale = scale.max(v.abs());
            }
        }
    }
    b.determinant().abs() / scale.powi(n as i32 - 1)
}

/// The mass-scaled seed magnitude: half the most restrictive pair ratio, so
/// the unjittered ansatz is always strictly inside the pair-product domain.
fn seed_magnitude(m: &MassVector) -> f64 {
    let n = m.len();
    let mut d0 = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            d0 = d0.min((m.get(i) * m.get(j)).sqrt() / m.get(i).max(m.get(j)));
        }
    }
    0.5 * d0
}

fn start_point(
    m: &MassVector,
    pattern: &SignPattern,
    start: usize,
    seed: u64,
    jitter: f64,
) -> DVector<f64> {
    let n = m.len();
    let d0 = seed_magnitude(m);
    let mut x = DVector::from_fn(n, |i, _| pattern.get(i) as f64 * m.get(i) * d0);
    if start > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, start as u64));
        let global: f64 = rng.gen_range(0.4..1.6);
        for i in 0..n {
            let u: f64 = rng.gen_range(-1.0..1.0);
            x[i] *= global * (1.0 + jitter * u);
        }
    }
    // Pull the whole vector inward until every pair product is in-domain.
    loop {
        let mut ok = true;
        for i in 0..n {
            for j in (i + 1)..n {
                if x[i] * x[j] >= 0.8 * m.get(i) * m.get(j) {
                    ok = false;
                }
            }
        }
        if ok {
            break;
        }
        x *= 0.9;
    }
    x
}

/// True when every coordinate is significantly nonzero and matches the sign
/// pattern entry-wise.
fn matches_pattern(x: &DVector<f64>, pattern: &SignPattern) -> bool {
    x.iter()
        .enumerate()
        .all(|(i, &v)| v * pattern.get(i) as f64 > 1e-10)
}

/// Solves the normalized coordinate system for every root matching the sign
/// pattern, validates each, and returns accepted and spurious roots.
///
/// Deterministic for a fixed seed. Multiple accepted roots are returned
/// sorted lexicographically by coordinates.
pub fn solve_all(
    m: &MassVector,
    e: &Exponent,
    pattern: &SignPattern,
    opts: &SolverOptions,
) -> Result<SolveOutcome> {
    let n = m.len();
    if n < 3 {
        return Err(Error::InvalidInput(format!("need n >= 3 bodies, got {}", n)));
    }
    if pattern.len() != n {
        return Err(Error::InvalidInput(format!(
            "sign pattern length {} != number of masses {}",
            pattern.len(),
            n
        )));
    }
    if opts.starts == 0 {
        return Err(Error::InvalidInput("need at least one start".into()));
    }
    let alpha = e.alpha();
    // The search stays inside the requested sign orthant: of the paired
    // roots +Delta/-Delta exactly one lives there, and roots of other sign
    // patterns (whose basins dominate at uneven masses) are excluded. A
    // mass-scaled floor keeps iterates off the orthant boundary, where the
    // degenerate roots with a vanishing coordinate live.
    let d0 = seed_magnitude(m);
    let floor: Vec<f64> = (0..n).map(|i| 1e-6 * m.get(i) * d0).collect();
    let in_orthant =
        |x: &DVector<f64>| (0..n).all(|i| x[i] * pattern.get(i) as f64 > floor[i]);
    let f = |x: &DVector<f64>| {
        if !in_orthant(x) {
            return None;
        }
        system_residual(x, m, alpha)
    };
    let f_aug = |x: &DVector<f64>| -> Option<DVector<f64>> {
        if !in_orthant(x) {
            return None;
        }
        let r = system_residual(x, m, alpha)?;
        let mut out = DVector::zeros(r.len() + 1);
        out.rows_mut(0, r.len()).copy_from(&r);
        out[r.len()] = opts.cm_weight * realizability_residual(x, m, alpha);
        Some(out)
    };

    let mut roots: Vec<DVector<f64>> = Vec::new();
    let mut off_pattern = 0usize;
    let mut best_residual = f64::INFINITY;
    let mut starts_converged = 0usize;

    for start in 0..opts.starts {
        let x0 = start_point(m, pattern, start, opts.seed, opts.jitter);
        let mut result = damped_newton(&f, x0.clone(), opts.max_iter, opts.f_tol);
        let stalled = result.as_ref().map(|r| !r.converged).unwrap_or(true);
        if stalled {
            // Least-squares descent on the residuals augmented with the
            // realizability term, then a Newton polish.
            let fallback_x0 = result.as_ref().map(|r| r.x.clone()).unwrap_or(x0);
            if let Some(lm) = levenberg_marquardt(&f_aug, fallback_x0, 4 * opts.max_iter, opts.f_tol)
            {
                result = damped_newton(&f, lm.x.clone(), opts.max_iter, opts.f_tol).or(Some(lm));
            }
        }
        let Some(result) = result else { continue };
        best_residual = best_residual.min(result.residual_inf);
        if !result.converged {
            continue;
        }
        starts_converged += 1;
        let mut x = result.x;
        if !matches_pattern(&x, pattern) {
            let flipped = -&x;
            if matches_pattern(&flipped, pattern) {
                x = flipped;
            } else {
                off_pattern += 1;
                continue;
            }
        }
        if !roots.iter().any(|r| inf_norm(&(r - &x)) < 1e-8) {
            roots.push(x);
        }
    }

    let mut accepted = Vec::new();
    let mut spurious = Vec::new();
    for root in roots {
        let deltas = match DziobekCoords::new(root.iter().copied().collect()) {
            Ok(d) => d,
            Err(err) => {
                spurious.push(SpuriousDiagnostic {
                    deltas: root.iter().copied().collect(),
                    reason: err.to_string(),
                });
                continue;
            }
        };
        match assemble_solution(deltas, m, e, &opts.tolerances) {
            Ok(sol) if sol.accepted => accepted.push(sol),
            Ok(sol) => spurious.push(SpuriousDiagnostic {
                deltas: sol.deltas.as_slice().to_vec(),
                reason: format!(
                    "validation failed: t_spread={:.3e} fit={:.3e} cayley_menger={:.3e} direct={:.3e} mu={:.6}",
                    sol.residuals.t_spread,
                    sol.residuals.dziobek_fit,
                    sol.residuals.cayley_menger,
                    sol.residuals.direct,
                    sol.mu
                ),
            }),
            Err(err @ (Error::NotRealizable { .. } | Error::DomainViolation { .. })) => {
                spurious.push(SpuriousDiagnostic {
                    deltas: root.iter().copied().collect(),
                    reason: err.to_string(),
                });
            }
            Err(other) => return Err(other),
        }
    }
    accepted.sort_by(|a, b| {
        for (u, v) in a.deltas.as_slice().iter().zip(b.deltas.as_slice()) {
            match u.total_cmp(v) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(SolveOutcome {
        accepted,
        spurious,
        off_pattern,
        best_residual,
        starts_converged,
    })
}

/// First accepted solution for the sign pattern.
///
/// Errors with [`Error::NoConvergence`] when no start converged to a
/// pattern-matching root, and [`Error::SpuriousOnly`] when roots were found
/// but all failed validation.
pub fn solve_normalized(
    m: &MassVector,
    e: &Exponent,
    pattern: &SignPattern,
    opts: &SolverOptions,
) -> Result<CCSolution> {
    let outcome = solve_all(m, e, pattern, opts)?;
    if let Some(first) = outcome.accepted.into_iter().next() {
        return Ok(first);
    }
    if !outcome.spurious.is_empty() {
        return Err(Error::SpuriousOnly {
            count: outcome.spurious.len(),
        });
    }
    Err(Error::NoConvergence {
        best_residual: outcome.best_residual,
        starts: opts.starts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn solve_one(masses: Vec<f64>, a: f64, pattern: &str) -> CCSolution {
        let m = MassVector::new(masses).unwrap();
        let e = Exponent::new(a).unwrap();
        let p = SignPattern::parse(pattern).unwrap();
        solve_normalized(&m, &e, &p, &SolverOptions::default()).unwrap()
    }

    #[test]
    fn newton_kernel_solves_circle_line() {
        let f = |x: &DVector<f64>| {
            Some(DVector::from_vec(vec![
                x[0] * x[0] + x[1] * x[1] - 1.0,
                x[0] - x[1],
            ]))
        };
        let result = damped_newton(&f, DVector::from_vec(vec![1.0, 0.2]), 50, 1e-14).unwrap();
        assert!(result.converged);
        let root = (0.5f64).sqrt();
        assert_abs_diff_eq!(result.x[0], root, epsilon = 1e-10);
        assert_abs_diff_eq!(result.x[1], root, epsilon = 1e-10);
    }

    #[test]
    fn lm_kernel_minimizes_rosenbrock_residuals() {
        let f = |x: &DVector<f64>| {
            Some(DVector::from_vec(vec![10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0]]))
        };
        let result =
            levenberg_marquardt(&f, DVector::from_vec(vec![-1.2, 1.0]), 500, 1e-12).unwrap();
        assert!(result.converged, "residual = {}", result.residual_inf);
        assert_abs_diff_eq!(result.x[0], 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(result.x[1], 1.0, epsilon = 1e-8);
    }

    #[test]
    fn vortex_square_has_closed_form_coordinates() {
        let sol = solve_one(vec![1.0; 4], -1.0, "--++");
        let expected = (1.0f64 / 3.0).sqrt();
        for (i, &d) in sol.deltas.as_slice().iter().enumerate() {
            let sign = if i < 2 { -1.0 } else { 1.0 };
            assert_abs_diff_eq!(d, sign * expected, epsilon = 1e-10);
        }
        assert_abs_diff_eq!(sol.lambda_over_m, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(sol.mu, -1.0, epsilon = 1e-10);
        assert!(sol.accepted);
        assert_abs_diff_eq!(
            sol.distances.get(0, 1) / sol.distances.get(0, 2),
            2.0,
            epsilon = 1e-10
        );
    }

    #[test]
    fn gravitational_square_matches_bisection() {
        // 2 (1 + d^2)^alpha = (1 - d^2)^alpha pins |Delta| for equal masses.
        let alpha = -2.0 / 3.0;
        let h = |d: f64| 2.0 * (1.0 + d * d).powf(alpha) - (1.0 - d * d).powf(alpha);
        let (mut lo, mut hi) = (0.0, 0.999_999);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if h(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let oracle = 0.5 * (lo + hi);
        assert_abs_diff_eq!(oracle, 0.6911, epsilon = 5e-4);

        let sol = solve_one(vec![1.0; 4], -1.5, "--++");
        for &d in sol.deltas.as_slice() {
            assert_abs_diff_eq!(d.abs(), oracle, epsilon = 1e-10);
        }
    }

    #[test]
    fn equal_leading_masses_give_equal_leading_coordinates() {
        let sol = solve_one(vec![1.0, 1.0, 2.0, 3.0], -1.5, "--++");
        let d = sol.deltas.as_slice();
        assert!(
            (d[0] - d[1]).abs() < 1e-10,
            "expected symmetric coordinates, got {:?}",
            d
        );
        assert!(sol.mu < 0.0);
    }

    #[test]
    fn relabeling_permutes_the_solution() {
        let opts = SolverOptions::default();
        let e = Exponent::new(-1.0).unwrap();
        let m = MassVector::new(vec![1.0, 2.0, 1.5, 0.7]).unwrap();
        let p = SignPattern::parse("--++").unwrap();
        let sol = solve_normalized(&m, &e, &p, &opts).unwrap();

        // Swap particles 3 and 4.
        let perm = [0usize, 1, 3, 2];
        let m2 = m.permuted(&perm).unwrap();
        let p2 = p.permuted(&perm).unwrap();
        let sol2 = solve_normalized(&m2, &e, &p2, &opts).unwrap();
        for i in 0..4 {
            assert_abs_diff_eq!(
                sol2.deltas.get(i),
                sol.deltas.get(perm[i]),
                epsilon = 1e-9
            );
            for j in 0..4 {
                assert_abs_diff_eq!(
                    sol2.distances.get(i, j),
                    sol.distances.get(perm[i], perm[j]),
                    epsilon = 1e-9
                );
            }
        }
    }

    #[test]
    fn starvation_reports_no_convergence() {
        let m = MassVector::new(vec![1.0; 4]).unwrap();
        let e = Exponent::new(-1.5).unwrap();
        let p = SignPattern::parse("--++").unwrap();
        let opts = SolverOptions {
            starts: 1,
            max_iter: 0,
            ..SolverOptions::default()
        };
        match solve_normalized(&m, &e, &p, &opts) {
            Err(Error::NoConvergence { .. }) => {}
            other => panic!("expected NoConvergence, got {:?}", other),
        }
    }

    #[test]
    fn pattern_validation() {
        assert!(SignPattern::parse("++++").is_err());
        assert!(SignPattern::parse("--x+").is_err());
        assert!(SignPattern::parse("-+").is_err());
        let p = SignPattern::parse("--++").unwrap();
        assert_eq!(p.negative_indices(), vec![0, 1]);
        assert_eq!(p.negated().to_string(), "++--");
    }
}
