//! The Delta-coordinate calculus for normalized central configurations of n
//! bodies in dimension n-2.
//!
//! A normalized central configuration (lambda = M) is encoded by a vector
//! Delta_1..Delta_n of homogeneous barycentric coordinates with a fixed
//! scale, and the mutual squared distances are recovered as
//!
//! ```text
//! s_ij = (1 - Delta_i Delta_j / (m_i m_j))^alpha,    alpha = 1/a.
//! ```
//!
//! Under this scale the two Dziobek scalars are pinned: lambda/M = 1 and
//! mu = -1, so s_ij^a - 1 = -Delta_i Delta_j / (m_i m_j) holds exactly for
//! constructed distances. The weighted sums t_i = sum_j Delta_j s_ij agree
//! across all particles exactly when Delta comes from a realized
//! configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    self, cayley_menger_relative, Configuration, MassVector, SquaredDistanceMatrix,
};

/// Interaction exponent a (s^a is the pairwise interaction term) together
/// with alpha = 1/a.
///
/// The ordering and symmetry guarantees hold for a < 0 (a = -3/2 is
/// gravitation, a = -1 planar vortices). Positive exponents are permitted
/// only through [`Exponent::new_unguaranteed`] and carry no guarantees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponent {
    a: f64,
    alpha: f64,
    theorem_regime: bool,
}

impl Exponent {
    /// Builds an exponent in the guaranteed regime a < 0.
    pub fn new(a: f64) -> Result<Self> {
        if !a.is_finite() || a == 0.0 {
            return Err(Error::InvalidInput(format!("exponent a must be finite and nonzero, got {}", a)));
        }
        if a > 0.0 {
            return Err(Error::InvalidInput(format!(
                "exponent a = {} is positive; use new_unguaranteed to evaluate outside the guaranteed regime",
                a
            )));
        }
        Ok(Self {
            a,
            alpha: 1.0 / a,
            theorem_regime: true,
        })
    }

    /// Permits any nonzero exponent, flagging a > 0 as outside the
    /// guaranteed regime.
    pub fn new_unguaranteed(a: f64) -> Result<Self> {
        if !a.is_finite() || a == 0.0 {
            return Err(Error::InvalidInput(format!("exponent a must be finite and nonzero, got {}", a)));
        }
        Ok(Self {
            a,
            alpha: 1.0 / a,
            theorem_regime: a < 0.0,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// True when a < 0, where the symmetry and ordering results apply.
    pub fn theorem_regime(&self) -> bool {
        self.theorem_regime
    }
}

/// Homogeneous barycentric coordinates Delta_1..Delta_n with sum zero.
#[derive(Debug, Clone, PartialEq)]
pub struct DziobekCoords {
    deltas: Vec<f64>,
}

impl DziobekCoords {
    /// Validates sum-zero (to 1e-12 relative to the largest entry) and
    /// nonzero-ness.
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        if deltas.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "need at least 3 coordinates, got {}",
                deltas.len()
            )));
        }
        let max = deltas.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if max == 0.0 || deltas.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("coordinates must be finite and not all zero".into()));
        }
        let sum: f64 = deltas.iter().sum();
        if sum.abs() > 1e-12 * (1.0 + max * deltas.len() as f64) {
            return Err(Error::InvalidInput(format!(
                "coordinates must sum to zero, got sum = {:e}",
                sum
            )));
        }
        Ok(Self { deltas })
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.deltas[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.deltas
    }

    /// Checks the pair-product domain Delta_i Delta_j < m_i m_j required by
    /// the coordinate-to-distance map.
    pub fn check_domain(&self, m: &MassVector) -> Result<()> {
        if self.len() != m.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates vs {} masses",
                self.len(),
                m.len()
            )));
        }
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                let product = self.deltas[i] * self.deltas[j];
                let bound = m.get(i) * m.get(j);
                if product >= bound {
                    return Err(Error::DomainViolation {
                        i: i + 1,
                        j: j + 1,
                        product,
                        bound,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != n = {}",
                perm.len(),
                self.len()
            )));
        }
        Self::new(perm.iter().map(|&p| self.deltas[p]).collect())
    }
}

/// Named residual diagnostics attached to a solved configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// Spread of the t_i, relative to max|t_i| + 1.
    pub t_spread: f64,
    /// Largest absolute residual of the two-scalar distance fit.
    pub dziobek_fit: f64,
    /// Cayley-Menger determinant of the full point set, scale-relative.
    pub cayley_menger: f64,
    /// Acceleration-condition residual on the embedded positions with
    /// lambda = M, relative to lambda times the diameter.
    pub direct: f64,
}

/// Tolerances used to accept a solved configuration. All configurable;
/// defaults match the acceptance thresholds used throughout the test suite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// t-spread, relative to max|t_i| + 1.
    pub t_spread: f64,
    /// Max residual of the (lambda/M, mu) fit.
    pub dziobek_fit: f64,
    /// Relative Cayley-Menger residual.
    pub cayley_menger: f64,
    /// Relative acceleration-condition residual.
    pub direct: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            t_spread: 1e-11,
            dziobek_fit: 1e-9,
            cayley_menger: 1e-8,
            direct: 1e-8,
        }
    }
}

/// A solved, normalized central configuration.
#[derive(Debug, Clone)]
pub struct CCSolution {
    pub masses: MassVector,
    pub exponent: Exponent,
    pub deltas: DziobekCoords,
    pub distances: SquaredDistanceMatrix,
    /// Embedded positions in dimension n-2, centered, deterministic gauge.
    pub positions: Configuration,
    /// Fitted lambda/M; 1 for a genuine normalized solution.
    pub lambda_over_m: f64,
    /// Fitted mu; -1 under the normalized coordinate scale, negative for
    /// every genuine solution.
    pub mu: f64,
    pub residuals: Residuals,
    pub accepted: bool,
}

impl CCSolution {
    pub fn n(&self) -> usize {
        self.masses.len()
    }
}

/// Squared mutual distances from normalized coordinates:
/// s_ij = (1 - Delta_i Delta_j / (m_i m_j))^alpha.
///
/// Requires Delta_i Delta_j < m_i m_j for every pair. With alpha < 0,
/// opposite-sign pairs give a base above one and hence s_ij < 1; same-sign
/// pairs give s_ij > 1.
pub fn delta_to_distances(
    deltas: &DziobekCoords,
    m: &MassVector,
    e: &Exponent,
) -> Result<SquaredDistanceMatrix> {
    deltas.check_domain(m)?;
    let n = deltas.len();
    let mut s = nalgebra::DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let base = 1.0 - deltas.get(i) * deltas.get(j) / (m.get(i) * m.get(j));
            let v = base.powf(e.alpha());
            s[(i, j)] = v;
            s[(j, i)] = v;
        }
    }
    SquaredDistanceMatrix::new(s)
}

/// The weighted distance sums t_i = sum_{j != i} Delta_j s_ij.
///
/// All t_i agree when Delta are true barycentric coordinates of a realized
/// configuration.
pub fn t_values(deltas: &DziobekCoords, s: &SquaredDistanceMatrix) -> Result<Vec<f64>> {
    let n = deltas.len();
    if s.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates vs {}x{} distance matrix",
            n,
            s.len(),
            s.len()
        )));
    }
    Ok((0..n)
        .map(|i| (0..n).filter(|&j| j != i).map(|j| deltas.get(j) * s.get(i, j)).sum())
        .collect())
}

/// Spread of the t_i relative to max|t_i| + 1.
pub fn t_spread(deltas: &DziobekCoords, s: &SquaredDistanceMatrix) -> Result<f64> {
    let t = t_values(deltas, s)?;
    let max = t.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = t.iter().cloned().fold(f64::INFINITY, f64::min);
    let scale = t.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
    Ok((max - min) / (scale + 1.0))
}

/// The pairwise difference t_i - t_j computed from its expanded form
/// (Delta_j - Delta_i) s_ij + sum_{k != i,j} Delta_k (s_ik - s_jk).
///
/// Agrees with the direct difference of [`t_values`] to rounding; kept as an
/// independent algebraic route for identity checks.
pub fn t_gap(i: usize, j: usize, deltas: &DziobekCoords, s: &SquaredDistanceMatrix) -> Result<f64> {
    let n = deltas.len();
    if i == j {
        return Err(Error::InvalidInput(format!("t_gap needs i != j, got i = j = {}", i)));
    }
    if i >= n || j >= n || s.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "indices ({}, {}) out of range for n = {}",
            i, j, n
        )));
    }
    let mut gap = (deltas.get(j) - deltas.get(i)) * s.get(i, j);
    for k in 0..n {
        if k != i && k != j {
            gap += deltas.get(k) * (s.get(i, k) - s.get(j, k));
        }
    }
    Ok(gap)
}

/// Least-squares fit of the two scalars (lambda/M, mu) in
/// S_ij - lambda/M = mu Delta_i Delta_j / (m_i m_j) over all pairs, with
/// S_ij = s_ij^a. Returns (lambda/M, mu, max absolute residual).
///
/// For distances built by [`delta_to_distances`] the fit is exact with
/// lambda/M = 1 and mu = -1.
pub fn fit_lambda_mu(
    s: &SquaredDistanceMatrix,
    deltas: &DziobekCoords,
    m: &MassVector,
    e: &Exponent,
) -> Result<(f64, f64, f64)> {
    let n = deltas.len();
    if s.len() != n || m.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "shapes disagree: n = {}, s = {}, m = {}",
            n,
            s.len(),
            m.len()
        )));
    }
    let pairs = n * (n - 1) / 2;
    if pairs < 2 {
        return Err(Error::InvalidInput("need at least 2 pairs to fit two scalars".into()));
    }
    // Normal equations for S_ij = c + mu * x_ij.
    let mut sum_x = 0.0;
    let mut sum_xx = 0.0;
    let mut sum_y = 0.0;
    let mut sum_xy = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let x = deltas.get(i) * deltas.get(j) / (m.get(i) * m.get(j));
            let y = s.get(i, j).powf(e.a());
            sum_x += x;
            sum_xx += x * x;
            sum_y += y;
            sum_xy += x * y;
        }
    }
    let np = pairs as f64;
    let det = np * sum_xx - sum_x * sum_x;
    let (c, mu) = if det.abs() > 1e-14 * (np * sum_xx).abs().max(1.0) {
        (
            (sum_xx * sum_y - sum_x * sum_xy) / det,
            (np * sum_xy - sum_x * sum_y) / det,
        )
    } else {
        // All pair products essentially equal: the split between the two
        // scalars is undetermined; attribute everything to the constant.
        (sum_y / np, 0.0)
    };
    let mut max_residual = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let x = deltas.get(i) * deltas.get(j) / (m.get(i) * m.get(j));
            let y = s.get(i, j).powf(e.a());
            max_residual = max_residual.max((y - c - mu * x).abs());
        }
    }
    Ok((c, mu, max_residual))
}

/// Relative residual of the acceleration condition gamma_i = lambda (q_i - q_G)
/// on embedded positions; thin wrapper so validation does not depend on the
/// position-space module.
fn direct_residual(
    config: &Configuration,
    m: &MassVector,
    e: &Exponent,
    lambda: f64,
) -> Result<f64> {
    crate::direct::cc_residual(config, m, e, lambda)
}

/// Per-check outcome of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub residuals: Residuals,
    pub lambda_over_m: f64,
    pub mu: f64,
    pub t_spread_ok: bool,
    pub dziobek_fit_ok: bool,
    pub cayley_menger_ok: bool,
    pub direct_ok: bool,
    pub mu_negative: bool,
    pub accepted: bool,
}

/// Recomputes all four residual diagnostics of a candidate solution and
/// accepts it iff each is below its tolerance and mu < 0.
pub fn validate(candidate: &CCSolution, tol: &Tolerances) -> Result<ValidationReport> {
    let n = candidate.n();
    let subset: Vec<usize> = (0..n).collect();
    let t_spread = t_spread(&candidate.deltas, &candidate.distances)?;
    let (lambda_over_m, mu, fit) = fit_lambda_mu(
        &candidate.distances,
        &candidate.deltas,
        &candidate.masses,
        &candidate.exponent,
    )?;
    let cm = cayley_menger_relative(&candidate.distances, &subset)?;
    let direct = direct_residual(
        &candidate.positions,
        &candidate.masses,
        &candidate.exponent,
        candidate.masses.total(),
    )?;
    let report = ValidationReport {
        residuals: Residuals {
            t_spread,
            dziobek_fit: fit,
            cayley_menger: cm,
            direct,
        },
        lambda_over_m,
        mu,
        t_spread_ok: t_spread < tol.t_spread,
        dziobek_fit_ok: fit < tol.dziobek_fit,
        cayley_menger_ok: cm < tol.cayley_menger,
        direct_ok: direct < tol.direct,
        mu_negative: mu < 0.0,
        accepted: t_spread < tol.t_spread
            && fit < tol.dziobek_fit
            && cm < tol.cayley_menger
            && direct < tol.direct
            && mu < 0.0,
    };
    Ok(report)
}

/// Builds a full candidate solution from coordinates: distances via the
/// coordinate map, positions via embedding, scalars via the pair fit, and
/// the validation verdict.
pub fn assemble_solution(
    deltas: DziobekCoords,
    m: &MassVector,
    e: &Exponent,
    tol: &Tolerances,
) -> Result<CCSolution> {
    let n = deltas.len();
    if n < 3 {
        return Err(Error::InvalidInput("need n >= 3".into()));
    }
    let distances = delta_to_distances(&deltas, m, e)?;
    let positions = geometry::embed(&distances, n - 2)?;
    let mut solution = CCSolution {
        masses: m.clone(),
        exponent: *e,
        deltas,
        distances,
        positions,
        lambda_over_m: f64::NAN,
        mu: f64::NAN,
        residuals: Residuals {
            t_spread: f64::NAN,
            dziobek_fit: f64::NAN,
            cayley_menger: f64::NAN,
            direct: f64::NAN,
        },
        accepted: false,
    };
    let report = validate(&solution, tol)?;
    solution.lambda_over_m = report.lambda_over_m;
    solution.mu = report.mu;
    solution.residuals = report.residuals;
    solution.accepted = report.accepted;
    Ok(solution)
}

/// Builds a candidate solution from measured positions instead of solved
/// coordinates: the barycentric ray is extracted, rescaled so the fitted mu
/// lands at -1 (when the fit is attracting), and validated against the
/// measured distances with lambda = M.
///
/// Unlike solver output, the distance matrix here is whatever the positions
/// give; validation reports how far the input is from a normalized solution.
pub fn solution_from_positions(
    config: &Configuration,
    m: &MassVector,
    e: &Exponent,
    tol: &Tolerances,
) -> Result<CCSolution> {
    if config.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points vs {} masses",
            config.len(),
            m.len()
        )));
    }
    let distances = geometry::squared_distances(config)?;
    let ray = geometry::barycentric_coordinates(config)?;
    let unit = DziobekCoords::new(ray)?;
    let (_, mu_raw, _) = fit_lambda_mu(&distances, &unit, m, e)?;
    // Rescale the ray into the normalized gauge where mu = -1; keep the unit
    // ray when the fitted mu has the wrong sign (non-solutions).
    let deltas = if mu_raw < 0.0 {
        let scale = (-mu_raw).sqrt();
        DziobekCoords::new(unit.as_slice().iter().map(|x| x * scale).collect())?
    } else {
        unit
    };
    let mut solution = CCSolution {
        masses: m.clone(),
        exponent: *e,
        deltas,
        distances,
        positions: config.clone(),
        lambda_over_m: f64::NAN,
        mu: f64::NAN,
        residuals: Residuals {
            t_spread: f64::NAN,
            dziobek_fit: f64::NAN,
            cayley_menger: f64::NAN,
            direct: f64::NAN,
        },
        accepted: false,
    };
    let report = validate(&solution, tol)?;
    solution.lambda_over_m = report.lambda_over_m;
    solution.mu = report.mu;
    solution.residuals = report.residuals;
    solution.accepted = report.accepted;
    Ok(solution)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn equal_masses(n: usize) -> MassVector {
        MassVector::new(vec![1.0; n]).unwrap()
    }

    #[test]
    fn exponent_rejects_zero_and_positive() {
        assert!(Exponent::new(0.0).is_err());
        assert!(Exponent::new(0.5).is_err());
        let e = Exponent::new_unguaranteed(0.5).unwrap();
        assert!(!e.theorem_regime());
        let e = Exponent::new(-1.5).unwrap();
        assert!(e.theorem_regime());
        assert_abs_diff_eq!(e.alpha() * e.a(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_product_pair_gives_unit_distance() {
        let m = equal_masses(4);
        let e = Exponent::new(-1.5).unwrap();
        let d = DziobekCoords::new(vec![-0.5, 0.0, 0.25, 0.25]).unwrap();
        let s = delta_to_distances(&d, &m, &e).unwrap();
        assert_abs_diff_eq!(s.get(0, 1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s.get(1, 2), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn vortex_square_distances() {
        // delta^2 = 1/3 makes the coordinates those of the equal-mass square
        // for a = -1: diagonals 1.5, sides 0.75.
        let m = equal_masses(4);
        let e = Exponent::new(-1.0).unwrap();
        let delta = (1.0f64 / 3.0).sqrt();
        let d = DziobekCoords::new(vec![-delta, -delta, delta, delta]).unwrap();
        let s = delta_to_distances(&d, &m, &e).unwrap();
        assert_abs_diff_eq!(s.get(0, 1), 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(s.get(2, 3), 1.5, epsilon = 1e-14);
        for &(i, j) in &[(0, 2), (0, 3), (1, 2), (1, 3)] {
            assert_abs_diff_eq!(s.get(i, j), 0.75, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(s.get(0, 1) / s.get(0, 2), 2.0, epsilon = 1e-13);

        // By construction of delta the t values all agree.
        let t = t_values(&d, &s).unwrap();
        for w in t.windows(2) {
            assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-12);
        }
    }

    #[test]
    fn domain_boundary_rejected() {
        let m = equal_masses(4);
        let e = Exponent::new(-1.0).unwrap();
        let d = DziobekCoords::new(vec![-1.0, -1.0, 1.0, 1.0]).unwrap();
        match delta_to_distances(&d, &m, &e) {
            Err(Error::DomainViolation { i: 1, j: 2, .. }) => {}
            other => panic!("expected DomainViolation, got {:?}", other),
        }
    }

    #[test]
    fn t_values_unit_square_ray() {
        // Unit square distances with the (-1,-1,1,1) ray: every t_i is zero.
        let c = crate::geometry::Configuration::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let s = crate::geometry::squared_distances(&c).unwrap();
        let d = DziobekCoords::new(vec![-1.0, -1.0, 1.0, 1.0]).unwrap();
        let t = t_values(&d, &s).unwrap();
        for v in t {
            assert_abs_diff_eq!(v, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn perturbed_coordinates_break_t_equality() {
        let m = equal_masses(4);
        let e = Exponent::new(-1.0).unwrap();
        let delta = (1.0f64 / 3.0).sqrt();
        let d = DziobekCoords::new(vec![-delta - 0.1, -delta, delta + 0.05, delta + 0.05]).unwrap();
        let s = delta_to_distances(&d, &m, &e).unwrap();
        let spread = t_spread(&d, &s).unwrap();
        assert!(spread > 1e-3, "expected a visible spread, got {}", spread);
    }

    #[test]
    fn t_gap_matches_t_values_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = 4;
            let mut deltas: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean = deltas.iter().sum::<f64>() / n as f64;
            for d in &mut deltas {
                *d -= mean;
            }
            if deltas.iter().all(|d| d.abs() < 1e-3) {
                continue;
            }
            let d = DziobekCoords::new(deltas).unwrap();
            let mut s = nalgebra::DMatrix::zeros(n, n);
            for i in 0..n {
                for j in (i + 1)..n {
                    let v = rng.gen_range(0.1..3.0);
                    s[(i, j)] = v;
                    s[(j, i)] = v;
                }
            }
            let s = SquaredDistanceMatrix::new(s).unwrap();
            let t = t_values(&d, &s).unwrap();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let gap = t_gap(i, j, &d, &s).unwrap();
                    assert_abs_diff_eq!(gap, t[i] - t[j], epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn t_gap_rejects_equal_indices() {
        let d = DziobekCoords::new(vec![-1.0, -1.0, 1.0, 1.0]).unwrap();
        let c = crate::geometry::Configuration::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 1.0],
            vec![1.0, 0.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let s = crate::geometry::squared_distances(&c).unwrap();
        assert!(t_gap(2, 2, &d, &s).is_err());
    }

    #[test]
    fn fit_recovers_unit_lambda_and_negative_unit_mu() {
        let m = MassVector::new(vec![1.0, 2.0, 0.7, 1.3]).unwrap();
        let e = Exponent::new(-1.5).unwrap();
        let d = DziobekCoords::new(vec![-0.3, -0.4, 0.5, 0.2]).unwrap();
        let s = delta_to_distances(&d, &m, &e).unwrap();
        let (c, mu, res) = fit_lambda_mu(&s, &d, &m, &e).unwrap();
        assert_abs_diff_eq!(c, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mu, -1.0, epsilon = 1e-12);
        assert!(res < 1e-12);
    }

    #[test]
    fn fit_reports_large_residual_for_random_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = equal_masses(4);
        let e = Exponent::new(-1.0).unwrap();
        let d = DziobekCoords::new(vec![-0.5, -0.5, 0.5, 0.5]).unwrap();
        let mut s = nalgebra::DMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in (i + 1)..4 {
                let v = rng.gen_range(0.2..4.0);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        let s = SquaredDistanceMatrix::new(s).unwrap();
        let (_, _, res) = fit_lambda_mu(&s, &d, &m, &e).unwrap();
        assert!(res > 0.05, "negative control residual too small: {}", res);
    }

    #[test]
    fn scale_covariance_of_distances() {
        // Masses and coordinates scaled by the same c > 0 give identical
        // distances.
        let e = Exponent::new(-1.5).unwrap();
        let m1 = MassVector::new(vec![1.0, 2.0, 0.7, 1.3]).unwrap();
        let d1 = DziobekCoords::new(vec![-0.3, -0.4, 0.5, 0.2]).unwrap();
        let c = 3.7;
        let m2 = MassVector::new(m1.as_slice().iter().map(|x| c * x).collect()).unwrap();
        let d2 = DziobekCoords::new(d1.as_slice().iter().map(|x| c * x).collect()).unwrap();
        let s1 = delta_to_distances(&d1, &m1, &e).unwrap();
        let s2 = delta_to_distances(&d2, &m2, &e).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_abs_diff_eq!(s1.get(i, j), s2.get(i, j), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn normalized_map_satisfies_linear_interaction_identity() {
        // s_ij^a - 1 = -Delta_i Delta_j / (m_i m_j), i.e. the fit identity
        // with the scalars at their pinned values.
        let m = MassVector::new(vec![1.5, 0.5, 2.0, 1.0]).unwrap();
        let e = Exponent::new(-0.7).unwrap();
        let d = DziobekCoords::new(vec![-0.2, -0.35, 0.3, 0.25]).unwrap();
        let s = delta_to_distances(&d, &m, &e).unwrap();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let lhs = s.get(i, j).powf(e.a()) - 1.0;
                let rhs = -d.get(i) * d.get(j) / (m.get(i) * m.get(j));
                assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-13);
            }
        }
    }
}
