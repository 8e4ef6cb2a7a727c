//! Position-space ground truth: pairwise acceleration terms, the
//! central-configuration residual, and a multi-start position-space solver
//! used as an independent oracle for the coordinate-space solver.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::delta::Exponent;
use crate::error::{Error, Result};
use crate::geometry::{
    self, canonical_orientation, center_of_mass, Configuration, MassVector,
};
use crate::solver::{derive_seed, levenberg_marquardt};

/// Per-particle acceleration terms gamma_i = sum_{k != i} m_k s_ik^a (q_i - q_k).
#[derive(Debug, Clone)]
pub struct ForceField {
    pub gammas: Vec<DVector<f64>>,
}

impl ForceField {
    /// Mass-weighted sum, zero to rounding by the pairwise antisymmetry.
    pub fn momentum(&self, m: &MassVector) -> DVector<f64> {
        let mut total = DVector::zeros(self.gammas[0].len());
        for (i, g) in self.gammas.iter().enumerate() {
            total += g * m.get(i);
        }
        total
    }
}

/// Computes the acceleration terms. Rotation-equivariant and
/// translation-invariant; rejects coincident points.
pub fn gamma(config: &Configuration, m: &MassVector, e: &Exponent) -> Result<ForceField> {
    if config.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points vs {} masses",
            config.len(),
            m.len()
        )));
    }
    let s = geometry::squared_distances(config)?;
    let n = config.len();
    let mut gammas = Vec::with_capacity(n);
    for i in 0..n {
        let mut g = DVector::zeros(config.dim());
        for k in 0..n {
            if k == i {
                continue;
            }
            let coupling = m.get(k) * s.get(i, k).powf(e.a());
            g += (config.point(i) - config.point(k)) * coupling;
        }
        gammas.push(g);
    }
    Ok(ForceField { gammas })
}

/// Relative residual of the central-configuration condition
/// gamma_i = lambda (q_i - q_G): the largest per-particle mismatch norm,
/// scaled by lambda times the configuration diameter.
pub fn cc_residual(config: &Configuration, m: &MassVector, e: &Exponent, lambda: f64) -> Result<f64> {
    if lambda <= 0.0 {
        return Err(Error::InvalidInput(format!(
            "lambda must be positive in the attracting regime, got {}",
            lambda
        )));
    }
    let field = gamma(config, m, e)?;
    let g = center_of_mass(config, m)?;
    let mut worst = 0.0f64;
    for i in 0..config.len() {
        let mismatch = (&field.gammas[i] - (config.point(i) - &g) * lambda).norm();
        worst = worst.max(mismatch);
    }
    Ok(worst / (lambda * config.diameter()))
}

/// Options for the position-space multi-start search.
#[derive(Debug, Clone)]
pub struct PositionSolveOptions {
    pub starts: usize,
    pub seed: u64,
    pub max_iter: usize,
    /// Accept a refined configuration when its [`cc_residual`] with
    /// lambda = M falls below this.
    pub accept_residual: f64,
    /// Relative tolerance on sorted distance multisets for duplicate merging.
    pub dedup_tol: f64,
}

impl Default for PositionSolveOptions {
    fn default() -> Self {
        Self {
            starts: 64,
            seed: 0,
            max_iter: 400,
            accept_residual: 1e-9,
            dedup_tol: 1e-6,
        }
    }
}

fn unpack(x: &DVector<f64>, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..dim).map(|k| x[i * dim + k]).collect()).collect()
}

/// Stacked residual gamma_i - M (q_i - q_G) over all particles, `None` when
/// two points collapse.
fn position_residual(
    x: &DVector<f64>,
    m: &MassVector,
    e: &Exponent,
    dim: usize,
) -> Option<DVector<f64>> {
    let n = m.len();
    let config = Configuration::new(unpack(x, n, dim)).ok()?;
    let field = gamma(&config, m, e).ok()?;
    let g = center_of_mass(&config, m).ok()?;
    let mut r = DVector::zeros(n * dim);
    for i in 0..n {
        let mismatch = &field.gammas[i] - (config.point(i) - &g) * m.total();
        for k in 0..dim {
            r[i * dim + k] = mismatch[k];
        }
    }
    Some(r)
}

/// Finds normalized (lambda = M) central configurations in the given
/// dimension by least-squares refinement from seeded random starts.
///
/// Solutions are gauge-fixed (barycenter at the origin, deterministic
/// orientation), deduplicated by their sorted distance multiset, and sorted
/// by that signature. Every returned configuration satisfies
/// [`cc_residual`] < `opts.accept_residual` with lambda = M.
pub fn solve_positions(
    m: &MassVector,
    dim: usize,
    e: &Exponent,
    opts: &PositionSolveOptions,
) -> Result<Vec<Configuration>> {
    let n = m.len();
    if dim == 0 || dim + 1 > n {
        return Err(Error::InvalidInput(format!(
            "dimension {} unsupported for n = {} (need 1 <= dim <= n - 1)",
            dim, n
        )));
    }
    if !e.theorem_regime() {
        return Err(Error::InvalidInput(
            "position search requires a < 0 (attracting interactions)".into(),
        ));
    }
    if opts.starts == 0 {
        return Err(Error::InvalidInput("need at least one start".into()));
    }
    // Heuristic cluster size for the lambda = M normalization.
    let scale = m.total().powf(1.0 / (2.0 - 2.0 * e.a()));
    let f = |x: &DVector<f64>| position_residual(x, m, e, dim);

    let mut found: Vec<(Vec<f64>, Configuration)> = Vec::new();
    let mut best_residual = f64::INFINITY;
    for start in 0..opts.starts {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, start as u64));
        let x0 = DVector::from_fn(n * dim, |_, _| rng.gen_range(-1.0..1.0) * scale);
        let Some(result) = levenberg_marquardt(&f, x0, opts.max_iter, 1e-12 * m.total()) else {
            continue;
        };
        let Ok(config) = Configuration::new(unpack(&result.x, n, dim)) else {
            continue;
        };
        let Ok(residual) = cc_residual(&config, m, e, m.total()) else {
            continue;
        };
        best_residual = best_residual.min(residual);
        if residual >= opts.accept_residual {
            continue;
        }
        // Gauge fixing: barycenter to the origin, canonical orientation.
        let g = center_of_mass(&config, m)?;
        let mut centered = DMatrix::zeros(n, dim);
        for i in 0..n {
            let p = config.point(i) - &g;
            for k in 0..dim {
                centered[(i, k)] = p[k];
            }
        }
        let fixed = Configuration::from_matrix(canonical_orientation(centered))?;
        let signature = geometry::squared_distances(&fixed)?.sorted_distances();
        let scale_sig = signature.last().copied().unwrap_or(1.0);
        let duplicate = found.iter().any(|(sig, _)| {
            sig.iter()
                .zip(&signature)
                .all(|(a, b)| (a - b).abs() <= opts.dedup_tol * scale_sig)
        });
        if !duplicate {
            found.push((signature, fixed));
        }
    }
    if found.is_empty() {
        return Err(Error::NoConvergence {
            best_residual,
            starts: opts.starts,
        });
    }
    found.sort_by(|(a, _), (b, _)| {
        for (u, v) in a.iter().zip(b.iter()) {
            match u.total_cmp(v) {
                std::cmp::Ordering::Equal => continue,
                ord => return ord,
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(found.into_iter().map(|(_, c)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn newtonian() -> Exponent {
        Exponent::new(-1.5).unwrap()
    }

    #[test]
    fn two_bodies_are_antisymmetric() {
        let config = Configuration::new(vec![vec![0.0, 0.0], vec![2.0, 1.0]]).unwrap();
        let m = MassVector::new(vec![1.0, 1.0]).unwrap();
        for a in [-1.5, -1.0, -0.3] {
            let e = Exponent::new(a).unwrap();
            let field = gamma(&config, &m, &e).unwrap();
            let total = &field.gammas[0] + &field.gammas[1];
            assert!(total.norm() < 1e-14);
        }
    }

    #[test]
    fn equilateral_triangle_is_central_at_unit_side() {
        // With lambda = M the equilateral solution has side exactly 1 for
        // any masses and any a < 0.
        let config = Configuration::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 3.0f64.sqrt() / 2.0],
        ])
        .unwrap();
        for masses in [vec![1.0; 3], vec![1.0, 2.0, 3.5]] {
            let m = MassVector::new(masses).unwrap();
            let res = cc_residual(&config, &m, &newtonian(), m.total()).unwrap();
            assert!(res < 1e-12, "residual = {}", res);
        }

        // Equal masses: each gamma_i is parallel to q_i - q_G with a common
        // magnitude.
        let m = MassVector::new(vec![1.0; 3]).unwrap();
        let field = gamma(&config, &m, &newtonian()).unwrap();
        let g = center_of_mass(&config, &m).unwrap();
        let mags: Vec<f64> = field.gammas.iter().map(|v| v.norm()).collect();
        for w in mags.windows(2) {
            assert_abs_diff_eq!(w[0], w[1], epsilon = 1e-12);
        }
        for i in 0..3 {
            let dir = config.point(i) - &g;
            let cross = field.gammas[i][0] * dir[1] - field.gammas[i][1] * dir[0];
            assert!(cross.abs() < 1e-13);
        }
    }

    #[test]
    fn momentum_vanishes_on_random_configurations() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect())
                .collect();
            let config = Configuration::new(pts).unwrap();
            let m = MassVector::new((0..5).map(|_| rng.gen_range(0.2..3.0)).collect()).unwrap();
            let field = gamma(&config, &m, &newtonian()).unwrap();
            let p = field.momentum(&m);
            let scale: f64 = field.gammas.iter().map(|g| g.norm()).fold(0.0, f64::max);
            assert!(p.norm() < 1e-10 * scale.max(1.0), "momentum = {:?}", p);
        }
    }

    #[test]
    fn stretched_square_is_not_central() {
        let side = 0.75f64.sqrt();
        let config = Configuration::new(vec![
            vec![0.0, 0.0],
            vec![side * 1.1, side],
            vec![side * 1.1, 0.0],
            vec![0.0, side],
        ])
        .unwrap();
        let m = MassVector::new(vec![1.0; 4]).unwrap();
        let res = cc_residual(&config, &m, &newtonian(), m.total()).unwrap();
        assert!(res > 1e-3, "residual = {}", res);
    }

    #[test]
    fn cc_residual_is_isometry_invariant() {
        let config = Configuration::new(vec![
            vec![0.2, 0.1],
            vec![1.1, 0.9],
            vec![1.0, -0.1],
            vec![-0.2, 1.0],
        ])
        .unwrap();
        let m = MassVector::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let r1 = cc_residual(&config, &m, &newtonian(), m.total()).unwrap();
        let theta: f64 = -0.37;
        let rotated = Configuration::new(
            config
                .rows()
                .into_iter()
                .map(|p| {
                    vec![
                        theta.cos() * p[0] - theta.sin() * p[1] + 3.0,
                        theta.sin() * p[0] + theta.cos() * p[1] - 1.5,
                    ]
                })
                .collect(),
        )
        .unwrap();
        let r2 = cc_residual(&rotated, &m, &newtonian(), m.total()).unwrap();
        assert_abs_diff_eq!(r1, r2, epsilon = 1e-12);
    }

    #[test]
    fn scale_law_matches_homogeneity() {
        // If q is central for lambda, then c q is central for lambda c^{2a}.
        let config = Configuration::new(vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 3.0f64.sqrt() / 2.0],
        ])
        .unwrap();
        let m = MassVector::new(vec![1.0, 2.0, 3.5]).unwrap();
        let e = newtonian();
        for c in [0.5, 2.0, 3.7] {
            let scaled = config.scaled(c);
            let lambda = m.total() * c.powf(2.0 * e.a());
            let res = cc_residual(&scaled, &m, &e, lambda).unwrap();
            assert!(res < 1e-9, "c = {}, residual = {}", c, res);
        }
    }

    #[test]
    fn position_search_finds_unit_triangle() {
        let m = MassVector::new(vec![1.0; 3]).unwrap();
        let opts = PositionSolveOptions {
            starts: 16,
            ..PositionSolveOptions::default()
        };
        let solutions = solve_positions(&m, 2, &newtonian(), &opts).unwrap();
        let triangle = solutions.iter().find(|c| {
            let s = geometry::squared_distances(c).unwrap();
            (0..3).all(|i| {
                (0..3)
                    .filter(|&j| j != i)
                    .all(|j| (s.get(i, j) - 1.0).abs() < 1e-7)
            })
        });
        assert!(
            triangle.is_some(),
            "expected the unit equilateral triangle among {} solutions",
            solutions.len()
        );
    }
}
