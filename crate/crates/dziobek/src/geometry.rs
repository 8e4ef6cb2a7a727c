//! Euclidean configuration handling: distances, signed volumes, barycentric
//! coordinates, Cayley-Menger realizability tests, and embedding of distance
//! matrices back into coordinates.
//!
//! Everything here is a pure function of its inputs. Values are immutable
//! after construction and safe to share between threads.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Default threshold on squared distances below which two points are
/// considered coincident.
pub const COINCIDENCE_EPS: f64 = 1e-24;

/// Relative eigenvalue tolerance for the Gram rank test in [`embed`].
pub const EMBED_RANK_TOL: f64 = 1e-9;

/// Relative singular-value tolerance for the rank test in
/// [`barycentric_coordinates`].
pub const RANK_TOL: f64 = 1e-9;

/// Positive masses m_1..m_n together with their total M.
#[derive(Debug, Clone, PartialEq)]
pub struct MassVector {
    masses: Vec<f64>,
    total: f64,
}

impl MassVector {
    /// Builds a mass vector, rejecting non-positive or non-finite entries.
    pub fn new(masses: Vec<f64>) -> Result<Self> {
        if masses.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 masses, got {}",
                masses.len()
            )));
        }
        for (i, &m) in masses.iter().enumerate() {
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "masses must be positive and finite; m_{} = {}",
                    i + 1,
                    m
                )));
            }
        }
        let total = masses.iter().sum();
        Ok(Self { masses, total })
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.masses[i]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.masses
    }

    /// Total mass M.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// The same masses in a different particle order.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != n = {}",
                perm.len(),
                self.len()
            )));
        }
        Self::new(perm.iter().map(|&p| self.masses[p]).collect())
    }
}

/// n labeled points in d-dimensional Euclidean space.
///
/// Stored row-major: row i is particle i.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    coords: DMatrix<f64>,
}

impl Configuration {
    /// Builds a configuration from per-particle coordinate rows.
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("empty configuration".into()));
        }
        let dim = points[0].len();
        if dim == 0 {
            return Err(Error::InvalidInput("points must have dimension >= 1".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "point {} has dimension {}, expected {}",
                    i + 1,
                    p.len(),
                    dim
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("point {} has non-finite coordinates", i + 1)));
            }
        }
        let n = points.len();
        let coords = DMatrix::from_fn(n, dim, |i, j| points[i][j]);
        Ok(Self { coords })
    }

    pub fn from_matrix(coords: DMatrix<f64>) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..coords.nrows())
            .map(|i| coords.row(i).iter().copied().collect())
            .collect();
        Self::new(rows)
    }

    pub fn len(&self) -> usize {
        self.coords.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.coords.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.coords
    }

    /// Coordinates of particle i as an owned vector.
    pub fn point(&self, i: usize) -> DVector<f64> {
        self.coords.row(i).transpose()
    }

    /// Row-major copy of all coordinates, for serialization.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|i| self.coords.row(i).iter().copied().collect())
            .collect()
    }

    /// Largest inter-point distance (not squared).
    pub fn diameter(&self) -> f64 {
        let n = self.len();
        let mut best: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (self.coords.row(i) - self.coords.row(j)).norm();
                best = best.max(d);
            }
        }
        best
    }

    /// Applies `q -> q * scale` to every point.
    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            coords: &self.coords * scale,
        }
    }

    /// Reorders particles.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != n = {}",
                perm.len(),
                self.len()
            )));
        }
        Self::new(perm.iter().map(|&p| self.coords.row(p).iter().copied().collect()).collect())
    }
}

/// Symmetric matrix of squared mutual distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SquaredDistanceMatrix {
    s: DMatrix<f64>,
}

impl SquaredDistanceMatrix {
    /// Validates symmetry, zero diagonal, and strictly positive off-diagonal
    /// entries.
    pub fn new(s: DMatrix<f64>) -> Result<Self> {
        let n = s.nrows();
        if n != s.ncols() || n < 2 {
            return Err(Error::DimensionMismatch(format!(
                "squared distance matrix must be square with n >= 2, got {}x{}",
                s.nrows(),
                s.ncols()
            )));
        }
        for i in 0..n {
            if s[(i, i)] != 0.0 {
                return Err(Error::InvalidInput(format!(
                    "diagonal entry s_{}{} = {} must be zero",
                    i + 1,
                    i + 1,
                    s[(i, i)]
                )));
            }
            for j in (i + 1)..n {
                let a = s[(i, j)];
                let b = s[(j, i)];
                if !a.is_finite() || (a - b).abs() > 1e-12 * a.abs().max(1.0) {
                    return Err(Error::InvalidInput(format!(
                        "matrix not symmetric at ({}, {}): {} vs {}",
                        i + 1,
                        j + 1,
                        a,
                        b
                    )));
                }
                if a <= 0.0 {
                    return Err(Error::CoincidentPoints {
                        i: i + 1,
                        j: j + 1,
                        s: a,
                        eps: 0.0,
                    });
                }
            }
        }
        Ok(Self { s })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged squared distance matrix".into()));
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn len(&self) -> usize {
        self.s.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.s.nrows() == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.s[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.len())
            .map(|i| self.s.row(i).iter().copied().collect())
            .collect()
    }

    /// Largest squared distance.
    pub fn max_entry(&self) -> f64 {
        self.s.iter().cloned().fold(0.0, f64::max)
    }

    /// Sorted list of the n(n-1)/2 distances (square roots of the entries).
    pub fn sorted_distances(&self) -> Vec<f64> {
        let n = self.len();
        let mut d = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                d.push(self.s[(i, j)].sqrt());
            }
        }
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d
    }

    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "permutation length {} != n = {}",
                perm.len(),
                self.len()
            )));
        }
        let n = self.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| self.s[(perm[i], perm[j])]))
    }
}

/// Signed (n-2)-simplex volumes over all (n-1)-point subsets, indexed by the
/// omitted particle, together with the scalar kappa relating them to the
/// barycentric ray.
///
/// `values[i]` is the signed volume of the simplex on all particles except
/// `i`, taken in increasing label order. The alternating-sign vector
/// `(-1)^i * values[i]` equals `kappa` times the unit barycentric ray.
/// Only magnitude comparisons and sign patterns of the ray are meaningful;
/// the sign of kappa depends on the orientation of the embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedVolumes {
    pub values: Vec<f64>,
    pub kappa: f64,
}

/// Exact squared Euclidean distances between all particle pairs.
///
/// Uses [`COINCIDENCE_EPS`]; see [`squared_distances_with_eps`] to override.
pub fn squared_distances(config: &Configuration) -> Result<SquaredDistanceMatrix> {
    squared_distances_with_eps(config, COINCIDENCE_EPS)
}

/// As [`squared_distances`], rejecting pairs with squared distance below `eps`.
pub fn squared_distances_with_eps(
    config: &Configuration,
    eps: f64,
) -> Result<SquaredDistanceMatrix> {
    let n = config.len();
    let mut s = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let d2 = (config.matrix().row(i) - config.matrix().row(j)).norm_squared();
            if d2 < eps {
                return Err(Error::CoincidentPoints {
                    i: i + 1,
                    j: j + 1,
                    s: d2,
                    eps,
                });
            }
            s[(i, j)] = d2;
            s[(j, i)] = d2;
        }
    }
    SquaredDistanceMatrix::new(s)
}

/// Mass-weighted barycenter q_G = (1/M) sum m_i q_i.
pub fn center_of_mass(config: &Configuration, m: &MassVector) -> Result<DVector<f64>> {
    if config.len() != m.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} points vs {} masses",
            config.len(),
            m.len()
        )));
    }
    let mut g = DVector::zeros(config.dim());
    for i in 0..config.len() {
        g += config.point(i) * m.get(i);
    }
    Ok(g / m.total())
}

/// Cayley-Menger determinant of the bordered (k+1)x(k+1) matrix over the
/// given particle subset.
///
/// Vanishes when the k points span fewer than k-1 dimensions; for k = 4 it
/// equals 288 V^2 up to sign, with V the tetrahedron volume.
pub fn cayley_menger(s: &SquaredDistanceMatrix, subset: &[usize]) -> Result<f64> {
    let n = s.len();
    let k = subset.len();
    if k < 3 || k > n {
        return Err(Error::InvalidInput(format!(
            "subset size must satisfy 3 <= k <= n, got k = {}",
            k
        )));
    }
    let mut seen = vec![false; n];
    for &idx in subset {
        if idx >= n {
            return Err(Error::InvalidInput(format!("index {} out of range (n = {})", idx, n)));
        }
        if seen[idx] {
            return Err(Error::InvalidInput(format!("duplicate index {} in subset", idx)));
        }
        seen[idx] = true;
    }
    let mut b = DMatrix::zeros(k + 1, k + 1);
    for i in 1..=k {
        b[(0, i)] = 1.0;
        b[(i, 0)] = 1.0;
    }
    for (i, &pi) in subset.iter().enumerate() {
        for (j, &pj) in subset.iter().enumerate() {
            b[(i + 1, j + 1)] = s.get(pi, pj);
        }
    }
    Ok(b.determinant())
}

/// Cayley-Menger determinant scaled by the subset's distance scale.
///
/// The determinant has units of s^(k-1); dividing by max(s)^(k-1) gives a
/// dimensionless residual suitable for tolerance checks.
pub fn cayley_menger_relative(s: &SquaredDistanceMatrix, subset: &[usize]) -> Result<f64> {
    let det = cayley_menger(s, subset)?;
    let mut scale: f64 = 0.0;
    for (a, &pi) in subset.iter().enumerate() {
        for &pj in subset.iter().skip(a + 1) {
            scale = scale.max(s.get(pi, pj).abs());
        }
    }
    let k = subset.len();
    Ok(det.abs() / scale.powi(k as i32 - 1))
}

/// Embeds a squared-distance matrix into `target_dim` Euclidean dimensions
/// via double-centered Gram factorization (classical multidimensional
/// scaling).
///
/// The result is centered at the origin with a deterministic orientation:
/// the first point lies on the positive first axis, the second point has a
/// positive second coordinate, and so on. Identical inputs give
/// bit-identical outputs.
pub fn embed(s: &SquaredDistanceMatrix, target_dim: usize) -> Result<Configuration> {
    if target_dim == 0 {
        return Err(Error::InvalidInput("target dimension must be >= 1".into()));
    }
    let n = s.len();
    let d = s.matrix();

    // Gram matrix B = -1/2 J D J with J the centering matrix.
    let row_mean: Vec<f64> = (0..n).map(|i| d.row(i).sum() / n as f64).collect();
    let grand_mean: f64 = row_mean.iter().sum::<f64>() / n as f64;
    let b = DMatrix::from_fn(n, n, |i, j| {
        -0.5 * (d[(i, j)] - row_mean[i] - row_mean[j] + grand_mean)
    });

    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| {
        eig.eigenvalues[c]
            .partial_cmp(&eig.eigenvalues[a])
            .unwrap()
            .then(a.cmp(&c))
    });

    let lambda_max = eig.eigenvalues[order[0]].max(0.0);
    let tol = EMBED_RANK_TOL * lambda_max.max(f64::MIN_POSITIVE);
    let most_negative = eig.eigenvalues.iter().cloned().fold(0.0, f64::min);
    let rank = order
        .iter()
        .filter(|&&i| eig.eigenvalues[i] > tol)
        .count();
    if most_negative < -tol || rank > target_dim {
        return Err(Error::NotRealizable {
            dim: target_dim,
            most_negative: most_negative.min(0.0),
            excess_rank: rank.saturating_sub(target_dim),
        });
    }

    let mut coords = DMatrix::zeros(n, target_dim);
    for (col, &e) in order.iter().take(target_dim).enumerate() {
        let scale = eig.eigenvalues[e].max(0.0).sqrt();
        for i in 0..n {
            coords[(i, col)] = scale * eig.eigenvectors[(i, e)];
        }
    }

    let coords = canonical_orientation(coords);
    Configuration::from_matrix(coords)
}

/// Rotates/reflects centered coordinates into the deterministic gauge used
/// by [`embed`]: Gram-Schmidt over the point rows in label order, so point 1
/// sits on the positive first axis, point 2 in the upper half of the first
/// plane, and so on. Rows too close to the span of earlier rows are skipped;
/// missing directions are completed from the standard basis.
pub fn canonical_orientation(coords: DMatrix<f64>) -> DMatrix<f64> {
    let n = coords.nrows();
    let d = coords.ncols();
    let scale = coords.iter().fold(0.0f64, |acc, &x| acc.max(x.abs())).max(1e-300);
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(d);
    for i in 0..n {
        if basis.len() == d {
            break;
        }
        let mut v = coords.row(i).transpose();
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-12 * scale {
            basis.push(v / norm);
        }
    }
    // Complete a degenerate span from the standard basis.
    let mut axis = 0;
    while basis.len() < d && axis < d {
        let mut v = DVector::zeros(d);
        v[axis] = 1.0;
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            basis.push(v / norm);
        }
        axis += 1;
    }
    let q = DMatrix::from_fn(d, d, |r, c| basis[c][r]);
    coords * q
}

/// Homogeneous barycentric coordinates of a configuration spanning dimension
/// n-2: the unique (up to scale) nonzero solution of
/// sum Delta_i = 0, sum Delta_i q_i = 0.
///
/// The returned ray has unit Euclidean norm with the sign fixed so that its
/// first entry of significant magnitude is negative.
pub fn barycentric_coordinates(config: &Configuration) -> Result<Vec<f64>> {
    let n = config.len();
    let d = config.dim();
    if n < d + 2 {
        return Err(Error::DimensionMismatch(format!(
            "need n >= d + 2 points for a barycentric ray, got n = {}, d = {}",
            n, d
        )));
    }
    // Rows: all-ones, then one row per ambient coordinate.
    let mut a = DMatrix::zeros(d + 1, n);
    for j in 0..n {
        a[(0, j)] = 1.0;
    }
    // Center and scale coordinates so the rank tolerance is geometry-relative.
    let centroid: DVector<f64> =
        (0..n).map(|i| config.point(i)).sum::<DVector<f64>>() / n as f64;
    let mut scale: f64 = 0.0;
    for i in 0..n {
        scale = scale.max((config.point(i) - &centroid).norm());
    }
    let scale = scale.max(f64::MIN_POSITIVE);
    for i in 0..n {
        let p = (config.point(i) - &centroid) / scale;
        for k in 0..d {
            a[(k + 1, i)] = p[k];
        }
    }

    let ata = a.transpose() * &a;
    let eig = ata.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| {
        eig.eigenvalues[x]
            .partial_cmp(&eig.eigenvalues[y])
            .unwrap()
            .then(x.cmp(&y))
    });
    let lambda_max = eig.eigenvalues[order[n - 1]].max(f64::MIN_POSITIVE);
    // Squaring through A^T A floors the resolvable singular-value ratio near
    // sqrt(eps); numerically-zero eigenvalues land at ~eps * lambda_max.
    let tol = ((RANK_TOL * RANK_TOL).max(64.0 * f64::EPSILON)) * lambda_max;
    let nullity = order.iter().filter(|&&i| eig.eigenvalues[i] <= tol).count();
    if nullity != 1 {
        return Err(Error::WrongRank { nullity });
    }
    let v = eig.eigenvectors.column(order[0]);
    let mut delta: Vec<f64> = v.iter().copied().collect();
    let norm = delta.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut delta {
        *x /= norm;
    }
    // Sign gauge: first significant entry negative.
    if let Some(first) = delta.iter().find(|x| x.abs() > 1e-9) {
        if *first > 0.0 {
            for x in &mut delta {
                *x = -*x;
            }
        }
    }
    Ok(delta)
}

/// Signed (n-2)-simplex volumes of all (n-1)-point subsets, with the
/// proportionality factor kappa against the barycentric ray.
pub fn oriented_volumes(config: &Configuration) -> Result<OrientedVolumes> {
    let n = config.len();
    let d = config.dim();
    if d + 2 != n {
        return Err(Error::DimensionMismatch(format!(
            "oriented volumes need d = n - 2, got n = {}, d = {}",
            n, d
        )));
    }
    let mut values = Vec::with_capacity(n);
    for omit in 0..n {
        let kept: Vec<usize> = (0..n).filter(|&i| i != omit).collect();
        let base = config.point(kept[0]);
        let mut m = DMatrix::zeros(d, d);
        for (col, &i) in kept[1..].iter().enumerate() {
            let edge = config.point(i) - &base;
            for r in 0..d {
                m[(r, col)] = edge[r];
            }
        }
        values.push(m.determinant() / factorial(d) as f64);
    }
    let delta = barycentric_coordinates(config)?;
    let mut num = 0.0;
    let mut den = 0.0;
    for (i, &v) in values.iter().enumerate() {
        let w = if i % 2 == 0 { v } else { -v };
        num += w * delta[i];
        den += delta[i] * delta[i];
    }
    Ok(OrientedVolumes {
        values,
        kappa: num / den,
    })
}

fn factorial(k: usize) -> u64 {
    (1..=k as u64).product::<u64>().max(1)
}
