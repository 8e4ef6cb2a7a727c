//! Theorem-level reporting on solved configurations: reflection symmetry
//! detection, mass/area/distance ordering chains, Routh's quadrilateral
//! relation, the three-way product identity, and sign-pattern convexity
//! classification.

use serde::Serialize;

use crate::delta::{CCSolution, DziobekCoords};
use crate::error::{Error, Result};
use crate::geometry::{oriented_volumes, Configuration};

/// Default relative tolerance for symmetry detection. The solver residual
/// floor is around 1e-9, so 1e-7 separates genuine symmetry from numerical
/// coincidence with two orders of margin.
pub const SYMMETRY_TOL: f64 = 1e-7;

/// Reflection-symmetry evidence for one candidate axis (n = 4) or plane
/// (n = 5).
#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    /// Particles fixed by the reflection (1-based labels).
    pub axis_or_plane: Vec<usize>,
    /// The mirrored particle pair (1-based labels).
    pub mirrored: (usize, usize),
    /// Largest relative mismatch among mirrored distance pairs.
    pub distance_asymmetry: f64,
    /// |Delta_i - Delta_j| over the mirrored pair, relative to max |Delta|.
    pub delta_gap: f64,
    pub symmetric: bool,
}

fn mirror_report(
    sol: &CCSolution,
    fixed: &[usize],
    mirrored: (usize, usize),
    tolerance: f64,
) -> SymmetryReport {
    let (i, j) = mirrored;
    let mut distance_asymmetry = 0.0f64;
    for &k in fixed {
        let a = sol.distances.get(i, k);
        let b = sol.distances.get(j, k);
        distance_asymmetry = distance_asymmetry.max((a - b).abs() / a.max(b));
    }
    let delta_scale = sol
        .deltas
        .as_slice()
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let delta_gap = (sol.deltas.get(i) - sol.deltas.get(j)).abs() / delta_scale;
    SymmetryReport {
        axis_or_plane: fixed.iter().map(|&k| k + 1).collect(),
        mirrored: (i + 1, j + 1),
        distance_asymmetry,
        delta_gap,
        symmetric: distance_asymmetry < tolerance && delta_gap < tolerance,
    }
}

/// Reflection reports for the theorem-named mirrors: for n = 4 both
/// diagonals ([q3,q4] mirroring 1<->2, then [q1,q2] mirroring 3<->4); for
/// n = 5 the plane [q3,q4,q5] mirroring 1<->2.
pub fn symmetry_report(sol: &CCSolution, tolerance: f64) -> Result<Vec<SymmetryReport>> {
    match sol.n() {
        4 => Ok(vec![
            mirror_report(sol, &[2, 3], (0, 1), tolerance),
            mirror_report(sol, &[0, 1], (2, 3), tolerance),
        ]),
        5 => Ok(vec![mirror_report(sol, &[2, 3, 4], (0, 1), tolerance)]),
        n => Err(Error::InvalidInput(format!(
            "symmetry reports cover n = 4 and n = 5, got n = {}",
            n
        ))),
    }
}

/// Sign triple/quadruple of the ordering chain between particles 1 and 2.
///
/// All recorded signs agree on an accepted convex solution with a < 0: the
/// lighter particle has the smaller opposite-face volume, sits closer to
/// the other diagonal, and is closer to every particle on it.
#[derive(Debug, Clone, Serialize)]
pub struct OrderingReport {
    /// sign(m_1 - m_2).
    pub mass_order: i8,
    /// sign(|volume omitting 2| - |volume omitting 1|).
    pub area_order: i8,
    /// sign(dist(q_1, span) - dist(q_2, span)), span = the other diagonal.
    pub height_order: i8,
    /// signs of s_1k - s_2k for each k >= 3.
    pub distance_orders: Vec<i8>,
    pub consistent: bool,
}

fn sign_with_tol(x: f64, scale: f64, tol: f64) -> i8 {
    if x.abs() <= tol * scale {
        0
    } else if x > 0.0 {
        1
    } else {
        -1
    }
}

/// Distance from a point to the affine span of the given particles
/// (a line for two, a plane for three).
fn distance_to_span(config: &Configuration, point: usize, span: &[usize]) -> f64 {
    let base = config.point(span[0]);
    let mut basis: Vec<nalgebra::DVector<f64>> = Vec::new();
    for &s in &span[1..] {
        let mut v = config.point(s) - &base;
        for b in &basis {
            let proj = b.dot(&v);
            v -= b * proj;
        }
        let norm = v.norm();
        if norm > 1e-14 {
            basis.push(v / norm);
        }
    }
    let mut w = config.point(point) - &base;
    for b in &basis {
        let proj = b.dot(&w);
        w -= b * proj;
    }
    w.norm()
}

/// Computes the ordering chain of an accepted solution, cross-checking the
/// volume comparison against the point-to-span distance comparison.
pub fn ordering_report(sol: &CCSolution) -> Result<OrderingReport> {
    let n = sol.n();
    if n != 4 && n != 5 {
        return Err(Error::InvalidInput(format!(
            "ordering reports cover n = 4 and n = 5, got n = {}",
            n
        )));
    }
    let tol = SYMMETRY_TOL;
    let m1 = sol.masses.get(0);
    let m2 = sol.masses.get(1);
    let mass_order = sign_with_tol(m1 - m2, m1 + m2, tol);

    let volumes = oriented_volumes(&sol.positions)?;
    // values[k] omits particle k: the face opposite particle 1 is values[0].
    let v1 = volumes.values[1].abs(); // simplex omitting particle 2, contains q1
    let v2 = volumes.values[0].abs(); // simplex omitting particle 1, contains q2
    let area_order = sign_with_tol(v1 - v2, v1.max(v2), tol);

    let span: Vec<usize> = (2..n).collect();
    let h1 = distance_to_span(&sol.positions, 0, &span);
    let h2 = distance_to_span(&sol.positions, 1, &span);
    let height_order = sign_with_tol(h1 - h2, h1.max(h2), tol);

    let mut distance_orders = Vec::new();
    for k in 2..n {
        let a = sol.distances.get(0, k);
        let b = sol.distances.get(1, k);
        distance_orders.push(sign_with_tol(a - b, a.max(b), tol));
    }

    let mut signs = vec![mass_order, area_order, height_order];
    signs.extend(&distance_orders);
    let consistent = signs.windows(2).all(|w| w[0] == w[1]);
    Ok(OrderingReport {
        mass_order,
        area_order,
        height_order,
        distance_orders,
        consistent,
    })
}

/// Relative residual of the quadrilateral relation
/// m_3 V_123 (S_13 - S_23) + m_4 V_124 (S_14 - S_24) = 0 with S = s^a and
/// V the oriented triangle areas.
///
/// Scaled by the larger factor magnitude |m_k V| (|S_1k| + |S_2k|), so the
/// value measures how completely the two summands cancel; near zero on
/// genuine solutions (where each parenthesized difference may itself vanish)
/// and order one on perturbed inputs.
pub fn routh_residual(sol: &CCSolution) -> Result<f64> {
    if sol.n() != 4 {
        return Err(Error::InvalidInput(format!(
            "the quadrilateral relation needs n = 4, got n = {}",
            sol.n()
        )));
    }
    let volumes = oriented_volumes(&sol.positions)?;
    let v123 = volumes.values[3]; // omits particle 4
    let v124 = volumes.values[2]; // omits particle 3
    let a = sol.exponent.a();
    let s13 = sol.distances.get(0, 2).powf(a);
    let s23 = sol.distances.get(1, 2).powf(a);
    let s14 = sol.distances.get(0, 3).powf(a);
    let s24 = sol.distances.get(1, 3).powf(a);
    let m3 = sol.masses.get(2);
    let m4 = sol.masses.get(3);
    let value = m3 * v123 * (s13 - s23) + m4 * v124 * (s14 - s24);
    let scale = (m3 * v123).abs() * (s13.abs() + s23.abs());
    let scale = scale.max((m4 * v124).abs() * (s14.abs() + s24.abs()));
    Ok(value.abs() / (scale + f64::MIN_POSITIVE))
}

/// Relative spread of the three pair products
/// (S_12 - c)(S_34 - c), (S_13 - c)(S_24 - c), (S_14 - c)(S_23 - c) with
/// c the fitted lambda/M. All three coincide on a genuine solution, where
/// each equals mu^2 Delta_1 Delta_2 Delta_3 Delta_4 / (m_1 m_2 m_3 m_4).
pub fn product_relation_residual(sol: &CCSolution) -> Result<f64> {
    if sol.n() != 4 {
        return Err(Error::InvalidInput(format!(
            "the product relation needs n = 4, got n = {}",
            sol.n()
        )));
    }
    let a = sol.exponent.a();
    let c = sol.lambda_over_m;
    let term = |i: usize, j: usize| sol.distances.get(i, j).powf(a) - c;
    let products = [
        term(0, 1) * term(2, 3),
        term(0, 2) * term(1, 3),
        term(0, 3) * term(1, 2),
    ];
    let mean = products.iter().map(|p| p.abs()).sum::<f64>() / 3.0;
    let mut spread = 0.0f64;
    for i in 0..3 {
        for j in (i + 1)..3 {
            spread = spread.max((products[i] - products[j]).abs());
        }
    }
    Ok(spread / (mean + f64::MIN_POSITIVE))
}

/// Convexity classification by coordinate signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// Exactly two negative entries: convex, the negative pair spanning the
    /// diagonal (n = 4) or the interior edge (n = 5).
    ConvexDiagonal { pair: (usize, usize) },
    /// Three or more negative entries after normalization (n >= 6 regime):
    /// convex, but outside the two-negative hypothesis.
    ConvexOther,
    /// Exactly one negative entry: that particle is interior to the simplex
    /// on the others.
    Nonconvex { interior: usize },
    /// One or more entries indistinguishable from zero: on the boundary
    /// between sign regimes (a pyramidal configuration).
    Degenerate { zero_indices: Vec<usize> },
}

/// Sign-pattern classification of a coordinate vector.
#[derive(Debug, Clone, Serialize)]
pub struct ConvexityClass {
    /// 1-based indices of negative entries after sign normalization.
    pub negative_indices: Vec<usize>,
    pub classification: Classification,
}

/// Classifies the sign pattern of the coordinates.
///
/// The ray sign is normalized so negatives are the minority (ties keep the
/// input sign), making the result invariant under global sign flips for
/// n = 5 and permutation-equivariant always. Entries below 1e-9 of the
/// largest magnitude count as zero.
pub fn convexity_class(deltas: &DziobekCoords) -> ConvexityClass {
    let scale = deltas
        .as_slice()
        .iter()
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let zero_tol = 1e-9 * scale;
    let zero_indices: Vec<usize> = deltas
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, x)| x.abs() <= zero_tol)
        .map(|(i, _)| i + 1)
        .collect();
    if !zero_indices.is_empty() {
        return ConvexityClass {
            negative_indices: deltas
                .as_slice()
                .iter()
                .enumerate()
                .filter(|(_, x)| **x < -zero_tol)
                .map(|(i, _)| i + 1)
                .collect(),
            classification: Classification::Degenerate { zero_indices },
        };
    }
    let negatives = deltas.as_slice().iter().filter(|x| **x < 0.0).count();
    let positives = deltas.len() - negatives;
    let flip = negatives > positives;
    let negative_indices: Vec<usize> = deltas
        .as_slice()
        .iter()
        .enumerate()
        .filter(|(_, x)| if flip { **x > 0.0 } else { **x < 0.0 })
        .map(|(i, _)| i + 1)
        .collect();
    let classification = match negative_indices.len() {
        1 => Classification::Nonconvex {
            interior: negative_indices[0],
        },
        2 => Classification::ConvexDiagonal {
            pair: (negative_indices[0], negative_indices[1]),
        },
        _ => Classification::ConvexOther,
    };
    ConvexityClass {
        negative_indices,
        classification,
    }
}
