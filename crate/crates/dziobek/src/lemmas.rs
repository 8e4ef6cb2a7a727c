//! The scalar functions and inequalities behind the symmetry and ordering
//! results, with closed-form internals and property-sampling certification.
//!
//! Three families of checks live here:
//!
//! * the two-term power gap `A(rho1, rho2, rho)` and its minimization
//!   internals (the stationary point `rho0`, the minimum of
//!   `g(rho) = s13 - s23`, the reduced quantities `B` and `C`);
//! * the trinomial `f(q) = (1+q)^u (1-q) + q^(1+u) - 1`, positive on (0,1);
//! * the per-pair ordering products and the `t_1 - t_2 >= Z > 0` bound for
//!   coordinates satisfying the two-negative hypothesis.
//!
//! Certification is statistical plus a bounded numerical minimizer, not
//! symbolic: suites sample a fixed box with a fixed seed, log the minimum
//! observed value with its arguments, and fail loudly on any violation.
//! Violations would indicate an implementation bug, not a counterexample.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::delta::{delta_to_distances, DziobekCoords, Exponent};
use crate::error::{Error, Result};
use crate::geometry::MassVector;

// Certified sampling box. The full parameter region degenerates on two
// faces (rho2 -> rho1 and the rho2 = 0 face at extreme |rho1 * rho| and
// alpha), where the gap A tends to 0+ while remaining strictly positive and
// f64 cancellation can no longer resolve its sign. The margins below keep
// the interior box where a threshold of 1e-12 is meaningful; the rho2 = 0
// face is certified separately through an exact cancellation-free
// rearrangement (A reduces to -rho1 * s13 there).

/// Smallest |rho1| sampled or searched.
pub const RHO1_MIN_MAG: f64 = 1e-3;
/// Largest |rho1| sampled or searched.
pub const RHO1_MAX_MAG: f64 = 50.0;
/// Margin keeping q = rho2/rho1 away from 0 and 1.
pub const Q_MARGIN: f64 = 1e-6;
/// Largest rho sampled or searched.
pub const RHO_MAX: f64 = 50.0;
/// alpha in [-ALPHA_MAX_MAG, -ALPHA_MIN_MAG].
pub const ALPHA_MIN_MAG: f64 = 0.02;
pub const ALPHA_MAX_MAG: f64 = 8.0;

/// A point of the two-term gap domain: rho1 < rho2 <= 0, rho1 rho2 < 1,
/// rho >= 0, alpha < 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma2Point {
    rho1: f64,
    rho2: f64,
    rho: f64,
    alpha: f64,
}

impl Lemma2Point {
    pub fn new(rho1: f64, rho2: f64, rho: f64, alpha: f64) -> Result<Self> {
        if !(rho1 < rho2) {
            return Err(Error::HypothesisViolation(format!(
                "need rho1 < rho2, got rho1 = {}, rho2 = {}",
                rho1, rho2
            )));
        }
        if !(rho2 <= 0.0) {
            return Err(Error::HypothesisViolation(format!("need rho2 <= 0, got {}", rho2)));
        }
        if !(rho1 * rho2 < 1.0) {
            return Err(Error::HypothesisViolation(format!(
                "need rho1 * rho2 < 1, got {}",
                rho1 * rho2
            )));
        }
        if !(rho >= 0.0) {
            return Err(Error::HypothesisViolation(format!("need rho >= 0, got {}", rho)));
        }
        if !(alpha < 0.0) {
            return Err(Error::HypothesisViolation(format!("need alpha < 0, got {}", alpha)));
        }
        Ok(Self {
            rho1,
            rho2,
            rho,
            alpha,
        })
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// q = rho2 / rho1, in (0, 1) for rho2 < 0 and 0 at the rho2 = 0 face.
    pub fn q(&self) -> f64 {
        self.rho2 / self.rho1
    }

    /// u = 1/(alpha - 1), always in (-1, 0) for alpha < 0.
    pub fn u(&self) -> f64 {
        1.0 / (self.alpha - 1.0)
    }
}

/// The gap A = (rho2 - rho1) s12 - (rho1 + rho2)(s13 - s23) with
/// s12 = (1 - rho1 rho2)^alpha, s13 = (1 - rho1 rho)^alpha,
/// s23 = (1 - rho2 rho)^alpha. Strictly positive on the whole domain.
///
/// At rho2 = 0 the two terms cancel to the exact rearrangement
/// A = -rho1 * s13, which is evaluated directly to avoid losing the sign to
/// floating-point cancellation.
pub fn lemma2_a(p: &Lemma2Point) -> f64 {
    let s13 = (1.0 - p.rho1 * p.rho).powf(p.alpha);
    if p.rho2 == 0.0 {
        return -p.rho1 * s13;
    }
    let s12 = (1.0 - p.rho1 * p.rho2).powf(p.alpha);
    let s23 = (1.0 - p.rho2 * p.rho).powf(p.alpha);
    (p.rho2 - p.rho1) * s12 - (p.rho1 + p.rho2) * (s13 - s23)
}

/// g(rho) = (1 - rho1 rho)^alpha - (1 - rho2 rho)^alpha, the rho-dependent
/// part of the gap.
pub fn lemma2_g(p: &Lemma2Point, rho: f64) -> f64 {
    (1.0 - p.rho1 * rho).powf(p.alpha) - (1.0 - p.rho2 * rho).powf(p.alpha)
}

/// The unique stationary point rho0 > 0 of g, from
/// rho1 rho0 = (1 - q^u) / (1 - q^(u+1)). Needs rho2 < 0 strictly.
pub fn lemma2_rho0(p: &Lemma2Point) -> Result<f64> {
    if p.rho2 == 0.0 {
        return Err(Error::HypothesisViolation(
            "rho0 needs rho2 < 0 strictly (no interior stationary point at rho2 = 0)".into(),
        ));
    }
    let q = p.q();
    let u = p.u();
    Ok((1.0 - q.powf(u)) / (p.rho1 * (1.0 - q.powf(u + 1.0))))
}

/// Closed-form minimum of g:
/// g(rho0) = (q^(1+u) - 1) ((1 - q) / (1 - q^(u+1)))^alpha.
pub fn lemma2_g_min(p: &Lemma2Point) -> Result<f64> {
    if p.rho2 == 0.0 {
        return Err(Error::HypothesisViolation(
            "g_min needs rho2 < 0 strictly".into(),
        ));
    }
    let q = p.q();
    let u = p.u();
    Ok((q.powf(1.0 + u) - 1.0) * ((1.0 - q) / (1.0 - q.powf(u + 1.0))).powf(p.alpha))
}

/// The reduced quantities B = A / (-rho1) evaluated at the point's own rho,
/// and C = (1 - q) + (1 + q) g(rho0). The chain B > C > 0 holds on the
/// rho2 < 0 interior.
pub fn lemma2_b_c(p: &Lemma2Point) -> Result<(f64, f64)> {
    let q = p.q();
    let b = (1.0 - q) * (1.0 - p.rho1 * p.rho1 * q).powf(p.alpha) + (1.0 + q) * lemma2_g(p, p.rho);
    let c = (1.0 - q) + (1.0 + q) * lemma2_g_min(p)?;
    Ok((b, c))
}

/// The trinomial f(q) = (1+q)^u (1-q) + q^(1+u) - 1 for q in (0, 1] and
/// u in (-1, 0). Positive on the open interval, exactly zero at q = 1.
pub fn laguerre_f(q: f64, u: f64) -> f64 {
    (1.0 + q).powf(u) * (1.0 - q) + q.powf(1.0 + u) - 1.0
}

/// Derivative of the trinomial:
/// f'(q) = u (1+q)^(u-1) (1-q) - (1+q)^u + (1+u) q^u.
/// At q = 1 this is -2^u + 1 + u < 0.
pub fn laguerre_f_prime(q: f64, u: f64) -> f64 {
    u * (1.0 + q).powf(u - 1.0) * (1.0 - q) - (1.0 + q).powf(u) + (1.0 + u) * q.powf(u)
}

/// The per-pair ordering products (Delta_i/m_i - Delta_j/m_j)(Delta_i - Delta_j),
/// returned as (i, j, product) over all pairs i < j. All are nonnegative on
/// any validated solution; nothing is assumed about arbitrary inputs.
pub fn lemma1_products(
    deltas: &DziobekCoords,
    m: &MassVector,
) -> Result<Vec<(usize, usize, f64)>> {
    let n = deltas.len();
    if m.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} coordinates vs {} masses",
            n,
            m.len()
        )));
    }
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let ratio_gap = deltas.get(i) / m.get(i) - deltas.get(j) / m.get(j);
            out.push((i, j, ratio_gap * (deltas.get(i) - deltas.get(j))));
        }
    }
    Ok(out)
}

/// Coordinates satisfying the two-negative hypothesis
/// Delta_1/m_1 <= Delta_2/m_2 <= 0 (with (ratio, Delta) lexicographically
/// strict), Delta_1 Delta_2 < m_1 m_2, Delta_i >= 0 for i >= 3, under a < 0.
///
/// Construction renumbers particles 3..n so that s_13 - s_23 is smallest at
/// position 3, then derives s1 = -s12 - s13 + s23, s2 = s12 - s13 + s23, the
/// bound Z = (Delta_2 - Delta_1) s12 - (Delta_1 + Delta_2)(s13 - s23), and
/// t_1 - t_2 from the expanded pair-difference form.
#[derive(Debug, Clone)]
pub struct Lemma3Point {
    deltas: DziobekCoords,
    masses: MassVector,
    exponent: Exponent,
    /// Renumbered particle order (identity on the first two).
    order: Vec<usize>,
    s1: f64,
    s2: f64,
    z: f64,
    t1_minus_t2: f64,
}

impl Lemma3Point {
    pub fn new(deltas: DziobekCoords, masses: MassVector, exponent: Exponent) -> Result<Self> {
        let n = deltas.len();
        if masses.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates vs {} masses",
                n,
                masses.len()
            )));
        }
        if !exponent.theorem_regime() {
            return Err(Error::HypothesisViolation(format!(
                "need a < 0, got a = {}",
                exponent.a()
            )));
        }
        let rho1 = deltas.get(0) / masses.get(0);
        let rho2 = deltas.get(1) / masses.get(1);
        if !(rho2 <= 0.0) {
            return Err(Error::HypothesisViolation(format!(
                "need Delta_2/m_2 <= 0, got {}",
                rho2
            )));
        }
        // Lexicographic strictness: the ratio gap may close only when the
        // coordinates themselves still separate the two particles.
        if !(rho1 < rho2 || (rho1 == rho2 && deltas.get(0) < deltas.get(1))) {
            return Err(Error::HypothesisViolation(format!(
                "need (Delta_1/m_1, Delta_1) < (Delta_2/m_2, Delta_2) lexicographically, got ratios ({}, {}) and coordinates ({}, {})",
                rho1,
                rho2,
                deltas.get(0),
                deltas.get(1)
            )));
        }
        if !(deltas.get(0) * deltas.get(1) < masses.get(0) * masses.get(1)) {
            return Err(Error::HypothesisViolation(format!(
                "need Delta_1 Delta_2 < m_1 m_2, got {} vs {}",
                deltas.get(0) * deltas.get(1),
                masses.get(0) * masses.get(1)
            )));
        }
        for i in 2..n {
            if !(deltas.get(i) >= 0.0) {
                return Err(Error::HypothesisViolation(format!(
                    "need Delta_{} >= 0, got {}",
                    i + 1,
                    deltas.get(i)
                )));
            }
        }
        deltas.check_domain(&masses)?;

        let s = delta_to_distances(&deltas, &masses, &exponent)?;
        let mut tail: Vec<usize> = (2..n).collect();
        tail.sort_by(|&a, &b| {
            let ga = s.get(0, a) - s.get(1, a);
            let gb = s.get(0, b) - s.get(1, b);
            ga.total_cmp(&gb).then(a.cmp(&b))
        });
        let mut order = vec![0, 1];
        order.extend(tail);

        let s12 = s.get(0, 1);
        let k3 = order[2];
        let s13 = s.get(0, k3);
        let s23 = s.get(1, k3);
        let (d1, d2) = (deltas.get(0), deltas.get(1));
        let z = (d2 - d1) * s12 - (d1 + d2) * (s13 - s23);
        let mut t1_minus_t2 = (d2 - d1) * s12;
        for &k in &order[2..] {
            t1_minus_t2 += deltas.get(k) * (s.get(0, k) - s.get(1, k));
        }
        Ok(Self {
            deltas,
            masses,
            exponent,
            order,
            s1: -s12 - s13 + s23,
            s2: s12 - s13 + s23,
            z,
            t1_minus_t2,
        })
    }

    pub fn deltas(&self) -> &DziobekCoords {
        &self.deltas
    }

    pub fn masses(&self) -> &MassVector {
        &self.masses
    }

    pub fn exponent(&self) -> &Exponent {
        &self.exponent
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// The gap point (Delta_1/m_1, Delta_2/m_2, Delta_3'/m_3') matching this
    /// hypothesis point, with 3' the renumbered third particle. Fails at the
    /// ratio-equality boundary where the gap domain requires strictness.
    pub fn gap_point(&self) -> Result<Lemma2Point> {
        Lemma2Point::new(
            self.deltas.get(0) / self.masses.get(0),
            self.deltas.get(1) / self.masses.get(1),
            self.deltas.get(self.order[2]) / self.masses.get(self.order[2]),
            self.exponent.alpha(),
        )
    }
}

/// Returns (t_1 - t_2, Z). The first is never below the second; both are
/// strictly positive whenever m_1 >= m_2.
pub fn lemma3_check(p: &Lemma3Point) -> (f64, f64) {
    (p.t1_minus_t2, p.z)
}

// ---------------------------------------------------------------------------
// Property suites
// ---------------------------------------------------------------------------

/// Outcome of one property suite, serialized for reports.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyReport {
    pub lemma: String,
    pub samples: usize,
    pub min_value: f64,
    pub argmin: Value,
    pub seed: u64,
    pub pass: bool,
}

fn track_min(min_value: &mut f64, argmin: &mut Value, value: f64, point: Value) {
    if value < *min_value {
        *min_value = value;
        *argmin = point;
    }
}

fn sample_lemma2_interior(rng: &mut ChaCha8Rng) -> Lemma2Point {
    loop {
        let mag = (rng.gen_range(RHO1_MIN_MAG.ln()..RHO1_MAX_MAG.ln())).exp();
        let rho1 = -mag;
        let q_hi = (1.0 - Q_MARGIN).min((1.0 - 1e-9) / (mag * mag));
        if q_hi <= Q_MARGIN {
            continue;
        }
        let q = (rng.gen_range(Q_MARGIN.ln()..q_hi.ln())).exp();
        let rho2 = rho1 * q;
        let w: f64 = rng.gen_range(0.0..1.0);
        let rho = RHO_MAX * w * w;
        let alpha = -(rng.gen_range(ALPHA_MIN_MAG.ln()..ALPHA_MAX_MAG.ln())).exp();
        if let Ok(p) = Lemma2Point::new(rho1, rho2, rho, alpha) {
            return p;
        }
    }
}

fn lemma2_point_json(p: &Lemma2Point, label: &str) -> Value {
    json!({
        "check": label,
        "rho1": p.rho1(),
        "rho2": p.rho2(),
        "rho": p.rho(),
        "alpha": p.alpha(),
    })
}

/// Downhill simplex with fixed coefficients; bounds are enforced by the
/// objective returning infinity outside the feasible box.
fn nelder_mead<F>(f: &F, x0: &[f64], step: &[f64], max_iter: usize) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), f(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step[i];
        let fx = f(&x);
        simplex.push((x, fx));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let worst = simplex[n].1;
        let best = simplex[0].1;
        if worst.is_finite() && (worst - best).abs() <= 1e-14 * (best.abs() + 1e-300) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let reflect: Vec<f64> = (0..n)
            .map(|k| centroid[k] + (centroid[k] - simplex[n].0[k]))
            .collect();
        let fr = f(&reflect);
        if fr < simplex[0].1 {
            let expand: Vec<f64> = (0..n)
                .map(|k| centroid[k] + 2.0 * (centroid[k] - simplex[n].0[k]))
                .collect();
            let fe = f(&expand);
            simplex[n] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflect, fr);
        } else {
            let contract: Vec<f64> = (0..n)
                .map(|k| centroid[k] + 0.5 * (simplex[n].0[k] - centroid[k]))
                .collect();
            let fc = f(&contract);
            if fc < simplex[n].1 {
                simplex[n] = (contract, fc);
            } else {
                let best_x = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = (0..n)
                        .map(|k| best_x[k] + 0.5 * (entry.0[k] - best_x[k]))
                        .collect();
                    entry.1 = f(&shrunk);
                    entry.0 = shrunk;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Certifies strict positivity of the gap A over the certified box:
/// `samples` random interior points, a tenth as many points on the exact
/// rho2 = 0 face, per-sample internals checks (stationarity of rho0 by
/// central differences within an a-priori error budget, closed-form g
/// minimum agreement, the B > C > 0 chain), and `minimizer_starts` downhill
/// simplex runs hunting for any A <= 1e-12.
pub fn lemma2_suite(samples: usize, minimizer_starts: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut argmin = Value::Null;
    let mut pass = true;

    for _ in 0..samples {
        let p = sample_lemma2_interior(&mut rng);
        let a = lemma2_a(&p);
        track_min(&mut min_value, &mut argmin, a, lemma2_point_json(&p, "gap"));
        if a <= 1e-12 {
            pass = false;
        }

        let rho0 = lemma2_rho0(&p).expect("interior point has rho2 < 0");
        // Central-difference stationarity with an explicit error budget:
        // |g'''| h^2 / 6 truncation plus eps/h rounding.
        let h = 1e-6 * rho0.abs().max(1.0);
        let fd = (lemma2_g(&p, rho0 + h) - lemma2_g(&p, rho0 - h)) / (2.0 * h);
        let third = |r: f64, rho: f64| -> f64 {
            (p.alpha() * (p.alpha() - 1.0) * (p.alpha() - 2.0)).abs()
                * r.abs().powi(3)
                * (1.0 - r * rho).powf(p.alpha() - 3.0)
        };
        let budget = (third(p.rho1(), rho0) + third(p.rho2(), rho0)) * h * h / 6.0 + 1e-15 / h;
        if fd.abs() > 1e-9 + budget {
            pass = false;
            track_min(
                &mut min_value,
                &mut argmin,
                -fd.abs(),
                lemma2_point_json(&p, "rho0_stationarity"),
            );
        }

        let g_min = lemma2_g_min(&p).expect("interior point has rho2 < 0");
        if (g_min - lemma2_g(&p, rho0)).abs() > 1e-10 {
            pass = false;
        }

        let (b, c) = lemma2_b_c(&p).expect("interior point has rho2 < 0");
        if !(b > c && c > 0.0) {
            pass = false;
            track_min(
                &mut min_value,
                &mut argmin,
                c.min(b - c),
                lemma2_point_json(&p, "b_c_chain"),
            );
        }
    }

    // The rho2 = 0 face, via the exact rearrangement A = -rho1 s13: strictly
    // positive sign check (values can be legitimately below any fixed
    // threshold out here, so only the sign is asserted).
    for _ in 0..samples / 10 {
        let mag = (rng.gen_range(RHO1_MIN_MAG.ln()..RHO1_MAX_MAG.ln())).exp();
        let w: f64 = rng.gen_range(0.0..1.0);
        let alpha = -(rng.gen_range(ALPHA_MIN_MAG.ln()..ALPHA_MAX_MAG.ln())).exp();
        let p = Lemma2Point::new(-mag, 0.0, RHO_MAX * w * w, alpha).expect("valid face point");
        if !(lemma2_a(&p) > 0.0) {
            pass = false;
            track_min(&mut min_value, &mut argmin, lemma2_a(&p), lemma2_point_json(&p, "face"));
        }
    }

    // Minimizer runs over the same certified box, in (|rho1|, q, rho, alpha)
    // coordinates with infeasibility mapped to infinity.
    let objective = |v: &[f64]| -> f64 {
        let (mag, q, rho, alpha) = (v[0], v[1], v[2], v[3]);
        if !(RHO1_MIN_MAG..=RHO1_MAX_MAG).contains(&mag)
            || !(Q_MARGIN..=1.0 - Q_MARGIN).contains(&q)
            || !(0.0..=RHO_MAX).contains(&rho)
            || !(-ALPHA_MAX_MAG..=-ALPHA_MIN_MAG).contains(&alpha)
            || mag * mag * q >= 1.0 - 1e-9
        {
            return f64::INFINITY;
        }
        match Lemma2Point::new(-mag, -mag * q, rho, alpha) {
            Ok(p) => lemma2_a(&p),
            Err(_) => f64::INFINITY,
        }
    };
    for _ in 0..minimizer_starts {
        let p0 = sample_lemma2_interior(&mut rng);
        let x0 = [-p0.rho1(), p0.q(), p0.rho(), p0.alpha()];
        let step = [0.1 * x0[0], 0.1 * x0[1].min(1.0 - x0[1]), 0.5, 0.1];
        let (x, value) = nelder_mead(&objective, &x0, &step, 400);
        if value.is_finite() {
            let point = json!({
                "check": "minimizer",
                "rho1": -x[0],
                "rho2": -x[0] * x[1],
                "rho": x[2],
                "alpha": x[3],
            });
            track_min(&mut min_value, &mut argmin, value, point);
            if value <= 1e-12 {
                pass = false;
            }
        }
    }

    PropertyReport {
        lemma: "lemma2".into(),
        samples,
        min_value,
        argmin,
        seed,
        pass,
    }
}

/// Certifies the trinomial: f > 0 on sampled and gridded (q, u) interior
/// points, f(1) = 0 exactly, f'(1) = -2^u + 1 + u < 0 for 50 u values, and
/// the sampled sign-change count of f' never exceeding two on any u-slice.
pub fn laguerre_suite(samples: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut argmin = Value::Null;
    let mut pass = true;

    let check = |q: f64, u: f64, min_value: &mut f64, argmin: &mut Value, pass: &mut bool| {
        let f = laguerre_f(q, u);
        track_min(min_value, argmin, f, json!({"check": "trinomial", "q": q, "u": u}));
        if !(f > 0.0) {
            *pass = false;
        }
    };

    for _ in 0..samples {
        let q = rng.gen_range(0.0..1.0f64).max(f64::MIN_POSITIVE);
        let u = -rng.gen_range(0.0..1.0f64).max(f64::MIN_POSITIVE);
        check(q, u, &mut min_value, &mut argmin, &mut pass);
    }
    let grid = 100;
    for i in 0..grid {
        for j in 0..grid {
            let q = (i as f64 + 0.5) / grid as f64;
            let u = -(j as f64 + 0.5) / grid as f64;
            check(q, u, &mut min_value, &mut argmin, &mut pass);
        }
    }

    for k in 0..50 {
        let u = -(k as f64 + 1.0) / 51.0;
        if laguerre_f(1.0, u) != 0.0 {
            pass = false;
        }
        let slope = -(2.0f64.powf(u)) + 1.0 + u;
        if !(slope < 0.0) || (laguerre_f_prime(1.0, u) - slope).abs() > 1e-12 {
            pass = false;
        }
    }

    // Sign-change counter on f': never more than two sign changes per
    // u-slice (the trinomial root bound, observed rather than proven).
    for k in 0..20 {
        let u = -(k as f64 + 0.5) / 20.0;
        let mut changes = 0;
        let mut last_sign = 0i8;
        for i in 0..512 {
            let q = (i as f64 + 0.5) / 512.0;
            let v = laguerre_f_prime(q, u);
            let sign = if v > 0.0 {
                1
            } else if v < 0.0 {
                -1
            } else {
                0
            };
            if sign != 0 {
                if last_sign != 0 && sign != last_sign {
                    changes += 1;
                }
                last_sign = sign;
            }
        }
        if changes > 2 {
            pass = false;
            track_min(
                &mut min_value,
                &mut argmin,
                -(changes as f64),
                json!({"check": "sign_changes", "u": u, "changes": changes}),
            );
        }
    }

    PropertyReport {
        lemma: "laguerre".into(),
        samples,
        min_value,
        argmin,
        seed,
        pass,
    }
}

/// Solves a batch of seeded mass vectors and certifies that every pair
/// product is nonnegative on every accepted solution, plus a constructed
/// non-solution witness showing the check can fail.
pub fn lemma1_suite(vectors: usize, seed: u64) -> PropertyReport {
    use crate::solver::{solve_all, SignPattern, SolverOptions};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut argmin = Value::Null;
    let mut pass = true;
    let pattern = SignPattern::parse("--++").expect("valid pattern");
    let mut solved = 0usize;

    for _ in 0..vectors {
        let masses: Vec<f64> = (0..4)
            .map(|_| (rng.gen_range(0.2f64.ln()..5.0f64.ln())).exp())
            .collect();
        let m = MassVector::new(masses.clone()).expect("positive masses");
        for a in [-1.5, -1.0, -0.5] {
            let e = Exponent::new(a).expect("negative exponent");
            let opts = SolverOptions {
                seed: seed ^ 0x51_u64,
                ..SolverOptions::default()
            };
            let Ok(outcome) = solve_all(&m, &e, &pattern, &opts) else {
                continue;
            };
            for sol in &outcome.accepted {
                solved += 1;
                for (i, j, product) in
                    lemma1_products(&sol.deltas, &sol.masses).expect("shapes agree")
                {
                    track_min(
                        &mut min_value,
                        &mut argmin,
                        product,
                        json!({"check": "pair_product", "masses": masses, "a": a, "pair": [i + 1, j + 1]}),
                    );
                    if product < -1e-12 {
                        pass = false;
                    }
                }
            }
        }
    }
    if solved == 0 {
        pass = false;
    }

    // Non-vacuity witness: an unequal-mass non-solution with a strictly
    // negative product. (With equal masses every product is a perfect
    // square, so a witness needs a mass imbalance.)
    let witness_d = DziobekCoords::new(vec![1.0, 0.9, -0.95, -0.95]).expect("sums to zero");
    let witness_m = MassVector::new(vec![10.0, 1.0, 1.0, 1.0]).expect("positive");
    let worst = lemma1_products(&witness_d, &witness_m)
        .expect("shapes agree")
        .into_iter()
        .map(|(_, _, v)| v)
        .fold(f64::INFINITY, f64::min);
    if !(worst < 0.0) {
        pass = false;
    }

    PropertyReport {
        lemma: "lemma1".into(),
        samples: solved,
        min_value,
        argmin,
        seed,
        pass,
    }
}

/// Samples hypothesis-satisfying points and certifies t_1 - t_2 >= Z always,
/// strict positivity of both when m_1 >= m_2, and the chain
/// Z/m_2 >= A(Delta_1/m_1, Delta_2/m_2, Delta_3'/m_3') > 0 when m_1 >= m_2.
pub fn lemma3_suite(samples: usize, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_value = f64::INFINITY;
    let mut argmin = Value::Null;
    let mut pass = true;

    let mut produced = 0usize;
    let mut attempts = 0usize;
    while produced < samples && attempts < samples * 100 {
        attempts += 1;
        let masses: Vec<f64> = (0..4)
            .map(|_| (rng.gen_range(0.2f64.ln()..5.0f64.ln())).exp())
            .collect();
        let a = -rng.gen_range(0.1..3.0);
        let rho1 = -rng.gen_range(0.02..0.7);
        let rho2 = rho1 * rng.gen_range(0.0..1.0);
        let d1 = rho1 * masses[0];
        let d2 = rho2 * masses[1];
        let total = -(d1 + d2);
        let split: f64 = rng.gen_range(0.0..1.0);
        let deltas = vec![d1, d2, split * total, (1.0 - split) * total];
        let Ok(coords) = DziobekCoords::new(deltas.clone()) else {
            continue;
        };
        let m = MassVector::new(masses.clone()).expect("positive masses");
        let e = Exponent::new(a).expect("negative exponent");
        let Ok(point) = Lemma3Point::new(coords, m, e) else {
            continue;
        };
        produced += 1;

        let (gap, z) = lemma3_check(&point);
        let scale = gap.abs() + z.abs() + 1.0;
        let slack = gap - z;
        track_min(
            &mut min_value,
            &mut argmin,
            slack,
            json!({"check": "gap_vs_bound", "masses": masses, "deltas": deltas, "a": a}),
        );
        if slack < -1e-12 * scale {
            pass = false;
        }

        if masses[0] >= masses[1] {
            if !(gap > 0.0 && z > 0.0) {
                pass = false;
                track_min(
                    &mut min_value,
                    &mut argmin,
                    gap.min(z),
                    json!({"check": "positivity", "masses": masses, "deltas": deltas, "a": a}),
                );
            }
            if let Ok(gp) = point.gap_point() {
                let a_value = lemma2_a(&gp);
                let chain_slack = z / point.masses().get(1) - a_value;
                if chain_slack < -1e-12 * scale || !(a_value > 0.0) {
                    pass = false;
                    track_min(
                        &mut min_value,
                        &mut argmin,
                        chain_slack.min(a_value),
                        json!({"check": "chain", "masses": masses, "deltas": deltas, "a": a}),
                    );
                }
            }
        }
    }
    if produced < samples {
        pass = false;
    }

    PropertyReport {
        lemma: "lemma3".into(),
        samples: produced,
        min_value,
        argmin,
        seed,
        pass,
    }
}
