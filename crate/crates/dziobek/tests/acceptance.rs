//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see them). Every tolerance is pinned here.

use dziobek::analysis::{ordering_report, product_relation_residual, routh_residual, symmetry_report, SYMMETRY_TOL};
use dziobek::delta::{solution_from_positions, Exponent, Tolerances};
use dziobek::direct::{cc_residual, solve_positions, PositionSolveOptions};
use dziobek::geometry::{center_of_mass, oriented_volumes, squared_distances, Configuration, MassVector};
use dziobek::lemmas::{laguerre_f, laguerre_f_prime, laguerre_suite, lemma1_products, lemma2_suite, lemma3_suite};
use dziobek::solver::{solve_all, solve_normalized, SignPattern, SolverOptions};
use dziobek::CCSolution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

fn report(id: u32, pass: bool, what: &str) {
    println!(
        "ACCEPTANCE {:02} {} - {}",
        id,
        if pass { "PASS" } else { "FAIL" },
        what
    );
    assert!(pass, "criterion {} failed: {}", id, what);
}

fn solve_convex(masses: &[f64], a: f64, seed: u64) -> Option<CCSolution> {
    let m = MassVector::new(masses.to_vec()).unwrap();
    let e = Exponent::new(a).unwrap();
    let pattern = SignPattern::parse(if masses.len() == 4 { "--++" } else { "--+++" }).unwrap();
    let opts = SolverOptions {
        seed,
        ..SolverOptions::default()
    };
    solve_normalized(&m, &e, &pattern, &opts).ok()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

/// Bisection oracle for the equal-mass coordinate magnitude: the root of
/// 2 (1 + d^2)^alpha = (1 - d^2)^alpha on (0, 1).
fn equal_mass_delta_oracle(alpha: f64) -> f64 {
    let h = |d: f64| 2.0 * (1.0 + d * d).powf(alpha) - (1.0 - d * d).powf(alpha);
    let (mut lo, mut hi) = (0.0f64, 1.0 - 1e-12);
    assert!(h(lo) > 0.0 && h(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn criterion_01_equal_mass_square_newtonian() {
    let oracle = equal_mass_delta_oracle(-2.0 / 3.0);
    assert!((oracle - 0.6911).abs() < 5e-4, "oracle sanity: {}", oracle);
    let sol = solve_convex(&[1.0; 4], -1.5, SEED).expect("square must solve");
    let mut worst = 0.0f64;
    for &d in sol.deltas.as_slice() {
        worst = worst.max((d.abs() - oracle).abs());
    }
    let ratio = sol.distances.get(0, 1) / sol.distances.get(0, 2);
    let pass = worst < 1e-9 && (ratio - 2.0).abs() < 1e-9 && sol.accepted;
    report(
        1,
        pass,
        &format!(
            "equal-mass square (a=-3/2): max |delta|-oracle gap {:.2e}, diag/side ratio gap {:.2e}",
            worst,
            (ratio - 2.0).abs()
        ),
    );
}

#[test]
fn criterion_02_equal_mass_square_vortex() {
    let closed_form = 3.0f64.powf(-0.5);
    let sol = solve_convex(&[1.0; 4], -1.0, SEED).expect("vortex square must solve");
    let worst = sol
        .deltas
        .as_slice()
        .iter()
        .fold(0.0f64, |w, &d| w.max((d.abs() - closed_form).abs()));
    report(
        2,
        worst < 1e-10 && sol.accepted,
        &format!("vortex square (a=-1): max gap to 3^(-1/2) is {:.2e}", worst),
    );
}

#[test]
fn criterion_03_symmetry_iff_equal_masses() {
    let exponents = [-1.5, -1.0, -0.5];
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x03);
    let mut violations = Vec::new();
    let mut solved = 0;

    for v in 0..20 {
        let m3 = log_uniform(&mut rng, 0.2, 5.0);
        let m4 = log_uniform(&mut rng, 0.2, 5.0);
        for (k, &a) in exponents.iter().enumerate() {
            let Some(sol) = solve_convex(&[1.0, 1.0, m3, m4], a, SEED + (v * 3 + k as u64)) else {
                violations.push(format!("no convergence at m=({}, {}), a={}", m3, m4, a));
                continue;
            };
            solved += 1;
            let delta_gap = (sol.deltas.get(0) - sol.deltas.get(1)).abs();
            let s13 = sol.distances.get(0, 2);
            let asym = (sol.distances.get(0, 2) - sol.distances.get(1, 2))
                .abs()
                .max((sol.distances.get(0, 3) - sol.distances.get(1, 3)).abs())
                / s13;
            if delta_gap >= 1e-8 || asym >= 1e-7 {
                violations.push(format!(
                    "equal-mass case not symmetric: delta gap {:.2e}, distance asymmetry {:.2e}",
                    delta_gap, asym
                ));
            }
        }
    }

    // Converse: a mass gap of at least 5% must show up as asymmetry.
    for v in 0..20 {
        let m2 = log_uniform(&mut rng, 1.05, 3.0);
        let m3 = log_uniform(&mut rng, 0.2, 5.0);
        let m4 = log_uniform(&mut rng, 0.2, 5.0);
        for (k, &a) in exponents.iter().enumerate() {
            let Some(sol) = solve_convex(&[1.0, m2, m3, m4], a, SEED + 1000 + (v * 3 + k as u64))
            else {
                violations.push(format!(
                    "no convergence at m=(1, {}, {}, {}), a={}",
                    m2, m3, m4, a
                ));
                continue;
            };
            solved += 1;
            let delta_gap = (sol.deltas.get(0) - sol.deltas.get(1)).abs();
            let s13 = sol.distances.get(0, 2);
            let asym = (sol.distances.get(0, 2) - sol.distances.get(1, 2))
                .abs()
                .max((sol.distances.get(0, 3) - sol.distances.get(1, 3)).abs())
                / s13;
            if delta_gap <= 1e-4 || asym <= 1e-4 {
                violations.push(format!(
                    "unequal masses look symmetric: m2={}, delta gap {:.2e}, asymmetry {:.2e}",
                    m2, delta_gap, asym
                ));
            }
        }
    }

    report(
        3,
        violations.is_empty() && solved == 120,
        &format!(
            "symmetry iff m1=m2 across {} solves; {} violations{}",
            solved,
            violations.len(),
            violations
                .first()
                .map(|v| format!(" (first: {})", v))
                .unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_04_ordering_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x04);
    let mut violations = 0;
    let mut checked = 0;
    for v in 0..20 {
        let m2 = log_uniform(&mut rng, 1.05, 3.0);
        let m3 = log_uniform(&mut rng, 0.2, 5.0);
        let m4 = log_uniform(&mut rng, 0.2, 5.0);
        let Some(sol) = solve_convex(&[1.0, m2, m3, m4], -1.5, SEED + 2000 + v) else {
            violations += 1;
            continue;
        };
        checked += 1;
        // Area comparison: the simplex omitting particle 2 contains q1.
        let volumes = oriented_volumes(&sol.positions).unwrap();
        let area_ok = volumes.values[1].abs() < volumes.values[0].abs();
        // Point-to-line distances, computed independently of the library's
        // report path.
        let q = |i: usize| sol.positions.point(i);
        let (a2, b2) = (q(2), q(3));
        let dir = &b2 - &a2;
        let dist = |p: nalgebra::DVector<f64>| {
            let w = &p - &a2;
            (dir[0] * w[1] - dir[1] * w[0]).abs() / dir.norm()
        };
        let height_ok = dist(q(0)) < dist(q(1));
        let edge_ok =
            sol.distances.get(0, 2) < sol.distances.get(1, 2) && sol.distances.get(0, 3) < sol.distances.get(1, 3);
        if !(area_ok && height_ok && edge_ok) {
            violations += 1;
        }
        let report = ordering_report(&sol).unwrap();
        if !report.consistent || report.mass_order != -1 {
            violations += 1;
        }
    }
    report(
        4,
        violations == 0 && checked == 20,
        &format!(
            "ordering chain (areas, heights, edge lengths) on {} solves, {} violations",
            checked, violations
        ),
    );
}

#[test]
fn criterion_05_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x05);
    let e = Exponent::new(-1.5).unwrap();
    let mut failures = Vec::new();
    for v in 0..10 {
        let masses: Vec<f64> = (0..4).map(|_| log_uniform(&mut rng, 0.5, 2.0)).collect();
        let m = MassVector::new(masses.clone()).unwrap();
        let Some(sol) = solve_convex(&masses, -1.5, SEED + 3000 + v) else {
            failures.push(format!("coordinate solver failed at {:?}", masses));
            continue;
        };
        let delta_res = cc_residual(&sol.positions, &m, &e, m.total()).unwrap();
        if delta_res >= 1e-8 {
            failures.push(format!("coordinate solution residual {:.2e}", delta_res));
        }
        let opts = PositionSolveOptions {
            starts: 64,
            seed: SEED + 4000 + v,
            ..PositionSolveOptions::default()
        };
        let found = match solve_positions(&m, 2, &e, &opts) {
            Ok(found) => found,
            Err(err) => {
                failures.push(format!("position solver failed at {:?}: {}", masses, err));
                continue;
            }
        };
        let target = sol.distances.sorted_distances();
        let scale = target.last().copied().unwrap();
        let mut matched = false;
        for config in &found {
            let sig = squared_distances(config).unwrap().sorted_distances();
            let gap = sig
                .iter()
                .zip(&target)
                .fold(0.0f64, |w, (x, y)| w.max((x - y).abs()));
            if gap < 1e-7 * scale {
                let pos_res = cc_residual(config, &m, &e, m.total()).unwrap();
                if pos_res < 1e-8 {
                    matched = true;
                    break;
                }
            }
        }
        if !matched {
            failures.push(format!(
                "no position-space match among {} solutions at {:?}",
                found.len(),
                masses
            ));
        }
    }
    report(
        5,
        failures.is_empty(),
        &format!(
            "independent position-space oracle matches coordinate solutions on 10 mass vectors{}",
            failures
                .first()
                .map(|f| format!("; first failure: {}", f))
                .unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_06_normalized_scalars_and_pair_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x06);
    let mut pool = vec![
        solve_convex(&[1.0; 4], -1.5, SEED).unwrap(),
        solve_convex(&[1.0; 4], -1.0, SEED).unwrap(),
    ];
    for v in 0..20 {
        let masses: Vec<f64> = (0..4).map(|_| log_uniform(&mut rng, 0.2, 5.0)).collect();
        for (k, a) in [-1.5, -1.0, -0.5].into_iter().enumerate() {
            if let Some(sol) = solve_convex(&masses, a, SEED + 5000 + (v * 3 + k as u64)) {
                pool.push(sol);
            }
        }
    }
    let mut violations = 0;
    for sol in &pool {
        let ok = sol.residuals.dziobek_fit < 1e-9
            && (sol.lambda_over_m - 1.0).abs() < 1e-9
            && (sol.mu + 1.0).abs() < 1e-9
            && sol.mu < 0.0
            && lemma1_products(&sol.deltas, &sol.masses)
                .unwrap()
                .iter()
                .all(|(_, _, p)| *p >= -1e-12);
        if !ok {
            violations += 1;
        }
    }
    report(
        6,
        violations == 0 && pool.len() >= 50,
        &format!(
            "lambda/M = 1, mu = -1, fit residual < 1e-9, pair products >= -1e-12 on {} accepted solutions",
            pool.len()
        ),
    );
}

#[test]
fn criterion_07_quadrilateral_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x07);
    let e = Exponent::new(-1.5).unwrap();
    let mut violations = Vec::new();
    let mut perturbed_checked = 0;
    for v in 0..10 {
        let masses: Vec<f64> = (0..4).map(|_| log_uniform(&mut rng, 0.4, 2.5)).collect();
        let Some(sol) = solve_convex(&masses, -1.5, SEED + 6000 + v) else {
            violations.push("no convergence".to_string());
            continue;
        };
        let routh = routh_residual(&sol).unwrap();
        let product = product_relation_residual(&sol).unwrap();
        if routh >= 1e-8 || product >= 1e-9 {
            violations.push(format!(
                "solution residuals too large: routh {:.2e}, product {:.2e}",
                routh, product
            ));
        }

        // Negative control: stretch particle 1 away from the barycenter by
        // 10% and re-derive every quantity from the distorted geometry.
        let m = MassVector::new(masses.clone()).unwrap();
        let g = center_of_mass(&sol.positions, &m).unwrap();
        let mut rows = sol.positions.rows();
        for (k, x) in rows[0].iter_mut().enumerate() {
            *x = g[k] + 1.1 * (*x - g[k]);
        }
        let distorted = Configuration::new(rows).unwrap();
        let pseudo = solution_from_positions(&distorted, &m, &e, &Tolerances::default()).unwrap();
        assert!(!pseudo.accepted);
        perturbed_checked += 1;
        let routh_bad = routh_residual(&pseudo).unwrap();
        let product_bad = product_relation_residual(&pseudo).unwrap();
        if routh_bad <= 1e-2 || product_bad <= 1e-2 {
            violations.push(format!(
                "perturbed control too quiet: routh {:.2e}, product {:.2e}",
                routh_bad, product_bad
            ));
        }
    }
    report(
        7,
        violations.is_empty() && perturbed_checked == 10,
        &format!(
            "quadrilateral relation < 1e-8 and product identity < 1e-9 on solutions, both > 1e-2 on 10 perturbed controls{}",
            violations
                .first()
                .map(|v| format!("; first: {}", v))
                .unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_08_gap_and_trinomial_suites() {
    let started = std::time::Instant::now();
    let gap = lemma2_suite(100_000, 100, SEED ^ 0x08);
    let trinomial = laguerre_suite(10_000, SEED ^ 0x08);

    // Direct spot checks on top of the suites' own verdicts.
    let mut boundary_ok = true;
    for k in 0..50 {
        let u = -(k as f64 + 1.0) / 51.0;
        boundary_ok &= laguerre_f(1.0, u) == 0.0;
        let slope = -(2.0f64.powf(u)) + 1.0 + u;
        boundary_ok &= slope < 0.0 && (laguerre_f_prime(1.0, u) - slope).abs() < 1e-12;
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = gap.pass
        && gap.min_value > 1e-12
        && trinomial.pass
        && trinomial.min_value > 0.0
        && boundary_ok
        && elapsed < 120.0;
    report(
        8,
        pass,
        &format!(
            "gap suite min {:.3e} over 1e5 samples + 100 minimizer runs; trinomial min {:.3e}; {:.1}s",
            gap.min_value, trinomial.min_value, elapsed
        ),
    );
}

#[test]
fn criterion_09_t_gap_bound_suite() {
    let suite = lemma3_suite(10_000, SEED ^ 0x09);
    report(
        9,
        suite.pass && suite.samples == 10_000,
        &format!(
            "t-gap bound suite: {} hypothesis-satisfying samples, min slack {:.3e}",
            suite.samples, suite.min_value
        ),
    );
}

#[test]
fn criterion_10_spatial_five_bodies() {
    let started = std::time::Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x0a);
    let mut violations = Vec::new();
    let mut solved = 0;

    for v in 0..8 {
        let tail: Vec<f64> = (0..3).map(|_| log_uniform(&mut rng, 0.5, 2.0)).collect();
        let masses = [vec![1.0, 1.0], tail].concat();
        let Some(sol) = solve_convex(&masses, -1.5, SEED + 7000 + v) else {
            violations.push(format!("no convergence at {:?}", masses));
            continue;
        };
        solved += 1;
        let delta_gap = (sol.deltas.get(0) - sol.deltas.get(1)).abs();
        if delta_gap >= 1e-7 {
            violations.push(format!("delta gap {:.2e}", delta_gap));
        }
        for k in 2..5 {
            let a = sol.distances.get(0, k);
            let b = sol.distances.get(1, k);
            if (a - b).abs() / a.max(b) >= 1e-6 {
                violations.push(format!("mirror distance gap at k={}", k + 1));
            }
        }
        let mirrors = symmetry_report(&sol, SYMMETRY_TOL).unwrap();
        if !mirrors[0].symmetric {
            violations.push("mirror report disagrees".into());
        }
    }

    // Ordering half: m1 < m2 forces the smaller opposite-volume for q1.
    for v in 0..4 {
        let tail: Vec<f64> = (0..3).map(|_| log_uniform(&mut rng, 0.5, 2.0)).collect();
        let masses = [vec![1.0, 1.3], tail].concat();
        let Some(sol) = solve_convex(&masses, -1.5, SEED + 8000 + v) else {
            violations.push(format!("no convergence at {:?}", masses));
            continue;
        };
        solved += 1;
        let volumes = oriented_volumes(&sol.positions).unwrap();
        if !(volumes.values[1].abs() < volumes.values[0].abs()) {
            violations.push(format!(
                "volume ordering violated: |V omit 2| = {:.6}, |V omit 1| = {:.6}",
                volumes.values[1].abs(),
                volumes.values[0].abs()
            ));
        }
    }

    let elapsed = started.elapsed().as_secs_f64();
    report(
        10,
        violations.is_empty() && solved == 12 && elapsed < 300.0,
        &format!(
            "spatial five-body symmetry and ordering on {} solves in {:.1}s; {} violations{}",
            solved,
            elapsed,
            violations.len(),
            violations
                .first()
                .map(|v| format!(" (first: {})", v))
                .unwrap_or_default()
        ),
    );
}

#[test]
fn criterion_11_realizability_guard() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0x0b);
    let mut spurious_total = 0usize;
    let mut cm_violations = 0usize;
    let mut accepted_total = 0usize;
    for v in 0..15 {
        let masses: Vec<f64> = (0..4).map(|_| log_uniform(&mut rng, 0.2, 5.0)).collect();
        let m = MassVector::new(masses).unwrap();
        let e = Exponent::new(-1.5).unwrap();
        let pattern = SignPattern::parse("--++").unwrap();
        let opts = SolverOptions {
            seed: SEED + 9000 + v,
            ..SolverOptions::default()
        };
        let outcome = solve_all(&m, &e, &pattern, &opts).unwrap();
        spurious_total += outcome.spurious.len();
        for diag in &outcome.spurious {
            // Every rejection carries its reason for the log.
            assert!(!diag.reason.is_empty());
        }
        for sol in &outcome.accepted {
            accepted_total += 1;
            if sol.residuals.cayley_menger >= 1e-8 {
                cm_violations += 1;
            }
        }
    }
    report(
        11,
        cm_violations == 0 && accepted_total >= 15,
        &format!(
            "realizability residual < 1e-8 on {} accepted solutions; {} spurious roots rejected and logged",
            accepted_total, spurious_total
        ),
    );
}
