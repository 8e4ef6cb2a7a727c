// Temporary probe for solver convergence on hard mass ratios.
use dziobek::delta::Exponent;
use dziobek::geometry::MassVector;
use dziobek::solver::{solve_all, SignPattern, SolverOptions};

fn main() {
    let cases: Vec<Vec<f64>> = vec![
        vec![1.0, 1.0, 0.7670776166261808, 1.0702762336386784, 1.5449331020040769],
        vec![1.0, 1.0, 1.0, 1.0, 1.0],
        vec![1.0, 1.0, 0.5, 2.0, 1.0],
        vec![1.0, 1.3, 0.5, 0.5, 2.0],
        vec![1.0, 1.0, 2.0, 2.0, 2.0],
        vec![1.0, 1.3, 1.7, 0.6, 1.1],
    ];
    for masses in cases {
        let m = MassVector::new(masses.clone()).unwrap();
        let e = Exponent::new(-1.5).unwrap();
        let p = SignPattern::parse("--+++").unwrap();
        for starts in [16usize, 64] {
            let opts = SolverOptions {
                starts,
                ..SolverOptions::default()
            };
            match solve_all(&m, &e, &p, &opts) {
                Ok(out) => {
                    println!(
                        "m={:?} starts={}: accepted={} spurious={} off_pattern={} converged={} best_res={:.2e}",
                        masses,
                        starts,
                        out.accepted.len(),
                        out.spurious.len(),
                        out.off_pattern,
                        out.starts_converged,
                        out.best_residual
                    );
                    for s in &out.spurious {
                        println!("   spurious: {:?} ({})", s.deltas, s.reason);
                    }
                    for s in &out.accepted {
                        println!("   accepted: {:?}", s.deltas.as_slice());
                    }
                }
                Err(err) => println!("m={:?} starts={}: error {}", masses, starts, err),
            }
        }
    }
}
