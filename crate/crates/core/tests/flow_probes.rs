use esw_core::einstein_solvers::{solve, solve_numeric, GridOptions, Method};
use esw_core::lichnerowicz::{classify, DEFAULT_TOL};
use esw_core::ricci_flow::{flow, flow_with, unstable_dimension_probe, FlowOptions, Terminal};
use esw_core::space_model::{exceptional_wallach_descriptor, resolve_space, Exceptional};
use esw_core::DiagonalMetric;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn traceless_noise(dims: &[u64], rng: &mut ChaCha8Rng, size: f64) -> Vec<f64> {
    let v: Vec<f64> = dims.iter().map(|_| rng.gen_range(-1.0..1.0)).collect();
    let n: f64 = dims.iter().sum::<u64>() as f64;
    let mean: f64 = v.iter().zip(dims).map(|(a, &d)| a * d as f64).sum::<f64>() / n;
    v.iter().map(|a| size * (a - mean)).collect()
}

#[test]
fn probe_matches_coindex() {
    let cases = [("W2:1,1,1", vec![1.0, 1.0, 1.0]), ("W11", vec![1.0, 1.0, 1.0])];
    for (name, g) in cases {
        let space = resolve_space(name).unwrap();
        let g = DiagonalMetric::from_f64(&g).unwrap();
        let v = classify(&space, &g, DEFAULT_TOL).unwrap();
        assert_eq!(unstable_dimension_probe(&space, &g, 2).unwrap(), v.coindex, "{name}");
    }
    let w8 = exceptional_wallach_descriptor(Exceptional::W8);
    for s in solve_numeric(&w8, &GridOptions::default()).unwrap() {
        let v = classify(&w8, &s.metric, DEFAULT_TOL).unwrap();
        assert_eq!(unstable_dimension_probe(&w8, &s.metric, 2).unwrap(), v.coindex);
    }
}

#[test]
fn w11_reconverges() {
    let space = exceptional_wallach_descriptor(Exceptional::W11);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..3 {
        let noise = traceless_noise(space.dims(), &mut rng, 0.01);
        let x0: Vec<f64> = noise.iter().map(|e| e.exp()).collect();
        let traj = flow(&space, &DiagonalMetric::from_f64(&x0).unwrap(), 200.0, 1e-3).unwrap();
        match traj.terminal {
            Terminal::ConvergedToEinstein { residual } => assert!(residual < 1e-8),
            t => panic!("did not converge: {t:?}"),
        }
        let x = DiagonalMetric::from_f64(traj.last_state()).unwrap().gauge_normalized().to_f64();
        assert!(x.iter().all(|v| (v - 1.0).abs() < 1e-6));
    }
}

#[test]
fn w15_repels() {
    let space = exceptional_wallach_descriptor(Exceptional::W15);
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let noise = traceless_noise(space.dims(), &mut rng, 0.01);
    let x0: Vec<f64> = noise.iter().map(|e| e.exp()).collect();
    let mut o = FlowOptions::new(100.0, 1e-3);
    o.stop_at_einstein = false;
    let traj = flow_with(&space, &DiagonalMetric::from_f64(&x0).unwrap(), &o).unwrap();
    assert!(traj.scalars.last().unwrap() > &traj.scalars[0]);
    let far = traj.states.iter().any(|x| x.iter().map(|v| v.ln().powi(2)).sum::<f64>().sqrt() > 0.1);
    assert!(far);
}

#[test]
fn converged_endpoints_are_solver_solutions() {
    for name in ["W11", "W13", "W9"] {
        let space = resolve_space(name).unwrap();
        let sols = solve(&space, Method::Auto, &GridOptions::default()).unwrap();
        let known: Vec<Vec<f64>> = sols.solutions.iter().map(|s| s.metric.gauge_normalized().to_f64()).collect();
        for a in [0.5, 1.0, 2.0] {
            for b in [0.5, 1.0, 2.0] {
                let x0 = DiagonalMetric::from_f64(&[1.0, a, b]).unwrap();
                let traj = flow(&space, &x0, 200.0, 1e-2).unwrap();
                if let Terminal::ConvergedToEinstein { .. } = traj.terminal {
                    let x = DiagonalMetric::from_f64(traj.last_state()).unwrap().gauge_normalized().to_f64();
                    assert!(
                        known.iter().any(|k| k.iter().zip(&x).all(|(p, q)| (p - q).abs() < 1e-6)),
                        "{name}: {x:?}"
                    );
                }
            }
        }
    }
}
