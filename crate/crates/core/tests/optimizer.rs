use std::f64::consts::PI;

use qaoa_decode::archive::optimize_all_syndromes;
use qaoa_decode::catalog;
use qaoa_decode::engine::expectation_at;
use qaoa_decode::optimizer::{grid_resolution, grid_starts, optimize, Strategy};
use qaoa_decode::{Construction, DecodingProblem, Objective, PenaltyParams, Schedule};

fn h743_check() -> DecodingProblem {
    let code = catalog::load("hamming743").unwrap();
    DecodingProblem::new(code, Construction::Check(PenaltyParams::new(1, 4).unwrap()))
}

#[test]
fn grid_covers_the_torus() {
    let starts = grid_starts::<f64>(8, 2);
    assert_eq!(starts.len(), 64);
    for s in &starts {
        assert!(s.iter().all(|&a| a > 0.0 && a < PI));
    }
    assert_eq!(grid_resolution(64, 2), 8);
    assert_eq!(grid_resolution(63, 2), 7);
}

#[test]
fn p1_optimum_on_every_h743_syndrome() {
    // a fine grid is the oracle
    let problem = h743_check();
    let runs = optimize_all_syndromes(&problem, 1, Strategy::Multistart { budget: 64 }, 17).unwrap();
    assert_eq!(runs.len(), 8);
    for run in &runs {
        let s = run.record.syndrome.parse().unwrap();
        let diag = problem.instance::<f64>(&s).unwrap().hamiltonian.materialize().unwrap();
        let n = 200;
        let mut best = f64::MIN;
        for i in 0..n {
            for j in 0..n {
                let g = PI * i as f64 / n as f64;
                let b = PI * j as f64 / n as f64;
                best = best.max(expectation_at(&diag, &Schedule::new(vec![g], vec![b]).unwrap()).unwrap());
            }
        }
        assert!(run.record.f_p >= best - 1e-6, "{}: {} < grid {best}", run.record.syndrome, run.record.f_p);
        // reported value is what the reported angles give
        let again = expectation_at(&diag, &run.record.schedule().unwrap()).unwrap();
        assert_eq!(again, run.record.f_p);
    }
}

#[test]
fn strategies_agree_at_p1() {
    let problem = h743_check();
    let s = "101".parse().unwrap();
    let h = problem.instance::<f64>(&s).unwrap().hamiltonian;
    let obj = Objective::new(&h, 1).unwrap();
    let a = optimize(&obj, Strategy::Multistart { budget: 256 }, 1).unwrap();
    let b = optimize(&obj, Strategy::BasinHopping { hops: 20, step: 0.5 }, 1).unwrap();
    let c = optimize(&obj, Strategy::default(), 1).unwrap();
    assert!((a.best_value - b.best_value).abs() < 1e-4, "{} vs {}", a.best_value, b.best_value);
    assert!(c.best_value >= a.best_value.max(b.best_value) - 1e-12);
}

#[test]
fn deeper_circuits_do_not_lose_value() {
    let problem = h743_check();
    let s = "011".parse().unwrap();
    let h = problem.instance::<f64>(&s).unwrap().hamiltonian;
    let mut prev = f64::MIN;
    for p in 1..=3 {
        let obj = Objective::new(&h, p).unwrap();
        let r = optimize(&obj, Strategy::default(), 5).unwrap();
        assert!(r.best_value >= prev - 1e-3, "p={p}: {} < {prev}", r.best_value);
        prev = r.best_value;
    }
}

#[test]
fn optimization_is_deterministic() {
    let problem = h743_check();
    let s = "110".parse().unwrap();
    let h = problem.instance::<f64>(&s).unwrap().hamiltonian;
    let obj = Objective::new(&h, 2).unwrap();
    let a = optimize(&obj, Strategy::default(), 9).unwrap();
    let b = optimize(&obj, Strategy::default(), 9).unwrap();
    assert_eq!(a.best, b.best);
    assert_eq!(a.best_value, b.best_value);
}
