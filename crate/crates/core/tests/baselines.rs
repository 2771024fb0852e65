mod common;

use shiproute_core::baselines::{
    bypass_solver, enumerate_bypasses, exhaustive_search, simulated_annealing, BypassParams, SaParams,
};
use shiproute_core::{Obstacle, PenaltyConfig, Problem, ShipModel};

fn four_posts() -> Problem {
    let obstacles = vec![
        Obstacle::rect(1.5, -1.0, 2.5, 1.0).unwrap(),
        Obstacle::rect(3.5, -0.5, 4.5, 2.0).unwrap(),
        Obstacle::rect(5.5, -2.0, 6.5, 0.5).unwrap(),
        Obstacle::rect(7.5, -1.0, 8.5, 1.0).unwrap(),
    ];
    Problem::new(10.0, 4, obstacles, None, ShipModel::default(), 1.0).unwrap()
}

#[test]
fn sa_finds_the_oracle_optimum() {
    let s = common::scenario("oracle.json");
    let exact = exhaustive_search(&s.problem, 4, 1e6).unwrap();
    let target = exact.best_feasible.expect("oracle has a feasible optimum").cost();
    let params = SaParams {
        resolution: 4,
        step_cells: 4,
        initial_temperature: 5.0,
        cooling: 0.97,
        lambda0: 1.0,
        anneal_rate: 0.05,
        max_evaluations: 40_000,
        restarts: 8,
        ..SaParams::default()
    };
    let hits = (0..20)
        .filter(|&seed| {
            let out = simulated_annealing(&s.problem, &params, seed).unwrap();
            out.best.is_some_and(|b| (b.cost() - target).abs() <= 1e-9 * target)
        })
        .count();
    assert!(hits >= 18, "SA hit the optimum in {hits}/20 seeds");
}

#[test]
fn bypass_matches_exhaustive_on_four_obstacles() {
    let problem = four_posts();
    let exact = exhaustive_search(&problem, 4, PenaltyConfig::default().lambda_max).unwrap();
    let optimum = exact.best_feasible.expect("a feasible route exists").cost();
    let params = BypassParams {
        resolution: 4,
        ..BypassParams::default()
    };
    let classes = enumerate_bypasses(&problem, &params).unwrap();
    assert_eq!(classes.len(), 16);
    let best = bypass_solver(&problem, &classes, &params, 9)
        .unwrap()
        .outcome
        .best
        .unwrap();
    assert!(best.cost() >= optimum - 1e-9);
    assert!(
        best.cost() <= 1.01 * optimum,
        "bypass {} vs exhaustive {optimum}",
        best.cost()
    );
}

#[test]
fn exhaustive_is_repeatable() {
    let problem = four_posts();
    let a = exhaustive_search(&problem, 3, 1e6).unwrap();
    let b = exhaustive_search(&problem, 3, 1e6).unwrap();
    assert_eq!(a.evaluations, 1 << 12);
    assert_eq!(a.optimum.chromosome, b.optimum.chromosome);
    assert_eq!(a.optimum.value, b.optimum.value);
    assert_eq!(
        a.best_feasible.map(|s| s.chromosome),
        b.best_feasible.map(|s| s.chromosome)
    );
}
