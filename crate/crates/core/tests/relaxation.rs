use lomnitz::relaxation_solver::{
    check_admissible, gamma_factor, oracle_solve, relaxation_asymptotic, residual,
    solve_relaxation, weights, UniformGrid,
};
use lomnitz::special_functions::mittag_leffler;
use lomnitz::{MaterialParameters, Regime};
use proptest::prelude::*;

const ORDERS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

/// Neumaier-compensated sum.
fn compensated_sum(xs: &[f64]) -> f64 {
    let (mut sum, mut c) = (0.0f64, 0.0f64);
    for &x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[test]
fn weights_telescope() {
    for nu in ORDERS {
        for h in [1e-3, 0.01, 0.1] {
            let m = 100_000;
            let w = weights(nu, h, m).unwrap();
            for upto in [1, 10, 1000, m] {
                let lhs = compensated_sum(&w[..upto]);
                let rhs = (upto as f64 * h).ln_1p().powf(nu) / nu;
                assert!(
                    (lhs - rhs).abs() <= 1e-12,
                    "nu={nu} h={h} m={upto}: {}",
                    lhs - rhs
                );
            }
            assert!(w.iter().all(|&x| x > 0.0));
            assert!(w.windows(2).all(|p| p[1] < p[0]));
        }
    }
}

/// The first two explicit steps cannot overshoot iff `γ Ω_1² ≤ Ω_2`; to
/// leading order `q h^ν ≤ Γ(1+ν)(2^ν - 1)`.
fn monotone_start(p: &MaterialParameters, h: f64) -> bool {
    let w = weights(p.nu(), h / p.tau0(), 2).unwrap();
    gamma_factor(p) * w[0] * w[0] <= w[1]
}

#[test]
fn discrete_solution_is_bounded_and_monotone() {
    for nu in ORDERS {
        let p = MaterialParameters::normalized(nu).unwrap();
        let h = if monotone_start(&p, 0.01) { 0.01 } else { 5e-4 };
        assert!(monotone_start(&p, h));
        let horizon = if h == 0.01 { 50.0 } else { 10.0 };
        let grid = UniformGrid::with_horizon(h, horizon).unwrap();
        let phi = solve_relaxation(&p, &grid).unwrap().solution;
        let v = phi.values();
        assert_eq!(v[0], 1.0);
        assert!(v.iter().all(|&x| x > 0.0 && x <= 1.0), "nu={nu}");
        assert!(v.windows(2).all(|p| p[1] <= p[0]), "nu={nu}");
    }
}

#[test]
fn coarse_step_overshoots_once_at_quarter_order() {
    // admissible (γΩ_1 < 1) but above the monotone step: φ_2 > φ_1
    let p = MaterialParameters::normalized(0.25).unwrap();
    assert!(!monotone_start(&p, 0.01));
    let grid = UniformGrid::with_horizon(0.01, 50.0).unwrap();
    let v = solve_relaxation(&p, &grid)
        .unwrap()
        .solution
        .values()
        .to_vec();
    assert!(v.iter().all(|&x| x > 0.0 && x <= 1.0));
    let rises: Vec<usize> = (1..v.len()).filter(|&j| v[j] > v[j - 1]).collect();
    assert_eq!(rises, vec![2]);
}

#[test]
fn matches_oracle_within_refinement_error() {
    let grid = UniformGrid::with_horizon(0.01, 10.0).unwrap();
    for nu in ORDERS {
        let p = MaterialParameters::normalized(nu).unwrap();
        let report = solve_relaxation(&p, &grid).unwrap();
        let oracle = oracle_solve(&p, &grid).unwrap();
        let bound = (3.0 * report.refinement_error).max(5e-3);
        let worst = report
            .solution
            .values()
            .iter()
            .zip(oracle.values())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst <= bound, "nu={nu}: {worst} > {bound}");
    }
}

#[test]
fn first_order_convergence() {
    let p = MaterialParameters::normalized(1.0).unwrap();
    let e1 = solve_relaxation(&p, &UniformGrid::with_horizon(0.02, 10.0).unwrap())
        .unwrap()
        .refinement_error;
    let e2 = solve_relaxation(&p, &UniformGrid::with_horizon(0.01, 10.0).unwrap())
        .unwrap()
        .refinement_error;
    assert!(e1 / e2 >= 1.8, "{e1} / {e2}");
}

#[test]
fn substitution_residual_is_within_refinement_error() {
    let grid = UniformGrid::with_horizon(0.01, 10.0).unwrap();
    let probes: Vec<f64> = (1..=10).map(|k| k as f64).collect();
    for nu in ORDERS {
        let p = MaterialParameters::normalized(nu).unwrap();
        let report = solve_relaxation(&p, &grid).unwrap();
        let r = residual(&p, &report.solution, &probes).unwrap();
        let worst = r.iter().map(|x| x.abs()).fold(0.0, f64::max);
        assert!(
            worst <= 5.0 * report.refinement_error,
            "nu={nu}: {worst} vs {}",
            report.refinement_error
        );
    }
}

#[test]
fn small_time_behaviour() {
    let grid = UniformGrid::with_horizon(1e-4, 0.02).unwrap();
    for nu in ORDERS {
        let p = MaterialParameters::normalized(nu).unwrap();
        let phi = solve_relaxation(&p, &grid)
            .unwrap()
            .solution
            .interpolate(0.01);
        // for t → 0 the kernel is a pure power and φ ≈ E_ν(-t^ν)
        let ml = mittag_leffler(nu, -0.01f64.powf(nu)).unwrap();
        assert!((phi - ml).abs() <= 2e-3, "nu={nu}: {phi} vs {ml}");
        let leading = relaxation_asymptotic(nu, 0.01, Regime::SmallTime).unwrap();
        let gap = (phi - leading).abs();
        if nu >= 0.5 {
            assert!(gap <= 1e-2, "nu={nu}: {gap}");
        } else {
            // second-order term t^{2ν}/Γ(1+2ν) ≈ 0.11 is not small here
            assert!(gap > 0.05, "nu={nu}: {gap}");
        }
    }
}

#[test]
fn slower_creep_means_slower_relaxation() {
    // at t = 0.01 smaller ν relaxes faster
    let grid = UniformGrid::with_horizon(0.001, 0.02).unwrap();
    let at: Vec<f64> = ORDERS
        .iter()
        .map(|&nu| {
            let p = MaterialParameters::normalized(nu).unwrap();
            solve_relaxation(&p, &grid)
                .unwrap()
                .solution
                .interpolate(0.01)
        })
        .collect();
    assert!(at.windows(2).all(|p| p[0] < p[1]), "{at:?}");
}

#[test]
fn large_horizon_logarithmic_decay() {
    let grid = UniformGrid::for_horizon(1e4, 20_000).unwrap();
    assert!(grid.n() <= 20_000);
    let p = MaterialParameters::normalized(1.0).unwrap();
    let phi = solve_relaxation(&p, &grid).unwrap().solution;
    let scaled = phi.values()[grid.n()] * 1e4f64.ln();
    assert!((0.7..=1.3).contains(&scaled), "{scaled}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tau0_rescales_time(nu in 0.1f64..=1.0, tau0 in 0.1f64..10.0, q in 0.2f64..2.0) {
        let n = 200;
        let p1 = MaterialParameters::new(q, 1.0, 1.0, nu).unwrap();
        let pt = MaterialParameters::new(q, 1.0, tau0, nu).unwrap();
        let h = 0.01;
        prop_assume!(check_admissible(&p1, h).is_ok());
        let a = solve_relaxation(&p1, &UniformGrid::new(h, n).unwrap()).unwrap();
        let b = solve_relaxation(&pt, &UniformGrid::new(h * tau0, n).unwrap()).unwrap();
        for (x, y) in a.solution.values().iter().zip(b.solution.values()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn explicit_steps_stay_in_unit_interval(nu in 0.05f64..=1.0, q in 0.1f64..3.0, h in 1e-3f64..0.3) {
        let p = MaterialParameters::new(q, 1.0, 1.0, nu).unwrap();
        prop_assume!(check_admissible(&p, h).is_ok() && monotone_start(&p, h));
        let r = solve_relaxation(&p, &UniformGrid::new(h, 300).unwrap()).unwrap();
        let v = r.solution.values();
        prop_assert!(v.iter().all(|&x| x > 0.0 && x <= 1.0));
        prop_assert!(v.windows(2).all(|w| w[1] <= w[0]));
    }
}
