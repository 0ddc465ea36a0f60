use lomnitz::relaxation_solver::{solve_relaxation, UniformGrid};
use lomnitz::transform_checks::{check_laplace_identity, laplace_of_sampled, DEFAULT_PROBES};
use lomnitz::MaterialParameters;

#[test]
fn identity_holds_for_all_orders() {
    let grid = UniformGrid::with_horizon(0.01, 30.0).unwrap();
    for nu in [0.25, 0.5, 0.75, 1.0] {
        let p = MaterialParameters::normalized(nu).unwrap();
        let phi = solve_relaxation(&p, &grid).unwrap().solution;
        for r in check_laplace_identity(&p, &phi, &DEFAULT_PROBES).unwrap() {
            assert!(r.residual <= 2e-2, "nu={nu} s={}: {}", r.s, r.residual);
            assert!(r.psi_transform > 0.0 && r.phi_transform > 0.0);
        }
    }
}

#[test]
fn residual_shrinks_with_refinement() {
    let p = MaterialParameters::normalized(1.0).unwrap();
    let coarse = solve_relaxation(&p, &UniformGrid::with_horizon(0.02, 30.0).unwrap()).unwrap();
    let fine = solve_relaxation(&p, &UniformGrid::with_horizon(0.01, 30.0).unwrap()).unwrap();
    let a = check_laplace_identity(&p, &coarse.solution, &DEFAULT_PROBES).unwrap();
    let b = check_laplace_identity(&p, &fine.solution, &DEFAULT_PROBES).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!(
            y.residual < x.residual,
            "s={}: {} -> {}",
            x.s,
            x.residual,
            y.residual
        );
    }
}

#[test]
fn transforms_decrease_in_s() {
    let p = MaterialParameters::normalized(0.5).unwrap();
    let phi = solve_relaxation(&p, &UniformGrid::with_horizon(0.01, 30.0).unwrap())
        .unwrap()
        .solution;
    let r = check_laplace_identity(&p, &phi, &DEFAULT_PROBES).unwrap();
    assert!(r
        .windows(2)
        .all(|w| w[1].psi_transform < w[0].psi_transform));
    assert!(r
        .windows(2)
        .all(|w| w[1].phi_transform < w[0].phi_transform));
}

#[test]
fn initial_value_theorem() {
    let p = MaterialParameters::normalized(1.0).unwrap();
    let phi = solve_relaxation(&p, &UniformGrid::with_horizon(0.01, 1.0).unwrap())
        .unwrap()
        .solution;
    let v = laplace_of_sampled(&phi, 100.0).unwrap();
    let scaled = 100.0 * v.value;
    assert!((0.9..=1.0).contains(&scaled), "{scaled}");
    assert!(v.probe.tail_estimate < 1e-40);
}
