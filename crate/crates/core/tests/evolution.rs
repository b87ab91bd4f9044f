use apsflow::evolution::{
    cocycle_defect, convergence_ratio, duhamel_solve, propagate_adaptive, volterra_oracle, AdaptiveOptions,
    Propagator, Quadrature, Scheme, VolterraOptions,
};
use apsflow::family::{linear_diagonal, random_smooth, HermitianFamily};
use apsflow::linalg::{self, CVector, C64};
use proptest::prelude::*;

/// `max_t ||A(t)||` on a probe grid.
fn sup_norm(f: &HermitianFamily) -> f64 {
    f.probe_times(65).iter().map(|&t| linalg::spectral_norm(&f.evaluate(t))).fold(0.0, f64::max)
}

#[test]
fn diagonal_family_matches_integrated_phase() {
    // For diagonal A the exact propagator is exp(i int_s^t A).
    let f = linear_diagonal(&[-1.0, 0.5], &[2.0, -1.0], 1.0).unwrap();
    let q = propagate_adaptive(&f, 0.9, 0.2, 1e-10, &AdaptiveOptions { scheme: Scheme::Magnus4, ..Default::default() }).unwrap();
    for (j, (o, s)) in [(-1.0, 2.0), (0.5, -1.0)].iter().enumerate() {
        let phase = o * 0.7 + s * 0.5 * (0.81 - 0.04);
        assert!((q.unitary[(j, j)] - C64::from_polar(1.0, phase)).norm() < 1e-9);
    }
}

#[test]
fn right_endpoint_is_first_order() {
    for seed in 0..3 {
        let f = random_smooth(4, seed, 1.0, 2.0, 1.0).unwrap();
        for n in [64, 128] {
            let r = convergence_ratio(&f, 1.0, 0.0, n, Scheme::RightEndpoint).unwrap();
            assert!((1.7..=2.3).contains(&r), "seed {seed} n {n}: {r}");
        }
    }
}

#[test]
fn magnus_is_fourth_order() {
    let f = random_smooth(3, 5, 1.0, 2.0, 1.0).unwrap();
    let r = convergence_ratio(&f, 1.0, 0.0, 16, Scheme::Magnus4).unwrap();
    assert!((12.0..=20.0).contains(&r), "{r}");
    let r = convergence_ratio(&f, 1.0, 0.0, 16, Scheme::Midpoint).unwrap();
    assert!((3.4..=4.6).contains(&r), "{r}");
}

#[test]
fn volterra_series_matches_propagator() {
    for seed in 0..3 {
        let base = random_smooth(3, seed, 1.0, 2.0, 1.0).unwrap();
        let scale = 2.0 / sup_norm(&base);
        let f = random_smooth(3, seed, scale, 2.0, 1.0).unwrap();
        let v = volterra_oracle(&f, 1.0, 0.0, &VolterraOptions::default()).unwrap();
        let q = propagate_adaptive(&f, 1.0, 0.0, 1e-9, &AdaptiveOptions { scheme: Scheme::Magnus4, ..Default::default() }).unwrap();
        assert!(linalg::frobenius(&(v - q.unitary)) < 1e-6);
    }
}

#[test]
fn corrected_quadrature_beats_plain_trapezoid() {
    let f = random_smooth(2, 1, 1.0, 2.0, 1.0).unwrap();
    let q = propagate_adaptive(&f, 1.0, 0.0, 1e-10, &AdaptiveOptions { scheme: Scheme::Magnus4, ..Default::default() }).unwrap().unitary;
    let err = |quadrature| {
        let v = volterra_oracle(&f, 1.0, 0.0, &VolterraOptions { quadrature, nodes: 128, ..Default::default() }).unwrap();
        linalg::frobenius(&(v - &q))
    };
    assert!(err(Quadrature::CorrectedTrapezoid) < 0.01 * err(Quadrature::Trapezoid));
}

#[test]
fn duhamel_residual_is_first_order() {
    let f = random_smooth(3, 2, 1.0, 2.0, 1.0).unwrap();
    let g = |t: f64| CVector::from_vec(vec![C64::new(t.cos(), 0.0), C64::new(0.0, t), C64::new(1.0, -t * t)]);
    let x = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0)]);
    let residual = |n| {
        let p = Propagator::new(&f, n, Scheme::RightEndpoint).unwrap();
        duhamel_solve(&p, 0.0, &x, g).unwrap().max_residual(&f, g)
    };
    let (r1, r2) = (residual(128), residual(256));
    assert!((1.7..=2.3).contains(&(r1 / r2)), "{r1} {r2}");
}

#[test]
fn adaptive_differences_shrink_geometrically() {
    let f = random_smooth(3, 4, 1.0, 2.0, 1.0).unwrap();
    let r = propagate_adaptive(&f, 1.0, 0.0, 1e-4, &AdaptiveOptions::default()).unwrap();
    assert!(r.ratios.iter().skip(2).all(|q| (1.7..=2.3).contains(q)), "{:?}", r.ratios);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn unitary_and_cocycle(seed in 0u64..1000, dim in 1usize..8, log_steps in 0u32..10,
                           a in 0.0f64..1.0, b in 0.0f64..1.0, c in 0.0f64..1.0) {
        let f = random_smooth(dim, seed, 1.0, 2.0, 1.0).unwrap();
        let p = Propagator::new(&f, 1 << log_steps, Scheme::RightEndpoint).unwrap();
        prop_assert!(linalg::unitarity_defect(&p.evolve(a, b).unwrap()) < 1e-10);
        prop_assert!(cocycle_defect(&p, a, b, c).unwrap() < 1e-10);
        let fwd = p.evolve(a, c).unwrap();
        let back = p.evolve(c, a).unwrap();
        prop_assert!(linalg::frobenius(&(fwd.adjoint() - back)) < 1e-12);
    }

    #[test]
    fn duhamel_solution_starts_at_initial_value(seed in 0u64..1000, s in 0.0f64..1.0) {
        let f = random_smooth(2, seed, 1.0, 2.0, 1.0).unwrap();
        let p = Propagator::new(&f, 16, Scheme::RightEndpoint).unwrap();
        let x = CVector::from_vec(vec![C64::new(1.0, 0.5), C64::new(-0.25, 0.0)]);
        let traj = duhamel_solve(&p, s, &x, |t| CVector::from_vec(vec![C64::new(t, 0.0), C64::new(0.0, 1.0)])).unwrap();
        prop_assert_eq!(&traj.values[traj.start_index], &x);
        prop_assert_eq!(traj.times[traj.start_index], s);
    }
}
