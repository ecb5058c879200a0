use nullhyp::charts::{chart_normalize, chart_reconstruct};
use nullhyp::gauge::{act, orbit_equivalent_k, orbit_equivalent_kc, recover_gauge};
use nullhyp::higgs::{from_hyperpolygon, theta_involution, to_hyperpolygon, MarkedPoints};
use nullhyp::involution::{classify_fixed, construct_zs, iota};
use nullhyp::kempf_ness::{self, SearchDirection, SolverOptions};
use nullhyp::minkowski::{self, bend, diagonal_length, normalize_diagonal, polygons_equivalent};
use nullhyp::moment::{in_p0n, is_stable};
use nullhyp::{sample, Complex64, HyperpolygonPoint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn higgs_chart_and_back() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 4..=7 {
        let x = sample::random_stable_point(&mut rng, n).unwrap();
        let h = from_hyperpolygon(&x, &MarkedPoints::roots_of_unity(n), 1e-9).unwrap();
        let (c, _) = chart_normalize(&h, (0, 1)).unwrap();
        let y = to_hyperpolygon(&chart_reconstruct(&c).unwrap()).unwrap();
        assert!(is_stable(&y, 1e-9));
        assert!(orbit_equivalent_kc(&x, &y, 1e-8).unwrap());
    }
}

#[test]
fn solver_modes_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [4, 6, 9] {
        let x = sample::random_stable_point(&mut rng, n).unwrap();
        let (a, ra) = kempf_ness::solve(&x, &SolverOptions { tol: 1e-11, ..Default::default() }).unwrap();
        let grad = SolverOptions { tol: 1e-11, direction: SearchDirection::Gradient, ..Default::default() };
        let (b, rb) = kempf_ness::solve(&x, &grad).unwrap();
        assert!(ra.converged && rb.converged);
        assert!(ra.iterations <= rb.iterations);
        assert!(orbit_equivalent_k(&a, &b, 1e-8).unwrap());
        assert!(act(&x, &ra.gauge).unwrap().max_abs_diff(&a) < 1e-10 * x.scale());
    }
}

#[test]
fn gauge_is_recovered_on_p0n() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let x = sample::random_p0n_point(&mut rng, 6).unwrap();
    let k = sample::random_k(&mut rng, 6);
    let y = act(&x, &k).unwrap();
    let g = recover_gauge(&x, &y, 1e-9).unwrap().unwrap();
    assert!(act(&x, &g).unwrap().max_abs_diff(&y) < 1e-9);
    let z = sample::random_p0n_point(&mut rng, 6).unwrap();
    assert!(recover_gauge(&x, &z, 1e-9).unwrap().is_none());
}

#[test]
fn theta_on_fixed_points_stays_in_the_orbit() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let x = sample::random_zs_point(&mut rng, 6, &[0, 2, 4]).unwrap();
    let h = from_hyperpolygon(&x, &MarkedPoints::roots_of_unity(6), 1e-9).unwrap();
    let y = to_hyperpolygon(&theta_involution(&h).unwrap()).unwrap();
    assert!(orbit_equivalent_kc(&y, &x, 1e-8).unwrap());
}

#[test]
fn bent_polygons_stay_in_the_component() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    let s = [0, 1, 2];
    let x = sample::random_zs_point(&mut rng, 5, &s).unwrap();
    let (p, _) = minkowski::block_to_polygon(&x, &s, 1e-9).unwrap();
    let (p, _) = normalize_diagonal(&p).unwrap();
    for theta in [0.3, 1.7, 4.0] {
        let q = bend(&p, theta, 1e-9).unwrap();
        assert!((diagonal_length(&q) - diagonal_length(&p)).abs() < 1e-12);
        assert!(!polygons_equivalent(&p, &q, 1e-9).unwrap());
        let y = minkowski::polygon_to_zs(&q).unwrap();
        assert!(in_p0n(&y, 1e-9));
        assert_eq!(classify_fixed(&y, 1e-9).unwrap().witness.unwrap().s, s.to_vec());
    }
}

#[test]
fn square_family_with_other_components() {
    let one = Complex64::new(1.0, 0.0);
    let x = construct_zs(4, &[0, 2], &[one, -one], &[one, one], &[one, -one], &[one, one]).unwrap();
    assert_eq!(x.p()[1], HyperpolygonPoint::p4().p()[2]);
    let c = classify_fixed(&x, 1e-9).unwrap();
    assert_eq!(c.witness.unwrap().s, vec![0, 2]);
    assert!(!orbit_equivalent_k(&x, &HyperpolygonPoint::p4(), 1e-9).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_composes(seed in any::<u64>(), n in 4usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::random_raw_point(&mut rng, n);
        let g = sample::random_kc(&mut rng, n, 0.3);
        let h = sample::random_kc(&mut rng, n, 0.3);
        let lhs = act(&act(&x, &g).unwrap(), &h).unwrap();
        let rhs = act(&x, &g.compose(&h).unwrap()).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10 * x.scale() * 10.0);
    }

    #[test]
    fn iota_commutes_with_orbits(seed in any::<u64>(), n in 4usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::random_p0n_point(&mut rng, n).unwrap();
        let y = act(&x, &sample::random_k(&mut rng, n)).unwrap();
        prop_assert!(orbit_equivalent_k(&iota(&x), &iota(&y), 1e-8).unwrap());
    }

    #[test]
    fn fixed_points_are_recognized_after_any_rotation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::random_zs_point(&mut rng, 7, &[0, 3, 5]).unwrap();
        let y = act(&x, &sample::random_k(&mut rng, 7)).unwrap();
        let w = classify_fixed(&y, 1e-9).unwrap().witness.unwrap();
        prop_assert_eq!(w.s, vec![0, 3, 5]);
    }
}
