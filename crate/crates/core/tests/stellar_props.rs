use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use stellar_core::composition::{compose, random_antipodal_state, SeededRng};
use stellar_core::dynamics::match_stars;
use stellar_core::measures::{e_b, rotate_state};
use stellar_core::state::{husimi, SymmetricState};
use stellar_core::stellar::{stars_to_state, state_to_stars, Constellation, Star};

fn state(max_n: usize) -> impl Strategy<Value = SymmetricState> {
    (1..=max_n)
        .prop_flat_map(|n| prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n + 1))
        .prop_filter_map("zero vector", |d| {
            SymmetricState::from_dicke(d.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).ok()
        })
}

fn star() -> impl Strategy<Value = Star> {
    (-1.0..=1.0f64, 0.0..2.0 * PI).prop_map(|(z, phi)| Star::from_angles(z.acos(), phi))
}

fn constellation(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Constellation> {
    n.prop_flat_map(|n| prop::collection::vec(star(), n)).prop_map(|s| Constellation::new(s).unwrap())
}

fn worst_match(a: &Constellation, b: &Constellation) -> f64 {
    let (matched, _) = match_stars(a, b);
    a.stars().iter().zip(&matched).map(|(x, y)| x.geodesic(y)).fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn state_survives_the_stellar_round_trip(s in state(24)) {
        let c = state_to_stars(&s).unwrap();
        prop_assert_eq!(c.n(), s.n());
        let back = stars_to_state(&c).unwrap();
        prop_assert!(back.fidelity(&s) >= 1.0 - 1e-9);
    }

    #[test]
    fn constellation_survives_the_round_trip(c in constellation(1..=12)) {
        let back = state_to_stars(&stars_to_state(&c).unwrap()).unwrap();
        prop_assert!(worst_match(&c, &back) <= 1e-7);
    }

    #[test]
    fn repeated_star_is_recovered(base in constellation(1..=8), s in star(), m in 2usize..=6) {
        let mut stars = base.into_stars();
        stars.extend(std::iter::repeat_n(s, m));
        let c = Constellation::new(stars).unwrap();
        let back = state_to_stars(&stars_to_state(&c).unwrap()).unwrap();
        prop_assert!(worst_match(&c, &back) <= 1e-5);
    }

    #[test]
    fn global_phase_leaves_the_stars(s in state(10), alpha in 0.0..2.0 * PI) {
        let a = state_to_stars(&s).unwrap();
        let b = state_to_stars(&s.with_global_phase(alpha)).unwrap();
        prop_assert!(worst_match(&a, &b) <= 1e-9);
    }

    #[test]
    fn rotating_stars_rotates_the_state(c in constellation(1..=6), axis in star(), angle in 0.0..2.0 * PI) {
        let rotated_stars = stars_to_state(&c.rotated(&axis, angle)).unwrap();
        let rotated_state = rotate_state(&stars_to_state(&c).unwrap(), &axis, angle).unwrap();
        prop_assert!(rotated_stars.fidelity(&rotated_state) >= 1.0 - 1e-8);
    }

    #[test]
    fn husimi_vanishes_opposite_every_star(c in constellation(1..=10)) {
        let s = stars_to_state(&c).unwrap();
        for star in c.stars() {
            prop_assert!(husimi(&s, &star.antipode().qubit()) <= 1e-12);
        }
    }

    #[test]
    fn husimi_of_a_composition_factorizes(a in state(5), b in state(5), points in prop::collection::vec(star(), 8)) {
        let ab = compose(&a, &b).unwrap();
        let ratios: Vec<f64> = points
            .iter()
            .map(|p| (husimi(&ab, &p.qubit()), husimi(&a, &p.qubit()) * husimi(&b, &p.qubit())))
            .filter(|&(_, q)| q > 1e-6)
            .map(|(qab, q)| qab / q)
            .collect();
        for r in &ratios {
            prop_assert!((r / ratios[0] - 1.0).abs() <= 1e-8);
        }
    }

    #[test]
    fn composition_is_commutative(a in state(6), b in state(6)) {
        let ab = compose(&a, &b).unwrap();
        let ba = compose(&b, &a).unwrap();
        prop_assert!(ab.fidelity(&ba) >= 1.0 - 1e-10);
    }

    #[test]
    fn barycentric_measure_is_bounded(s in state(16)) {
        let v = e_b(&s).unwrap();
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn antipodal_states_are_maximal(seed in any::<u64>(), half in 1usize..=10) {
        let s = random_antipodal_state(2 * half, &mut SeededRng::new(seed)).unwrap();
        prop_assert!((e_b(&s).unwrap() - 1.0).abs() <= 1e-12);
    }
}
