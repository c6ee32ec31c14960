use pssmp_core::exit_laws::exit_density_two_sided;
use pssmp_core::hitting::{hit_closed_ratio, hit_matrix_method};
use pssmp_core::montecarlo::{simulate_exit, SimConfig};
use pssmp_core::{Direction, ExitLawQuery, ExitWindow, HitQuery, LampertiKind, StableParams, Window};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hitting_routes_agree_and_are_probabilities(alpha in 1.05f64..1.95, x in 0.05f64..5.0, a in 0.1f64..2.0, gap in 0.1f64..2.0) {
        let b = a + gap;
        prop_assume!((x - a).abs() > 1e-3 && (x - b).abs() > 1e-3);
        let q = HitQuery::new(alpha, x, a, b).unwrap();
        let m = hit_matrix_method(&q).unwrap();
        let c = hit_closed_ratio(&q).unwrap();
        prop_assert!((0.0..=1.0).contains(&m), "{m}");
        prop_assert!((m - c).abs() < 1e-9, "{m} vs {c}");
    }

    #[test]
    fn exit_densities_are_finite_and_nonnegative(alpha in 0.3f64..1.9, rho in 0.05f64..0.95, v in -2.0f64..-0.01, u in 0.01f64..2.0, theta in 1e-4f64..5.0) {
        prop_assume!(alpha * rho < 1.0 && alpha * (1.0 - rho) < 1.0);
        let params = StableParams::two_sided(alpha, rho).unwrap();
        let window = Window::TwoSided(ExitWindow::new(v, u).unwrap());
        for kind in [LampertiKind::Up, LampertiKind::Star, LampertiKind::Down] {
            for direction in [Direction::Up, Direction::Down] {
                let d = exit_density_two_sided(&ExitLawQuery { kind, params, window, direction, theta }).unwrap();
                prop_assert!(d.is_finite() && d >= 0.0, "{kind:?} {direction:?}: {d}");
            }
        }
    }
}

#[test]
fn simulation_is_reproducible_from_the_seed() {
    let p = StableParams::two_sided(1.5, 0.5).unwrap();
    let w = ExitWindow::new(-0.5, 0.5).unwrap();
    let cfg = SimConfig::new(500, 1e-2, 11).unwrap();
    let a = simulate_exit(LampertiKind::Star, &p, w, &cfg).unwrap();
    let b = simulate_exit(LampertiKind::Star, &p, w, &cfg).unwrap();
    assert_eq!(a, b);
    let share = a.up_share().value;
    assert!((0.0..=1.0).contains(&share), "{share}");
}
