mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_stab::classify::iteration_invariants;
use toric_stab::format::{parse_fan, serialize_fan};
use toric_stab::polytope::{lattice_count, obstruction};
use toric_stab::stabilize::{bound, stabilize, xj_fan};
use toric_stab::{ExecMode, Fan2D, IntVec2, UnimodularMap};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn blow_down_undoes_blow_up(seed in any::<u64>(), cone in 0usize..64) {
        let f = common::random_fan(&mut rng(seed), 10);
        let (g, step) = f.blow_up(cone % f.len()).unwrap();
        prop_assert_eq!(g.len(), f.len() + 1);
        prop_assert!(g.contractible_rays().contains(&g.position(&step.inserted).unwrap()));
        let (back, down) = g.blow_down(g.position(&step.inserted).unwrap()).unwrap();
        prop_assert_eq!(back, f);
        prop_assert_eq!(down, step);
    }

    #[test]
    fn canonical_form_ignores_rotation(seed in any::<u64>(), shift in 0usize..64) {
        let f = common::random_fan(&mut rng(seed), 8);
        let mut pairs: Vec<IntVec2> = f.rays().iter().map(|r| r.to_vec()).collect();
        let s = shift % pairs.len();
        pairs.rotate_left(s);
        prop_assert_eq!(Fan2D::validate(&pairs).unwrap(), f);
    }

    #[test]
    fn reversed_fans_are_clockwise(seed in any::<u64>()) {
        let f = common::random_fan(&mut rng(seed), 6);
        let mut pairs: Vec<IntVec2> = f.rays().iter().map(|r| r.to_vec()).collect();
        pairs.reverse();
        prop_assert_eq!(Fan2D::validate(&pairs).unwrap_err().name(), "Clockwise");
    }

    #[test]
    fn serialization_is_a_fixed_point(seed in any::<u64>()) {
        let f = common::random_fan(&mut rng(seed), 10);
        let text = serialize_fan(&f);
        let g = Fan2D::validate(&parse_fan(&text).unwrap()).unwrap();
        prop_assert_eq!(serialize_fan(&g), text);
    }

    #[test]
    fn transforms_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = common::random_fan(&mut r, 6);
        let m = common::random_map(&mut r, true);
        prop_assert_eq!(f.transform(&m).transform(&m.inverse()), f.clone());
        prop_assert!(f.is_isomorphic(&f.transform(&m)).is_some());
        prop_assert_eq!(f.transform(&m).self_intersections().len(), f.len());
    }

    #[test]
    fn self_intersections_sum(seed in any::<u64>()) {
        // On a smooth complete toric surface sum(D_i^2) = 12 - 3 #rays.
        let f = common::random_fan(&mut rng(seed), 10);
        let total: i64 = f.self_intersections().iter().map(|d| i64::try_from(d).unwrap()).sum();
        prop_assert_eq!(total, 12 - 3 * f.len() as i64);
    }

    #[test]
    fn stabilization_replays_and_respects_bound(seed in any::<u64>()) {
        let f = common::random_fan(&mut rng(seed), 8);
        let s = stabilize(&f).unwrap();
        prop_assert!(s.sequence.verify().is_ok());
        prop_assert_eq!(&s.sequence.base, &f);
        prop_assert_eq!(s.sequence.result.transform(&s.landing), xj_fan(s.j).unwrap());
        prop_assert!(num_bigint::BigInt::from(s.step_count()) <= bound(&f).unwrap());
        let r = iteration_invariants(&f).unwrap();
        prop_assert_eq!(r.l0, r.l + 1);
        prop_assert!(r.l_range.0 <= r.l_range.1);
    }

    #[test]
    fn stabilize_is_idempotent(seed in any::<u64>()) {
        let f = common::random_fan(&mut rng(seed), 6);
        let s = stabilize(&f).unwrap();
        let again = stabilize(&s.sequence.result).unwrap();
        prop_assert_eq!((again.j, again.step_count()), (s.j, 0));
    }

    #[test]
    fn execution_modes_agree(seed in any::<u64>(), k in 0u64..12) {
        let p = common::random_polytope(&mut rng(seed), 8);
        prop_assert_eq!(
            lattice_count(&p, k, ExecMode::Sequential).unwrap(),
            lattice_count(&p, k, ExecMode::Parallel).unwrap()
        );
        prop_assert_eq!(
            obstruction(&p, ExecMode::Sequential).unwrap(),
            obstruction(&p, ExecMode::Parallel).unwrap()
        );
    }

    #[test]
    fn obstruction_is_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = common::random_polytope(&mut r, 8);
        let m = common::random_map(&mut r, true);
        let rep = obstruction(&p, ExecMode::Sequential).unwrap();
        let moved = obstruction(&p.transform(&m), ExecMode::Sequential).unwrap();
        prop_assert_eq!(&moved, &rep.transform(&m));
        prop_assert_eq!(moved.futaki_vanishes, rep.futaki_vanishes);
    }

    #[test]
    fn heights_round_trip(seed in any::<u64>()) {
        let p = common::random_polytope(&mut rng(seed), 8);
        let h = p.support_heights();
        prop_assert_eq!(toric_stab::polytope::polytope_from_heights(&h).unwrap(), p);
    }
}

#[test]
fn square_symmetries_fix_xj() {
    for j in 0..4 {
        let x = xj_fan(j).unwrap();
        for m in UnimodularMap::square_symmetries() {
            assert_eq!(x.transform(&m), x);
        }
    }
}
