use copylemma::entropy::{elemental_inequalities, mutual_info_expr, VarSet};
use copylemma::lp::{assemble, solve, Sense};
use copylemma::perm::{closure, subset_orbits, Permutation};
use copylemma::rational::{format_fraction, parse_rational};
use copylemma::{entropy::VariableUniverse, Rational};
use num_traits::Zero;
use proptest::prelude::*;

fn universe4() -> VariableUniverse {
    VariableUniverse::new(["A", "B", "C", "D"]).unwrap()
}

/// Disjoint `(I, J, K)` with `I`, `J` nonempty, from a label in `0..3` per variable.
fn triple() -> impl Strategy<Value = (VarSet, VarSet, VarSet)> {
    prop::collection::vec(0u8..4, 4)
        .prop_filter("I and J nonempty", |roles| roles.contains(&0) && roles.contains(&1))
        .prop_map(|roles| {
            let pick = |r: u8| VarSet::from_indices((0..4).filter(|&i| roles[i] == r));
            (pick(0), pick(1), pick(2))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn elementals_imply_every_shannon_inequality((i, j, k) in triple()) {
        let u = universe4();
        let rows = elemental_inequalities(u.base_set()).unwrap();
        let objective = mutual_info_expr(i, j, k).unwrap();
        let model = assemble(&u, &[rows], objective, Sense::Minimize).unwrap();
        prop_assert!(solve(&model).unwrap().optimum().unwrap().is_zero());
    }

    #[test]
    fn fractions_round_trip(num in -10_000i64..10_000, den in 1i64..10_000) {
        let r = Rational::new(num.into(), den.into());
        prop_assert_eq!(parse_rational(&format_fraction(&r)).unwrap(), r);
    }

    #[test]
    fn orbits_partition_the_subsets(images in Just((0..5usize).collect::<Vec<_>>()).prop_shuffle()) {
        let group = closure(5, &[Permutation::from_images(images).unwrap()]).unwrap();
        let orbits = subset_orbits(&group, 5);
        let mut seen = 0u64;
        let mut total = 0;
        for orbit in &orbits {
            for s in &orbit.members {
                prop_assert_eq!(seen & (1 << s.bits()), 0);
                seen |= 1 << s.bits();
                total += 1;
            }
        }
        prop_assert_eq!(total, 31);
    }
}
