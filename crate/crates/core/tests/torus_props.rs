mod common;

use std::collections::BTreeSet;

use cosphere::{stabilizer_of_support, TorusModel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn stabilizers_match_the_minor_oracle(seed in any::<u64>()) {
        let spec = common::random_spec(&mut common::rng(seed), 3, 4, 5);
        for s in common::all_supports(spec.n) {
            let stab = stabilizer_of_support(&spec, &s);
            let (rank, d) = common::minors_oracle(&spec, &s);
            prop_assert_eq!(stab.dim_stab + rank, spec.k);
            prop_assert_eq!(stab.finite_invariants.iter().map(|&v| v as i128).product::<i128>(), d);
        }
    }

    #[test]
    fn stabilizers_shrink_as_support_grows(seed in any::<u64>()) {
        let spec = common::random_spec(&mut common::rng(seed), 3, 4, 5);
        let supports = common::all_supports(spec.n);
        for s in &supports {
            for t in supports.iter().filter(|t| s.is_subset(t)) {
                let (a, b) = (stabilizer_of_support(&spec, s), stabilizer_of_support(&spec, t));
                prop_assert!(a.dim_stab >= b.dim_stab);
                prop_assert!(b.lattice.contains(&vec![0; spec.k]));
                prop_assert!(a.lattice.is_sublattice_of(&b.lattice));
                if a.dim_stab == b.dim_stab {
                    let order = |v: &[i64]| v.iter().product::<i64>();
                    prop_assert_eq!(order(&a.finite_invariants) % order(&b.finite_invariants), 0);
                }
            }
        }
    }

    #[test]
    fn poset_order_is_fixed_plane_inclusion(seed in any::<u64>()) {
        let spec = common::random_spec(&mut common::rng(seed), 3, 6, 5);
        let model = TorusModel::new(spec.clone()).unwrap();
        let poset = model.poset();
        prop_assert!(poset.validate().is_valid(), "{:?}", poset.validate().violations);
        let mut seen = BTreeSet::new();
        for class in model.classes() {
            let rep = &class.supports[0];
            let fixed: BTreeSet<usize> =
                (0..spec.n).filter(|&j| common::column_in_span(&spec, rep, j)).collect();
            prop_assert_eq!(&class.fixed_planes, &fixed);
            prop_assert!(class.supports.contains(&fixed));
            prop_assert!(seen.insert(fixed.clone()));
            prop_assert_eq!(poset.dim_q_of(&class.label).unwrap(), 2 * fixed.len());
            for s in &class.supports {
                prop_assert_eq!(model.label_of_support(s).unwrap(), &class.label);
            }
        }
        for lo in model.classes() {
            for hi in model.classes() {
                // a larger stabilizer fixes fewer planes
                let expected = lo.fixed_planes != hi.fixed_planes
                    && hi.fixed_planes.is_subset(&lo.fixed_planes);
                prop_assert_eq!(poset.is_subconjugate(&lo.label, &hi.label).unwrap(), expected);
            }
        }
        prop_assert_eq!(poset.principal_type().unwrap().label.clone(), model.classes()[0].label.clone());
    }
}
