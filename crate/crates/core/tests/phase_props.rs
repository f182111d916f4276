mod common;

use cosphere::tolerance::{KERNEL_RESIDUAL, POLY_IDENTITY};
use cosphere::{
    classify_point, hilbert_map, invariants, momentum, starred_lattice, PhasePoint, SupportPattern,
    TorusModel, ZeroLevelSampler,
};
use proptest::prelude::*;

fn coords(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-3.0f64..3.0, 2 * n)
}

fn point(n: usize) -> impl Strategy<Value = PhasePoint> {
    (coords(n), coords(n))
        .prop_filter("nonzero covector", |(_, u)| {
            u.iter().any(|v| v.abs() > 1e-3)
        })
        .prop_map(|(x, u)| PhasePoint::new(x, u).unwrap())
}

proptest! {
    #[test]
    fn cone_identity_on_random_points(p in (1usize..=4).prop_flat_map(point)) {
        let inv = invariants(&p);
        prop_assert!(inv.max_cone_residual() <= POLY_IDENTITY);
        for q in &inv.planes {
            prop_assert!(q.p1 >= 0.0);
        }
        let c = p.normalized();
        prop_assert!((invariants(&c).cosphere_sum() - 2.0).abs() <= POLY_IDENTITY);
    }

    #[test]
    fn classification_ignores_covector_scale(
        seed in any::<u64>(),
        lambda in 0.01f64..100.0,
    ) {
        let spec = common::random_spec(&mut common::rng(seed), 3, 4, 5);
        let model = TorusModel::new(spec.clone()).unwrap();
        let sampler = ZeroLevelSampler::new(spec, SupportPattern::generic()).unwrap();
        let p = sampler.sample_at(seed, 0).unwrap();
        prop_assert_eq!(
            classify_point(&model, &p).unwrap(),
            classify_point(&model, &p.scale_covector(lambda)).unwrap()
        );
    }

    #[test]
    fn zero_level_samples_lie_over_starred_types(
        seed in any::<u64>(),
        base_mask in 0usize..16,
        cov_mask in 1usize..16,
    ) {
        let spec = common::random_spec(&mut common::rng(seed), 3, 4, 5);
        let n = spec.n;
        let planes = |m: usize| (0..n).filter(|j| m >> j & 1 == 1).collect::<Vec<_>>();
        let (base, cov) = (planes(base_mask), planes(cov_mask));
        prop_assume!(!cov.is_empty());
        let model = TorusModel::new(spec.clone()).unwrap();
        let starred = starred_lattice(model.poset());
        let sampler = ZeroLevelSampler::new(spec.clone(), SupportPattern::new(Some(&base), Some(&cov))).unwrap();
        for p in sampler.sample(seed, 20).unwrap() {
            prop_assert!(p.is_cosphere());
            let j = momentum(&spec, &p).unwrap();
            prop_assert!(j.iter().all(|v| v.abs() < KERNEL_RESIDUAL), "{:?}", j);
            prop_assert!(hilbert_map(&spec, &p, KERNEL_RESIDUAL).is_ok());
            let label = classify_point(&model, &p).unwrap();
            prop_assert!(starred.contains(label), "{} not starred", label);
            for j in p.support() {
                prop_assert!(base.contains(&j) || cov.contains(&j));
            }
        }
    }
}

#[test]
fn sampling_is_reproducible_per_index() {
    let spec = cosphere::Fixture::TorusOnR4.spec();
    let sampler = ZeroLevelSampler::new(spec, SupportPattern::generic()).unwrap();
    let batch = sampler.sample(11, 5).unwrap();
    assert_eq!(batch, sampler.sample(11, 5).unwrap());
    assert_eq!(batch[3], sampler.sample_at(11, 3).unwrap());
    assert_ne!(batch[0], sampler.sample_at(12, 0).unwrap());
}
