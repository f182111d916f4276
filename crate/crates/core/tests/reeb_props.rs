use cosphere::tolerance::POLY_IDENTITY;
use cosphere::{
    flow_exact, flow_invariants_closed, flow_rk4, invariants, momentum, Fixture, HilbertImage,
    SupportPattern, ZeroLevelSampler,
};
use proptest::prelude::*;

proptest! {
    #[test]
    fn closed_form_agrees_with_point_flow(seed in any::<u64>(), t in -3.0f64..3.0, torus in any::<bool>()) {
        let fixture = if torus { Fixture::TorusOnR4 } else { Fixture::CircleOnPlane };
        let sampler = ZeroLevelSampler::new(fixture.spec(), SupportPattern::generic()).unwrap();
        let p = sampler.sample_at(seed, 0).unwrap();
        let start = HilbertImage(invariants(&p).hilbert_coordinates());
        let q = invariants(&flow_exact(&p, t));
        let closed = flow_invariants_closed(&start, t);
        for (a, b) in q.hilbert_coordinates().iter().zip(&closed.0) {
            prop_assert!((a - b).abs() <= POLY_IDENTITY * (1.0 + b.abs()), "{} vs {}", a, b);
        }
        for (a, b) in invariants(&p).planes.iter().zip(&q.planes) {
            prop_assert!((a.p4 - b.p4).abs() <= POLY_IDENTITY);
            prop_assert!((a.p1 + a.p3 - b.p1 - b.p3).abs() <= POLY_IDENTITY);
        }
        prop_assert!(q.max_cone_residual() <= POLY_IDENTITY);
        let j0 = momentum(&fixture.spec(), &p).unwrap();
        let j1 = momentum(&fixture.spec(), &flow_exact(&p, t)).unwrap();
        for (a, b) in j0.iter().zip(&j1) {
            prop_assert!((a - b).abs() <= 1e-10);
        }
    }
}

#[test]
fn rk4_tracks_exact_flow() {
    let sampler =
        ZeroLevelSampler::new(Fixture::TorusOnR4.spec(), SupportPattern::generic()).unwrap();
    for p in sampler.sample(5, 10).unwrap() {
        let tr = flow_rk4(&p, 2.0, 1e-3).unwrap();
        let exact = flow_exact(&p, 2.0);
        let err = tr
            .last()
            .x
            .iter()
            .zip(&exact.x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9, "endpoint error {err}");
        assert!(tr.states.iter().all(|s| s.is_cosphere()));
    }
}
