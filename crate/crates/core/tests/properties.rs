use ana_core::{
    clamp_to_bounds, cost_amplify, lookup, BaseFunction, Bounds, FunctionSpec, PopulationMatrix,
    RngStream,
};
use ndarray::Array2;
use proptest::prelude::*;

fn base_function() -> impl Strategy<Value = BaseFunction> {
    prop::sample::select(BaseFunction::ALL.to_vec())
}

fn matrix(
    max_d: usize,
    max_n: usize,
    lo: f64,
    hi: f64,
) -> impl Strategy<Value = (usize, usize, Vec<f64>)> {
    (1..=max_d, 1..=max_n).prop_flat_map(move |(d, n)| {
        prop::collection::vec(lo..hi, d * n).prop_map(move |v| (d, n, v))
    })
}

proptest! {
    #[test]
    fn clamp_is_idempotent_and_lands_in_bounds(
        (d, n, data) in matrix(6, 6, -1e6, 1e6),
        lo in -500.0f64..0.0,
        width in 0.0f64..500.0,
    ) {
        let bounds = Bounds::new(lo, lo + width).unwrap();
        let pop = PopulationMatrix::from_array(Array2::from_shape_vec((d, n), data).unwrap());
        let once = clamp_to_bounds(pop.clone(), &bounds);
        let twice = clamp_to_bounds(once.clone(), &bounds);
        prop_assert!(once.is_within(&bounds));
        prop_assert_eq!(once.as_array(), twice.as_array());
        for (orig, c) in pop.iter().zip(once.iter()) {
            if bounds.contains(*orig) {
                prop_assert_eq!(orig.to_bits(), c.to_bits());
            }
        }
    }

    #[test]
    fn batched_evaluation_matches_per_agent(
        base in base_function(),
        (d, n, data) in matrix(12, 19, -100.0, 100.0),
    ) {
        let pop = PopulationMatrix::from_array(Array2::from_shape_vec((d, n), data).unwrap());
        let spec = FunctionSpec::<f64>::from_base(base).with_dimension(d);
        let batched = spec.evaluate_population(&pop).unwrap();
        for a in 0..n {
            let single = spec.evaluate(&pop.column_vec(a)).unwrap();
            prop_assert_eq!(single.to_bits(), batched.get(a).to_bits(), "{} agent {}", base.name(), a);
        }
    }

    #[test]
    fn functions_are_finite_and_nonnegative_on_the_default_box(
        base in base_function(),
        x in prop::collection::vec(-100.0f64..100.0, 1..16),
    ) {
        let value = base.evaluate(&x);
        prop_assert!(value.is_finite());
        // every registered function has a zero minimum, up to rounding
        prop_assert!(value >= -1e-12, "{} = {}", base.name(), value);
    }

    #[test]
    fn amplification_preserves_values(
        base in base_function(),
        k in 1usize..6,
        x in prop::collection::vec(-100.0f64..100.0, 1..8),
    ) {
        let spec = FunctionSpec::<f64>::from_base(base).with_dimension(x.len());
        let heavy = cost_amplify(&spec, k).unwrap();
        prop_assert_eq!(heavy.repetitions(), k);
        prop_assert_eq!(spec.evaluate(&x).unwrap().to_bits(), heavy.evaluate(&x).unwrap().to_bits());

        let named = lookup::<f64>(&format!("heavy_{}_{}", base.name(), k)).unwrap().with_dimension(x.len());
        prop_assert_eq!(named.evaluate(&x).unwrap().to_bits(), heavy.evaluate(&x).unwrap().to_bits());
    }

    #[test]
    fn uniform_draws_stay_in_the_half_open_interval(
        seed in any::<u64>(),
        lo in -1e3f64..1e3,
        width in 1e-9f64..1e3,
    ) {
        let hi = lo + width;
        let mut stream = RngStream::new(seed);
        for _ in 0..64 {
            let v: f64 = stream.uniform(lo, hi).unwrap();
            prop_assert!(lo <= v && v < hi, "{} not in [{}, {})", v, lo, hi);
        }
        prop_assert_eq!(stream.draws(), 64);
    }

    #[test]
    fn single_precision_draws_stay_below_the_upper_bound(seed in any::<u64>()) {
        let mut stream = RngStream::new(seed);
        for _ in 0..256 {
            let v: f32 = stream.uniform(-1.0, 1.0).unwrap();
            prop_assert!((-1.0..1.0).contains(&v));
        }
    }

    #[test]
    fn streams_with_equal_seeds_agree(seed in any::<u64>(), n in 1usize..100) {
        let mut a = RngStream::new(seed);
        let mut b = RngStream::new(seed);
        let mut buf = vec![0.0f64; n];
        a.fill_uniform(&mut buf, -5.0, 5.0).unwrap();
        for v in buf {
            prop_assert_eq!(v.to_bits(), b.uniform(-5.0f64, 5.0).unwrap().to_bits());
        }
        prop_assert_eq!(a.state(), b.state());
    }
}

#[test]
fn reversed_interval_is_rejected() {
    let mut stream = RngStream::new(1);
    assert!(stream.uniform(1.0f64, -1.0).is_err());
    assert!(Bounds::new(100.0f64, -100.0).is_err());
}
