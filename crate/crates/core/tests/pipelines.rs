use adjoint_core::geometry::scale_axes;
use adjoint_core::pipeline::random_weight_for_both;
use adjoint_core::toric::toric_ideal;
use adjoint_core::verify::{self, random_configuration, CheckSet, FuzzBounds};
use adjoint_core::{algebraic_adjoint, geometric_adjoint, MultiPoly, PointConfiguration, WeightVector};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pentagon() -> PointConfiguration {
    PointConfiguration::from_rows(&[
        vec![1, 0, 1],
        vec![1, 1, 1],
        vec![1, 2, 2],
        vec![1, 2, 3],
        vec![1, 0, 3],
    ])
    .unwrap()
}

fn form(cfg: &PointConfiguration, i: usize) -> MultiPoly {
    adjoint_core::multidegree::LinearForm(cfg.point(i).clone()).to_poly()
}

#[test]
fn pentagon_adjoint_expands_from_its_triangulation() {
    let cfg = pentagon();
    let w = WeightVector::from(vec![0, 1, 0, 0, 1]);
    let expected = (&form(&cfg, 1) * &form(&cfg, 2)).scale(&4.into())
        + (&form(&cfg, 1) * &form(&cfg, 4)).scale(&2.into())
        + &form(&cfg, 3) * &form(&cfg, 4);
    assert_eq!(geometric_adjoint(&cfg, &w).unwrap().adjoint, expected);
    assert_eq!(algebraic_adjoint(&cfg, &w).unwrap().multidegree, expected);
    assert_eq!(
        expected.to_string(),
        "7*t0^2 + 16*t0*t1 + 26*t0*t2 + 8*t1^2 + 28*t1*t2 + 23*t2^2"
    );
}

#[test]
fn every_pentagon_triangulation_gives_the_same_adjoint() {
    let cfg = pentagon();
    let toric = toric_ideal(&cfg);
    let reference = geometric_adjoint(&cfg, &WeightVector::from(vec![0, 1, 0, 0, 1]))
        .unwrap()
        .adjoint;
    let mut triangulations = std::collections::BTreeSet::new();
    for seed in 0..40 {
        let w = random_weight_for_both(&cfg, &toric, seed, 5).unwrap();
        let g = geometric_adjoint(&cfg, &w).unwrap();
        triangulations.insert(g.triangulation.index_sets());
        assert_eq!(g.adjoint, reference);
    }
    // A pentagon has five triangulations; small weights reach several.
    assert!(triangulations.len() >= 3, "{triangulations:?}");
}

#[test]
fn fuzz_reports_ignore_thread_scheduling() {
    let bounds = FuzzBounds::default();
    let parallel = verify::fuzz(5, 8, &bounds, &CheckSet::all());
    let serial: Vec<_> = (0..8)
        .map(|k| verify::fuzz_case(k, verify::case_seed(5, k), &bounds, &CheckSet::all()).to_json(false))
        .collect();
    let from_parallel: Vec<_> = parallel.cases.iter().map(|c| c.to_json(false)).collect();
    assert_eq!(from_parallel, serial);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pipelines_agree_on_random_configurations(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bounds = FuzzBounds { n_max: 7, coord_max: 4, ..FuzzBounds::default() };
        let cfg = random_configuration(&mut rng, &bounds);
        let w = random_weight_for_both(&cfg, &toric_ideal(&cfg), seed, 1000).unwrap();
        let g = geometric_adjoint(&cfg, &w).unwrap();
        let a = algebraic_adjoint(&cfg, &w).unwrap();
        prop_assert_eq!(&g.adjoint, &a.adjoint);
        // At t = e_0 every linear form is 1, so the adjoint is the total volume.
        let mut top = vec![0; cfg.dim() + 1];
        top[0] = (cfg.len() - cfg.dim() - 1) as u32;
        prop_assert_eq!(g.adjoint.coefficient(&top), g.triangulation.volume());
        if a.lattice_index == BigInt::from(1) {
            prop_assert_eq!(&g.adjoint, &a.multidegree);
        }
    }

    #[test]
    fn scaling_multiplies_by_the_determinant(seed in any::<u64>(), f1 in 1i64..=3, f2 in 1i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bounds = FuzzBounds { d_max: 2, n_max: 6, ..FuzzBounds::default() };
        let cfg = random_configuration(&mut rng, &bounds);
        let factors: Vec<BigInt> = [1, f1, f2][..=cfg.dim()].iter().map(|&f| BigInt::from(f)).collect();
        let w = random_weight_for_both(&cfg, &toric_ideal(&cfg), seed, 1000).unwrap();
        let scaled = scale_axes(&cfg, &factors).unwrap();
        let det: BigInt = factors.iter().product();
        let original = geometric_adjoint(&cfg, &w).unwrap().adjoint;
        let expected = original.scale_variables(&factors).scale(&det);
        prop_assert_eq!(geometric_adjoint(&scaled, &w).unwrap().adjoint, expected.clone());
        prop_assert_eq!(algebraic_adjoint(&scaled, &w).unwrap().adjoint, expected);
    }
}
