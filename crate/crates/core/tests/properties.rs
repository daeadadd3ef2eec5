//! Randomized property suites. Run standalone with `cargo test -p blayer-core --test properties`.

mod common;

use blayer_core::bench::{Benchmark, BenchmarkConfig, BeamVariant, ConvergenceConfig, HertzConfig, PatchTestConfig, PatchVariant};
use blayer_core::mesh::ElementKind;
use common::*;
use proptest::prelude::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig { cases: n, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cases(256))]

    #[test]
    fn nurbs_partition_of_unity(
        degree in 1usize..5,
        interior in prop::collection::vec(0.05f64..0.95, 0..6),
        weights in prop::collection::vec(0.2f64..3.0, 16),
        u in 0.0f64..=1.0,
    ) {
        prop_assert!(partition_of_unity_defect(degree, &interior, &weights, u) < 1e-12);
    }
}

proptest! {
    #![proptest_config(cases(24))]

    #[test]
    fn dual_basis_biorthogonality(h in 0.3f64..2.0, bump in -0.2f64..0.25, refinement in 1usize..7) {
        prop_assert!(biorthogonality_defect(h, bump, refinement) < 1e-12);
    }

    #[test]
    fn element_tangent_matches_finite_differences(
        kind in prop::sample::select(vec![ElementKind::Quad4, ElementKind::Quad8, ElementKind::Nurbs]),
        skew in -0.3f64..0.3,
        amp in 0.0f64..0.08,
        seed in any::<u64>(),
    ) {
        prop_assert!(tangent_defect(kind, skew, amp, seed) <= 1e-6);
    }

    #[test]
    fn embedded_row_sums(mid in 2.0f64..2.9, cells in 2usize..9, refinement in 1usize..6) {
        prop_assert!(row_sum_defect(mid, cells, refinement) <= 1e-10);
    }

    #[test]
    fn cut_cell_area_conservation(
        y0 in 0.2f64..2.8, ym in 0.2f64..2.8, y1 in 0.2f64..2.8,
        nx in 1usize..12, ny in 1usize..12,
        kind in prop::sample::select(vec![ElementKind::Quad4, ElementKind::Quad8]),
    ) {
        prop_assert!(area_conservation_defect(y0, ym, y1, nx, ny, kind) <= 1e-12);
    }
}

proptest! {
    #![proptest_config(cases(6))]

    #[test]
    fn contact_kkt_at_convergence(load in 0.02f64..0.2, cells in prop::sample::select(vec![4usize, 6, 8])) {
        prop_assert!(kkt_defect(load, cells) <= 1e-8);
    }
}

fn round_trip(b: Benchmark) -> Result<(), TestCaseError> {
    let cfg = BenchmarkConfig::new(b);
    let text = cfg.to_toml().unwrap();
    let back = BenchmarkConfig::parse(&text).unwrap();
    prop_assert_eq!(&back, &cfg);
    prop_assert_eq!(back.to_toml().unwrap(), text);
    Ok(())
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn config_round_trip(
        a in 0.5f64..10.0,
        e in 1e-3f64..1e6,
        nu in 0.0f64..0.49,
        eps in 1.0f64..1e8,
        loads in prop::collection::vec(0.01f64..2.0, 1..4),
        levels in prop::collection::vec(1.0f64..64.0, 1..6),
        variants in prop::sample::subsequence(vec![PatchVariant::Straight, PatchVariant::Inclined, PatchVariant::Curved], 1..=3),
        ratio in 0.5f64..8.0,
    ) {
        round_trip(Benchmark::PatchTest(PatchTestConfig { a, e, nu, epsilon: eps, variants, ..Default::default() }))?;
        round_trip(Benchmark::Hertz(HertzConfig { e, nu, epsilon: eps, loads, levels, ..Default::default() }))?;
        round_trip(Benchmark::ConvergenceBlock(ConvergenceConfig { width: a, e, nu, epsilon: eps, ..Default::default() }))?;
        let mut beam = blayer_core::bench::BeamConfig::default();
        beam.variants.push(BeamVariant { name: format!("ratio-{ratio}"), h_ratio: ratio, e_layer: e });
        round_trip(Benchmark::BendingBeam(beam))?;
    }
}
