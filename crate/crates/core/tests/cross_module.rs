use hchit::exact_hitting::{full_survival, survival_all_starts};
use hchit::random_sets::{sample_without_replacement, Provenance, TargetSet};
use hchit::walk_mc::{dkw_band, simulate_hitting};
use hchit::Vertex;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_files_round_trip(n in 1u32..=20, bits in prop::collection::vec(any::<u64>(), 1..40)) {
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let set = TargetSet::from_bits(n, bits.iter().map(|b| b & mask), Provenance::Explicit).unwrap();
        let back = TargetSet::parse_set_file(&set.to_set_file(), None).unwrap();
        prop_assert_eq!(back.members(), set.members());
    }

    #[test]
    fn survival_tables_are_monotone(seed in 0u64..1000, size in 1u64..12, start in 0u64..256) {
        let set = sample_without_replacement(8, size, seed).unwrap();
        let x = Vertex::new(8, start).unwrap();
        let table = full_survival(&set, x, 300).unwrap();
        prop_assert!(table.is_consistent(1e-12));
    }
}

#[test]
fn all_starts_agree_with_forward_runs_and_simulation() {
    let set = sample_without_replacement(9, 7, 5).unwrap();
    let times = [10u64, 60, 200];
    let all = survival_all_starts(&set, &times).unwrap();
    let trials = 20_000;
    let band = dkw_band(trials, 1e-3);
    for bits in [0u64, 0x155, set.members()[0].bits()] {
        let x = Vertex::new(9, bits).unwrap();
        let forward = full_survival(&set, x, 200).unwrap();
        let mc = simulate_hitting(&set, x, 1.0, trials, 3, Some(1000)).unwrap();
        for (i, &t) in times.iter().enumerate() {
            let exact = all.values[i][bits as usize];
            assert!((exact - forward.at(t)).abs() < 1e-12);
            assert!((mc.survival(t as f64) - exact).abs() <= band, "x={bits:x} t={t}");
        }
    }
}
