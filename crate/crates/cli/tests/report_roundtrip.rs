use proptest::prelude::*;
use qsd::report::ReportFile;
use qsd_core::bounds::bounds_report;
use qsd_core::random::{random_ensemble, PriorMode, Purity, RandomSpec};
use qsd_core::tolerance::ToleranceSet;

fn purity() -> impl Strategy<Value = Purity> {
    prop_oneof![
        Just(Purity::Pure),
        Just(Purity::Mixed),
        Just(Purity::Commuting)
    ]
}

proptest! {
    #[test]
    fn report_json_round_trips(
        seed in any::<u64>(),
        dim in 1usize..=4,
        r in 2usize..=5,
        purity in purity(),
        uniform in any::<bool>(),
        input in proptest::collection::vec(any::<u8>(), 0..64),
    ) {
        let spec = RandomSpec {
            seed,
            dim,
            r,
            purity,
            priors: if uniform { PriorMode::Uniform } else { PriorMode::RandomSimplex },
        };
        let ensemble = random_ensemble(&spec).unwrap();
        let report = bounds_report(&ensemble).unwrap();
        let file = ReportFile::new(&report, &input, ToleranceSet::default());
        let parsed = ReportFile::from_json(&file.to_json()).unwrap();
        prop_assert_eq!(&parsed, &file);
        prop_assert_eq!(parsed.to_json(), file.to_json());
    }
}
