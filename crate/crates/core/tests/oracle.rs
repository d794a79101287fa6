//! Cross-checks of the closed-form machinery against the naive engine, plus
//! regression constants derived by running the engine itself (death indices,
//! well-known prefixes). Wider-range versions of some of these run in the
//! CLI crate's acceptance suite.

use metafib::engine::{Preset, TraceStatus};
use metafib::{fastb, verify};

#[test]
fn fast_b_equals_naive_b_up_to_1e4() {
    let trace = Preset::B.spec::<i64>().unwrap().generate(10_000).unwrap();
    for (n, value) in trace.iter_indexed() {
        assert_eq!(fastb::fast_b(n as i64), value, "n = {n}");
    }
}

#[test]
fn r_total_counts_naive_repeats_up_to_1e5() {
    let limit = 100_000usize;
    let trace = Preset::B
        .spec::<i64>()
        .unwrap()
        .generate(limit * 3 / 2 + 12)
        .unwrap();
    let profile = trace.repeat_profile();
    let mut repeats_below = 0i64;
    for m in 1..=limit as i64 {
        assert_eq!(fastb::r_total(m), repeats_below, "m = {m}");
        if profile.count(m) == 2 {
            repeats_below += 1;
        }
    }
}

#[test]
fn multiplicity_matches_witness_up_to_1e4() {
    let report = verify::verify_structure(10_000i64).unwrap();
    assert!(report.passed(), "{report}");
}

#[test]
fn b_stays_slow_and_monotone_through_1e6() {
    let trace = Preset::B
        .spec::<i64>()
        .unwrap()
        .generate(1_000_000)
        .unwrap();
    assert!(trace.is_alive());
    assert!(trace.check_slow().is_slow());
    assert!(trace.terms().windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn b_at_1e6() {
    let trace = Preset::B
        .spec::<i64>()
        .unwrap()
        .generate(1_000_000)
        .unwrap();
    let naive = trace.get(1_000_000).unwrap();
    assert_eq!(naive, 666_678);
    assert_eq!(fastb::fast_b(1_000_000i64), naive);
}

#[test]
fn q13_dies_at_165() {
    // The death conjecture predicts death for Q_{1,3}; the index is an
    // engine-derived regression constant, not a claim from anywhere else.
    let trace = Preset::Qrs { r: 1, s: 3 }
        .spec::<i64>()
        .unwrap()
        .generate(1_000_000)
        .unwrap();
    assert_eq!(
        trace.status(),
        TraceStatus::Died {
            at_index: 165,
            offending_argument: -37
        }
    );
    assert_eq!(trace.len(), 164);
}

#[test]
fn q23_dies_at_55() {
    let trace = Preset::Qrs { r: 2, s: 3 }
        .spec::<i64>()
        .unwrap()
        .generate(1_000_000)
        .unwrap();
    assert_eq!(
        trace.status(),
        TraceStatus::Died {
            at_index: 55,
            offending_argument: -14
        }
    );
}

#[test]
fn conolly_prefix() {
    let trace = Preset::Conolly.spec::<i64>().unwrap().generate(20).unwrap();
    assert_eq!(
        trace.terms(),
        &[1, 1, 2, 2, 3, 4, 4, 4, 5, 6, 6, 7, 8, 8, 8, 8, 9, 10, 10, 11]
    );
    assert!(trace.check_slow().is_slow());
}

#[test]
fn conolly_stays_slow_through_1e5() {
    let trace = Preset::Conolly
        .spec::<i64>()
        .unwrap()
        .generate(100_000)
        .unwrap();
    assert!(trace.is_alive());
    assert!(trace.check_slow().is_slow());
}

#[test]
fn v_prefix_and_multiplicities() {
    let trace = Preset::V.spec::<i64>().unwrap().generate(100_000).unwrap();
    assert!(trace.is_alive());
    assert!(trace.check_slow().is_slow());
    assert_eq!(
        &trace.terms()[..20],
        &[1, 1, 1, 1, 2, 3, 4, 5, 5, 6, 6, 7, 8, 8, 9, 9, 10, 11, 11, 11]
    );
    let profile = trace.repeat_profile();
    // The all-ones initial condition contributes four 1s; every later value
    // appears at most three times.
    assert_eq!(profile.count(1), 4);
    let max_after_init = profile
        .complete_counts()
        .filter(|&(v, _)| v >= 2)
        .map(|(_, c)| c)
        .max()
        .unwrap();
    assert_eq!(max_after_init, 3);
    assert_eq!(profile.count(11), 3);
}

#[test]
fn w_prefix_is_wild_but_alive() {
    let trace = Preset::W.spec::<i64>().unwrap().generate(10_000).unwrap();
    assert!(trace.is_alive());
    assert_eq!(
        &trace.terms()[..20],
        &[1, 1, 1, 1, 2, 4, 6, 7, 7, 5, 3, 8, 9, 11, 12, 9, 9, 13, 11, 9]
    );
    assert!(!trace.check_slow().is_slow());
}

#[test]
fn density_deviation_shrinks_by_decade() {
    let points = verify::density_profile(&[1_000i64, 10_000, 100_000, 1_000_000]);
    assert!(verify::deviations_nonincreasing(&points));
    assert!(points.last().unwrap().deviation_below(1, 1_000));
}
