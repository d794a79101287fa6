//! Property tests for the engine and the closed-form evaluator.

use metafib::engine::{RecurrenceSpec, RecurrenceTerm, TraceStatus};
use metafib::{fastb, Error};
use proptest::prelude::*;

fn arb_spec() -> impl Strategy<Value = RecurrenceSpec<i64>> {
    prop::collection::vec((0u32..=2, 1u32..=4), 1..=3)
        .prop_flat_map(|term_params| {
            let max_off = term_params.iter().map(|&(_, o)| o).max().unwrap() as usize;
            (
                Just(term_params),
                prop::collection::vec(1i64..=4, max_off..=max_off + 3),
            )
        })
        .prop_map(|(term_params, init)| {
            let terms = term_params
                .into_iter()
                .map(|(e, o)| RecurrenceTerm::new(e, o).unwrap())
                .collect();
            RecurrenceSpec::new(terms, init).unwrap()
        })
}

proptest! {
    #[test]
    fn generation_is_prefix_stable(spec in arb_spec(), count in 1usize..=120, extra in 0usize..=80) {
        match (spec.generate(count), spec.generate(count + extra)) {
            (Ok(short), Ok(long)) => match short.status() {
                TraceStatus::Alive => {
                    prop_assert_eq!(short.len(), count);
                    prop_assert!(long.len() >= count);
                    prop_assert_eq!(&long.terms()[..count], short.terms());
                    if let TraceStatus::Died { at_index, .. } = long.status() {
                        prop_assert!(at_index > count);
                    }
                }
                TraceStatus::Died { at_index, offending_argument } => {
                    prop_assert_eq!(short.len(), at_index - 1);
                    prop_assert_eq!(
                        long.status(),
                        TraceStatus::Died { at_index, offending_argument }
                    );
                    prop_assert_eq!(long.terms(), short.terms());
                }
            },
            (Ok(short), Err(Error::Overflow { index })) => {
                prop_assert!(short.is_alive());
                prop_assert!(index > count);
            }
            (Ok(_), Err(e)) => prop_assert!(false, "long run failed unexpectedly: {e}"),
            (Err(e1), Err(e2)) => prop_assert_eq!(e1, e2),
            (Err(e), Ok(_)) => prop_assert!(false, "short run failed ({e}) but long run succeeded"),
        }
    }

    #[test]
    fn generated_terms_are_positive(spec in arb_spec(), count in 1usize..=150) {
        if let Ok(trace) = spec.generate(count) {
            prop_assert!(trace.terms().iter().all(|&v| v >= 1));
        }
    }

    #[test]
    fn fast_b_consecutive_difference_is_0_or_1(n in 1i64..1_000_000_000_000) {
        let d = fastb::fast_b(n + 1) - fastb::fast_b(n);
        prop_assert!(d == 0 || d == 1, "difference {d} at n = {n}");
    }

    #[test]
    fn first_index_gap_is_2_exactly_on_witnesses(m in 1i64..1_000_000_000_000) {
        let gap = fastb::first_index(m + 1) - fastb::first_index(m);
        match fastb::find_witness(m) {
            Some(_) => prop_assert_eq!(gap, 2),
            None => prop_assert_eq!(gap, 1),
        }
    }

    #[test]
    fn witness_certifies_its_value(m in 1i64..1_000_000_000_000) {
        if let Some(w) = fastb::find_witness(m) {
            prop_assert!(w.k >= 1);
            let reconstructed = w.k * 3i64.pow(w.i) + fastb::aux_a::<i64>(w.i).unwrap();
            prop_assert_eq!(reconstructed, m);
        }
    }

    #[test]
    fn fast_b_inverts_first_index(m in 1i64..1_000_000_000_000) {
        prop_assert_eq!(fastb::fast_b(fastb::first_index(m)), m);
    }

    #[test]
    fn occurrence_info_is_consistent(m in 1i64..1_000_000_000_000) {
        let info = fastb::occurrence_info(m);
        prop_assert_eq!(info.value, m);
        prop_assert_eq!(info.multiplicity == 2, info.witness.is_some());
        prop_assert_eq!(info.first_index, m + fastb::r_total(m));
    }

    #[test]
    fn fast_b_agrees_across_scalars(n in 1i64..4_000_000_000_000_000) {
        prop_assert_eq!(fastb::fast_b(n) as i128, fastb::fast_b(n as i128));
    }
}
