//! Generic memoized evaluator for Hofstadter-style nested recurrences.
//!
//! A spec is a sum of terms `S(n - e_j - S(n - o_j))` over a shared history,
//! plus an initial condition for indices `1..=L`. Terms are evaluated left to
//! right; an argument outside `1..=n-1` kills the sequence at that index and
//! the death (index plus offending argument) is recorded in the trace status.
//! Death is data, not an error — several of the classic two-term recurrences
//! are conjectured to die, and the point of the engine is to observe them.
//!
//! Indexing is 1-based throughout, matching the usual presentation of these
//! sequences; the internal 0-based storage never leaks through the API.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::int::SeqInt;

/// One term `S(n - outer_shift - S(n - inner_offset))` of a recurrence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecurrenceTerm {
    outer_shift: u32,
    inner_offset: u32,
}

impl RecurrenceTerm {
    /// A term with the given shift `e_j >= 0` and offset `o_j >= 1`.
    pub fn new(outer_shift: u32, inner_offset: u32) -> Result<Self> {
        if inner_offset == 0 {
            return Err(Error::ZeroInnerOffset);
        }
        Ok(Self {
            outer_shift,
            inner_offset,
        })
    }

    /// An unshifted term `S(n - S(n - inner_offset))`.
    pub fn plain(inner_offset: u32) -> Result<Self> {
        Self::new(0, inner_offset)
    }

    pub fn outer_shift(&self) -> u32 {
        self.outer_shift
    }

    pub fn inner_offset(&self) -> u32 {
        self.inner_offset
    }
}

/// A nested recurrence together with its initial condition.
///
/// Invariants enforced at construction: at least one term, every initial
/// value positive, and the initial condition at least as long as the largest
/// inner offset (otherwise the first computed index would already look
/// before the start of the sequence).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecurrenceSpec<T> {
    terms: Vec<RecurrenceTerm>,
    init: Vec<T>,
}

impl<T: SeqInt> RecurrenceSpec<T> {
    pub fn new(terms: Vec<RecurrenceTerm>, init: Vec<T>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyTerms);
        }
        let required = terms.iter().map(|t| t.inner_offset as usize).max().unwrap();
        if init.len() < required {
            return Err(Error::InitTooShort {
                required,
                actual: init.len(),
            });
        }
        if let Some(pos) = init.iter().position(|&v| v < T::one()) {
            return Err(Error::NonPositiveInit { index: pos + 1 });
        }
        Ok(Self { terms, init })
    }

    /// Spec with unshifted terms at the given inner offsets.
    pub fn from_offsets(offsets: &[u32], init: Vec<T>) -> Result<Self> {
        let terms = offsets
            .iter()
            .map(|&o| RecurrenceTerm::plain(o))
            .collect::<Result<Vec<_>>>()?;
        Self::new(terms, init)
    }

    pub fn terms(&self) -> &[RecurrenceTerm] {
        &self.terms
    }

    pub fn initial_condition(&self) -> &[T] {
        &self.init
    }

    pub fn init_len(&self) -> usize {
        self.init.len()
    }

    /// Compute the first `count` terms.
    ///
    /// The trace stops early only on death. The only hard error is overflow
    /// of the scalar, which none of the named presets can reach at any
    /// feasible trace length.
    pub fn generate(&self, count: usize) -> Result<SequenceTrace<T>> {
        let mut terms: Vec<T> = self.init.iter().copied().take(count).collect();
        terms.reserve(count.saturating_sub(terms.len()));
        let mut status = TraceStatus::Alive;

        'outer: for n in self.init.len() + 1..=count {
            let n_t = T::from_index(n).ok_or(Error::Overflow { index: n })?;
            let mut sum = T::zero();
            for term in &self.terms {
                let inner = terms[n - term.inner_offset as usize - 1];
                // arg = n - e_j - S(n - o_j); valid iff 1 <= arg <= n - 1.
                let shift = T::from_u32(term.outer_shift).unwrap_or_else(T::max_value);
                let arg = n_t.saturating_sub(shift).saturating_sub(inner);
                if arg < T::one() || arg > n_t - T::one() {
                    status = TraceStatus::Died {
                        at_index: n,
                        offending_argument: arg,
                    };
                    break 'outer;
                }
                let looked_up = terms[arg.as_index().unwrap() - 1];
                sum = sum
                    .checked_add(&looked_up)
                    .ok_or(Error::Overflow { index: n })?;
            }
            terms.push(sum);
        }

        Ok(SequenceTrace {
            spec: self.clone(),
            terms,
            status,
        })
    }
}

/// Liveness of a computed trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceStatus<T> {
    Alive,
    /// Evaluating index `at_index` required an argument outside `1..at_index`.
    /// The argument recorded is the first offender in declared term order.
    Died {
        at_index: usize,
        offending_argument: T,
    },
}

/// Computed terms of one sequence, 1-based, plus liveness.
///
/// If the status is `Died { at_index, .. }` the trace holds exactly
/// `at_index - 1` terms. A shorter-than-requested live trace cannot occur.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceTrace<T> {
    spec: RecurrenceSpec<T>,
    terms: Vec<T>,
    status: TraceStatus<T>,
}

impl<T: SeqInt> SequenceTrace<T> {
    pub fn spec(&self) -> &RecurrenceSpec<T> {
        &self.spec
    }

    pub fn terms(&self) -> &[T] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term at 1-based index `n`.
    pub fn get(&self, n: usize) -> Option<T> {
        if n == 0 {
            return None;
        }
        self.terms.get(n - 1).copied()
    }

    pub fn status(&self) -> TraceStatus<T> {
        self.status
    }

    pub fn is_alive(&self) -> bool {
        matches!(self.status, TraceStatus::Alive)
    }

    /// 1-based (index, value) pairs.
    pub fn iter_indexed(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.terms
            .iter()
            .copied()
            .enumerate()
            .map(|(i, v)| (i + 1, v))
    }

    /// First index (scanning from 2) where the consecutive difference leaves
    /// `{0, 1}`, if any.
    pub fn check_slow(&self) -> SlownessReport<T> {
        for n in 2..=self.terms.len() {
            let diff = self.terms[n - 1] - self.terms[n - 2];
            if diff < T::zero() || diff > T::one() {
                return SlownessReport {
                    first_violation_index: Some(n),
                    violating_difference: Some(diff),
                };
            }
        }
        SlownessReport {
            first_violation_index: None,
            violating_difference: None,
        }
    }

    /// Occurrence counts of every value in the trace.
    pub fn repeat_profile(&self) -> RepeatProfile<T> {
        let mut counts = BTreeMap::new();
        for &v in &self.terms {
            *counts.entry(v).or_insert(0usize) += 1;
        }
        RepeatProfile {
            counts,
            last: self.terms.last().copied(),
        }
    }
}

/// Result of a slowness scan: differences of consecutive terms must stay in `{0, 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlownessReport<T> {
    pub first_violation_index: Option<usize>,
    pub violating_difference: Option<T>,
}

impl<T> SlownessReport<T> {
    pub fn is_slow(&self) -> bool {
        self.first_violation_index.is_none()
    }
}

/// Per-value occurrence counts of a trace.
///
/// A count is *complete* only for values strictly below the final term —
/// later terms could still add occurrences of everything at or above it.
#[derive(Debug, Clone)]
pub struct RepeatProfile<T> {
    counts: BTreeMap<T, usize>,
    last: Option<T>,
}

impl<T: SeqInt> RepeatProfile<T> {
    pub fn count(&self, value: T) -> usize {
        self.counts.get(&value).copied().unwrap_or(0)
    }

    pub fn is_complete(&self, value: T) -> bool {
        matches!(self.last, Some(last) if value < last)
    }

    /// Largest multiplicity among values whose counts are complete.
    pub fn max_complete_multiplicity(&self) -> usize {
        self.complete_counts().map(|(_, c)| c).max().unwrap_or(0)
    }

    /// (value, count) over values with complete counts, ascending.
    pub fn complete_counts(&self) -> impl Iterator<Item = (T, usize)> + '_ {
        self.counts
            .iter()
            .filter(|(&v, _)| self.is_complete(v))
            .map(|(&v, &c)| (v, c))
    }

    /// Complete values that occur more than once, ascending.
    pub fn repeated_values(&self) -> Vec<T> {
        self.complete_counts()
            .filter(|&(_, c)| c >= 2)
            .map(|(v, _)| v)
            .collect()
    }
}

/// The named recurrences from the literature.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Hofstadter's Q: offsets (1, 2), `Q(1) = Q(2) = 1`.
    Q,
    /// Two-term family `Q_{r,s}` with an all-ones initial condition, `0 < r < s`.
    Qrs { r: u32, s: u32 },
    /// Three-term family `Q_{r,s,t}` with identity initial condition of length `t`.
    Qrst { r: u32, s: u32, t: u32 },
    /// The V-sequence, `Q_{1,4}` with all-ones initial condition.
    V,
    /// The W-sequence, `Q_{2,4}` with all-ones initial condition.
    W,
    /// Conolly's recurrence `C(n) = C(n - C(n-1)) + C(n-1 - C(n-2))`, `C(1) = C(2) = 1`.
    Conolly,
    /// The slow three-term B-sequence: offsets (1, 2, 3), `B(i) = i` for `i <= 5`.
    B,
    /// `B_k(n) = sum_{i=1}^k B_k(n - B_k(n-i))` with identity initial condition
    /// of length `init_len >= k`.
    Bk { k: u32, init_len: u32 },
    /// The doubled-offset relative of B: offsets (2, 4, 6), identity initial
    /// condition of length 6.
    BPrime,
}

impl Preset {
    /// Resolve a preset name plus positional parameters.
    pub fn parse(name: &str, params: &[u32]) -> Result<Preset> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!(
                    "preset '{name}' takes {n} parameter(s), got {}",
                    params.len()
                )))
            }
        };
        match name.to_ascii_lowercase().as_str() {
            "q" => want(0).map(|_| Preset::Q),
            "qrs" => want(2).map(|_| Preset::Qrs {
                r: params[0],
                s: params[1],
            }),
            "qrst" => want(3).map(|_| Preset::Qrst {
                r: params[0],
                s: params[1],
                t: params[2],
            }),
            "v" => want(0).map(|_| Preset::V),
            "w" => want(0).map(|_| Preset::W),
            "conolly" => want(0).map(|_| Preset::Conolly),
            "b" => want(0).map(|_| Preset::B),
            "bk" => want(2).map(|_| Preset::Bk {
                k: params[0],
                init_len: params[1],
            }),
            "bprime" => want(0).map(|_| Preset::BPrime),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    /// Build the recurrence spec for this preset.
    pub fn spec<T: SeqInt>(self) -> Result<RecurrenceSpec<T>> {
        match self {
            Preset::Q => RecurrenceSpec::from_offsets(&[1, 2], all_ones(2)),
            Preset::Qrs { r, s } => {
                if !(0 < r && r < s) {
                    return Err(Error::InvalidParams(format!(
                        "Q_{{r,s}} needs 0 < r < s, got r={r}, s={s}"
                    )));
                }
                RecurrenceSpec::from_offsets(&[r, s], all_ones(s as usize))
            }
            Preset::Qrst { r, s, t } => {
                if !(0 < r && r < s && s < t) {
                    return Err(Error::InvalidParams(format!(
                        "Q_{{r,s,t}} needs 0 < r < s < t, got r={r}, s={s}, t={t}"
                    )));
                }
                RecurrenceSpec::from_offsets(&[r, s, t], identity(t as usize))
            }
            Preset::V => Preset::Qrs { r: 1, s: 4 }.spec(),
            Preset::W => Preset::Qrs { r: 2, s: 4 }.spec(),
            Preset::Conolly => RecurrenceSpec::new(
                vec![RecurrenceTerm::new(0, 1)?, RecurrenceTerm::new(1, 2)?],
                all_ones(2),
            ),
            Preset::B => RecurrenceSpec::from_offsets(&[1, 2, 3], identity(5)),
            Preset::Bk { k, init_len } => {
                if k < 1 {
                    return Err(Error::InvalidParams("B_k needs k >= 1".into()));
                }
                if init_len < k {
                    return Err(Error::InvalidParams(format!(
                        "B_k needs an initial condition of length >= k, got k={k}, N={init_len}"
                    )));
                }
                let offsets: Vec<u32> = (1..=k).collect();
                RecurrenceSpec::from_offsets(&offsets, identity(init_len as usize))
            }
            Preset::BPrime => RecurrenceSpec::from_offsets(&[2, 4, 6], identity(6)),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    /// Parse `"name"` or `"name:p1,p2,..."`, e.g. `qrs:1,4` or `bk:4,9`.
    fn from_str(s: &str) -> Result<Preset> {
        let (name, params) = match s.split_once(':') {
            None => (s, Vec::new()),
            Some((name, rest)) => {
                let params = rest
                    .split(',')
                    .map(|p| {
                        p.trim().parse::<u32>().map_err(|_| {
                            Error::InvalidParams(format!("bad preset parameter '{p}'"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                (name, params)
            }
        };
        Preset::parse(name.trim(), &params)
    }
}

fn all_ones<T: SeqInt>(len: usize) -> Vec<T> {
    vec![T::one(); len]
}

fn identity<T: SeqInt>(len: usize) -> Vec<T> {
    (1..=len).map(|i| T::from_index(i).unwrap()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gen(preset: Preset, count: usize) -> SequenceTrace<i64> {
        preset.spec::<i64>().unwrap().generate(count).unwrap()
    }

    #[test]
    fn b_first_28_terms_match_listing() {
        let trace = gen(Preset::B, 28);
        assert_eq!(
            trace.terms(),
            &[
                1, 2, 3, 4, 5, 6, 6, 7, 8, 9, 9, 10, 11, 12, 12, 13, 14, 15, 15, 16, 17, 17, 18,
                18, 19, 20, 21, 21
            ]
        );
        assert!(trace.is_alive());
    }

    #[test]
    fn q_first_terms() {
        let trace = gen(Preset::Q, 16);
        assert_eq!(
            &trace.terms()[..11],
            &[1, 1, 2, 3, 3, 4, 5, 5, 6, 6, 6],
            "first 11 Q terms"
        );
        assert_eq!(trace.get(12), Some(8));
        assert_eq!(trace.get(15), Some(10));
        assert_eq!(trace.get(16), Some(9));
    }

    #[test]
    fn q_slowness_ends_at_12() {
        let report = gen(Preset::Q, 16).check_slow();
        assert_eq!(report.first_violation_index, Some(12));
        assert_eq!(report.violating_difference, Some(2));
        assert!(!report.is_slow());
    }

    #[test]
    fn constant_trace_is_slow() {
        let spec = RecurrenceSpec::<i64>::from_offsets(&[1], vec![1, 1, 1]).unwrap();
        let trace = spec.generate(3).unwrap();
        assert!(trace.check_slow().is_slow());
    }

    #[test]
    fn preset_b_shape() {
        let spec = Preset::B.spec::<i64>().unwrap();
        let offsets: Vec<u32> = spec.terms().iter().map(|t| t.inner_offset()).collect();
        assert_eq!(offsets, vec![1, 2, 3]);
        assert!(spec.terms().iter().all(|t| t.outer_shift() == 0));
        assert_eq!(spec.initial_condition(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn preset_q_shape() {
        let spec = Preset::Q.spec::<i64>().unwrap();
        let offsets: Vec<u32> = spec.terms().iter().map(|t| t.inner_offset()).collect();
        assert_eq!(offsets, vec![1, 2]);
        assert_eq!(spec.initial_condition(), &[1, 1]);
    }

    #[test]
    fn preset_bk_identity_init() {
        let spec = Preset::Bk { k: 4, init_len: 10 }.spec::<i64>().unwrap();
        let offsets: Vec<u32> = spec.terms().iter().map(|t| t.inner_offset()).collect();
        assert_eq!(offsets, vec![1, 2, 3, 4]);
        assert_eq!(spec.initial_condition(), &(1..=10).collect::<Vec<i64>>());
    }

    #[test]
    fn preset_parse_and_errors() {
        assert_eq!("q".parse::<Preset>().unwrap(), Preset::Q);
        assert_eq!(
            "qrs:1,4".parse::<Preset>().unwrap(),
            Preset::Qrs { r: 1, s: 4 }
        );
        assert_eq!(
            "bk:4,9".parse::<Preset>().unwrap(),
            Preset::Bk { k: 4, init_len: 9 }
        );
        assert!(matches!(
            "nope".parse::<Preset>(),
            Err(Error::UnknownPreset(_))
        ));
        assert!(matches!(
            Preset::Qrs { r: 4, s: 2 }.spec::<i64>(),
            Err(Error::InvalidParams(_))
        ));
        assert!(matches!(
            Preset::Bk { k: 5, init_len: 3 }.spec::<i64>(),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            RecurrenceSpec::<i64>::new(vec![], vec![1]),
            Err(Error::EmptyTerms)
        ));
        assert!(matches!(
            RecurrenceTerm::new(0, 0),
            Err(Error::ZeroInnerOffset)
        ));
        assert!(matches!(
            RecurrenceSpec::<i64>::from_offsets(&[3], vec![1, 1]),
            Err(Error::InitTooShort {
                required: 3,
                actual: 2
            })
        ));
        assert!(matches!(
            RecurrenceSpec::<i64>::from_offsets(&[1], vec![0]),
            Err(Error::NonPositiveInit { index: 1 })
        ));
    }

    #[test]
    fn death_is_reported_with_first_offending_argument() {
        // B' with identity init of length 6 jumps to 12 and then looks at 9 - 12 = -3.
        let trace = gen(Preset::BPrime, 50);
        assert_eq!(trace.terms(), &[1, 2, 3, 4, 5, 6, 12, 12]);
        assert_eq!(
            trace.status(),
            TraceStatus::Died {
                at_index: 9,
                offending_argument: -3
            }
        );
    }

    #[test]
    fn death_stops_before_requested_count() {
        let trace = gen(Preset::BPrime, 9);
        assert_eq!(trace.len(), 8);
        assert!(!trace.is_alive());
        // Cut before the death index: alive prefix.
        let trace = gen(Preset::BPrime, 8);
        assert_eq!(trace.len(), 8);
        assert!(trace.is_alive());
    }

    #[test]
    fn generation_is_prefix_stable() {
        let spec = Preset::B.spec::<i64>().unwrap();
        let short = spec.generate(40).unwrap();
        let long = spec.generate(200).unwrap();
        assert_eq!(short.terms(), &long.terms()[..40]);
    }

    #[test]
    fn overflow_is_a_distinct_error() {
        let spec = RecurrenceSpec::<i64>::new(
            vec![
                RecurrenceTerm::plain(2).unwrap(),
                RecurrenceTerm::plain(2).unwrap(),
            ],
            vec![1, i64::MAX - 2],
        )
        .unwrap();
        assert_eq!(spec.generate(3), Err(Error::Overflow { index: 3 }));
    }

    #[test]
    fn repeat_profile_counts() {
        let profile = gen(Preset::B, 28).repeat_profile();
        assert_eq!(profile.count(6), 2);
        assert_eq!(profile.count(7), 1);
        assert_eq!(profile.count(17), 2);
        // Final term is 21, so 21 itself is not complete.
        assert!(profile.is_complete(20));
        assert!(!profile.is_complete(21));
        assert_eq!(profile.repeated_values(), vec![6, 9, 12, 15, 17, 18]);
        assert_eq!(profile.max_complete_multiplicity(), 2);
    }

    #[test]
    fn repeat_profile_single_term() {
        let spec = RecurrenceSpec::<i64>::from_offsets(&[1], vec![1]).unwrap();
        let profile = spec.generate(1).unwrap().repeat_profile();
        assert_eq!(profile.count(1), 1);
        assert_eq!(profile.max_complete_multiplicity(), 0);
    }

    #[test]
    fn trace_indexing_is_one_based() {
        let trace = gen(Preset::B, 10);
        assert_eq!(trace.get(0), None);
        assert_eq!(trace.get(1), Some(1));
        assert_eq!(trace.get(10), Some(9));
        assert_eq!(trace.get(11), None);
        let pairs: Vec<(usize, i64)> = trace.iter_indexed().take(3).collect();
        assert_eq!(pairs, vec![(1, 1), (2, 2), (3, 3)]);
    }

    #[test]
    fn works_with_i128() {
        let trace = Preset::B.spec::<i128>().unwrap().generate(28).unwrap();
        assert_eq!(trace.get(28), Some(21i128));
    }

    #[test]
    fn traces_and_specs_are_shareable() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<RecurrenceSpec<i64>>();
        assert_send_sync::<SequenceTrace<i64>>();

        // Completed traces are immutable values; independent generations of
        // the same spec can run on separate threads.
        let spec = Preset::B.spec::<i64>().unwrap();
        let handle = {
            let spec = spec.clone();
            std::thread::spawn(move || spec.generate(100).unwrap())
        };
        let local = spec.generate(100).unwrap();
        assert_eq!(handle.join().unwrap(), local);
    }
}
