//! Machine checks of the structural claims about the B-sequence.
//!
//! Every check here confronts the closed-form machinery in [`crate::fastb`]
//! with the naive memoized oracle in [`crate::engine`], or brute-forces an
//! identity over an explicit range. A check returns a [`VerificationReport`]
//! listing each violation it found; an empty list is a pass. Density ratios
//! are compared as cross-multiplied integers — no floating point decides
//! anything in this module.

use std::cmp::Ordering;
use std::fmt;

use crate::engine::{Preset, TraceStatus};
use crate::error::{Error, Result};
use crate::fastb::{self, WitnessPair};
use crate::int::SeqInt;

/// One observed disagreement: where, what should hold, what was seen.
#[derive(Debug, Clone)]
pub struct Violation {
    pub location: String,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: expected {}, got {}",
            self.location, self.expected, self.actual
        )
    }
}

/// Outcome of one verification scan.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    check: String,
    checked_range: (u64, u64),
    violations: Vec<Violation>,
}

impl VerificationReport {
    pub(crate) fn new(check: impl Into<String>, lo: u64, hi: u64) -> Self {
        Self {
            check: check.into(),
            checked_range: (lo, hi),
            violations: Vec::new(),
        }
    }

    pub(crate) fn push(
        &mut self,
        location: impl fmt::Display,
        expected: impl fmt::Display,
        actual: impl fmt::Display,
    ) {
        self.violations.push(Violation {
            location: location.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
        });
    }

    pub fn check(&self) -> &str {
        &self.check
    }

    pub fn checked_range(&self) -> (u64, u64) {
        self.checked_range
    }

    pub fn violations(&self) -> &[Violation] {
        &self.violations
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.checked_range;
        if self.passed() {
            write!(f, "{}: PASS over {lo}..={hi}", self.check)
        } else {
            writeln!(
                f,
                "{}: FAIL over {lo}..={hi} ({} violation(s))",
                self.check,
                self.violations.len()
            )?;
            for v in self.violations.iter().take(10) {
                writeln!(f, "  {v}")?;
            }
            if self.violations.len() > 10 {
                writeln!(f, "  ... and {} more", self.violations.len() - 10)?;
            }
            Ok(())
        }
    }
}

/// One sampled point of the density profile `B(n) / n`.
///
/// The ratio and its deviation from 2/3 are exposed as exact integer pairs;
/// [`DensityPoint::deviation_f64`] exists only for display.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DensityPoint<T> {
    pub n: T,
    pub b: T,
}

impl<T: SeqInt> DensityPoint<T> {
    pub fn ratio(&self) -> (T, T) {
        (self.b, self.n)
    }

    /// `|B(n)/n - 2/3|` as the exact fraction `(|3 B(n) - 2 n|, 3 n)`.
    pub fn deviation(&self) -> (u128, u128) {
        let n = self.n.to_i128().expect("scalar fits in i128");
        let b = self.b.to_i128().expect("scalar fits in i128");
        ((3 * b - 2 * n).unsigned_abs(), 3 * n as u128)
    }

    pub fn deviation_f64(&self) -> f64 {
        let (num, den) = self.deviation();
        num as f64 / den as f64
    }

    /// Exact test `deviation < num / den`.
    pub fn deviation_below(&self, num: u64, den: u64) -> bool {
        let (dnum, dden) = self.deviation();
        dnum * (den as u128) < (num as u128) * dden
    }
}

/// Exact comparison of two deviations by cross-multiplication.
pub fn deviation_cmp<T: SeqInt>(a: &DensityPoint<T>, b: &DensityPoint<T>) -> Ordering {
    let (anum, aden) = a.deviation();
    let (bnum, bden) = b.deviation();
    // Denominators are 3 n; cancel the common factor 3 to keep products in u128.
    (anum * (bden / 3)).cmp(&(bnum * (aden / 3)))
}

/// True when the sampled deviations never increase left to right.
pub fn deviations_nonincreasing<T: SeqInt>(points: &[DensityPoint<T>]) -> bool {
    points
        .windows(2)
        .all(|w| deviation_cmp(&w[0], &w[1]) != Ordering::Less)
}

/// `B(n)/n` at each requested `n`, using the closed-form evaluator.
pub fn density_profile<T: SeqInt>(points: &[T]) -> Vec<DensityPoint<T>> {
    points
        .iter()
        .map(|&n| DensityPoint {
            n,
            b: fastb::fast_b(n),
        })
        .collect()
}

/// Check the repeat classification: every value `m <= limit_value` appears in
/// the naive B trace exactly twice when it has a witness and exactly once
/// otherwise, and the trace is monotone nondecreasing throughout.
pub fn verify_structure<T: SeqInt>(limit_value: T) -> Result<VerificationReport> {
    let limit = limit_value.to_u64().filter(|&l| l >= 6).ok_or_else(|| {
        Error::InvalidParams(format!(
            "structure check needs 6 <= limit, got {limit_value}"
        ))
    })? as usize;

    // Far enough that some term exceeds limit + 1, completing every count
    // at or below the limit: first_index(m) < 3m/2 always.
    let count = limit * 3 / 2 + 12;
    let trace = Preset::B.spec::<T>()?.generate(count)?;
    if let TraceStatus::Died { at_index, .. } = trace.status() {
        return Err(Error::TraceDied { at_index });
    }

    let mut report = VerificationReport::new("repeat classification", 1, limit as u64);

    for n in 2..=trace.len() {
        let prev = trace.get(n - 1).unwrap();
        let cur = trace.get(n).unwrap();
        if cur < prev {
            report.push(
                format!("index {n}"),
                format!("B({n}) >= B({})", n - 1),
                format!("{cur} < {prev}"),
            );
        }
    }

    let limit_t = limit_value;
    assert!(
        trace.terms().last().copied().unwrap() > limit_t,
        "trace sizing must cover the limit"
    );

    let mut counts = vec![0u32; limit + 1];
    for &v in trace.terms() {
        if v <= limit_t {
            counts[v.to_usize().unwrap()] += 1;
        }
    }
    for (m, &count) in counts.iter().enumerate().skip(1) {
        let m_t = T::from_index(m).unwrap();
        let expected: u32 = if fastb::find_witness(m_t).is_some() {
            2
        } else {
            1
        };
        if count != expected {
            report.push(
                format!("value {m}"),
                format!("multiplicity {expected}"),
                format!("multiplicity {count}"),
            );
        }
    }

    Ok(report)
}

/// Brute-force the witness uniqueness claim: for every `m <= limit_value`
/// there is at most one `i >= 1` with `m = a_i (mod 3^i)` and `a_i <= m`,
/// and `find_witness` agrees with the exhaustive scan.
pub fn verify_lemma_uniqueness<T: SeqInt>(limit_value: T) -> Result<VerificationReport> {
    let limit = limit_value.to_u64().filter(|&l| l >= 1).ok_or_else(|| {
        Error::InvalidParams(format!(
            "uniqueness check needs limit >= 1, got {limit_value}"
        ))
    })?;

    let mut report = VerificationReport::new("witness uniqueness", 1, limit);
    let three = T::from_u8(3).unwrap();

    for m_u in 1..=limit {
        let m = T::from_u64(m_u).unwrap();
        let mut qualifying: Vec<(T, u32)> = Vec::new();
        let mut a = three;
        let mut pow3 = three;
        let mut i = 1u32;
        while a <= m {
            if (m - a) % pow3 == T::zero() {
                qualifying.push(((m - a) / pow3, i));
            }
            a = match a.checked_mul(&three) {
                Some(v) => v - T::one(),
                None => break,
            };
            pow3 = match pow3.checked_mul(&three) {
                Some(v) => v,
                None => break,
            };
            i += 1;
        }
        if qualifying.len() > 1 {
            report.push(
                format!("m = {m_u}"),
                "at most one congruence witness",
                format!("{qualifying:?}"),
            );
        }
        let brute = qualifying
            .iter()
            .find(|&&(k, _)| k >= T::one())
            .map(|&(k, i)| WitnessPair { k, i });
        if fastb::find_witness(m) != brute {
            report.push(
                format!("m = {m_u}"),
                format!("find_witness = {brute:?}"),
                format!("{:?}", fastb::find_witness(m)),
            );
        }
    }

    Ok(report)
}

/// Check the three counter identities at every multiple of 3 up to the limit:
///
/// * `R(m, i) = R(m/3, i-1) + [i is the witness of m-1]` for each `i >= 2`,
/// * `m/3 + R(m/3) = R(m) + 1` when `m-1` has a witness, `R(m) + 2` otherwise,
/// * `m-1` has a witness iff `m/3` has a witness.
pub fn verify_r_identities<T: SeqInt>(limit_value: T) -> Result<VerificationReport> {
    let limit = limit_value.to_u64().filter(|&l| l >= 6).ok_or_else(|| {
        Error::InvalidParams(format!(
            "identity check needs limit >= 6, got {limit_value}"
        ))
    })?;

    let mut report = VerificationReport::new("repeat-counter identities", 6, limit);
    let three = T::from_u8(3).unwrap();

    let mut m_u = 6u64;
    while m_u <= limit {
        let m = T::from_u64(m_u).unwrap();
        let m3 = m / three;
        let witness_m1 = fastb::find_witness(m - T::one());
        let witness_m3 = fastb::find_witness(m3);

        if witness_m1.is_some() != witness_m3.is_some() {
            report.push(
                format!("witness transfer at m = {m_u}"),
                format!("witness({}) iff witness({})", m_u - 1, m_u / 3),
                format!("{witness_m1:?} vs {witness_m3:?}"),
            );
        }

        let lhs = m3 + fastb::r_total(m3);
        let offset = if witness_m1.is_some() { 1 } else { 2 };
        let rhs = fastb::r_total(m) + T::from_u8(offset).unwrap();
        if lhs != rhs {
            report.push(
                format!("counter sum at m = {m_u}"),
                format!("m/3 + R(m/3) = R(m) + {offset}"),
                format!("{lhs} vs {rhs}"),
            );
        }

        let mut i = 2u32;
        while let Some(a) = fastb::aux_a::<T>(i) {
            if a > m {
                break;
            }
            let bump = match witness_m1 {
                Some(WitnessPair { i: wi, .. }) if wi == i => T::one(),
                _ => T::zero(),
            };
            let lhs = fastb::r_partial(m, i);
            let rhs = fastb::r_partial(m3, i - 1) + bump;
            if lhs != rhs {
                report.push(
                    format!("counter step at m = {m_u}, i = {i}"),
                    format!("R(m,{i}) = R(m/3,{}) + {bump}", i - 1),
                    format!("{lhs} vs {rhs}"),
                );
            }
            i += 1;
        }

        m_u += 3;
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_small_limits() {
        let report = verify_structure(6i64).unwrap();
        assert!(report.passed(), "{report}");
        let report = verify_structure(22i64).unwrap();
        assert!(report.passed(), "{report}");
        assert_eq!(report.checked_range(), (1, 22));
    }

    #[test]
    fn structure_moderate_limit() {
        let report = verify_structure(3000i64).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn structure_rejects_tiny_limit() {
        assert!(matches!(
            verify_structure(5i64),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn repeats_below_22_are_exactly_the_witnessed_values() {
        let trace = Preset::B.spec::<i64>().unwrap().generate(40).unwrap();
        let repeated = trace.repeat_profile().repeated_values();
        let repeated_below_22: Vec<i64> = repeated.into_iter().filter(|&v| v <= 22).collect();
        assert_eq!(repeated_below_22, vec![6, 9, 12, 15, 17, 18, 21]);
    }

    #[test]
    fn uniqueness_small() {
        let report = verify_lemma_uniqueness(10_000i64).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn uniqueness_edge_cases_from_the_scan() {
        // 23 = a_3 qualifies only with k = 0, so it has no witness.
        assert_eq!(fastb::find_witness(23i64), None);
        // 50 = 1 * 27 + 23 has the single witness i = 3.
        assert_eq!(fastb::find_witness(50i64), Some(WitnessPair { k: 1, i: 3 }));
        let report = verify_lemma_uniqueness(50i64).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn r_identities_small() {
        let report = verify_r_identities(10_000i64).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn r_identity_hand_cases() {
        // m = 18: 17 has a witness, so 6 + R(6) = R(18) + 1, giving R(18) = 5.
        assert!(fastb::find_witness(17i64).is_some());
        assert_eq!(fastb::r_total(6i64), 0);
        assert_eq!(fastb::r_total(18i64), 5);
        // m = 6: 5 has no witness, so 2 + R(2) = R(6) + 2, giving R(6) = 0.
        assert!(fastb::find_witness(5i64).is_none());
        assert_eq!(fastb::r_total(2i64), 0);
        assert_eq!(fastb::r_total(6i64), 0);
        // m = 54, i = 2: 53 = 5 * 9 + 8 has witness i = 2, so R(54,2) = R(18,1) + 1.
        assert_eq!(fastb::find_witness(53i64), Some(WitnessPair { k: 5, i: 2 }));
        assert_eq!(fastb::r_partial(54i64, 2), fastb::r_partial(18i64, 1) + 1);
        assert_eq!(fastb::r_partial(54i64, 2), 5);
    }

    #[test]
    fn density_points() {
        let profile = density_profile(&[1i64, 28]);
        assert_eq!(profile[0].ratio(), (1, 1));
        assert_eq!(profile[0].deviation(), (1, 3));
        assert_eq!(profile[1].ratio(), (21, 28));
        assert_eq!(profile[1].deviation(), (7, 84)); // |63 - 56| / 84 = 1/12
        assert!((profile[1].deviation_f64() - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn deviation_comparison_is_exact() {
        let a = DensityPoint { n: 12i64, b: 8 }; // exactly 2/3
        let b = DensityPoint { n: 3i64, b: 2 }; // exactly 2/3
        assert_eq!(deviation_cmp(&a, &b), Ordering::Equal);
        let c = DensityPoint { n: 3i64, b: 3 };
        assert_eq!(deviation_cmp(&a, &c), Ordering::Less);
        assert!(deviations_nonincreasing(&[c, a, b]));
        assert!(!deviations_nonincreasing(&[a, c]));
        assert!(a.deviation_below(1, 1_000_000));
        assert!(!c.deviation_below(1, 3));
    }
}
