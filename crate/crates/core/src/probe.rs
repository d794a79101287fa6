//! Probes of the k-term generalizations `B_k(n) = sum_{i=1}^k B_k(n - B_k(n-i))`
//! with identity initial conditions `B_k(i) = i` for `i <= N`.
//!
//! For any `N >= k` the first computed step is forced:
//! `B_k(N+1) = 1 + 2 + ... + k = (k^2+k)/2`. Slowness therefore requires
//! `N` to be `(k^2+k)/2 - 1` or `(k^2+k)/2` (both give the same sequence).
//! With that initial condition and `k >= 4`, the terms follow an explicit
//! plateau pattern until index `k^3/2 + k^2/2 + 2k + 1`, where the sequence
//! jumps by 2 and slowness dies. Only `k = 3` survives: the B-sequence.
//!
//! Throughout, `init_len` is the length of the identity initial condition,
//! and the *pattern base* is `(k^2+k)/2 = init_len + 1`, the quantity the
//! plateau and jump formulas are written in.

use std::fmt;

use crate::engine::{Preset, SequenceTrace, TraceStatus};
use crate::error::{Error, Result};
use crate::int::SeqInt;
use crate::verify::{VerificationReport, Violation};

/// `(k^2 + k) / 2`: the forced value of `B_k(N+1)`, and the pattern base.
pub fn step_value(k: u32) -> u64 {
    let k = k as u64;
    k * (k + 1) / 2
}

/// The initial-condition length `(k^2+k)/2 - 1` used by the jump analysis.
pub fn jump_init_len(k: u32) -> u64 {
    step_value(k) - 1
}

/// Index of the difference-2 jump: `k^3/2 + k^2/2 + 2k + 1`.
///
/// Equals `base + (base - k + 1)(k + 1) + k` with `base = (k^2+k)/2`.
pub fn jump_index(k: u32) -> u64 {
    let k = k as u64;
    (k * k * k + k * k) / 2 + 2 * k + 1
}

/// A `B_k` probe: which `k`, and how long an identity initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeConfig {
    k: u32,
    init_len: u32,
}

impl ProbeConfig {
    pub fn new(k: u32, init_len: u32) -> Result<Self> {
        if k < 1 {
            return Err(Error::InvalidParams("B_k probe needs k >= 1".into()));
        }
        if init_len < k {
            return Err(Error::InvalidParams(format!(
                "B_k(N+1) is undefined unless N >= k; got k={k}, N={init_len}"
            )));
        }
        Ok(Self { k, init_len })
    }

    /// The configuration the jump analysis is stated for: `N = (k^2+k)/2 - 1`.
    pub fn for_jump_analysis(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParams(
                "the forced-step analysis needs k >= 2".into(),
            ));
        }
        Self::new(k, jump_init_len(k) as u32)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn init_len(&self) -> u32 {
        self.init_len
    }
}

/// Generate `B_k` via the recurrence engine.
pub fn bk_trace<T: SeqInt>(config: ProbeConfig, count: usize) -> Result<SequenceTrace<T>> {
    Preset::Bk {
        k: config.k,
        init_len: config.init_len,
    }
    .spec()?
    .generate(count)
}

/// One cell of the plateau pattern: index `base + q(k+1) + r` is predicted to
/// hold the value `base + qk + r - 1`, for `1 <= r <= k+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlateauCoordinates {
    pub q: i64,
    pub r: u32,
}

impl PlateauCoordinates {
    pub fn index(&self, k: u32) -> i64 {
        step_value(k) as i64 + self.q * (k as i64 + 1) + self.r as i64
    }

    pub fn predicted_value(&self, k: u32) -> i64 {
        step_value(k) as i64 + self.q * k as i64 + self.r as i64 - 1
    }
}

/// Check the forced first step: with `N = (k^2+k)/2 - 1`,
/// `B_k(N+1) = (k^2+k)/2`, one more than `B_k(N) = N`.
pub fn verify_step_value<T: SeqInt>(k: u32) -> Result<VerificationReport> {
    let config = ProbeConfig::for_jump_analysis(k)?;
    let n = config.init_len as usize;
    let trace = bk_trace::<T>(config, n + 1)?;
    let expected = step_value(k);

    let mut report = VerificationReport::new(
        format!("forced step value for k = {k}"),
        n as u64 + 1,
        n as u64 + 1,
    );
    match trace.get(n + 1) {
        Some(v) if v.to_u64() == Some(expected) => {}
        other => report.push(format!("B_{k}({})", n + 1), expected, format!("{other:?}")),
    }
    Ok(report)
}

/// Check every cell of the plateau pattern, plus the shifted run just before
/// the jump, against the generated trace.
///
/// The pattern covers `q = -1` (the tail of the initial condition and the
/// first computed term) through `q = base - k`, excluding the final cell
/// `(q, r) = (base - k, k + 1)`; after it, for `A = (base-k+1)(k+1)`, the
/// run `B_k(base + A + r) = base + (base-k+1)k + r - 1` holds for
/// `0 <= r <= k-2`, and the cell at `r = k-1` sits 2 below the pattern.
pub fn verify_plateau<T: SeqInt>(k: u32) -> Result<VerificationReport> {
    if k < 4 {
        return Err(Error::InvalidParams(format!(
            "the plateau pattern is stated for k >= 4, got {k}"
        )));
    }
    let config = ProbeConfig::for_jump_analysis(k)?;
    let base = step_value(k) as i64;
    let a_off = (base - k as i64 + 1) * (k as i64 + 1);
    let jump = jump_index(k);
    debug_assert_eq!(jump as i64, base + a_off + k as i64);

    let trace = bk_trace::<T>(config, jump as usize)?;
    if let TraceStatus::Died { at_index, .. } = trace.status() {
        return Err(Error::TraceDied { at_index });
    }

    let mut report = VerificationReport::new(
        format!("plateau pattern for k = {k}"),
        (base - k as i64) as u64,
        jump - 1,
    );
    let mut check = |index: i64, predicted: i64, what: &str| {
        let actual = trace.get(index as usize);
        if actual.and_then(|v| v.to_i64()) != Some(predicted) {
            report.push(
                format!("{what} at index {index}"),
                predicted,
                format!("{actual:?}"),
            );
        }
    };

    for q in -1..=(base - k as i64) {
        for r in 1..=k + 1 {
            if q == base - k as i64 && r == k + 1 {
                break;
            }
            let cell = PlateauCoordinates { q, r };
            check(cell.index(k), cell.predicted_value(k), "plateau");
        }
    }

    let run_base = base + (base - k as i64 + 1) * k as i64;
    for r in 0..=(k as i64 - 2) {
        check(base + a_off + r, run_base + r - 1, "pre-jump run");
    }
    check(
        base + a_off + k as i64 - 1,
        run_base + k as i64 - 3,
        "pre-jump step",
    );

    Ok(report)
}

/// The observed jump of `B_k` at index `k^3/2 + k^2/2 + 2k + 1`.
///
/// `difference` is expected to be exactly 2, and the trace's first slowness
/// violation is expected to sit at the jump itself. The violation index is
/// carried separately so an earlier violation (which would still disprove
/// slowness, just not where predicted) surfaces as data rather than failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpReport<T> {
    pub k: u32,
    pub init_len: u64,
    pub jump_index: u64,
    pub value_before: T,
    pub value_at: T,
    pub difference: T,
    pub first_slow_violation: Option<usize>,
}

impl<T: SeqInt> JumpReport<T> {
    /// Jump of exactly 2, and slowness indeed broken by that point.
    pub fn passed(&self) -> bool {
        self.difference == T::one() + T::one()
            && matches!(self.first_slow_violation, Some(v) if v as u64 <= self.jump_index)
    }
}

impl<T: SeqInt> fmt::Display for JumpReport<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "k = {}: B_k({}) = {}, B_k({}) = {} (difference {}), first slowness violation at {:?}",
            self.k,
            self.jump_index - 1,
            self.value_before,
            self.jump_index,
            self.value_at,
            self.difference,
            self.first_slow_violation,
        )
    }
}

/// Generate `B_k` through the predicted jump and report what sits there.
pub fn verify_jump<T: SeqInt>(k: u32) -> Result<JumpReport<T>> {
    if k < 4 {
        return Err(Error::InvalidParams(format!(
            "the jump is predicted for k >= 4, got {k}"
        )));
    }
    let config = ProbeConfig::for_jump_analysis(k)?;
    let jump = jump_index(k);
    let trace = bk_trace::<T>(config, jump as usize)?;
    if let TraceStatus::Died { at_index, .. } = trace.status() {
        return Err(Error::TraceDied { at_index });
    }
    let value_before = trace.get(jump as usize - 1).unwrap();
    let value_at = trace.get(jump as usize).unwrap();
    Ok(JumpReport {
        k,
        init_len: config.init_len as u64,
        jump_index: jump,
        value_before,
        value_at,
        difference: value_at - value_before,
        first_slow_violation: trace.check_slow().first_violation_index,
    })
}

/// How one scanned sequence was initialized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanInit {
    /// `B_k(i) = i` for `i <= init_len`.
    Identity { init_len: u32 },
    /// The all-ones initial condition (the classic Q-sequence, scanned for
    /// k = 2 because the identity-init variant is the same sequence shifted
    /// by one index).
    AllOnes,
}

impl fmt::Display for ScanInit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScanInit::Identity { init_len } => write!(f, "identity N={init_len}"),
            ScanInit::AllOnes => write!(f, "all-ones"),
        }
    }
}

/// Slowness outcome for one `(k, initial condition)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanRow {
    pub k: u32,
    pub init: ScanInit,
    pub is_slow: bool,
    pub first_violation_index: Option<usize>,
    pub died_at: Option<usize>,
}

/// Outcome of [`scan_only_slow`].
#[derive(Debug, Clone)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    pub violations: Vec<Violation>,
    /// Observations that do not contradict the claims (e.g. a slowness
    /// violation earlier than the predicted jump).
    pub findings: Vec<String>,
}

impl ScanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// Distinct `k` whose scanned sequences stayed slow.
    pub fn slow_ks(&self) -> Vec<u32> {
        let mut ks: Vec<u32> = self
            .rows
            .iter()
            .filter(|r| r.is_slow)
            .map(|r| r.k)
            .collect();
        ks.dedup();
        ks
    }
}

impl fmt::Display for ScanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            write!(f, "k = {} ({}): ", row.k, row.init)?;
            match (row.is_slow, row.first_violation_index) {
                (true, _) => write!(f, "slow")?,
                (false, Some(idx)) => write!(f, "not slow (violation at index {idx})")?,
                (false, None) => write!(f, "not slow")?,
            }
            if let Some(d) = row.died_at {
                write!(f, ", died at index {d}")?;
            }
            writeln!(f)?;
        }
        for finding in &self.findings {
            writeln!(f, "note: {finding}")?;
        }
        for v in &self.violations {
            writeln!(f, "VIOLATION {v}")?;
        }
        Ok(())
    }
}

/// Scan every `B_k` up to `k_max` for slowness.
///
/// Full traces are generated for the admissible initial conditions
/// (`N = (k^2+k)/2 - 1` and `N = (k^2+k)/2`, which generate the same
/// sequence), plus the all-ones Q-sequence for k = 2; every other `N >= k`
/// is ruled out by the forced first step `B_k(N+1) = (k^2+k)/2`, checked
/// arithmetically. The expectation encoded here: only k = 3 stays slow.
pub fn scan_only_slow<T: SeqInt>(k_max: u32, horizon: usize) -> Result<ScanReport> {
    if k_max < 4 {
        return Err(Error::InvalidParams(format!(
            "scan needs k_max >= 4, got {k_max}"
        )));
    }
    if (horizon as u64) < jump_index(k_max) {
        return Err(Error::InvalidParams(format!(
            "horizon {horizon} is below the k = {k_max} jump at {}",
            jump_index(k_max)
        )));
    }

    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut findings = Vec::new();

    let mut scan_trace = |k: u32, init: ScanInit, trace: &SequenceTrace<T>| -> ScanRow {
        let slow = trace.check_slow();
        let died_at = match trace.status() {
            TraceStatus::Alive => None,
            TraceStatus::Died { at_index, .. } => Some(at_index),
        };
        let row = ScanRow {
            k,
            init,
            is_slow: slow.is_slow(),
            first_violation_index: slow.first_violation_index,
            died_at,
        };
        rows.push(row);
        row
    };

    // k = 2: the Q-sequence proper, plus the two admissible identity inits.
    let q_trace = Preset::Q.spec::<T>()?.generate(horizon)?;
    let q_row = scan_trace(2, ScanInit::AllOnes, &q_trace);
    if q_row.is_slow {
        violations.push(Violation {
            location: "k = 2 (all-ones)".into(),
            expected: "not slow".into(),
            actual: "slow through horizon".into(),
        });
    }

    for k in 2..=k_max {
        let admissible = [step_value(k) - 1, step_value(k)];
        for n in admissible {
            let config = ProbeConfig::new(k, n as u32)?;
            let trace = bk_trace::<T>(config, horizon)?;
            let row = scan_trace(k, ScanInit::Identity { init_len: n as u32 }, &trace);
            match k {
                3 => {
                    if !row.is_slow || row.died_at.is_some() {
                        violations.push(Violation {
                            location: format!("k = 3 (identity N={n})"),
                            expected: "slow and alive through horizon".into(),
                            actual: format!("{row:?}"),
                        });
                    }
                }
                _ => {
                    if row.is_slow {
                        violations.push(Violation {
                            location: format!("k = {k} (identity N={n})"),
                            expected: "a slowness violation".into(),
                            actual: "slow through horizon".into(),
                        });
                    } else if k >= 4 {
                        let predicted = jump_index(k) as usize;
                        if row.first_violation_index != Some(predicted) {
                            findings.push(format!(
                                "k = {k}, N = {n}: first violation at {:?}, predicted jump at {predicted}",
                                row.first_violation_index
                            ));
                        }
                    }
                }
            }
        }

        // Any other N >= k fails at the very first computed term:
        // B_k(N+1) - B_k(N) = (k^2+k)/2 - N must land in {0, 1}.
        let sv = step_value(k);
        for n in (k as u64)..=(sv + k as u64) {
            let diff = sv as i64 - n as i64;
            let admissible = n == sv - 1 || n == sv;
            if !admissible && (diff == 0 || diff == 1) {
                violations.push(Violation {
                    location: format!("k = {k}, N = {n}"),
                    expected: "first-step criterion to rule this N out".into(),
                    actual: format!("B_k(N+1) - N = {diff}"),
                });
            }
        }
    }

    Ok(ScanReport {
        rows,
        violations,
        findings,
    })
}
