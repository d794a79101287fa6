//! Nested recurrences of the Hofstadter family.
//!
//! The centerpiece is the three-term recurrence
//! `B(n) = B(n - B(n-1)) + B(n - B(n-2)) + B(n - B(n-3))` with initial
//! condition `B(i) = i` for `i <= 5`, whose terms grow slowly (consecutive
//! differences 0 or 1) and take every positive value either once or twice.
//! Which values repeat is decided by an explicit witness criterion, and that
//! structure yields an `O(log^2 n)` evaluator for `B(n)` that never touches
//! the recurrence.
//!
//! Modules:
//!
//! * [`engine`] — generic memoized evaluator for recurrences of the shape
//!   `S(n) = sum_j S(n - e_j - S(n - o_j))`, with death detection, named
//!   presets (Q, V, W, Conolly, B, B_k, ...), slowness checks and repeat
//!   profiles. This is the brute-force oracle everything else is checked
//!   against.
//! * [`fastb`] — the closed-form machinery for B: the auxiliary sequence
//!   `a_i`, witness pairs, the repeat counters `R(m, i)` / `R(m)`, the
//!   first-occurrence index map and the binary-search evaluator [`fastb::fast_b`].
//! * [`verify`] — machine checks that confront the closed forms with the
//!   naive oracle: repeat classification, witness uniqueness, the `R`
//!   identities and the 2/3 density profile.
//! * [`probe`] — the `B_k` generalizations with identity initial conditions:
//!   the forced step value, the plateau pattern, and the difference-2 jump
//!   that rules out slowness for every `k >= 4`.
//!
//! All arithmetic is exact. The crate is generic over the scalar via
//! [`SeqInt`] (any primitive signed integer); the [`Term`] alias fixes the
//! default `i64` used by the CLI.

pub mod engine;
mod error;
pub mod fastb;
mod int;
pub mod probe;
pub mod verify;

pub use engine::{
    Preset, RecurrenceSpec, RecurrenceTerm, RepeatProfile, SequenceTrace, SlownessReport,
    TraceStatus,
};
pub use error::{Error, Result};
pub use fastb::{fast_b, OccurrenceInfo, WitnessPair};
pub use int::SeqInt;
pub use probe::{JumpReport, PlateauCoordinates, ProbeConfig, ScanInit, ScanReport, ScanRow};
pub use verify::{DensityPoint, VerificationReport, Violation};

/// Default scalar for sequence terms: exact 64-bit signed arithmetic.
pub type Term = i64;

/// A recurrence specification over the default scalar.
pub type Spec = RecurrenceSpec<Term>;

/// A computed trace over the default scalar.
pub type Trace = SequenceTrace<Term>;
