//! Exact closed-form machinery for the slow three-term B-sequence.
//!
//! The structure of B is governed by the auxiliary sequence
//! `a_1 = 3`, `a_i = 3 a_{i-1} - 1`, in closed form `a_i = (5 * 3^(i-1) + 1) / 2`.
//! A value `m` appears twice in B exactly when `m = k * 3^i + a_i` for some
//! `k >= 1`, `i >= 1` (a *witness pair*, unique when it exists); every other
//! value appears once. Counting the repeated values below `m`,
//!
//! ```text
//! R(m, i) = max(0, floor((m - a_i - 1) / 3^i)),    R(m) = sum_i R(m, i),
//! ```
//!
//! pins the first occurrence of `m` to index `m + R(m)`. Because
//! `f(m) = m + R(m)` is strictly increasing, `B(n)` is the largest `m` with
//! `f(m) <= n`, found by binary search: `O(log n)` probes, each summing the
//! logarithmically many nonzero `R(m, i)` terms, `O(log^2 n)` in total.
//!
//! Everything here is pure integer arithmetic on the scalar; none of it
//! touches the recurrence engine. The engine is the independent oracle these
//! formulas are verified against (see [`crate::verify`]).

use crate::int::SeqInt;

/// A witness pair `(k, i)`: certifies `m = k * 3^i + a_i`, which makes the
/// value `m` appear exactly twice in the B-sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WitnessPair<T> {
    pub k: T,
    pub i: u32,
}

/// Where and how often one value occurs in the B-sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OccurrenceInfo<T> {
    pub value: T,
    /// Index of the first occurrence: `m + R(m)`.
    pub first_index: T,
    /// 1 or 2; it is 2 exactly when `witness` is present.
    pub multiplicity: u8,
    pub witness: Option<WitnessPair<T>>,
}

/// Iterator over `(i, a_i, 3^i)`, stopping before either value overflows.
///
/// Terms past the stopping point cannot matter: both `a_i` and `3^i` exceed
/// every representable `m`, so they contribute neither witnesses nor nonzero
/// `R(m, i)` terms.
struct AuxIter<T> {
    i: u32,
    a: Option<T>,
    pow3: Option<T>,
}

fn aux_iter<T: SeqInt>() -> AuxIter<T> {
    AuxIter {
        i: 1,
        a: T::from_u8(3),
        pow3: T::from_u8(3),
    }
}

impl<T: SeqInt> Iterator for AuxIter<T> {
    type Item = (u32, T, T);

    fn next(&mut self) -> Option<(u32, T, T)> {
        let three = T::from_u8(3)?;
        let item = (self.i, self.a?, self.pow3?);
        self.i += 1;
        self.a = self
            .a
            .and_then(|a| a.checked_mul(&three))
            .map(|a| a - T::one());
        self.pow3 = self.pow3.and_then(|p| p.checked_mul(&three));
        Some(item)
    }
}

/// The auxiliary sequence `a_i = (5 * 3^(i-1) + 1) / 2`, computed by iterating
/// `a_1 = 3`, `a_i = 3 a_{i-1} - 1`. `None` when `a_i` overflows the scalar.
///
/// Panics if `i == 0`.
pub fn aux_a<T: SeqInt>(i: u32) -> Option<T> {
    assert!(i >= 1, "aux_a is defined for i >= 1");
    aux_iter::<T>().nth(i as usize - 1).map(|(_, a, _)| a)
}

/// The unique witness pair for `m`, if `m = k * 3^i + a_i` has a solution
/// with `k >= 1`, `i >= 1`.
///
/// Scans `i` upward while `a_i + 3^i <= m` (at most `log_3 m` steps) and
/// tests `m = a_i (mod 3^i)`; the loop bound makes `k >= 1` automatic.
///
/// Panics if `m < 1`.
pub fn find_witness<T: SeqInt>(m: T) -> Option<WitnessPair<T>> {
    assert!(m >= T::one(), "find_witness is defined for m >= 1");
    for (i, a, pow3) in aux_iter::<T>() {
        match a.checked_add(&pow3) {
            Some(floor) if floor <= m => {
                if (m - a) % pow3 == T::zero() {
                    return Some(WitnessPair {
                        k: (m - a) / pow3,
                        i,
                    });
                }
            }
            // a_i + 3^i is increasing, so no later i can qualify either.
            _ => break,
        }
    }
    None
}

/// `R(m, i) = max(0, floor((m - a_i - 1) / 3^i))`: the number of witness
/// pairs `(k, i)` at this `i` for values less than `m`.
///
/// Panics if `m < 1` or `i < 1`.
pub fn r_partial<T: SeqInt>(m: T, i: u32) -> T {
    assert!(m >= T::one(), "r_partial is defined for m >= 1");
    assert!(i >= 1, "r_partial is defined for i >= 1");
    match aux_iter::<T>().nth(i as usize - 1) {
        Some((_, a, pow3)) if a < m => (m - a - T::one()) / pow3,
        // a_i >= m (or unrepresentable, hence certainly >= m): no pairs below m.
        _ => T::zero(),
    }
}

/// `R(m) = sum_i R(m, i)`: the total number of repeated values less than `m`.
/// Only the logarithmically many `i` with `a_i + 1 < m` contribute.
///
/// Panics if `m < 1`.
pub fn r_total<T: SeqInt>(m: T) -> T {
    assert!(m >= T::one(), "r_total is defined for m >= 1");
    let mut total = T::zero();
    for (_, a, pow3) in aux_iter::<T>() {
        if a + T::one() >= m {
            break;
        }
        total = total + (m - a - T::one()) / pow3;
    }
    total
}

/// Index of the first occurrence of `m` in the B-sequence: `m + R(m)`.
///
/// Panics if `m < 1`, or if the index overflows the scalar.
pub fn first_index<T: SeqInt>(m: T) -> T {
    m.checked_add(&r_total(m))
        .expect("first occurrence index overflows the scalar")
}

/// First index, multiplicity and witness of `m`, bundled.
pub fn occurrence_info<T: SeqInt>(m: T) -> OccurrenceInfo<T> {
    let witness = find_witness(m);
    OccurrenceInfo {
        value: m,
        first_index: first_index(m),
        multiplicity: if witness.is_some() { 2 } else { 1 },
        witness,
    }
}

/// `B(n)`, evaluated in `O(log^2 n)` without running the recurrence.
///
/// Binary search for the largest `m` with `m + R(m) <= n`, sound because
/// `f(m) = m + R(m)` is strictly increasing with consecutive gaps of 1 or 2.
/// For `n <= 5` the initial condition answers directly.
///
/// Panics if `n < 1`.
pub fn fast_b<T: SeqInt>(n: T) -> T {
    assert!(n >= T::one(), "fast_b is defined for n >= 1");
    if n <= T::from_u8(5).unwrap() {
        return n;
    }
    let two = T::one() + T::one();
    let mut lo = T::one();
    let mut hi = n;
    // Invariant: f(lo) <= n < f(hi + 1).
    while lo < hi {
        let mid = lo + (hi - lo + T::one()) / two;
        let fits = match mid.checked_add(&r_total(mid)) {
            Some(f) => f <= n,
            None => false,
        };
        if fits {
            lo = mid;
        } else {
            hi = mid - T::one();
        }
    }
    lo
}
