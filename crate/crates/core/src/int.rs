use std::fmt;

use num_traits::{FromPrimitive, PrimInt, Signed};

/// Scalar type for sequence terms.
///
/// Everything in this crate is exact integer arithmetic, so the scalar is any
/// primitive signed integer: `i64` covers every documented use (values up to
/// 2^62), `i128` buys headroom beyond that. Signedness matters because death
/// diagnostics and slowness differences can be negative.
pub trait SeqInt:
    PrimInt + Signed + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Convert a 1-based index into the scalar domain.
    fn from_index(n: usize) -> Option<Self> {
        Self::from_usize(n)
    }

    /// Convert a scalar back into an index, if it fits.
    fn as_index(self) -> Option<usize> {
        self.to_usize()
    }
}

impl<T> SeqInt for T where
    T: PrimInt + Signed + FromPrimitive + fmt::Debug + fmt::Display + Send + Sync + 'static
{
}
