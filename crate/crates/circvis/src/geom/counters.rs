//! Global counter of geometric primitive calls, used to measure how much
//! low-level work a query performs.

use std::sync::atomic::{AtomicU64, Ordering};

static PRIMITIVE_CALLS: AtomicU64 = AtomicU64::new(0);

/// Records one primitive call. Called by side tests, point parametrization,
/// arc constructions, intersections and tangency solves.
#[inline]
pub fn bump() {
    PRIMITIVE_CALLS.fetch_add(1, Ordering::Relaxed);
}

/// Current total of primitive calls in this process.
pub fn snapshot() -> u64 {
    PRIMITIVE_CALLS.load(Ordering::Relaxed)
}

/// Calls performed since an earlier `snapshot`.
pub fn since(earlier: u64) -> u64 {
    snapshot().wrapping_sub(earlier)
}
