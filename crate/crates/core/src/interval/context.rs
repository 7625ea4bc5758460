//! Process-wide working precision and the linear/log-domain cutoff.

use astro_float::Consts;
use std::cell::RefCell;
use std::sync::atomic::{AtomicI32, AtomicUsize, Ordering};

/// Environment variable overriding the default working precision (bits).
pub const PRECISION_ENV: &str = "HYPCOB_PRECISION";

pub const DEFAULT_PRECISION: usize = 128;

/// Binary exponent above which endpoints switch to log-magnitude form.
/// 2^997 is roughly 1.3e300.
pub const DEFAULT_LOG_CUTOFF: i32 = 997;

/// Extra bits carried by transcendental kernels before the final outward rounding.
pub(crate) const GUARD_BITS: usize = 64;

static PRECISION: AtomicUsize = AtomicUsize::new(0);
static LOG_CUTOFF: AtomicI32 = AtomicI32::new(DEFAULT_LOG_CUTOFF);

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

/// Current working precision in bits (a multiple of 64).
pub fn precision() -> usize {
    let p = PRECISION.load(Ordering::Relaxed);
    if p != 0 {
        return p;
    }
    let from_env = std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&b| b >= 64)
        .unwrap_or(DEFAULT_PRECISION);
    let p = round_to_word(from_env);
    PRECISION.store(p, Ordering::Relaxed);
    p
}

/// Sets the working precision. Values are rounded up to a multiple of 64
/// and clamped below at 64.
pub fn set_precision(bits: usize) {
    PRECISION.store(round_to_word(bits.max(64)), Ordering::Relaxed);
}

pub fn log_cutoff() -> i32 {
    LOG_CUTOFF.load(Ordering::Relaxed)
}

/// Sets the binary exponent above which magnitudes are stored as logarithms.
pub fn set_log_cutoff(exponent: i32) {
    LOG_CUTOFF.store(exponent.clamp(16, 1 << 28), Ordering::Relaxed);
}

fn round_to_word(bits: usize) -> usize {
    bits.div_ceil(64) * 64
}

pub(crate) fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}
