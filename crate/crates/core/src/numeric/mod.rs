//! Arbitrary-precision real/complex arithmetic and truncated Taylor series.

mod analytic;
mod complex;
mod float;
mod jet;
mod precision;

pub use analytic::Analytic;
pub use complex::BigComplex;
pub use float::BigFloat;
pub use jet::{Jet, DEFAULT_JET_ORDER};
pub use precision::{PrecisionContext, DEFAULT_GUARD_DIGITS};

/// Number of leading decimal digits on which `a` and `b` agree:
/// -log10(|a - b| / |b|), capped at `cap`.
pub fn digits_agreed(a: &BigComplex, b: &BigComplex, cap: u32) -> u32 {
    let diff = (a - b).abs();
    if diff.is_zero() {
        return cap;
    }
    let scale = b.abs();
    let rel = if scale.is_zero() {
        -diff.log10_abs()
    } else {
        scale.log10_abs() - diff.log10_abs()
    };
    if rel <= 0.0 {
        0
    } else {
        (rel.floor() as u32).min(cap)
    }
}
