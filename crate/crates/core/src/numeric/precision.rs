use std::sync::OnceLock;

use super::float::BigFloat;

/// log2(10), rounded up in the last place.
const LOG2_10: f64 = 3.321_928_094_887_362_5;

/// Extra bits carried beyond `target + guard` decimal digits so that
/// tolerances expressed in decimal digits stay reachable after rounding.
const SLACK_BITS: u32 = 16;

pub const DEFAULT_GUARD_DIGITS: u32 = 30;

/// Target decimal digits plus guard digits.
///
/// A context is immutable once built. Every numeric routine receives one
/// explicitly; values created under it carry its working precision in bits.
#[derive(Debug, Clone)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
    pi: OnceLock<BigFloat>,
}

impl PrecisionContext {
    pub fn new(target_digits: u32) -> Self {
        Self::with_guard(target_digits, DEFAULT_GUARD_DIGITS)
    }

    pub fn with_guard(target_digits: u32, guard_digits: u32) -> Self {
        assert!(target_digits > 0, "target_digits must be positive");
        assert!(guard_digits > 0, "guard_digits must be positive");
        Self {
            target_digits,
            guard_digits,
            pi: OnceLock::new(),
        }
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    /// target + guard.
    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    pub fn working_bits(&self) -> u32 {
        (self.working_digits() as f64 * LOG2_10).ceil() as u32 + SLACK_BITS
    }

    /// Same target, guard digits doubled.
    pub fn doubled_guard(&self) -> Self {
        Self::with_guard(self.target_digits, self.guard_digits * 2)
    }

    pub fn with_target(&self, target_digits: u32) -> Self {
        Self::with_guard(target_digits, self.guard_digits)
    }

    pub fn pi(&self) -> &BigFloat {
        self.pi.get_or_init(|| BigFloat::pi(self.working_bits()))
    }

    /// 10^(-working digits): the convergence tolerance of iterative kernels.
    pub fn working_eps(&self) -> BigFloat {
        BigFloat::pow10(-(self.working_digits() as i64), self.working_bits())
    }

    /// 10^(-target digits).
    pub fn target_eps(&self) -> BigFloat {
        BigFloat::pow10(-(self.target_digits as i64), self.working_bits())
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::zero(self.working_bits())
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.working_bits())
    }

    pub fn ratio(&self, num: i64, den: i64) -> BigFloat {
        BigFloat::from_ratio_i64(num, den, self.working_bits())
    }
}
