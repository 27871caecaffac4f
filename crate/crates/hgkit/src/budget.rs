//! Enumeration caps shared by the exact counters and exhaustive searches.

use crate::error::{Error, Result};

/// Default cap on enumeration-space sizes (tuple spaces, search spaces).
pub const DEFAULT_BUDGET: u128 = 1 << 26;

/// Current cap. The `HW_BUDGET` environment variable overrides the default;
/// unparseable values fall back to the default.
pub fn enumeration_budget() -> u128 {
    match std::env::var("HW_BUDGET") {
        Ok(s) => s.trim().parse().unwrap_or(DEFAULT_BUDGET),
        Err(_) => DEFAULT_BUDGET,
    }
}

/// `base^exp`, saturating at `u128::MAX` instead of overflowing.
pub fn pow_saturating(base: u128, exp: u32) -> u128 {
    base.checked_pow(exp).unwrap_or(u128::MAX)
}

/// Errors out with `BudgetExceeded` when `needed` is over the current cap.
pub fn check_budget(task: &'static str, needed: u128) -> Result<()> {
    let cap = enumeration_budget();
    if needed > cap {
        Err(Error::BudgetExceeded { task, needed, cap })
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_saturates() {
        assert_eq!(pow_saturating(2, 10), 1024);
        assert_eq!(pow_saturating(u128::MAX, 2), u128::MAX);
        assert_eq!(pow_saturating(0, 3), 0);
        assert_eq!(pow_saturating(7, 0), 1);
    }

    #[test]
    fn default_budget_allows_desk_scale() {
        assert!(check_budget("test", 1 << 20).is_ok());
        let err = check_budget("test", u128::MAX).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
    }
}
