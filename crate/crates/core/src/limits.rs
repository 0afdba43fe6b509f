/// Hard caps that guard exponential constructions and exhaustive searches.
///
/// Exceeding a cap is always an error; nothing is silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest vector dimension any construction may produce.
    pub max_dimension: usize,
    /// Largest search space an exhaustive oracle will enumerate.
    pub max_search: u128,
}

impl Limits {
    pub const DEFAULT_MAX_DIMENSION: usize = 1_000_000;
    pub const DEFAULT_MAX_SEARCH: u128 = 10_000_000;

    pub fn with_max_dimension(mut self, max_dimension: usize) -> Self {
        self.max_dimension = max_dimension;
        self
    }

    pub fn with_max_search(mut self, max_search: u128) -> Self {
        self.max_search = max_search;
        self
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dimension: Self::DEFAULT_MAX_DIMENSION,
            max_search: Self::DEFAULT_MAX_SEARCH,
        }
    }
}

/// `base^exp` or `None` on overflow past `cap`.
pub(crate) fn checked_pow_capped(base: u128, exp: u32, cap: u128) -> Option<u128> {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}

/// `base^exp`, saturating at `u128::MAX`.
pub(crate) fn uncapped_pow(base: u128, exp: u32) -> u128 {
    base.saturating_pow(exp)
}
