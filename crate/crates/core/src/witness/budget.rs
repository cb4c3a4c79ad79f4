use alloc::vec::Vec;

use crate::error::{Error, Result, SearchState};

/// Default number of work units a single search may spend.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// A work counter shared by the searches; one unit is one candidate fiber test.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: u64,
    spent: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(DEFAULT_BUDGET)
    }
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, spent: 0 }
    }

    pub fn unlimited() -> Self {
        Budget::new(u64::MAX)
    }

    pub fn spent(&self) -> u64 {
        self.spent
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.spent
    }

    /// Charges `units`; the prefix describes where the search stood.
    #[inline]
    pub fn charge(&mut self, units: u64, prefix: &[usize]) -> Result<()> {
        self.spent = self.spent.saturating_add(units);
        if self.spent > self.limit {
            return Err(Error::BudgetExceeded(SearchState { spent: self.spent, prefix: Vec::from(prefix) }));
        }
        Ok(())
    }
}
