use std::sync::atomic::{AtomicU64, Ordering};

/// Per-run oracle query counters.
///
/// Counters only ever grow. A run that needs a clean slate gets a fresh ledger.
#[derive(Debug, Default)]
pub struct QueryLedger {
    value: AtomicU64,
    independence: AtomicU64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LedgerSnapshot {
    pub value_queries: u64,
    pub independence_queries: u64,
}

impl LedgerSnapshot {
    /// Counter growth from `earlier` to `self`.
    pub fn since(&self, earlier: &LedgerSnapshot) -> LedgerSnapshot {
        LedgerSnapshot {
            value_queries: self.value_queries - earlier.value_queries,
            independence_queries: self.independence_queries - earlier.independence_queries,
        }
    }
}

impl QueryLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn value_queries(&self) -> u64 {
        self.value.load(Ordering::Relaxed)
    }

    pub fn independence_queries(&self) -> u64 {
        self.independence.load(Ordering::Relaxed)
    }

    pub fn snapshot(&self) -> LedgerSnapshot {
        LedgerSnapshot {
            value_queries: self.value_queries(),
            independence_queries: self.independence_queries(),
        }
    }

    pub(crate) fn charge_value(&self) {
        self.value.fetch_add(1, Ordering::Relaxed);
    }

    pub(crate) fn charge_independence(&self) {
        self.independence.fetch_add(1, Ordering::Relaxed);
    }
}
