use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_NODES: u64 = 100_000_000;
pub const DEFAULT_MAX_SECONDS: u64 = 300;

/// Node and wall-clock limits for exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_nodes: DEFAULT_MAX_NODES,
            max_time: Duration::from_secs(DEFAULT_MAX_SECONDS),
        }
    }
}

impl Budget {
    pub fn new(max_nodes: u64, max_seconds: u64) -> Self {
        Budget {
            max_nodes,
            max_time: Duration::from_secs(max_seconds),
        }
    }

    pub fn unlimited() -> Self {
        Budget {
            max_nodes: u64::MAX,
            max_time: Duration::from_secs(u64::MAX / 4),
        }
    }

    pub(crate) fn meter(&self, operation: &'static str) -> Meter {
        Meter {
            operation,
            budget: *self,
            start: Instant::now(),
            nodes: 0,
        }
    }
}

/// Running counter checked by search loops.
pub(crate) struct Meter {
    operation: &'static str,
    budget: Budget,
    start: Instant,
    pub nodes: u64,
}

impl Meter {
    #[inline]
    pub fn tick(&mut self, found: u64) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes
            || (self.nodes & 0xffff == 0 && self.start.elapsed() > self.budget.max_time)
        {
            return Err(Error::BudgetExceeded {
                operation: self.operation,
                nodes: self.nodes,
                found,
            });
        }
        Ok(())
    }
}
