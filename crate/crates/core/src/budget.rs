use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Limits for exhaustive searches.
///
/// Searches that run out of budget fail with [`Error::BudgetExceeded`]; a
/// definitive negative (`Ok(None)`) is only returned after the whole search
/// space was enumerated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    /// Largest cycle-space dimension an enumeration will accept.
    pub max_dimension: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { max_nodes: None, max_seconds: None, max_dimension: 24 }
    }
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        Self::default()
    }

    pub fn nodes(max_nodes: u64) -> Self {
        SearchBudget { max_nodes: Some(max_nodes), ..Self::default() }
    }

    pub fn check_dimension(&self, dimension: usize) -> Result<()> {
        if dimension > self.max_dimension || dimension >= 63 {
            Err(Error::DimensionTooLarge { dimension, cap: self.max_dimension.min(62) })
        } else {
            Ok(())
        }
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter {
            nodes: 0,
            max_nodes: self.max_nodes,
            deadline: self.max_seconds.map(|s| Instant::now() + Duration::from_secs_f64(s)),
        }
    }
}

/// Counts search nodes against a budget.
pub(crate) struct Meter {
    pub(crate) nodes: u64,
    max_nodes: Option<u64>,
    deadline: Option<Instant>,
}

impl Meter {
    #[inline]
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.max_nodes.is_some_and(|m| self.nodes > m) {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        if self.nodes % 1024 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(Error::BudgetExceeded { nodes: self.nodes });
        }
        Ok(())
    }
}
