use std::time::{Duration, Instant};

use crate::error::{Error, Result};

/// Explicit resource caps shared by every potentially unbounded computation.
///
/// Hitting a cap is always reported as [`Error::ResourceLimit`]; nothing is
/// silently truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest total degree allowed for any polynomial produced while
    /// extending transitions or completing a Gröbner basis.
    pub max_degree: u32,
    /// Largest number of levels of the ideal chain explored by zeroness.
    pub max_ideal_levels: usize,
    /// Largest number of term nodes allocated by one extension step.
    pub max_term_nodes: u64,
    /// Largest number of critical pairs treated by a single Buchberger run.
    pub max_pairs: usize,
    /// Wall-clock deadline; `None` means no deadline.
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_degree: 64,
            max_ideal_levels: 32,
            max_term_nodes: 1_000_000,
            max_pairs: 200_000,
            deadline: None,
        }
    }
}

impl Limits {
    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.deadline = Some(Instant::now() + timeout);
        self
    }

    pub(crate) fn check_deadline(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::ResourceLimit("timeout".into())),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_degree(&self, degree: u32) -> Result<()> {
        if degree > self.max_degree {
            Err(Error::ResourceLimit(format!(
                "polynomial degree {degree} exceeds max_degree {}",
                self.max_degree
            )))
        } else {
            Ok(())
        }
    }
}
