//! Piece-count ceiling for iterated compositions.

pub const DEFAULT_MAX_PIECES: usize = 100_000;
pub const BUDGET_ENV: &str = "PCDYN_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("piece budget exceeded: {pieces} pieces, limit {limit}")]
pub struct BudgetExceeded {
    pub pieces: usize,
    pub limit: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_pieces: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_pieces: DEFAULT_MAX_PIECES }
    }
}

impl Budget {
    /// Reads PCDYN_BUDGET; unset or unparsable values fall back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(|max_pieces| Budget { max_pieces })
            .unwrap_or_default()
    }

    pub fn check(&self, pieces: usize) -> Result<(), BudgetExceeded> {
        if pieces > self.max_pieces {
            Err(BudgetExceeded { pieces, limit: self.max_pieces })
        } else {
            Ok(())
        }
    }
}
