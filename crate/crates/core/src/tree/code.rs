use crate::error::{domain, Result};

/// Edge choices `(e_4, ..., e_n)` with `1 <= e_k <= 2k - 5`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct InsertionCode {
    choices: Vec<u32>,
}

impl InsertionCode {
    pub fn new(choices: Vec<u32>) -> Result<Self> {
        for (pos, &e) in choices.iter().enumerate() {
            let leaf = pos + 4;
            let edges = 2 * leaf - 5;
            if e < 1 || e as usize > edges {
                return Err(domain!(
                    "choice for leaf {leaf} must lie in [1, {edges}], got {e}"
                ));
            }
        }
        Ok(Self { choices })
    }

    /// Skips range validation; [`decode`](super::decode) still checks.
    pub fn new_unchecked(choices: Vec<u32>) -> Self {
        Self { choices }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn choices(&self) -> &[u32] {
        &self.choices
    }

    pub fn len(&self) -> usize {
        self.choices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.choices.is_empty()
    }

    /// Number of leaves of the tree this code builds.
    pub fn leaves(&self) -> usize {
        self.choices.len() + 3
    }
}
