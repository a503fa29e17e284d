use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported genus: mod-2 vectors are packed into a `u64`.
pub const MAX_GENUS: usize = 32;

/// Genus `g` of the closed surface. Homology has rank `2g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Genus(usize);

impl Genus {
    pub fn new(g: usize) -> Result<Self> {
        if g == 0 || g > MAX_GENUS {
            return Err(Error::InvalidGenus { got: g, max: MAX_GENUS });
        }
        Ok(Genus(g))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Rank of first homology, `2g`.
    pub fn dim(self) -> usize {
        2 * self.0
    }

    pub(crate) fn ensure_same(self, other: Genus) -> Result<()> {
        if self != other {
            return Err(Error::GenusMismatch { left: self.0, right: other.0 });
        }
        Ok(())
    }
}

impl TryFrom<usize> for Genus {
    type Error = Error;

    fn try_from(g: usize) -> Result<Self> {
        Genus::new(g)
    }
}

impl From<Genus> for usize {
    fn from(g: Genus) -> usize {
        g.0
    }
}

impl std::fmt::Display for Genus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Coordinate index of `x_i` (1-based `i`) in the interleaved basis.
pub fn x_index(i: usize) -> usize {
    2 * (i - 1)
}

/// Coordinate index of `y_i` (1-based `i`) in the interleaved basis.
pub fn y_index(i: usize) -> usize {
    2 * (i - 1) + 1
}
