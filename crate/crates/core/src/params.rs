use std::fmt;

use crate::error::{Error, Result};

/// Dimension count `n`, arity `k` and root count `r` shared by every value
/// in a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    k: usize,
    r: usize,
}

impl Params {
    pub fn new(n: usize, k: usize, r: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams(format!(
                "n must be at least 1, got {n}"
            )));
        }
        if k < 2 {
            return Err(Error::InvalidParams(format!(
                "k must be at least 2, got {k}"
            )));
        }
        // digits are written as single characters in every literal syntax
        if k > 10 {
            return Err(Error::InvalidParams(format!(
                "k must be at most 10, got {k}"
            )));
        }
        if r < 1 {
            return Err(Error::InvalidParams(format!(
                "r must be at least 1, got {r}"
            )));
        }
        Ok(Params { n, k, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub(crate) fn check_same(&self, other: &Params) -> Result<()> {
        if self != other {
            return Err(Error::ParamMismatch(format!("{self} vs {other}")));
        }
        Ok(())
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={} k={} r={}", self.n, self.k, self.r)
    }
}
