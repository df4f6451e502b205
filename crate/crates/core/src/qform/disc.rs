use std::fmt;

use serde::Serialize;

use crate::arith::factorize;
use crate::error::{Error, Result};

/// A negative quadratic discriminant `D = f² · d_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Disc {
    value: i64,
    fundamental: i64,
    conductor: u64,
}

impl fmt::Display for Disc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Disc {
    pub fn new(value: i64) -> Result<Self> {
        if value >= 0 {
            return Err(Error::Discriminant {
                value,
                reason: "must be negative",
            });
        }
        if !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::Discriminant {
                value,
                reason: "must be congruent to 0 or 1 mod 4",
            });
        }
        if value < -(1i64 << 62) {
            return Err(Error::Discriminant {
                value,
                reason: "magnitude too large",
            });
        }
        let mut squarefree: i64 = -1;
        let mut square_root: u64 = 1;
        for (q, e) in factorize(value.unsigned_abs()) {
            if e % 2 == 1 {
                squarefree *= q as i64;
            }
            square_root *= q.pow(e / 2);
        }
        let fundamental = if squarefree.rem_euclid(4) == 1 {
            squarefree
        } else {
            4 * squarefree
        };
        let conductor = if fundamental == squarefree {
            square_root
        } else {
            square_root / 2
        };
        debug_assert_eq!(
            fundamental as i128 * (conductor as i128).pow(2),
            value as i128
        );
        Ok(Disc {
            value,
            fundamental,
            conductor,
        })
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    /// Discriminant of the maximal order of the same field.
    pub fn fundamental(&self) -> i64 {
        self.fundamental
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_fundamental(&self) -> bool {
        self.conductor == 1
    }

    /// Number of roots of unity in the maximal order.
    pub fn roots_of_unity(&self) -> u64 {
        match self.fundamental {
            -3 => 6,
            -4 => 4,
            _ => 2,
        }
    }
}
