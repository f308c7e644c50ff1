use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Comparison of a quantity against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Cmp {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
}

impl Cmp {
    pub const ALL: [Cmp; 6] = [Cmp::Ge, Cmp::Le, Cmp::Gt, Cmp::Lt, Cmp::Eq, Cmp::Ne];

    /// Whether a quantity of the given sign satisfies the comparison.
    pub fn holds(self, sign: i8) -> bool {
        match self {
            Cmp::Ge => sign >= 0,
            Cmp::Le => sign <= 0,
            Cmp::Gt => sign > 0,
            Cmp::Lt => sign < 0,
            Cmp::Eq => sign == 0,
            Cmp::Ne => sign != 0,
        }
    }

    /// Bitmask over the signs {-, 0, +} (bits 0, 1, 2) allowed by the comparison.
    pub fn mask(self) -> u8 {
        (0..3).filter(|&b| self.holds(b as i8 - 1)).fold(0, |m, b| m | (1 << b))
    }

    /// The comparison obtained by negating the compared quantity.
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Ge => Cmp::Le,
            Cmp::Le => Cmp::Ge,
            Cmp::Gt => Cmp::Lt,
            Cmp::Lt => Cmp::Gt,
            c => c,
        }
    }

    /// Logical complement.
    pub fn negate(self) -> Cmp {
        match self {
            Cmp::Ge => Cmp::Lt,
            Cmp::Le => Cmp::Gt,
            Cmp::Gt => Cmp::Le,
            Cmp::Lt => Cmp::Ge,
            Cmp::Eq => Cmp::Ne,
            Cmp::Ne => Cmp::Eq,
        }
    }

    /// Inverse of [`Cmp::mask`] for masks expressible as a single comparison.
    pub fn from_mask(mask: u8) -> Option<Cmp> {
        Cmp::ALL.into_iter().find(|c| c.mask() == mask)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Ge => ">=",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Lt => "<",
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
        }
    }
}

impl fmt::Display for Cmp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Cmp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Cmp::ALL
            .into_iter()
            .find(|c| c.symbol() == s.trim())
            .ok_or_else(|| Error::parse(format!("unknown comparator `{s}`")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks() {
        assert_eq!(Cmp::Ge.mask(), 0b110);
        assert_eq!(Cmp::Ne.mask(), 0b101);
        for c in Cmp::ALL {
            assert_eq!(Cmp::from_mask(c.mask()), Some(c));
            assert_eq!(c.negate().mask(), !c.mask() & 0b111);
            assert_eq!(c.flip().flip(), c);
        }
        assert_eq!(Cmp::from_mask(0), None);
    }
}
