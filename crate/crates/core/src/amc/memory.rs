use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::realalg::{fmt_rat, parse_rat, Rat};

/// Absolute memory block. `Shared` holds the input; `Aux` is the second
/// public block used for fresh real variables; `Private(p)` belongs to
/// processor `p >= 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockId {
    Shared,
    Aux,
    Private(u16),
}

impl BlockId {
    pub fn is_public(self) -> bool {
        !matches!(self, BlockId::Private(_))
    }
}

/// A memory cell. Renders as `X3`, `A3`, or `Y3@2` (private cell 3 of processor 2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Loc {
    pub block: BlockId,
    pub index: u64,
}

impl Loc {
    pub fn shared(index: u64) -> Self {
        Loc {
            block: BlockId::Shared,
            index,
        }
    }

    pub fn aux(index: u64) -> Self {
        Loc {
            block: BlockId::Aux,
            index,
        }
    }

    pub fn private(proc: u16, index: u64) -> Self {
        Loc {
            block: BlockId::Private(proc),
            index,
        }
    }
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.block {
            BlockId::Shared => write!(f, "X{}", self.index),
            BlockId::Aux => write!(f, "A{}", self.index),
            BlockId::Private(p) => write!(f, "Y{}@{p}", self.index),
        }
    }
}

impl FromStr for Loc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::parse(format!("bad cell `{s}`"));
        let mut chars = s.chars();
        let head = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str();
        match head {
            'X' => Ok(Loc::shared(rest.parse().map_err(|_| bad())?)),
            'A' => Ok(Loc::aux(rest.parse().map_err(|_| bad())?)),
            'Y' => {
                let (idx, proc) = rest.split_once('@').unwrap_or((rest, "1"));
                let proc: u16 = proc.parse().map_err(|_| bad())?;
                if proc == 0 {
                    return Err(bad());
                }
                Ok(Loc::private(proc, idx.parse().map_err(|_| bad())?))
            }
            _ => Err(bad()),
        }
    }
}

impl Serialize for Loc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Loc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Finitely supported memory: unset cells read as zero and zeros are not stored.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Memory {
    cells: BTreeMap<Loc, Rat>,
}

impl Memory {
    pub fn new() -> Self {
        Memory::default()
    }

    /// Shared block initialised with the given values at indices 0, 1, ...
    pub fn from_shared(values: &[Rat]) -> Self {
        let mut m = Memory::new();
        for (i, v) in values.iter().enumerate() {
            m.set(Loc::shared(i as u64), v.clone());
        }
        m
    }

    pub fn get(&self, loc: Loc) -> Rat {
        self.cells.get(&loc).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, loc: Loc, v: Rat) {
        if v.is_zero() {
            self.cells.remove(&loc);
        } else {
            self.cells.insert(loc, v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Loc, &Rat)> {
        self.cells.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = Loc> + '_ {
        self.cells.keys().copied()
    }

    /// Restriction to one block.
    pub fn block(&self, b: BlockId) -> BTreeMap<u64, Rat> {
        self.cells
            .iter()
            .filter(|(l, _)| l.block == b)
            .map(|(l, v)| (l.index, v.clone()))
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.cells.values().all(|v| v.is_integer())
    }
}

impl fmt::Debug for Memory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.cells.iter().map(|(l, v)| (l.to_string(), fmt_rat(v))))
            .finish()
    }
}

impl Serialize for Memory {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.cells.iter().map(|(l, v)| (l.to_string(), fmt_rat(v))))
    }
}

impl<'de> Deserialize<'de> for Memory {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = BTreeMap::<String, String>::deserialize(d)?;
        let mut m = Memory::new();
        for (k, v) in raw {
            let loc: Loc = k.parse().map_err(serde::de::Error::custom)?;
            let val = parse_rat(&v).map_err(serde::de::Error::custom)?;
            m.set(loc, val);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::realalg::int;

    #[test]
    fn loc_round_trip() {
        for s in ["X0", "A7", "Y3@2"] {
            assert_eq!(s.parse::<Loc>().unwrap().to_string(), s);
        }
        assert_eq!("Y4".parse::<Loc>().unwrap(), Loc::private(1, 4));
        assert!("Z1".parse::<Loc>().is_err());
        assert!("Y1@0".parse::<Loc>().is_err());
    }

    #[test]
    fn zeros_are_not_stored() {
        let mut m = Memory::new();
        m.set(Loc::shared(1), int(3));
        m.set(Loc::shared(1), int(0));
        assert_eq!(m, Memory::new());
        let json = serde_json::to_string(&Memory::from_shared(&[int(2), int(-1)])).unwrap();
        assert_eq!(json, r#"{"X0":"2","X1":"-1"}"#);
    }
}
