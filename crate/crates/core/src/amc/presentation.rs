//! Monoid presentations, conflicted sums and word normal forms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator symbol, optionally tagged by the summand(s) it came from.
/// Renders as `"1:add(X1,X2,X3)"`; untagged symbols render as their name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub tags: Vec<u16>,
    pub name: String,
}

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol {
            tags: Vec::new(),
            name: name.into(),
        }
    }

    pub fn tagged(tag: u16, inner: &Symbol) -> Self {
        let mut tags = vec![tag];
        tags.extend_from_slice(&inner.tags);
        Symbol {
            tags,
            name: inner.name.clone(),
        }
    }

    /// Outermost tag, if any.
    pub fn component(&self) -> Option<u16> {
        self.tags.first().copied()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.tags {
            write!(f, "{t}:")?;
        }
        write!(f, "{}", self.name)
    }
}

impl FromStr for Symbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let mut tags = Vec::new();
        let mut rest = s.trim();
        while let Some((head, tail)) = rest.split_once(':') {
            match head.parse::<u16>() {
                Ok(t) => {
                    tags.push(t);
                    rest = tail;
                }
                Err(_) => break,
            }
        }
        if rest.is_empty() {
            return Err(Error::parse(format!("empty generator symbol in `{s}`")));
        }
        Ok(Symbol {
            tags,
            name: rest.to_string(),
        })
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

pub type Word = Vec<Symbol>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

impl Relation {
    pub fn commutation(a: Symbol, b: Symbol) -> Self {
        Relation {
            lhs: vec![a.clone(), b.clone()],
            rhs: vec![b, a],
        }
    }

    pub fn unit(a: Symbol) -> Self {
        Relation {
            lhs: vec![a],
            rhs: Vec::new(),
        }
    }
}

/// A presentation `<G | R>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonoidPresentation {
    pub generators: Vec<Symbol>,
    pub relations: Vec<Relation>,
}

impl MonoidPresentation {
    pub fn new(generators: Vec<Symbol>, relations: Vec<Relation>) -> Result<Self> {
        let p = MonoidPresentation {
            generators,
            relations,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn free(generators: Vec<Symbol>) -> Self {
        MonoidPresentation {
            generators,
            relations: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let known: BTreeSet<&Symbol> = self.generators.iter().collect();
        for rel in &self.relations {
            for s in rel.lhs.iter().chain(&rel.rhs) {
                if !known.contains(s) {
                    return Err(Error::invalid(format!("relation mentions unknown generator `{s}`")));
                }
            }
        }
        Ok(())
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.generators.contains(s)
    }
}

/// Set of conflicting (left generator, right generator) pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConflictRelation {
    pub pairs: BTreeSet<(Symbol, Symbol)>,
}

impl ConflictRelation {
    pub fn empty() -> Self {
        ConflictRelation::default()
    }

    pub fn full(left: &MonoidPresentation, right: &MonoidPresentation) -> Self {
        let pairs = left
            .generators
            .iter()
            .flat_map(|g| right.generators.iter().map(move |h| (g.clone(), h.clone())))
            .collect();
        ConflictRelation { pairs }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Symbol, Symbol)>) -> Self {
        ConflictRelation {
            pairs: pairs.into_iter().collect(),
        }
    }

    pub fn contains(&self, g: &Symbol, h: &Symbol) -> bool {
        self.pairs.contains(&(g.clone(), h.clone()))
    }
}

/// Sum of two presentations whose generators are renamed by the given taggers.
/// Cross pairs outside `conflict` (stated on untagged symbols) commute.
pub(crate) fn tagged_sum(
    left: &MonoidPresentation,
    tag_left: impl Fn(&Symbol) -> Symbol,
    right: &MonoidPresentation,
    tag_right: impl Fn(&Symbol) -> Symbol,
    conflict: &ConflictRelation,
) -> Result<MonoidPresentation> {
    for (g, h) in &conflict.pairs {
        if !left.contains(g) {
            return Err(Error::invalid(format!("conflict pair mentions unknown left generator `{g}`")));
        }
        if !right.contains(h) {
            return Err(Error::invalid(format!("conflict pair mentions unknown right generator `{h}`")));
        }
    }
    let mut generators: Vec<Symbol> = left.generators.iter().map(&tag_left).collect();
    generators.extend(right.generators.iter().map(&tag_right));
    let retag = |rel: &Relation, f: &dyn Fn(&Symbol) -> Symbol| Relation {
        lhs: rel.lhs.iter().map(f).collect(),
        rhs: rel.rhs.iter().map(f).collect(),
    };
    let mut relations: Vec<Relation> = left.relations.iter().map(|r| retag(r, &tag_left)).collect();
    relations.extend(right.relations.iter().map(|r| retag(r, &tag_right)));
    for g in &left.generators {
        for h in &right.generators {
            if !conflict.contains(g, h) {
                relations.push(Relation::commutation(tag_left(g), tag_right(h)));
            }
        }
    }
    MonoidPresentation::new(generators, relations)
}

/// Conflicted sum: generators `{1}xG ∪ {2}xG'`, tagged copies of both
/// relation sets, plus `(1,g)(2,g') = (2,g')(1,g)` for every pair outside
/// the conflict relation.
pub fn conflicted_sum(
    left: &MonoidPresentation,
    right: &MonoidPresentation,
    conflict: &ConflictRelation,
) -> Result<MonoidPresentation> {
    tagged_sum(
        left,
        |s| Symbol::tagged(1, s),
        right,
        |s| Symbol::tagged(2, s),
        conflict,
    )
}

/// Commutation and unit rules extracted from a presentation.
#[derive(Debug, Clone, Default)]
pub struct RewriteRules {
    commuting: BTreeSet<(Symbol, Symbol)>,
    units: BTreeSet<Symbol>,
}

impl RewriteRules {
    /// Accepts only commutations `ab = ba` and unit eliminations `a = 1`.
    pub fn from_presentation(pres: &MonoidPresentation) -> Result<Self> {
        let mut rules = RewriteRules::default();
        for rel in &pres.relations {
            match (rel.lhs.as_slice(), rel.rhs.as_slice()) {
                ([a, b], [c, d]) if a == d && b == c => {
                    rules.commuting.insert((a.clone(), b.clone()));
                    rules.commuting.insert((b.clone(), a.clone()));
                }
                ([a], []) | ([], [a]) => {
                    rules.units.insert(a.clone());
                }
                _ => {
                    let show = |w: &Word| w.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
                    return Err(Error::unsupported(format!(
                        "relation `{}` = `{}` is neither a commutation nor a unit elimination",
                        show(&rel.lhs),
                        show(&rel.rhs)
                    )));
                }
            }
        }
        Ok(rules)
    }

    pub fn commute(&self, a: &Symbol, b: &Symbol) -> bool {
        a == b || self.commuting.contains(&(a.clone(), b.clone()))
    }

    /// Lexicographically least representative of the trace of `w`: units are
    /// erased, then the smallest letter that can be commuted to the front is
    /// emitted repeatedly.
    pub fn normalize(&self, w: &[Symbol]) -> Word {
        let mut rest: Vec<&Symbol> = w.iter().filter(|s| !self.units.contains(*s)).collect();
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..rest.len() {
                let movable = rest[..i].iter().all(|p| *p != rest[i] && self.commute(p, rest[i]));
                if movable && best.is_none_or(|b| rest[i] < rest[b]) {
                    best = Some(i);
                }
            }
            let i = best.expect("the first letter is always movable");
            out.push(rest.remove(i).clone());
        }
        out
    }
}

/// Canonical form of `w` in a presentation whose relations are commutations
/// and unit eliminations.
pub fn normalize_word(pres: &MonoidPresentation, w: &[Symbol]) -> Result<Word> {
    Ok(RewriteRules::from_presentation(pres)?.normalize(w))
}

/// Number of occurrences of each symbol; invariant under commutations.
pub fn letter_counts(w: &[Symbol]) -> BTreeMap<&Symbol, usize> {
    let mut m = BTreeMap::new();
    for s in w {
        *m.entry(s).or_insert(0) += 1;
    }
    m
}
