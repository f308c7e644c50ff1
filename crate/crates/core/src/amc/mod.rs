//! Abstract models of computation: monoid presentations acting on memory.

pub mod generator;
pub mod memory;
pub mod presentation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use generator::{euclid_quotient, rat_sqrt, BinOp, Block, Effect, Gen, Operand, Reg};
pub use memory::{BlockId, Loc, Memory};
pub use presentation::{
    conflicted_sum, normalize_word, ConflictRelation, MonoidPresentation, Relation, RewriteRules, Symbol, Word,
};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueKind {
    Integer,
    Real,
}

/// Memory layout of an AMC's configuration space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSignature {
    pub kind: ValueKind,
    /// Number of public blocks: 1 (shared) or 2 (shared and auxiliary).
    pub public_blocks: u8,
    /// Number of private blocks, one per processor.
    pub processors: u16,
}

impl SpaceSignature {
    pub fn shared_compatible(&self, other: &SpaceSignature) -> bool {
        self.kind == other.kind && self.public_blocks == other.public_blocks
    }
}

/// Action of one generator symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorAction {
    pub symbol: Symbol,
    pub gen: Gen,
    pub processor: u16,
}

impl GeneratorAction {
    pub fn is_central(&self) -> bool {
        self.gen.is_central()
    }

    pub fn effect(&self, mem: &Memory) -> Result<Effect> {
        self.gen.effect(mem, self.processor)
    }
}

/// A monoid presentation with an action table. Generators are tagged by
/// processor index once the model has more than one processor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amc {
    pub presentation: MonoidPresentation,
    pub actions: BTreeMap<Symbol, GeneratorAction>,
    pub signature: SpaceSignature,
}

fn processor_of(s: &Symbol) -> Result<u16> {
    match s.tags.as_slice() {
        [] => Ok(1),
        [p] if *p >= 1 => Ok(*p),
        _ => Err(Error::invalid(format!("symbol `{s}` does not name a processor"))),
    }
}

impl Amc {
    fn build(signature: SpaceSignature, presentation: MonoidPresentation) -> Result<Amc> {
        presentation.validate()?;
        let mut actions = BTreeMap::new();
        for s in &presentation.generators {
            let gen: Gen = s.name.parse()?;
            let processor = processor_of(s)?;
            if signature.kind == ValueKind::Integer && !gen.is_integral() {
                return Err(Error::invalid(format!("generator `{s}` is not integral")));
            }
            if gen.reads().iter().chain(gen.direct_target().iter()).any(|r| r.block == Block::Aux)
                && signature.public_blocks < 2
            {
                return Err(Error::invalid(format!("generator `{s}` uses the auxiliary block")));
            }
            if processor > signature.processors.max(1) {
                return Err(Error::invalid(format!("generator `{s}` names processor {processor}")));
            }
            actions.insert(
                s.clone(),
                GeneratorAction {
                    symbol: s.clone(),
                    gen,
                    processor,
                },
            );
        }
        Ok(Amc {
            presentation,
            actions,
            signature,
        })
    }

    fn free(signature: SpaceSignature, gens: impl IntoIterator<Item = Gen>) -> Result<Amc> {
        let set: BTreeSet<Gen> = gens.into_iter().collect();
        let symbols = set.iter().map(|g| Symbol::new(g.to_string())).collect();
        Amc::build(signature, MonoidPresentation::free(symbols))
    }

    /// Single-processor integer machine over the given generators.
    pub fn sram(gens: impl IntoIterator<Item = Gen>) -> Result<Amc> {
        let sig = SpaceSignature {
            kind: ValueKind::Integer,
            public_blocks: 1,
            processors: 1,
        };
        Amc::free(sig, gens)
    }

    /// Real computation-tree model on a single real block.
    pub fn act(gens: impl IntoIterator<Item = Gen>) -> Result<Amc> {
        let sig = SpaceSignature {
            kind: ValueKind::Real,
            public_blocks: 1,
            processors: 0,
        };
        let amc = Amc::free(sig, gens)?;
        if let Some(a) = amc.actions.values().find(|a| a.gen.written_block() != Block::Shared) {
            return Err(Error::invalid(format!("computation-tree generator `{}` must act on X registers", a.symbol)));
        }
        Ok(amc)
    }

    /// Single-processor real machine with the auxiliary public block.
    pub fn real_sram(gens: impl IntoIterator<Item = Gen>) -> Result<Amc> {
        let sig = SpaceSignature {
            kind: ValueKind::Real,
            public_blocks: 2,
            processors: 1,
        };
        Amc::free(sig, gens)
    }

    /// The trivial model: no generators, only the identity.
    pub fn trivial(kind: ValueKind) -> Amc {
        Amc {
            presentation: MonoidPresentation::default(),
            actions: BTreeMap::new(),
            signature: SpaceSignature {
                kind,
                public_blocks: 1,
                processors: 0,
            },
        }
    }

    /// Rebuilds the action table from a presentation whose symbol names are
    /// generator syntax, as stored in graphing JSON.
    pub fn from_presentation(signature: SpaceSignature, presentation: MonoidPresentation) -> Result<Amc> {
        Amc::build(signature, presentation)
    }

    pub fn processors(&self) -> u16 {
        self.signature.processors
    }

    pub fn action(&self, s: &Symbol) -> Result<&GeneratorAction> {
        self.actions
            .get(s)
            .ok_or_else(|| Error::invalid(format!("`{s}` is not a generator of this model")))
    }

    pub fn generators(&self) -> impl Iterator<Item = &Symbol> {
        self.presentation.generators.iter()
    }

    /// Non-central generators (those that may write a public block).
    pub fn noncentral(&self) -> BTreeSet<Symbol> {
        self.actions
            .values()
            .filter(|a| !a.is_central())
            .map(|a| a.symbol.clone())
            .collect()
    }

    /// Symbol naming `gen` executed by processor `proc`.
    pub fn symbol_for(&self, gen: &Gen, proc: u16) -> Symbol {
        let name = gen.to_string();
        if self.signature.processors > 1 {
            Symbol {
                tags: vec![proc],
                name,
            }
        } else {
            Symbol::new(name)
        }
    }

    pub fn apply_generator(&self, g: &Symbol, mem: &Memory) -> Result<Option<Memory>> {
        let a = self.action(g)?;
        a.gen.apply(mem, a.processor)
    }

    /// Left-to-right fold of generator actions.
    pub fn word_apply(&self, w: &[Symbol], mem: &Memory) -> Result<Option<Memory>> {
        let mut cur = mem.clone();
        for g in w {
            match self.apply_generator(g, &cur)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }

    /// Simultaneous step: every generator reads the pre-step memory; writes
    /// to one cell are resolved in favour of the smallest processor index.
    pub fn apply_step(&self, step: &Step, mem: &Memory) -> Result<Option<Memory>> {
        if let [g] = step.0.as_slice() {
            return self.apply_generator(g, mem);
        }
        let mut seen = BTreeSet::new();
        let mut writes: BTreeMap<Loc, (u16, crate::realalg::Rat)> = BTreeMap::new();
        for g in &step.0 {
            let a = self.action(g)?;
            if !seen.insert(a.processor) {
                return Err(Error::invalid(format!("processor {} appears twice in step `{step}`", a.processor)));
            }
            match a.effect(mem)? {
                Effect::Undefined => return Ok(None),
                Effect::Write(loc, v) => {
                    let keep = writes.get(&loc).is_some_and(|(p, _)| *p < a.processor);
                    if !keep {
                        writes.insert(loc, (a.processor, v));
                    }
                }
            }
        }
        let mut out = mem.clone();
        for (loc, (_, v)) in writes {
            out.set(loc, v);
        }
        Ok(Some(out))
    }

    pub fn realiser_apply(&self, r: &[Step], mem: &Memory) -> Result<Option<Memory>> {
        let mut cur = mem.clone();
        for s in r {
            match self.apply_step(s, &cur)? {
                Some(next) => cur = next,
                None => return Ok(None),
            }
        }
        Ok(Some(cur))
    }
}

/// CREW composition. Generators are retagged by processor (the right
/// summand's processors follow the left's); a cross pair commutes unless one
/// side is non-central.
pub fn crew(left: &Amc, right: &Amc) -> Result<Amc> {
    if !left.signature.shared_compatible(&right.signature) {
        return Err(Error::invalid("crew: incompatible shared-block signatures"));
    }
    if left.processors() == 0 || right.processors() == 0 {
        return Err(Error::invalid("crew: both summands need a private block"));
    }
    let offset = left.processors();
    let conflict = ConflictRelation::from_pairs(left.actions.values().flat_map(|a| {
        right
            .actions
            .values()
            .filter(move |b| !a.is_central() || !b.is_central())
            .map(move |b| (a.symbol.clone(), b.symbol.clone()))
    }));
    let tag_left = |s: &Symbol| Symbol {
        tags: vec![left.actions[s].processor],
        name: s.name.clone(),
    };
    let tag_right = |s: &Symbol| Symbol {
        tags: vec![right.actions[s].processor + offset],
        name: s.name.clone(),
    };
    let presentation = presentation::tagged_sum(
        &left.presentation,
        tag_left,
        &right.presentation,
        tag_right,
        &conflict,
    )?;
    let signature = SpaceSignature {
        processors: left.processors() + right.processors(),
        ..left.signature
    };
    Amc::build(signature, presentation)
}

/// `crew^k(alpha)` as a left fold.
pub fn crew_power(base: &Amc, k: u16) -> Result<Amc> {
    if k == 0 {
        return Err(Error::invalid("crew power needs at least one processor"));
    }
    let mut acc = base.clone();
    for _ in 1..k {
        acc = crew(&acc, base)?;
    }
    Ok(acc)
}

/// One realiser step: a single generator, or several generators of distinct
/// processors executed simultaneously. Renders as `"1:g | 2:h"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Step(pub Vec<Symbol>);

impl Step {
    pub fn single(s: Symbol) -> Self {
        Step(vec![s])
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" | "))
    }
}

impl FromStr for Step {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let syms = s.split('|').map(str::parse).collect::<Result<Vec<Symbol>>>()?;
        Ok(Step(syms))
    }
}

impl Serialize for Step {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Step {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Concatenated word of a realiser, steps in order.
pub fn realiser_word(r: &[Step]) -> Word {
    r.iter().flat_map(|s| s.0.iter().cloned()).collect()
}

/// Serializable form of an AMC; actions are rebuilt from symbol names.
#[derive(Serialize, Deserialize)]
struct AmcWire {
    signature: SpaceSignature,
    presentation: MonoidPresentation,
}

impl Serialize for Amc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AmcWire {
            signature: self.signature,
            presentation: self.presentation.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Amc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = AmcWire::deserialize(d)?;
        Amc::build(w.signature, w.presentation).map_err(serde::de::Error::custom)
    }
}
