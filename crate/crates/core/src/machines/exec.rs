//! Direct operational semantics of SRAMs and lockstep CREW PRAMs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::program::{CmdKind, PramProgram, SramCommand, SramProgram};
use crate::amc::{BlockId, Effect, Loc, Memory};
use crate::error::Result;
use crate::realalg::rat::bits;
use crate::realalg::{int, Rat};

/// Memory of every block plus the current label of each processor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineConfig {
    pub mem: Memory,
    pub labels: Vec<usize>,
}

impl MachineConfig {
    pub fn new(mem: Memory, processors: usize) -> Self {
        MachineConfig {
            mem,
            labels: vec![1; processors],
        }
    }

    pub fn shared(&self) -> BTreeMap<u64, Rat> {
        self.mem.block(BlockId::Shared)
    }

    pub fn private(&self, proc: u16) -> BTreeMap<u64, Rat> {
        self.mem.block(BlockId::Private(proc))
    }
}

/// Shared block `(d, x_1, ..., x_d, 0, ...)`.
pub fn input_memory(x: &[Rat]) -> Memory {
    let mut m = Memory::new();
    m.set(Loc::shared(0), int(x.len() as i64));
    for (i, v) in x.iter().enumerate() {
        m.set(Loc::shared(i as u64 + 1), v.clone());
    }
    m
}

/// Total bit length of the binary representations of integer inputs.
pub fn input_bit_length(x: &[Rat]) -> u64 {
    x.iter().map(|v| bits(v.numer())).sum()
}

/// Whether a label is terminal for a program (0 or `L + 1`).
pub fn is_halted(m: &SramProgram, label: usize) -> bool {
    label == 0 || label > m.len()
}

/// Private effect and next label of one command, reading `mem`.
fn command_effect(c: &SramCommand, proc: u16, mem: &Memory) -> Result<(Option<(Loc, Rat)>, usize)> {
    if let CmdKind::Cond { reg, zero, nonzero } = &c.kind {
        let v = mem.get(reg.resolve(proc));
        let next = if num_traits::Zero::is_zero(&v) { *zero } else { *nonzero };
        return Ok((None, next));
    }
    let write = match c.generator() {
        None => None,
        Some(g) => match g.effect(mem, proc)? {
            Effect::Write(l, v) => Some((l, v)),
            Effect::Undefined => unreachable!("integer generators are total"),
        },
    };
    Ok((write, c.label + 1))
}

/// One step of a single SRAM (processor 1); `None` once halted.
pub fn sram_step(m: &SramProgram, cfg: &MachineConfig) -> Result<Option<MachineConfig>> {
    let label = cfg.labels[0];
    let Some(c) = m.command(label).filter(|_| !is_halted(m, label)) else {
        return Ok(None);
    };
    let (write, next) = command_effect(c, 1, &cfg.mem)?;
    let mut out = cfg.clone();
    if let Some((l, v)) = write {
        out.mem.set(l, v);
    }
    out.labels[0] = next;
    Ok(Some(out))
}

/// One lockstep step: every running processor reads the pre-step memory;
/// among writes to one cell the smallest processor index lands. `None` once
/// every processor has halted.
pub fn pram_step(p: &PramProgram, cfg: &MachineConfig) -> Result<Option<MachineConfig>> {
    let mut writes: BTreeMap<Loc, Rat> = BTreeMap::new();
    let mut out = cfg.clone();
    let mut moved = false;
    for (i, m) in p.processors.iter().enumerate() {
        let label = cfg.labels[i];
        if is_halted(m, label) {
            continue;
        }
        moved = true;
        let c = m.command(label).expect("running label names a command");
        let (write, next) = command_effect(c, i as u16 + 1, &cfg.mem)?;
        if let Some((l, v)) = write {
            writes.entry(l).or_insert(v);
        }
        out.labels[i] = next;
    }
    if !moved {
        return Ok(None);
    }
    for (l, v) in writes {
        out.mem.set(l, v);
    }
    Ok(Some(out))
}

/// Configurations visited by the SRAM in at most `k` steps.
pub fn sram_trace(m: &SramProgram, start: &MachineConfig, k: usize) -> Result<Vec<MachineConfig>> {
    let mut trace = vec![start.clone()];
    for _ in 0..k {
        match sram_step(m, trace.last().unwrap())? {
            Some(next) => trace.push(next),
            None => break,
        }
    }
    Ok(trace)
}

/// Configurations visited by the PRAM in at most `k` steps.
pub fn pram_trace(p: &PramProgram, start: &MachineConfig, k: usize) -> Result<Vec<MachineConfig>> {
    let mut trace = vec![start.clone()];
    for _ in 0..k {
        match pram_step(p, trace.last().unwrap())? {
            Some(next) => trace.push(next),
            None => break,
        }
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::program::{parse_pram, parse_sram};

    fn cfg(cells: &[(Loc, i64)], procs: usize) -> MachineConfig {
        let mut m = Memory::new();
        for (l, v) in cells {
            m.set(*l, int(*v));
        }
        MachineConfig::new(m, procs)
    }

    #[test]
    fn writeref_and_readref() {
        let p = parse_sram("1: #X1 := X2").unwrap();
        let c = cfg(&[(Loc::shared(1), 5), (Loc::shared(2), 9)], 1);
        let next = sram_step(&p, &c).unwrap().unwrap();
        assert_eq!(next.mem.get(Loc::shared(5)), int(9));
        assert_eq!(next.labels, vec![2]);
        assert_eq!(sram_step(&p, &next).unwrap(), None);

        let p = parse_sram("1: X1 := #X2").unwrap();
        let c = cfg(&[(Loc::shared(2), 4), (Loc::shared(4), 11)], 1);
        let next = sram_step(&p, &c).unwrap().unwrap();
        assert_eq!(next.mem.get(Loc::shared(1)), int(11));
    }

    #[test]
    fn conditional_branch() {
        let p = parse_sram("1: if X1 = 0 goto 3 else 2\n2: skip\n3: skip").unwrap();
        let next = sram_step(&p, &cfg(&[], 1)).unwrap().unwrap();
        assert_eq!(next.labels, vec![3]);
        let next = sram_step(&p, &cfg(&[(Loc::shared(1), 1)], 1)).unwrap().unwrap();
        assert_eq!(next.labels, vec![2]);
    }

    #[test]
    fn crew_write_resolution() {
        let p = parse_pram("1: X0 := 5\n---\n1: X0 := 7").unwrap();
        let next = pram_step(&p, &cfg(&[], 2)).unwrap().unwrap();
        assert_eq!(next.mem.get(Loc::shared(0)), int(5));
        let p = parse_pram("1: X0 := 5\n---\n1: X1 := 7").unwrap();
        let next = pram_step(&p, &cfg(&[], 2)).unwrap().unwrap();
        assert_eq!(next.mem.get(Loc::shared(0)), int(5));
        assert_eq!(next.mem.get(Loc::shared(1)), int(7));
    }

    #[test]
    fn concurrent_reads() {
        let p = parse_pram("1: Y1 := X3\n---\n1: Y1 := X3\n---\n1: X3 := 0").unwrap();
        let next = pram_step(&p, &cfg(&[(Loc::shared(3), 8)], 3)).unwrap().unwrap();
        assert_eq!(next.mem.get(Loc::private(1, 1)), int(8));
        assert_eq!(next.mem.get(Loc::private(2, 1)), int(8));
        assert_eq!(next.mem.get(Loc::shared(3)), int(0));
    }

    #[test]
    fn single_processor_pram_is_sram() {
        let src = "1: X2 := X1 * X1\n2: if X2 = 0 goto 4 else 3\n3: X1 := X1 - X2\n4: skip";
        let s = parse_sram(src).unwrap();
        let p = parse_pram(src).unwrap();
        let start = MachineConfig::new(input_memory(&[int(3)]), 1);
        assert_eq!(sram_trace(&s, &start, 10).unwrap(), pram_trace(&p, &start, 10).unwrap());
    }

    #[test]
    fn input_convention() {
        let m = input_memory(&[int(4), int(0), int(-3)]);
        assert_eq!(m.get(Loc::shared(0)), int(3));
        assert_eq!(m.get(Loc::shared(3)), int(-3));
        assert_eq!(input_bit_length(&[int(4), int(0), int(-3)]), 3 + 1 + 2);
    }
}
