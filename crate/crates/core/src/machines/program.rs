//! SRAM and PRAM programs and their text syntax.

use std::fmt;

use num_traits::Zero;

use crate::amc::{BinOp, Block, Gen, Operand, Reg};
use crate::error::{Error, Result};
use crate::realalg::{fmt_rat, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CmdKind {
    Skip,
    Const { dst: Reg, value: Rat },
    /// `dst := lhs op rhs`; `/` is euclidean division.
    Bin { op: BinOp, dst: Reg, lhs: Reg, rhs: Reg },
    Copy { dst: Reg, src: Reg },
    /// `dst := #ptr`
    ReadRef { dst: Reg, ptr: Reg },
    /// `#ptr := src`
    WriteRef { ptr: Reg, src: Reg },
    /// `if reg = 0 goto zero else nonzero`
    Cond { reg: Reg, zero: usize, nonzero: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SramCommand {
    pub label: usize,
    pub kind: CmdKind,
}

impl SramCommand {
    /// The generator executing this command, if it is not a skip or a branch.
    pub fn generator(&self) -> Option<Gen> {
        Some(match &self.kind {
            CmdKind::Skip | CmdKind::Cond { .. } => return None,
            CmdKind::Const { dst, value } => Gen::Const {
                dst: *dst,
                value: value.clone(),
            },
            CmdKind::Bin { op, dst, lhs, rhs } => Gen::Bin {
                op: *op,
                dst: *dst,
                lhs: Operand::Reg(*lhs),
                rhs: *rhs,
            },
            CmdKind::Copy { dst, src } => Gen::Copy { dst: *dst, src: *src },
            CmdKind::ReadRef { dst, ptr } => Gen::RefCopy { dst: *dst, ptr: *ptr },
            CmdKind::WriteRef { ptr, src } => Gen::CopyRef { ptr: *ptr, src: *src },
        })
    }

    /// Whether the command may write the shared block.
    pub fn writes_shared(&self) -> bool {
        self.generator().is_some_and(|g| !g.is_central())
    }
}

impl fmt::Display for SramCommand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        match &self.kind {
            CmdKind::Skip => write!(f, "skip"),
            CmdKind::Const { dst, value } => write!(f, "{dst} := {}", fmt_rat(value)),
            CmdKind::Bin { op, dst, lhs, rhs } => write!(f, "{dst} := {lhs} {} {rhs}", op.symbol()),
            CmdKind::Copy { dst, src } => write!(f, "{dst} := {src}"),
            CmdKind::ReadRef { dst, ptr } => write!(f, "{dst} := #{ptr}"),
            CmdKind::WriteRef { ptr, src } => write!(f, "#{ptr} := {src}"),
            CmdKind::Cond { reg, zero, nonzero } => write!(f, "if {reg} = 0 goto {zero} else {nonzero}"),
        }
    }
}

/// Labelled commands `1..=L`. Jumping to `L + 1` halts; jumping to 0 halts
/// in the rejecting state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SramProgram {
    pub commands: Vec<SramCommand>,
}

impl SramProgram {
    pub fn new(commands: Vec<SramCommand>) -> Result<Self> {
        let p = SramProgram { commands };
        p.validate()?;
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.commands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.commands.is_empty()
    }

    /// The halting label `L + 1`.
    pub fn end(&self) -> usize {
        self.commands.len() + 1
    }

    pub fn validate(&self) -> Result<()> {
        let end = self.end();
        for (i, c) in self.commands.iter().enumerate() {
            if c.label != i + 1 {
                return Err(Error::invalid(format!(
                    "labels must be contiguous from 1: found {} at position {}",
                    c.label,
                    i + 1
                )));
            }
            if let CmdKind::Cond { zero, nonzero, .. } = c.kind {
                if zero > end || nonzero > end {
                    return Err(Error::invalid(format!("line {}: jump target beyond {end}", c.label)));
                }
            }
            if let CmdKind::Const { value, .. } = &c.kind {
                if !value.is_integer() {
                    return Err(Error::invalid(format!("line {}: constants must be integers", c.label)));
                }
            }
            for r in registers(&c.kind) {
                if r.block == Block::Aux {
                    return Err(Error::invalid(format!("line {}: auxiliary registers are not available", c.label)));
                }
            }
        }
        Ok(())
    }

    pub fn generators(&self) -> Vec<Gen> {
        self.commands.iter().filter_map(SramCommand::generator).collect()
    }

    pub fn command(&self, label: usize) -> Option<&SramCommand> {
        label.checked_sub(1).and_then(|i| self.commands.get(i))
    }
}

fn registers(k: &CmdKind) -> Vec<Reg> {
    match k {
        CmdKind::Skip => vec![],
        CmdKind::Const { dst, .. } => vec![*dst],
        CmdKind::Bin { dst, lhs, rhs, .. } => vec![*dst, *lhs, *rhs],
        CmdKind::Copy { dst, src } | CmdKind::ReadRef { dst, ptr: src } | CmdKind::WriteRef { ptr: dst, src } => {
            vec![*dst, *src]
        }
        CmdKind::Cond { reg, .. } => vec![*reg],
    }
}

impl fmt::Display for SramProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.commands {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Processors sharing memory block 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PramProgram {
    pub processors: Vec<SramProgram>,
}

impl PramProgram {
    pub fn new(processors: Vec<SramProgram>) -> Result<Self> {
        if processors.is_empty() {
            return Err(Error::invalid("a PRAM needs at least one processor"));
        }
        if processors.len() > 60 {
            return Err(Error::invalid("at most 60 processors are supported"));
        }
        Ok(PramProgram { processors })
    }

    pub fn len(&self) -> usize {
        self.processors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.processors.is_empty()
    }
}

impl fmt::Display for PramProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.processors.iter().enumerate() {
            if i > 0 {
                writeln!(f, "---")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse_at(msg, self.line, self.pos + 1)
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with([' ', '\t']) {
            self.pos += 1;
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos >= self.text.len()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    fn word(&mut self) -> &'a str {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.text[start..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(rest.len());
        self.pos += len;
        &self.text[start..start + len]
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let col = self.pos;
        let w = self.word();
        w.parse().map_err(|_| Error::parse_at(format!("expected a label, found `{w}`"), self.line, col + 1))
    }

    fn peek_reg(&mut self) -> bool {
        self.skip_ws();
        self.text[self.pos..].starts_with(['X', 'Y'])
    }

    fn reg(&mut self) -> Result<Reg> {
        self.skip_ws();
        let col = self.pos;
        let w = self.word();
        if !w.starts_with(['X', 'Y']) {
            return Err(Error::parse_at(format!("expected a register, found `{w}`"), self.line, col + 1));
        }
        w.parse::<Reg>()
            .map_err(|_| Error::parse_at(format!("bad register `{w}`"), self.line, col + 1))
    }

    fn integer(&mut self) -> Result<Rat> {
        self.skip_ws();
        let col = self.pos;
        let neg = self.eat("-");
        let w = self.word();
        w.parse::<num_bigint::BigInt>()
            .map(|n| Rat::from_integer(if neg { -n } else { n }))
            .map_err(|_| Error::parse_at(format!("expected an integer, found `{w}`"), self.line, col + 1))
    }
}

fn parse_command(text: &str, line: usize) -> Result<SramCommand> {
    let mut c = Cursor { text, pos: 0, line };
    let label = c.number()?;
    c.expect(":")?;
    let kind = if c.eat("skip") {
        CmdKind::Skip
    } else if c.eat("if") {
        let reg = c.reg()?;
        c.expect("=")?;
        let zero_col = c.pos;
        if c.integer()? != Rat::zero() {
            return Err(Error::parse_at("conditionals test against 0", line, zero_col + 1));
        }
        c.expect("goto")?;
        let zero = c.number()?;
        c.expect("else")?;
        let nonzero = c.number()?;
        CmdKind::Cond { reg, zero, nonzero }
    } else if c.eat("#") {
        let ptr = c.reg()?;
        c.expect(":=")?;
        let src = c.reg()?;
        CmdKind::WriteRef { ptr, src }
    } else {
        let dst = c.reg()?;
        c.expect(":=")?;
        if c.eat("#") {
            CmdKind::ReadRef { dst, ptr: c.reg()? }
        } else if c.peek_reg() {
            let lhs = c.reg()?;
            let op = [("+", BinOp::Add), ("-", BinOp::Sub), ("*", BinOp::Mul), ("/", BinOp::Euclid)]
                .into_iter()
                .find(|(t, _)| c.eat(t))
                .map(|(_, o)| o);
            match op {
                Some(op) => CmdKind::Bin {
                    op,
                    dst,
                    lhs,
                    rhs: c.reg()?,
                },
                None => CmdKind::Copy { dst, src: lhs },
            }
        } else {
            CmdKind::Const {
                dst,
                value: c.integer()?,
            }
        }
    };
    if !c.at_end() {
        return Err(c.err("unexpected trailing input"));
    }
    Ok(SramCommand { label, kind })
}

fn strip_comment(line: &str) -> &str {
    line.split_once("//").map_or(line, |(a, _)| a).trim_end()
}

fn parse_lines<'a>(lines: impl Iterator<Item = (usize, &'a str)>) -> Result<SramProgram> {
    let mut commands = Vec::new();
    for (no, raw) in lines {
        let text = strip_comment(raw);
        if text.trim().is_empty() {
            continue;
        }
        let cmd = parse_command(text, no)?;
        if cmd.label != commands.len() + 1 {
            return Err(Error::parse_at(
                format!("expected label {}, found {}", commands.len() + 1, cmd.label),
                no,
                1,
            ));
        }
        commands.push(cmd);
    }
    SramProgram::new(commands)
}

/// Parses the SRAM text syntax: one `label: command` per line, `//` comments.
pub fn parse_sram(text: &str) -> Result<SramProgram> {
    parse_lines(text.lines().enumerate().map(|(i, l)| (i + 1, l)))
}

/// Parses SRAM blocks separated by `---` lines.
pub fn parse_pram(text: &str) -> Result<PramProgram> {
    let mut blocks: Vec<Vec<(usize, &str)>> = vec![Vec::new()];
    for (i, l) in text.lines().enumerate() {
        if strip_comment(l).trim() == "---" {
            blocks.push(Vec::new());
        } else {
            blocks.last_mut().unwrap().push((i + 1, l));
        }
    }
    let procs = blocks
        .into_iter()
        .map(|b| parse_lines(b.into_iter()))
        .collect::<Result<Vec<_>>>()?;
    PramProgram::new(procs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let p = parse_sram("1: X1 := 2\n2: X2 := X1 * X1").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(
            p.commands[1].kind,
            CmdKind::Bin {
                op: BinOp::Mul,
                dst: Reg::x(2),
                lhs: Reg::x(1),
                rhs: Reg::x(1)
            }
        );
        let p = parse_sram("1: if X1 = 0 goto 3 else 2\n2: skip").unwrap();
        assert_eq!(
            p.commands[0].kind,
            CmdKind::Cond {
                reg: Reg::x(1),
                zero: 3,
                nonzero: 2
            }
        );
        let p = parse_sram("1: X1 := #X2").unwrap();
        assert_eq!(
            p.commands[0].kind,
            CmdKind::ReadRef {
                dst: Reg::x(1),
                ptr: Reg::x(2)
            }
        );
    }

    #[test]
    fn round_trip_through_printer() {
        let src = "1: Y1 := -3\n2: X2 := X1 / Y1\n3: #X1 := Y2\n4: X3 := X2\n5: if Y1 = 0 goto 0 else 6\n6: skip\n";
        let p = parse_sram(src).unwrap();
        assert_eq!(p.to_string(), src);
        assert_eq!(parse_sram(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_sram("1: skip\n2: X1 := X2 % X3") {
            Err(Error::Parse { line, column, .. }) => {
                assert_eq!(line, Some(2));
                assert_eq!(column, Some(13));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_sram("1: skip\n3: skip"), Err(Error::Parse { line: Some(2), .. })));
        assert!(parse_sram("1: if X1 = 0 goto 9 else 1").is_err());
        assert!(parse_sram("1: Z1 := 2").is_err());
    }

    #[test]
    fn pram_blocks() {
        let p = parse_pram("1: X1 := 5\n---\n1: X1 := 7\n2: skip\n").unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.processors[1].len(), 2);
        assert!(parse_pram("").is_ok());
        assert_eq!(parse_pram(&p.to_string()).unwrap(), p);
    }
}
