//! Seeded random programs for differential testing.

use rand::Rng;

use super::program::{CmdKind, PramProgram, SramCommand, SramProgram};
use crate::amc::{BinOp, Reg};
use crate::realalg::int;

fn reg(rng: &mut impl Rng, private: bool) -> Reg {
    if private && rng.gen_bool(0.3) {
        Reg::y(rng.gen_range(1..=2))
    } else {
        Reg::x(rng.gen_range(0..=4))
    }
}

/// Program of `lines` commands over `X0..X4` (and `Y1, Y2` when `private`).
/// At most two multiplications occur, and backward jumps only target labels
/// after the last one, so values stay small on bounded runs.
pub fn random_sram(rng: &mut impl Rng, lines: usize, private: bool) -> SramProgram {
    let lines = lines.max(1);
    let end = lines + 1;
    let mut muls = 0;
    let mut last_mul = 0;
    let mut commands = Vec::with_capacity(lines);
    for label in 1..=lines {
        let kind = match rng.gen_range(0..10) {
            0 => CmdKind::Skip,
            1 => CmdKind::Const {
                dst: reg(rng, private),
                value: int(rng.gen_range(-3..=3)),
            },
            2 | 3 => {
                let op = match rng.gen_range(0..4) {
                    0 if muls < 2 => {
                        muls += 1;
                        last_mul = label;
                        BinOp::Mul
                    }
                    1 => BinOp::Euclid,
                    2 => BinOp::Sub,
                    _ => BinOp::Add,
                };
                CmdKind::Bin {
                    op,
                    dst: reg(rng, private),
                    lhs: reg(rng, private),
                    rhs: reg(rng, private),
                }
            }
            4 => CmdKind::Copy {
                dst: reg(rng, private),
                src: reg(rng, private),
            },
            5 | 6 => {
                let target = |rng: &mut dyn rand::RngCore| -> usize {
                    if rng.gen_bool(0.1) {
                        0
                    } else if rng.gen_bool(0.3) && last_mul < label {
                        rng.gen_range(last_mul + 1..=label)
                    } else {
                        rng.gen_range(label + 1..=end)
                    }
                };
                CmdKind::Cond {
                    reg: reg(rng, private),
                    zero: target(rng),
                    nonzero: target(rng),
                }
            }
            _ => CmdKind::Bin {
                op: if rng.gen_bool(0.5) { BinOp::Add } else { BinOp::Sub },
                dst: reg(rng, private),
                lhs: reg(rng, private),
                rhs: reg(rng, private),
            },
        };
        commands.push(SramCommand { label, kind });
    }
    SramProgram::new(commands).expect("generated program is valid")
}

pub fn random_pram(rng: &mut impl Rng, processors: usize, lines: usize) -> PramProgram {
    let procs = (0..processors.max(1)).map(|_| random_sram(rng, lines, true)).collect();
    PramProgram::new(procs).expect("generated program is valid")
}
