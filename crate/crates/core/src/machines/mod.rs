//! SRAM and CREW PRAM programs, their interpreters and their graphings.

pub mod compile;
pub mod exec;
pub mod program;
pub mod random;

pub use compile::{
    accepts, compile_pram, compile_sram, initial_memory, pram_agreement, sram_agreement, tuple_name, Acceptance,
    TraceAgreement,
};
pub use exec::{
    input_bit_length, input_memory, is_halted, pram_step, pram_trace, sram_step, sram_trace, MachineConfig,
};
pub use program::{parse_pram, parse_sram, CmdKind, PramProgram, SramCommand, SramProgram};
pub use random::{random_pram, random_sram};
