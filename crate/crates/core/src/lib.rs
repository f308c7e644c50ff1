pub mod amc;
pub mod benor;
pub mod entropy;
pub mod error;
pub mod fans;
pub mod graphings;
pub mod machines;
pub mod realalg;
pub mod registry;

pub use error::{Error, Result};
