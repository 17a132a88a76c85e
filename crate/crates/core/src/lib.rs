//! Human-AI productivity model: effort choice under deterministic and
//! unreliable assistance, birth-death skill dynamics, AI literacy, and the
//! numerical oracles used to check them.

pub mod checks;
pub mod dynamics;
pub mod effort;
pub mod error;
pub mod functions;
pub mod literacy;
pub mod mcsim;
pub mod optim;
pub mod oracle;

pub use error::{ModelError, Result};
