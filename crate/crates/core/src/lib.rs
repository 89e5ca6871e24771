pub mod cli;
pub mod error;
pub mod greenfn;
pub mod oracles;
pub mod pointgreen;
pub mod renorm;
pub mod roots;
pub mod scatter;

pub use error::{Error, Result};
