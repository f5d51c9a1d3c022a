pub mod analysis;
pub mod error;
pub mod experiment;
pub mod field;
pub mod grid;
pub mod kernels;
pub mod models;
pub mod oracles;
pub mod schemes;

pub use error::{Error, Result};
