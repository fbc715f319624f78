pub mod cartier;
pub mod connections;
pub mod crosscheck;
pub mod error;
pub mod forms;
pub mod poly;
pub mod random;
pub mod torsor;

pub use error::{Error, Result};
