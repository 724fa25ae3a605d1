pub mod agency;
pub mod error;
pub mod experiments;
pub mod interface;
pub mod joint;
pub mod laws;
pub mod mc;
pub mod measures;
pub mod random;
pub mod zoo;

pub use error::{Error, Result};
