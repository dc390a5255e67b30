pub mod cli;
pub mod construct;
pub mod error;
pub mod ffield;
pub mod fmb;
pub mod linalg;
pub mod modalg;
pub mod obstruct;
pub mod pgroup;

pub use error::{Error, Result};
