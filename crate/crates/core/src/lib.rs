pub mod cli;
pub mod coding;
pub mod constructions;
pub mod ed;
pub mod error;
pub mod mid;
pub mod ordinal;
pub mod sets;
pub mod seqcode;
pub mod tree;
pub mod verify;
pub mod vitali;

pub use error::{Error, Result};
