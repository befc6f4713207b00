//! Entropy linear programs with copy-lemma extensions and symmetry
//! reduction, for secret-sharing and guessing-game bounds.

pub mod catalog;
pub mod certificate;
pub mod cli;
pub mod copy;
pub mod entropy;
pub mod error;
pub mod guessing;
pub mod lp;
pub mod perm;
pub mod problem_file;
pub mod rational;
pub mod secret_sharing;

pub use error::{Error, Result};
pub use rational::Rational;
