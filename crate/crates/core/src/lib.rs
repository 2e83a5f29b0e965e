//! Vertex-regular 1-factorizations of Cayley graphs on countably infinite
//! groups, built lazily and checked on finite windows.

pub mod cardinal;
pub mod cli;
pub mod connsets;
pub mod error;
pub mod export;
pub mod factorization;
pub mod greedy;
pub mod groups;
pub mod subfact;
pub mod table;
pub mod verify;

pub use cardinal::Cardinal;
pub use error::{Error, Result};
pub use factorization::{BuildOptions, FactorId, Factorization, RegularFactorization};
pub use groups::{Element, Group, SubgroupKind, SubgroupSpec};
