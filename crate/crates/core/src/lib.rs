//! Free groups, folded subgroup automata, amalgamated products over cyclic
//! edge groups, boundary-fixing automorphisms and the witness checks built
//! on top of them.

pub mod amalgam;
pub mod autos;
pub mod endo;
pub mod error;
pub mod imaginaries;
pub mod stallings;
pub mod witness;
pub mod word;

pub use endo::Endo;
pub use error::Error;
pub use stallings::SubgroupAutomaton;
pub use word::{AbelianVector, GeneratorId, Letter, ParseError, Word};
