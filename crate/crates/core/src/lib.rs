//! Compact closed string diagrams with tensor semantics.
//!
//! Diagrams are port-graphs over typed wires ([`diagram`]), normalized by the
//! snake, identity and swap laws ([`rewrite`]) and evaluated to complex
//! tensors ([`semantics`]). On top sit a pregroup parser that turns
//! sentences into diagrams ([`pregroup`]), multiset resource theories
//! ([`resource`]) and post-selected teleportation ([`protocols`]).

pub mod diagram;
pub mod par;
pub mod pregroup;
pub mod protocols;
pub mod random;
pub mod resource;
pub mod rewrite;
pub mod semantics;
pub mod tensor;
pub mod types;
