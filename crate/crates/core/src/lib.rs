//! Multivalued fixed points on finite lattices and extremal solutions of
//! discrete quasi-variational inclusions.

pub mod extremal;
pub mod fixpoint;
pub mod gen;
pub mod grid;
pub mod order;
pub mod qvip;
pub mod verify;
