//! Instance generation, one-round simulation, fuzzing and size
//! measurement for the certification schemes.

pub mod fuzz;
pub mod gen;
pub mod measure;
pub mod scheme;
pub mod simulate;
