pub mod cli;
pub mod dist;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod oracle;
pub mod rainbow;
pub mod stats;
pub mod theory;
pub mod verify;
