//! Builders that turn source documents into weighted sequences.

pub mod midi;
pub mod play;
