//! IO companion to `dowker-core`: JSON file formats, the end-to-end
//! verification pipeline, and deterministic random relations.

pub mod json;
pub mod pipeline;
pub mod random;
