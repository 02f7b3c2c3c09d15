//! Data plumbing: PNG frame stacks, the binary tensor file format, and
//! synthetic mask/noise/ground-truth generation.

pub mod frames;
pub mod qten;
pub mod synth;
