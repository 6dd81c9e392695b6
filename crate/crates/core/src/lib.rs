//! Two-stage texture representation model.
//!
//! The first stage is a fixed bank of oriented band-pass filters producing
//! rectified (simple-cell) and energy (complex-cell) feature maps. The
//! second stage is a learned convolutional layer trained with a
//! self-supervised objective that pushes each image's response statistics
//! away from the pooled statistics of the whole batch. Classification is
//! done with a quadratic discriminant over globally pooled features, and
//! representational similarity tooling compares model responses against
//! recorded neural data.

pub mod error;
pub mod fft;
pub mod image;
pub mod manifest;
pub mod scramble;
pub mod v1;

pub use error::{Error, Result};
