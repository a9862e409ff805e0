//! Exact arithmetic for 2-class groups of real multiquadratic fields.

pub mod arith;
pub mod error;
pub mod forms;
pub mod classify;
pub mod local;
pub mod quad;
pub mod multiquad;
pub mod units;
