//! Exact arithmetic-dynamics toolkit for regular affine automorphisms.
pub mod cli;
pub mod data;
pub mod divisor;
pub mod dynamics;
pub mod heights;
pub mod inequality;
pub mod poly;
pub mod report;
