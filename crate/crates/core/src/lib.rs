//! Exact cut-and-project model sets and the Ellis semigroup of their hulls.

pub mod arrangement;
pub mod config;
pub mod cps;
pub mod ellis;
pub mod error;
pub mod hull;
pub mod lp;
pub mod presets;
pub mod qfield;
pub mod render;
pub mod subgroup;
pub mod zmodule;
