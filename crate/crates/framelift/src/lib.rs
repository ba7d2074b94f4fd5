//! Biased graphs, gain graphs, their frame and lift matroids, and exact
//! geometric representations over the rationals and prime fields.
//!
//! The crate is organized around a pipeline: build a [`graph::Graph`], put a
//! bias on it ([`bias::BiasedGraph`]) directly or through gains
//! ([`gain::GainGraph`]), take combinatorial rank oracles
//! ([`matroid`]), build point or hyperplane representations over an exact
//! field ([`repr`]), and check that the combinatorial and linear matroids
//! agree ([`harness`]).

pub mod algebra;
pub mod bias;
pub mod error;
pub mod gain;
pub mod graph;
pub mod group;
pub mod harness;
pub mod json;
pub mod matroid;
pub mod repr;

pub use error::{Error, Result};
