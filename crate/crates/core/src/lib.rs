//! Exact, desk-scale combinatorics of uniform hypergraphs: complexes and
//! partitions, tight walks and components, matchings and fractional
//! matchings, compression, regular slices and reduced graphs, and the
//! standard extremal constructions.

pub mod error;
pub mod hypergraph;
pub mod khg;
pub mod lp;
pub mod matching;
pub mod compression;
pub mod generators;
pub mod rational;
pub mod regularity;
pub mod tight;

pub use error::{Error, Result};
pub use hypergraph::{Complex, EdgeOracle, GroundPartition, Hypergraph, KGraph};
pub use rational::Rational;
