//! Temporal graph discovery.
//!
//! A Discoverer learns the time labels of a temporal graph by seeding SIR
//! infection chains and observing the resulting infection logs, while an
//! Adversary answers every round with feedback that stays consistent with
//! some labeling. This crate holds the graph model, the infection
//! simulator, the round-based game harness, discovery strategies, adaptive
//! adversaries, graph-family generators, dataset ingestion and the
//! experiment harness.

pub mod adversaries;
pub mod datasets;
pub mod discoverers;
pub mod error;
pub mod experiments;
pub mod game;
pub mod generators;
pub mod infection;
pub mod labels;
pub mod temporal_graph;
pub mod union_find;

pub use error::{Error, Result};
pub use temporal_graph::{EdgeRecord, NodeId, TemporalGraph, Time, Variant};
