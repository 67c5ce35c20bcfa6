#![allow(clippy::result_large_err)]

//! Walker-constructor geometry, structure graph, block addressing and data plane.

pub mod arrangement;
pub mod construction;
pub mod geometry;
pub mod graph;
pub mod label;
pub mod partition;
pub mod rational;
pub mod render;
pub mod store;

pub use arrangement::{build_arrangement, build_arrangement_with_marks, Arrangement};
pub use construction::{plan_routes, RouteError};
pub use construction::{
    run_construction, ConstructionConfig, ConstructionError, ConstructionResult,
};
pub use construction::{verify_trace, Trace, TraceError};
pub use geometry::{GeometryError, Point2, Segment};
pub use graph::{GraphError, LabeledGraph, Mode};
pub use label::Label;
pub use partition::{
    block_layout, enumerate_partitions, partition_blocks, refine, BlockAddress, BlockLayout,
    Partition, PartitionError, PartitionName, PartitionTable, Resolution,
};
pub use rational::Rational;
pub use store::{open_store, AccessPoint, BlockStore, Manifest, StoreError};
