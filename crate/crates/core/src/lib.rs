//! Balanced partitions with low crossing number for finite set systems.
//!
//! A *set system* is a ground set `0..n` with a family of `m` subsets, the
//! *ranges*. A range crosses a part when it contains some but not all of the
//! part's elements; the crossing number of a partition is the largest number
//! of parts any single range crosses. This crate builds partitions into `t`
//! near-equal parts that keep that number low, using greedy part growth
//! steered by multiplicative range weights, and measures them.
//!
//! - [`system`]: set systems, partitions and crossing arithmetic.
//! - [`generators`]: grids, random halfspaces, power-law and SNAP graph
//!   neighborhoods, projective planes, disks on concentric circles.
//! - [`partitioner`]: the three partitioning strategies.
//! - [`evaluation`]: ε-approximations and benchmark tables.
//! - [`io`]: text formats for set systems and partitions.

pub mod bitset;
pub mod error;
pub mod evaluation;
pub mod generators;
pub mod io;
pub mod partitioner;
pub mod rng;
pub mod system;

pub use error::{Error, Result};
pub use partitioner::{partition, Algorithm, PartitionParams, PotentialConfig, PotentialMode, RunReport};
pub use system::{crosses, crossing_number, validate_partition, CrossingReport, Partition, SetSystem, Violation};
