//! Seeded generators for every set-system family the toolkit benchmarks on.
//!
//! All generators are pure functions of their parameters and seed.

mod geometric;
mod graph;
mod projective;

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use serde::Deserialize;

pub use geometric::{
    disk_range, gen_circle_disks, gen_grid, gen_random_halfspaces, halfspace_range, levels_per_axis,
};
pub use graph::{gen_graph_neighborhood, gen_powerlaw_graph, load_graph_edgelist, powerlaw_vc_dimension, Graph};
pub use projective::{gen_projective_plane, is_prime};

use crate::error::{Error, Result};
use crate::system::SetSystem;

/// A set-system family together with its parameters.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GenSpec {
    Grid {
        n: usize,
        d: usize,
        seed: u64,
    },
    RandomHalfspaces {
        n: usize,
        d: usize,
        m: usize,
        seed: u64,
    },
    /// Radius-`r` neighborhoods of a power-law random graph.
    PowerLaw {
        n: usize,
        beta: f64,
        #[serde(default = "default_radius")]
        r: u32,
        seed: u64,
    },
    /// Radius-`r` neighborhoods of a graph read from a SNAP edge list.
    GraphNeighborhood {
        path: PathBuf,
        #[serde(default = "default_radius")]
        r: u32,
    },
    ProjectivePlane {
        order: u64,
    },
    CircleDisks {
        n: usize,
        circles: usize,
        m: usize,
        seed: u64,
    },
}

fn default_radius() -> u32 {
    1
}

impl GenSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GenSpec::Grid { .. } => "grid",
            GenSpec::RandomHalfspaces { .. } => "random-halfspaces",
            GenSpec::PowerLaw { .. } => "power-law",
            GenSpec::GraphNeighborhood { .. } => "graph-neighborhood",
            GenSpec::ProjectivePlane { .. } => "projective-plane",
            GenSpec::CircleDisks { .. } => "circle-disks",
        }
    }

    /// Whether the family is the axis-aligned grid, which takes the smaller
    /// default sample count in part-at-once partitioning.
    pub fn is_grid(&self) -> bool {
        matches!(self, GenSpec::Grid { .. })
    }

    /// Exponent of the potential function used for this family when none is
    /// given: the ambient dimension for geometric systems, the measured
    /// VC-dimension for power-law graphs (3 when unmeasured), 2 for
    /// projective planes and disks, 3 for other graphs.
    pub fn default_potential_d(&self) -> f64 {
        match *self {
            GenSpec::Grid { d, .. } | GenSpec::RandomHalfspaces { d, .. } => d as f64,
            GenSpec::PowerLaw { n, beta, .. } => powerlaw_vc_dimension(n, beta).unwrap_or(3.0),
            GenSpec::GraphNeighborhood { .. } => 3.0,
            GenSpec::ProjectivePlane { .. } | GenSpec::CircleDisks { .. } => 2.0,
        }
    }

    pub fn generate(&self) -> Result<SetSystem> {
        match *self {
            GenSpec::Grid { n, d, seed } => gen_grid(n, d, seed),
            GenSpec::RandomHalfspaces { n, d, m, seed } => gen_random_halfspaces(n, d, m, seed),
            GenSpec::PowerLaw { n, beta, r, seed } => gen_graph_neighborhood(&gen_powerlaw_graph(n, beta, seed)?, r),
            GenSpec::GraphNeighborhood { ref path, r } => {
                let file = File::open(path)
                    .map_err(|e| Error::Config(format!("cannot open edge list {}: {e}", path.display())))?;
                gen_graph_neighborhood(&load_graph_edgelist(BufReader::new(file))?, r)
            }
            GenSpec::ProjectivePlane { order } => gen_projective_plane(order),
            GenSpec::CircleDisks { n, circles, m, seed } => gen_circle_disks(n, circles, m, seed),
        }
    }
}
