//! Shape- and centroid-independent clustering of points on a radius graph.
//!
//! Nodes closer than a radius `r` are adjacent. The adjacency matrix is raised
//! to a power by repeated squaring over the Boolean semiring, after which two
//! nodes share a cluster exactly when their rows of the power matrix overlap.
//! Clusters are then ranked by size.
//!
//! ```
//! use radius_cluster::{cluster_pointset, ClusteringConfig, PointSet};
//!
//! let chain = PointSet::from_coords((0..7).map(|x| vec![x as f64, 0.0])).unwrap();
//! let (labels, table) = cluster_pointset(&chain, &ClusteringConfig::new(1.5).unwrap()).unwrap();
//! assert_eq!(labels.as_slice(), &[1; 7]);
//! assert_eq!(table.top_sizes(3), vec![7]);
//! ```

pub mod cli;
pub mod clustering;
pub mod error;
pub mod geometry;
pub mod matpower;
pub mod scenarios;
pub mod trajectory;

pub use clustering::{
    build_cluster_table, cluster_labels, cluster_pointset, connected_components_oracle,
    ClusterRecord, ClusterTable, Label, LabelVector,
};
pub use error::{Error, Result};
pub use geometry::{
    build_adjacency, euclidean_distance, ClusteringConfig, NodeId, Point, PointSet,
};
pub use matpower::{
    bool_multiply, make_power_plan, power_fast, power_naive_oracle, BinaryMatrix, PowerPlan,
};
pub use scenarios::{generate, ScenarioSpec, Shape};
pub use trajectory::{cluster_frames, detect_events, ClusterEvent, EventKind, Frame};
