//! Modularity and Louvain community detection.

mod brute;
mod louvain;
mod modularity;
mod partition;
mod stabilize;

pub use brute::{brute_force_best, BRUTE_FORCE_LIMIT};
pub use louvain::{louvain, LouvainConfig};
pub use modularity::modularity;
pub use partition::Partition;
pub use stabilize::{stabilize, stabilized_count, StabilizeOptions, StabilizedResult, DEFAULT_RUNS};

pub(crate) use modularity::ModularityScore;
