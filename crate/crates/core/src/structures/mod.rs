//! Tree embeddings, sparse spanners and cluster covers.

mod cover;
mod frt;
mod spanner;

pub use cover::{edge_subdivide, split_cover, ClusterCover, CoverMode, DIAMETER_FACTOR};
pub use frt::{frt_embed, HstNode, HstTree};
pub use spanner::{default_alpha, sparse_spanner, Spanner, SpannerError};
