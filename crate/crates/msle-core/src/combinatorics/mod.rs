//! Link patterns, Dyck paths, the nesting order, the Kenyon–Wilson relation,
//! and cover-inclusive Dyck tilings.

pub mod dyck;
pub mod kw;
pub mod link_pattern;
pub mod tiling;

pub use dyck::DyckPath;
pub use kw::{
    incidence_matrix, incidence_matrix_with_cap, inverse_matrix, inverse_matrix_with_cap,
    kw_related, SignedIntMatrix,
};
pub use link_pattern::LinkPattern;
pub use tiling::{count_cover_inclusive_tilings, SkewShape};
