//! Constructions that turn other problems into elections.

mod catalog;
mod mcgarvey;

pub use catalog::{
    build_reduction, build_reduction_seeded, random_source, verify_pair, verify_reduction, ReductionCheck,
    ReductionKind, ReductionTag, SourceBounds, TargetFamily, TARGET_CAPS,
};
pub use mcgarvey::{mcgarvey_election, OrientedGraph};
