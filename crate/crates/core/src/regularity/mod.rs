//! Regularity partitions: data types, verifiers for each definition variant,
//! error redistribution and constructors.

mod build;
mod partition;
mod redistribute;
mod slicewise;
mod symmetrize;
mod verify;

pub use build::{
    build_decent_partition, build_mixed_partition, build_slicewise_pair_partitions, DecentPartitionConfig,
    MixedPartition, MixedPartitionConfig, RepresentativeNote, SlicewiseConfig, SlicewiseOutcome, StopRule,
};
pub use partition::{DecayFunction, PairPartition, Rectangle, VertexPartition};
pub use redistribute::{merge_error_bound, proportional_error_bound, redistribute_error, Redistribution};
pub use slicewise::{verify_slicewise_regularity, verify_strong_slicewise, SigmaSets};
pub use symmetrize::{local_symmetrize, Symmetrization};
pub use verify::{
    find_irregular_box, in_regular_interval, verify_approx_perfect, verify_stable_regularity,
    verify_strong_stable_regularity, BoxReport, ClassDecency, ErrorCheck, RegularityReport, Variant,
};
