//! Belief measures and Dempster's rule of combination over structured bodies
//! of evidence.
//!
//! Bodies of evidence are organised either by a [cardinality
//! partition](partition) or by a [hierarchical tree](hierarchy). Both avoid
//! enumerating the power set of the frame; the power-set route
//! ([`transform`]) is kept as the commonality-based alternative. Every
//! algorithm reports its cost through an explicit [`OpCounter`].

pub mod body;
pub mod cli;
pub mod combine;
pub mod error;
pub mod frame;
pub mod hierarchy;
pub mod metrics;
pub mod partition;
pub mod propagate;
pub mod set;
pub mod transform;

pub use body::{
    bel_brute, complement_body, duality_bel_from_pl, make_body, normalize, pl_brute, q_brute, Body,
    BodyOfEvidence, MassCheck, MASS_TOLERANCE,
};
pub use combine::{
    choose_strategy, combine, combine_brute, combine_q_strategy, combine_tree, preprocess, CombinationResult,
    Strategy,
};
pub use error::{EvidenceError, Result};
pub use frame::{Frame, ProductFrame, Space, Variable};
pub use hierarchy::{
    bel_via_complement, build_tree, pl_via_complement, q_tree, q_via_tree, validate_tree,
    worst_case_construction_cost, worst_case_q_cost, HierarchicalTree,
};
pub use metrics::{Measure, OpCounter, Phase};
pub use partition::{bel_partition, build_partition, pl_partition, q_partition, CardinalityPartition};
pub use propagate::{
    extend, global_marginal, lift, lower, marginal, project, project_tree, propagate_to_root, validate_markov,
    MarkovNode, MarkovTree, MarkovViolation,
};
pub use set::{ConfigSet, FocalSet, SetLike};
pub use transform::{moebius_invert_q, zeta_transform_q, PowerSetVector};
