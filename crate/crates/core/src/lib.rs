//! Numerical dynamics of bilateral weighted backward shifts `B_w` on
//! `l^p(Z)` and of composition operators `T_f` induced by dissipative maps
//! on measure towers.
//!
//! The two families are linked by the factor map `Pi`, which semiconjugates
//! `T_f` to `B_w` for `w_k = (mu(f^{k-1}(W)) / mu(f^k(W)))^(1/p)`. Every
//! property of `T_f` is decided from the level masses of the tower:
//! hypercyclicity and recurrence by decay of block masses, chaos and its
//! frequent relatives by summability of the masses.
//!
//! All asymptotic notions are evaluated at a finite horizon and reported as
//! [`Verdict`]s that carry it.

pub mod conjugacy;
pub mod criteria;
pub mod densities;
pub mod error;
pub mod function;
pub mod generators;
pub mod numerics;
pub mod operators;
pub mod orbits;
pub mod sequence;
pub mod tower;
pub mod verdict;
pub mod weights;

pub use conjugacy::{check_semiconjugacy, derive_weights, factor_map, lift, SemiconjugacyReport};
pub use criteria::{
    build_periodic_point, chaos_criterion, classify, classify_via_shift, hypercyclicity_criterion,
    recurrence_criterion, Classification, CriteriaConfig, PeriodicPoint,
};
pub use densities::{lower_density, upper_banach_density, BanachDensity, HitSet, LowerDensity};
pub use error::{Error, Result};
pub use function::TowerFunction;
pub use generators::{
    tower_from_profile, tower_from_weights, Cells, Family, Profile, SampleBounds, TowerRecipe,
};
pub use operators::{
    apply_composition, apply_shift, operator_norm_bound, CompositionOperator, LinearOperator, WeightedShift,
};
pub use orbits::{
    frequent_recurrence_evidence, orbit_distances, recurrence_hits, Evidence, EvidenceConfig, EvidenceReport,
};
pub use sequence::BilateralSequence;
pub use tower::{validate, LevelProfile, MeasureTower, StarConstants, TowerSpec};
pub use verdict::{Diagnostics, PairOutcome, SeriesTail, Status, Verdict};
pub use weights::WeightSequence;
