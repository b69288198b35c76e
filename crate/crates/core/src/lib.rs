//! Compression-based programmability coefficient for discrete dynamical systems.
//!
//! The crate simulates one-dimensional cellular automata (with a bit-packed fast
//! path for elementary rules) and Conway's Game of Life, approximates the
//! algorithmic complexity of each space-time diagram by its DEFLATE-compressed
//! size, and measures how strongly that complexity reacts to minimal changes of
//! the input as the runtime grows. The fitted slope of that reaction is the
//! coefficient `C`; [`classify`] builds the zero-computer / computes /
//! equivalence predicates and the 256-rule elementary sweep on top of it.

pub mod classify;
pub mod coefficient;
pub mod complexity;
pub mod engine;
pub mod enumeration;
mod error;

pub use classify::{
    behaviourally_equivalent, c_equivalent, calibrate_epsilon, calibrate_life_epsilon, computes,
    epsilon_from_inert, is_zero_computer, kmeans_1d, quantile, sweep_eca, zero_band,
    CoefficientGrid, InertGrouping, SweepConfig, SweepEntry, SweepReport, EPSILON_FLOOR, INERT_RULES,
};
pub use coefficient::{
    coefficient, difference_sum, fit_phi, variability_curve, CoefficientParams,
    CoefficientResult, CurvePoint, FitResult, GridKey, Model, Normalization, RunParams, VariabilityCurve,
};
pub use complexity::{
    complexity, complexity_of, compressed_size, deserialize, serialize, truncate_payload, ComplexityValue, Dims,
    SpaceTime, COMPRESSOR_ID, STORED_OVERHEAD_BITS,
};
pub use engine::{
    evolve, life_step, rule_from_number, step, Boundary, Configuration, Evolution, LifeRule,
    LifeEvolution, LifeGrid, RuleTable,
};
pub use enumeration::{
    gray_initials, gray_patches, random_grids, random_initials, Family, FamilyDescriptor, InputFamily,
    LifeFamily, Scheme,
};
pub use error::{Error, Result};
