//! Method-of-lines solver for first-order hyperbolic systems with GLM curl and
//! divergence cleaning, up to the augmented FO-CCZ4 formulation of the
//! Einstein equations.
//!
//! Everything is generic over the scalar type ([`Real`], implemented for
//! `f32` and `f64`); the aliases below fix `f64`.

pub mod constraints;
pub mod curvature;
pub mod discretization;
pub mod error;
pub mod scalar;
pub mod scenarios;
pub mod state;
pub mod systems;

pub use constraints::{ConstraintReport, FamilyNorms};
pub use discretization::{
    evolve, Discretization, EvolveConfig, EvolveOutcome, NoObserver, Observer, RunStatus,
};
pub use error::{EvolveError, LoadError, RhsError, StateError};
pub use scalar::Real;
pub use state::{
    layout_for, Boundary, Ccz4Params, Cleaning, CleaningSet, FieldSnapshot, GridSpec,
    InductionParams, Slicing, SystemDescriptor, SystemKind, ToyParams, ToySource,
};
pub use systems::{Foccz4System, InductionSystem, MatterModel, MatterRecord, System, ToySystem};

pub type Grid = GridSpec<f64>;
pub type Snapshot = FieldSnapshot<f64>;
pub type Ccz4Params64 = Ccz4Params<f64>;
pub type ToyParams64 = ToyParams<f64>;
pub type InductionParams64 = InductionParams<f64>;
pub type Foccz4System64 = Foccz4System<f64>;
pub type EvolveConfig64 = EvolveConfig<f64>;
