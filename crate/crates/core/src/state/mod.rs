//! Layouts, symmetric packing, parameter records and grid geometry.

pub mod grid;
pub mod layout;
pub mod params;
pub mod snapshot;
pub mod sym3;

pub use grid::{Boundary, GridSpec};
pub use layout::{layout_for, SystemDescriptor, SystemKind};
pub use params::{
    Ccz4Params, Cleaning, CleaningSet, InductionParams, Slicing, ToyParams, ToySource,
    ToySourceValue,
};
pub use snapshot::FieldSnapshot;
pub use sym3::{Sym3, SYM, SYM_PAIRS};
