//! Spatial operators, RK4 and the evolution loop.

pub mod evolve;
pub mod mol;
pub mod rk4;
pub mod stencils;

pub use evolve::{evolve, EvolveConfig, EvolveOutcome, NoObserver, Observer, RunStatus};
pub use mol::{deinterleave, interleave, Discretization, Rk4Stages};
pub use rk4::{rk4_update, Rk4Buffers};
pub use stencils::{AxisStencil, StencilSet};
