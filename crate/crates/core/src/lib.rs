//! Exact solutions of the semi-discrete Gardner lattice and the numerical
//! machinery used to check them.

pub mod analysis;
pub mod config;
pub mod error;
pub mod lattice;
pub mod linalg;
pub mod model;
pub mod params;
pub mod spectral;
pub mod steplike;
pub mod symmetric;

pub use analysis::{
    classify_collision, measure_interaction, region_map, track_peaks, CollisionReport, CollisionType,
    InteractionContext, MeasureOptions, Peak, RegionCell, RegionLabel,
};
pub use error::{Error, Result};
pub use lattice::{integrate, ode_residual, zero_curvature_residual, Ghosts, LatticeState};
pub use model::{ConstantField, Evaluator, Family, ModelInfo, SolutionModel, Trajectory};
pub use params::{GardnerParams, SpectralPoint};
pub use steplike::{kink_front_position, theta_condition_check, Kink, KinkSpec, Radical, StepBoundary};
pub use config::RunConfig;
pub use symmetric::{
    phase_shifts, DoublePole, DoublePoleSpec, Eigen, MultiSoliton, OneSoliton, PhaseShift, SolitonSpec,
    TwoSoliton,
};
