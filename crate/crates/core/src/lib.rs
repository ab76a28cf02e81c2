//! Solver and verification toolkit for a one-dimensional moving-boundary
//! wetting model: diffusion of moisture content behind an advancing
//! saturation front, nonlinear intake at the fixed wall, and a front driven
//! by the local excess of content over the swelling level.
//!
//! The physical domain `[a, s(t)]` is mapped to the fixed reference interval
//! `[0, 1]`; the transformed equation picks up a geometric diffusion factor
//! and a drift term proportional to the front rate. Two solution routes are
//! provided and cross-checked:
//!
//! * [`pde::step_monolithic`] advances front and field together, one
//!   backward-Euler step at a time;
//! * [`front::fixed_point_solve`] freezes a candidate front path, solves the
//!   field along it, regenerates the path from the front law, and iterates
//!   the path-to-path map to its fixed point.
//!
//! The [`verify`] module audits every run against the model's provable
//!   behaviour: content bounds, front-rate bounds, the mass ledger, and the
//!   refinement orders of the discretization. The [`functional`] module
//!   evaluates the convex potential behind the frozen-front evolution along
//!   with its coercivity constants and stationarity residuals.

pub mod config;
pub mod error;
pub mod front;
pub mod functional;
pub mod interp;
pub mod model;
pub mod pde;
pub mod quad;
pub mod sample;
pub mod transform;
pub mod tridiag;
pub mod verify;

pub use config::{Config, Mode};
pub use error::{SolverError, ValidationError, Violation};
pub use front::{
    fixed_point_solve, front_rhs, gamma_map, w12_distance, w12_norm, FixedPointConfig,
    FixedPointOutcome, FrontPath,
};
pub use functional::{
    coercivity_constants, psi_eval, subdiff_residual, CoercivityConstants, FunctionalValue,
    PsiValue, SubdiffResidual,
};
pub use model::{
    default_model_spec, equilibrium_model_spec, CurveSpec, ModelSpec, PhysicalParams, ProfileSpec,
    SignalSpec, ValidatedModel,
};
pub use pde::{
    assemble_step, solve_on_path, step_monolithic, AdvectionScheme, PathSolve, PoreState,
    RightFlux, StepStats, StepperConfig,
};
pub use sample::{FieldShape, Sampler};
pub use transform::{
    advection_coeff, diffusion_coeff, from_reference, to_reference, ReferenceGrid,
};
pub use verify::{
    field_bounds, front_rate_bounds, mass_audit, mass_refinement_spatial,
    mass_refinement_temporal, parse_fields_csv, parse_timeseries_csv, run_gamma, run_monolithic,
    self_convergence_spatial, self_convergence_temporal, write_fields_csv, write_timeseries_csv,
    BoundsReport, FieldHistory, MassAudit, RefinementStudy, RunOutput, RunRecord,
};
