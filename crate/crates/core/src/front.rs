//! Front paths, the Sobolev-type path metric, and the fixed-point
//! construction that couples the field solver to the front law.
//!
//! A candidate front path drives a field solve on the reference interval;
//! the front law applied to that field yields a new path. The map from path
//! to path contracts on short horizons, and its fixed point is the
//! self-consistent front. [`fixed_point_solve`] iterates the map from the
//! constant path and reports the distance trace.

use crate::error::SolverError;
use crate::model::ValidatedModel;
use crate::pde::{solve_on_path, PathSolve, StepperConfig};
use crate::transform::ReferenceGrid;

/// Front position sampled on a uniform time grid starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrontPath {
    /// Time step between samples.
    pub dt: f64,
    /// Positions at `t = 0, dt, 2 dt, ...`; always at least two samples.
    pub s: Vec<f64>,
}

impl FrontPath {
    /// Constant path at `value` over `steps` steps.
    pub fn constant(dt: f64, steps: usize, value: f64) -> Self {
        Self { dt, s: vec![value; steps + 1] }
    }

    /// Number of steps (one less than the number of samples).
    pub fn steps(&self) -> usize {
        self.s.len() - 1
    }

    /// Final sample time.
    pub fn horizon(&self) -> f64 {
        self.steps() as f64 * self.dt
    }

    /// Time of sample `m`.
    pub fn t(&self, m: usize) -> f64 {
        m as f64 * self.dt
    }

    /// Forward-difference rate over step `m`.
    pub fn rate(&self, m: usize) -> f64 {
        (self.s[m + 1] - self.s[m]) / self.dt
    }
}

fn check_same_grid(p: &FrontPath, q: &FrontPath) -> Result<(), SolverError> {
    if p.dt != q.dt || p.s.len() != q.s.len() {
        return Err(SolverError::MismatchedGrids {
            detail: format!(
                "paths sampled on different grids: {} samples at dt = {} vs {} at dt = {}",
                p.s.len(),
                p.dt,
                q.s.len(),
                q.dt
            ),
        });
    }
    Ok(())
}

/// Distance between two paths in the Sobolev path norm: the square root of
/// the time integrals of the squared value gap (trapezoid rule) and the
/// squared rate gap (one rectangle per step).
pub fn w12_distance(p: &FrontPath, q: &FrontPath) -> Result<f64, SolverError> {
    check_same_grid(p, q)?;
    let last = p.steps();
    let mut values = 0.0;
    for m in 0..=last {
        let e = p.s[m] - q.s[m];
        let w = if m == 0 || m == last { 0.5 } else { 1.0 };
        values += w * e * e;
    }
    let mut rates = 0.0;
    for m in 0..last {
        let e = p.rate(m) - q.rate(m);
        rates += e * e;
    }
    Ok((p.dt * (values + rates)).sqrt())
}

/// Sobolev path norm of a single path (its distance to the zero path).
pub fn w12_norm(p: &FrontPath) -> f64 {
    let zero = FrontPath { dt: p.dt, s: vec![0.0; p.s.len()] };
    w12_distance(p, &zero).expect("identical grids by construction")
}

/// Front law: rate produced by a front content `u_front` at position `s`,
/// with the content truncated from below at the wall swelling level.
pub fn front_rhs(model: &ValidatedModel, u_front: f64, s: f64) -> f64 {
    model.a0() * (model.sigma(u_front) - model.phi(s))
}

/// One application of the path-to-path map.
///
/// Solves the field along `s_in` with the potential closure at the moving
/// end, evaluates the front law at every time node, and integrates it from
/// the initial position by the cumulative trapezoid rule. The output path
/// lives on the grid of `s_in`.
pub fn gamma_map(
    s_in: &FrontPath,
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
) -> Result<(FrontPath, PathSolve), SolverError> {
    let n = grid.n();
    let u0 = model.initial_field(n);
    let solve = solve_on_path(s_in, &u0, model, grid, cfg)?;

    let rates: Vec<f64> = solve
        .fields
        .iter()
        .zip(s_in.s.iter())
        .map(|(u, &s)| front_rhs(model, u[n], s))
        .collect();

    let mut s_out = Vec::with_capacity(s_in.s.len());
    let mut pos = model.s0();
    s_out.push(pos);
    for m in 0..s_in.steps() {
        pos += s_in.dt * 0.5 * (rates[m] + rates[m + 1]);
        s_out.push(pos);
    }
    Ok((FrontPath { dt: s_in.dt, s: s_out }, solve))
}

/// Caps enforced on every iterate of the fixed-point loop.
#[derive(Debug, Clone)]
pub struct FixedPointConfig {
    /// Stop when successive paths are closer than this in the path norm.
    pub fp_tol: f64,
    /// Iteration cap.
    pub fp_max: usize,
    /// Bound on the path norm of every iterate.
    pub k_ball: f64,
    /// Strict upper bound on the front position.
    pub l_guard: f64,
}

impl FixedPointConfig {
    /// Conventional caps for a model and horizon: the position bound comes
    /// from integrating the largest admissible rate, the norm ball doubles
    /// the norm such a path can reach, and the tolerance scales with the
    /// square root of the horizon like the norm itself.
    pub fn for_model(model: &ValidatedModel, t_end: f64) -> Self {
        let reach = model.s0() + model.a0() * model.u_cap() * t_end;
        Self {
            fp_tol: 1e-8 * t_end.sqrt(),
            fp_max: 60,
            k_ball: 2.0 * reach * t_end.sqrt() + model.a0() * model.u_cap() * t_end.sqrt(),
            l_guard: reach * (1.0 + 1e-9),
        }
    }
}

/// Result of a converged fixed-point iteration.
#[derive(Debug, Clone)]
pub struct FixedPointOutcome {
    /// The settled front path.
    pub path: FrontPath,
    /// Field history of the final field solve (along the previous iterate).
    pub fields: Vec<Vec<f64>>,
    /// Distance between successive iterates, one entry per iteration.
    pub distances: Vec<f64>,
    pub iterations: usize,
}

/// Iterate the path-to-path map from the constant path until two successive
/// paths agree in the path norm.
///
/// Every iterate is checked against the caps in `fp`: paths that leave the
/// norm ball or cross the position bound abort the iteration rather than
/// continue outside the regime where the map is known to behave.
pub fn fixed_point_solve(
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
    steps: usize,
    fp: &FixedPointConfig,
) -> Result<FixedPointOutcome, SolverError> {
    let mut current = FrontPath::constant(cfg.dt, steps, model.s0());
    let mut distances = Vec::new();

    for iteration in 1..=fp.fp_max {
        let (next, solve) = gamma_map(&current, model, grid, cfg)?;
        if let Some(&peak) = next.s.iter().max_by(|a, b| a.total_cmp(b)) {
            if peak >= fp.l_guard {
                return Err(SolverError::GuardTripped {
                    what: format!("front position {peak} reached the cap {}", fp.l_guard),
                });
            }
        }
        let norm = w12_norm(&next);
        if norm > fp.k_ball {
            return Err(SolverError::GuardTripped {
                what: format!("path norm {norm} left the ball of radius {}", fp.k_ball),
            });
        }
        let d = w12_distance(&next, &current)?;
        distances.push(d);
        current = next;
        if d < fp.fp_tol {
            return Ok(FixedPointOutcome {
                path: current,
                fields: solve.fields,
                distances,
                iterations: iteration,
            });
        }
    }

    let last_distance = distances.last().copied().unwrap_or(f64::NAN);
    Err(SolverError::NoConvergence { iterations: fp.fp_max, last_distance, distances })
}
