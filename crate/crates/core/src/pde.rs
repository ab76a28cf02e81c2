//! Time stepper for the transformed content equation on the reference
//! interval.
//!
//! Each step solves backward-Euler diffusion implicitly; the advection term
//! (which is proportional to the front rate and therefore small) and the two
//! nonlinear boundary fluxes are frozen at the previous Picard iterate and
//! re-solved until the iterates settle. Flux boundary conditions enter
//! through second-order ghost-node elimination, which keeps the spatial
//! order of the interior scheme.
//!
//! The linear solves are done in increment form (solving for `u_new - u_old`)
//! so a resting state with exactly zero fluxes reproduces itself bit for bit.

use crate::error::SolverError;
use crate::front::FrontPath;
use crate::model::ValidatedModel;
use crate::transform::{advection_coeff, diffusion_coeff, ReferenceGrid};
use crate::tridiag::TriSystem;

/// Discretization of the advection term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdvectionScheme {
    /// First-order differences biased toward the side the information comes
    /// from. Sturdy, but its error can mask the second-order interior scheme.
    UpwindFirst,
    /// Three-point second-order differences with the same bias, falling back
    /// to central/inward stencils next to the boundary. Keeps the overall
    /// spatial order at two while retaining the upwind bias.
    #[default]
    UpwindBiasedSecond,
}

/// Closure used for the flux through the moving end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RightFlux {
    /// Content carried through the moving boundary: `u(1) s_t`. Used when the
    /// front is advanced together with the field.
    Advective,
    /// Flux derived from the swelling potential with the content truncated
    /// from below: `a0 sigma(u(1)) (sigma(u(1)) - phi(s))`. Used when the
    /// field is solved along a prescribed front path.
    Potential,
}

/// Step-size and iteration controls of the stepper.
#[derive(Debug, Clone)]
pub struct StepperConfig {
    /// Time step.
    pub dt: f64,
    /// Sup-norm tolerance between successive Picard iterates.
    pub picard_tol: f64,
    /// Iteration cap for the Picard loop.
    pub picard_max: usize,
    /// Smallest admissible wetted width `s - a`.
    pub delta_min: f64,
    /// Advection discretization.
    pub advection: AdvectionScheme,
}

impl StepperConfig {
    /// Conventional controls for a model: tight Picard tolerance and a wetted
    /// width floor of a thousandth of the wall position.
    pub fn for_model(model: &ValidatedModel, dt: f64) -> Self {
        Self {
            dt,
            picard_tol: 1e-10,
            picard_max: 50,
            delta_min: model.a() * 1e-3,
            advection: AdvectionScheme::default(),
        }
    }
}

/// Field, front, and clock of a running simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct PoreState {
    pub t: f64,
    pub s: f64,
    /// Content at the reference nodes.
    pub u: Vec<f64>,
}

impl PoreState {
    /// The model's initial state sampled on the grid.
    pub fn initial(model: &ValidatedModel, grid: ReferenceGrid) -> Self {
        Self { t: 0.0, s: model.s0(), u: model.initial_field(grid.n()) }
    }
}

/// Outcome of one accepted step.
#[derive(Debug, Clone, Copy)]
pub struct StepStats {
    pub picard_iterations: usize,
    /// Advective Courant number `dt * |s_t| / ((s - a) dy)` of the step.
    pub cfl: f64,
}

struct PicardStats {
    iterations: usize,
}

/// Upwinded first derivative of `v` at node `i`.
///
/// The advection term is `+c u_y` with `c = y s_t/(s-a)`, so characteristics
/// travel toward smaller `y` when `c > 0`: information then comes from the
/// right and the stencil leans that way.
fn upwind_dy(v: &[f64], i: usize, dy: f64, c: f64, scheme: AdvectionScheme) -> f64 {
    let n = v.len() - 1;
    match scheme {
        AdvectionScheme::UpwindFirst => {
            if c >= 0.0 {
                if i < n {
                    (v[i + 1] - v[i]) / dy
                } else {
                    (v[n] - v[n - 1]) / dy
                }
            } else if i > 0 {
                (v[i] - v[i - 1]) / dy
            } else {
                (v[1] - v[0]) / dy
            }
        }
        AdvectionScheme::UpwindBiasedSecond => {
            if c >= 0.0 {
                if i + 2 <= n {
                    (-3.0 * v[i] + 4.0 * v[i + 1] - v[i + 2]) / (2.0 * dy)
                } else if i < n {
                    (v[i + 1] - v[i - 1]) / (2.0 * dy)
                } else {
                    (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * dy)
                }
            } else if i >= 2 {
                (3.0 * v[i] - 4.0 * v[i - 1] + v[i - 2]) / (2.0 * dy)
            } else if i >= 1 {
                (v[i + 1] - v[i - 1]) / (2.0 * dy)
            } else {
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dy)
            }
        }
    }
}

/// Flux applied at the fixed wall for a lag value of the wall content.
fn left_flux(model: &ValidatedModel, h_val: f64, u_wall: f64) -> f64 {
    model.beta(h_val - model.henry() * u_wall)
}

/// Flux applied at the moving end for a lag value of the front content.
fn right_flux(model: &ValidatedModel, right: RightFlux, s: f64, s_t: f64, u_front: f64) -> f64 {
    match right {
        RightFlux::Advective => u_front * s_t,
        RightFlux::Potential => {
            let w = model.sigma(u_front);
            model.a0() * w * (w - model.phi(s))
        }
    }
}

/// Assemble the backward-Euler system for one step, with the advection term
/// and both boundary fluxes evaluated at the lag field `u_lag`.
///
/// Row `i` of the matrix is the ghost-eliminated stencil
/// `(-alpha, 1 + 2 alpha, -alpha)` with `alpha = dt k / ((s-a)^2 dy^2)`;
/// the two flux rows double the off-diagonal entry and carry the eliminated
/// ghost flux on the right-hand side.
#[allow(clippy::too_many_arguments)]
pub fn assemble_step(
    u_old: &[f64],
    u_lag: &[f64],
    s: f64,
    s_t: f64,
    h_val: f64,
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
    right: RightFlux,
) -> TriSystem {
    let n = grid.n();
    let dy = grid.dy();
    let dt = cfg.dt;
    let width = s - model.a();
    let alpha = dt * diffusion_coeff(s, model.a(), model.k()) / (dy * dy);

    let mut lower = vec![-alpha; n];
    let mut upper = vec![-alpha; n];
    let diag = vec![1.0 + 2.0 * alpha; n + 1];
    upper[0] = -2.0 * alpha;
    lower[n - 1] = -2.0 * alpha;

    let g_l = left_flux(model, h_val, u_lag[0]);
    let g_r = right_flux(model, right, s, s_t, u_lag[n]);

    let mut rhs = vec![0.0; n + 1];
    rhs[0] = u_old[0] + 2.0 * dt * g_l / (width * dy);
    for i in 1..n {
        let c = advection_coeff(grid.node(i), s, model.a(), s_t);
        rhs[i] = u_old[i] + dt * c * upwind_dy(u_lag, i, dy, c, cfg.advection);
    }
    let c_n = advection_coeff(1.0, s, model.a(), s_t);
    rhs[n] = u_old[n] - 2.0 * dt * g_r / (width * dy)
        + dt * c_n * upwind_dy(u_lag, n, dy, c_n, cfg.advection);

    TriSystem { lower, diag, upper, rhs }
}

/// Advance the field over one step at fixed front data, iterating the frozen
/// fluxes until successive solves agree.
///
/// Solves in increment form: with `delta = u_new - u_old` the system matrix
/// is unchanged and the right-hand side holds only the diffusion residual of
/// `u_old`, the flux injections, and the lagged advection term — all exactly
/// zero at rest.
#[allow(clippy::too_many_arguments)]
fn advance_field(
    u_old: &[f64],
    s: f64,
    s_t: f64,
    h_val: f64,
    t_next: f64,
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
    right: RightFlux,
) -> Result<(Vec<f64>, PicardStats), SolverError> {
    let n = grid.n();
    let dy = grid.dy();
    let dt = cfg.dt;
    let width = s - model.a();
    let alpha = dt * diffusion_coeff(s, model.a(), model.k()) / (dy * dy);

    let mut lower = vec![-alpha; n];
    let mut upper = vec![-alpha; n];
    let diag = vec![1.0 + 2.0 * alpha; n + 1];
    upper[0] = -2.0 * alpha;
    lower[n - 1] = -2.0 * alpha;

    let coeffs: Vec<f64> =
        (0..=n).map(|i| advection_coeff(grid.node(i), s, model.a(), s_t)).collect();

    let mut v = u_old.to_vec();
    let mut rhs = vec![0.0; n + 1];
    let mut last_delta = f64::INFINITY;
    for sweep in 1..=cfg.picard_max {
        let g_l = left_flux(model, h_val, v[0]);
        let g_r = right_flux(model, right, s, s_t, v[n]);

        rhs[0] = 2.0 * alpha * (u_old[1] - u_old[0]) + 2.0 * dt * g_l / (width * dy);
        for i in 1..n {
            rhs[i] = alpha * (u_old[i - 1] - 2.0 * u_old[i] + u_old[i + 1])
                + dt * coeffs[i] * upwind_dy(&v, i, dy, coeffs[i], cfg.advection);
        }
        rhs[n] = 2.0 * alpha * (u_old[n - 1] - u_old[n]) - 2.0 * dt * g_r / (width * dy)
            + dt * coeffs[n] * upwind_dy(&v, n, dy, coeffs[n], cfg.advection);

        let sys = TriSystem {
            lower: lower.clone(),
            diag: diag.clone(),
            upper: upper.clone(),
            rhs: rhs.clone(),
        };
        let delta = sys.solve();

        let mut diff: f64 = 0.0;
        for i in 0..=n {
            let next = u_old[i] + delta[i];
            if !next.is_finite() {
                return Err(SolverError::PicardDivergence {
                    t: t_next,
                    iterations: sweep,
                    delta: f64::NAN,
                });
            }
            diff = diff.max((next - v[i]).abs());
            v[i] = next;
        }
        last_delta = diff;
        if diff < cfg.picard_tol {
            return Ok((v, PicardStats { iterations: sweep }));
        }
    }
    Err(SolverError::PicardDivergence {
        t: t_next,
        iterations: cfg.picard_max,
        delta: last_delta,
    })
}

/// Advance field and front together by one step.
///
/// The front moves first, explicitly, at the rate read off the current state;
/// the field then takes a backward-Euler step on the updated geometry with
/// the advective closure at the moving end.
pub fn step_monolithic(
    state: &mut PoreState,
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
) -> Result<StepStats, SolverError> {
    let n = grid.n();
    debug_assert_eq!(state.u.len(), n + 1);

    let s_t = model.a0() * (state.u[n] - model.phi(state.s));
    let s_new = state.s + cfg.dt * s_t;
    let width = s_new - model.a();
    if width < cfg.delta_min {
        return Err(SolverError::DegenerateFront { s: s_new, width, floor: cfg.delta_min });
    }

    let t_next = state.t + cfg.dt;
    let (u_new, picard) = advance_field(
        &state.u,
        s_new,
        s_t,
        model.h(t_next),
        t_next,
        model,
        grid,
        cfg,
        RightFlux::Advective,
    )?;

    state.t = t_next;
    state.s = s_new;
    state.u = u_new;
    Ok(StepStats {
        picard_iterations: picard.iterations,
        cfl: cfg.dt * s_t.abs() / (width * grid.dy()),
    })
}

/// Field history of a solve along a prescribed front path.
#[derive(Debug, Clone)]
pub struct PathSolve {
    /// Field at every time node, starting with the initial field.
    pub fields: Vec<Vec<f64>>,
    pub picard_iterations_max: usize,
    pub cfl_max: f64,
}

/// Solve the content equation along a prescribed front path, with the
/// potential-derived closure at the moving end.
///
/// The path supplies the geometry of every step; its forward-difference
/// rates drive the advection term. Fully deterministic: identical inputs
/// produce bit-identical fields.
pub fn solve_on_path(
    path: &FrontPath,
    u0: &[f64],
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
) -> Result<PathSolve, SolverError> {
    let n = grid.n();
    if u0.len() != n + 1 {
        return Err(SolverError::MismatchedGrids {
            detail: format!("initial field has {} nodes, grid has {}", u0.len(), n + 1),
        });
    }
    if (path.dt - cfg.dt).abs() > 0.0 {
        return Err(SolverError::MismatchedGrids {
            detail: format!("path step {} differs from stepper step {}", path.dt, cfg.dt),
        });
    }

    let steps = path.s.len() - 1;
    let mut fields = Vec::with_capacity(steps + 1);
    fields.push(u0.to_vec());
    let mut picard_iterations_max = 0;
    let mut cfl_max: f64 = 0.0;

    let mut u = u0.to_vec();
    for m in 0..steps {
        let s_new = path.s[m + 1];
        let s_t = (path.s[m + 1] - path.s[m]) / path.dt;
        let width = s_new - model.a();
        if width < cfg.delta_min {
            return Err(SolverError::DegenerateFront { s: s_new, width, floor: cfg.delta_min });
        }
        let t_next = (m + 1) as f64 * path.dt;
        let (u_new, picard) = advance_field(
            &u,
            s_new,
            s_t,
            model.h(t_next),
            t_next,
            model,
            grid,
            cfg,
            RightFlux::Potential,
        )?;
        u = u_new;
        fields.push(u.clone());
        picard_iterations_max = picard_iterations_max.max(picard.iterations);
        cfl_max = cfl_max.max(cfg.dt * s_t.abs() / (width * grid.dy()));
    }

    Ok(PathSolve { fields, picard_iterations_max, cfl_max })
}
