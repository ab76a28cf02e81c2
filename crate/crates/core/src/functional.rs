//! The dissipation potential behind the front-coupled content equation, its
//! coercivity constants, and a stationarity residual.
//!
//! For a frozen front position the evolution is the gradient flow of a
//! convex functional: a Dirichlet-type gradient term plus two boundary
//! potentials, one for the swelling flux at the moving end and one for the
//! moisture intake at the wall. The functional takes the value "unbounded"
//! outside the admissible set (negative content), which the evaluator
//! reports as a distinguished variant rather than a float infinity.

use crate::error::SolverError;
use crate::model::ValidatedModel;
use crate::quad::integrate;
use crate::transform::{diffusion_coeff, ReferenceGrid};

/// Absolute tolerance of the intake-potential quadrature.
const G2_QUAD_TOL: f64 = 1e-12;

/// Finite value of the functional, split into its three parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalValue {
    /// `k / (2 (s-a)^2)` times the trapezoid integral of the squared
    /// discrete content gradient.
    pub gradient_part: f64,
    /// Swelling potential at the moving end, evaluated at the front content.
    pub g1: f64,
    /// Intake potential at the wall, evaluated at the wall content;
    /// nonpositive.
    pub g2: f64,
    /// Sum of the three parts.
    pub total: f64,
}

/// Value of the functional: finite with its decomposition, or unbounded
/// when the field leaves the admissible set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiValue {
    Finite(FunctionalValue),
    Unbounded,
}

impl PsiValue {
    /// The decomposition, when finite.
    pub fn finite(&self) -> Option<FunctionalValue> {
        match self {
            PsiValue::Finite(v) => Some(*v),
            PsiValue::Unbounded => None,
        }
    }

    /// The total, when finite.
    pub fn total(&self) -> Option<f64> {
        self.finite().map(|v| v.total)
    }
}

/// Discrete content gradient at every node: central differences inside,
/// second-order one-sided stencils at the two ends.
pub fn content_gradient(u: &[f64], grid: ReferenceGrid) -> Vec<f64> {
    let n = grid.n();
    let dy = grid.dy();
    let mut d = vec![0.0; n + 1];
    d[0] = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy);
    for i in 1..n {
        d[i] = (u[i + 1] - u[i - 1]) / (2.0 * dy);
    }
    d[n] = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * dy);
    d
}

/// Trapezoid integral over the reference interval of nodal values.
pub fn trapezoid(values: &[f64], grid: ReferenceGrid) -> f64 {
    let n = grid.n();
    let mut sum = 0.5 * (values[0] + values[n]);
    for &v in &values[1..n] {
        sum += v;
    }
    sum * grid.dy()
}

/// Swelling potential at the moving end: the integral of the truncated
/// front law from zero to `r`, scaled by the wetted width.
///
/// Below the truncation level the integrand is constant, so the potential
/// is linear there and cubic above; both branches are closed forms.
pub fn g1_value(r: f64, s: f64, model: &ValidatedModel) -> f64 {
    let p = model.phi_at_a();
    let f = model.phi(s);
    let a0 = model.a0();
    let width = s - model.a();
    if r <= p {
        a0 * p * (p - f) * r / width
    } else {
        let head = a0 * p * p * (p - f);
        let tail = a0 * ((r * r * r - p * p * p) / 3.0 - f * (r * r - p * p) / 2.0);
        (head + tail) / width
    }
}

/// Intake potential at the wall: minus the integral of the intake flux from
/// zero to `r`, scaled by the wetted width. Computed by adaptive quadrature.
pub fn g2_value(r: f64, s: f64, h_val: f64, model: &ValidatedModel) -> f64 {
    let width = s - model.a();
    let henry = model.henry();
    let integral = integrate(&|xi| model.beta(h_val - henry * xi), 0.0, r, G2_QUAD_TOL);
    -integral / width
}

/// Evaluate the functional at a field on the reference grid.
///
/// A field with a negative node lies outside the admissible set and the
/// functional is unbounded there; this is a domain marker, not a fault.
pub fn psi_eval(
    u: &[f64],
    s: f64,
    h_val: f64,
    model: &ValidatedModel,
    grid: ReferenceGrid,
) -> PsiValue {
    debug_assert_eq!(u.len(), grid.len());
    if u.iter().any(|&v| v < 0.0) {
        return PsiValue::Unbounded;
    }
    let n = grid.n();
    let d = content_gradient(u, grid);
    let squared: Vec<f64> = d.iter().map(|&v| v * v).collect();
    let gradient_part = 0.5 * diffusion_coeff(s, model.a(), model.k()) * trapezoid(&squared, grid);
    let g1 = g1_value(u[n], s, model);
    let g2 = g2_value(u[0], s, h_val, model);
    PsiValue::Finite(FunctionalValue { gradient_part, g1, g2, total: gradient_part + g1 + g2 })
}

/// Constants of the coercivity bound `(value at wall or front)^2` and
/// `gradient part <= cap0 * psi + cap1`, valid for fronts inside
/// `[a + delta_guard, l_guard]`.
#[derive(Debug, Clone, Copy)]
pub struct CoercivityConstants {
    /// Cubic-growth coefficient of the swelling potential.
    pub c0: f64,
    /// Additive offset absorbing the bounded parts of the swelling potential.
    pub c1: f64,
    /// Intake contribution to the offset.
    pub b: f64,
    /// Coefficient of the front-content bound extracted from the potential.
    pub p: f64,
    /// Combined offset rate.
    pub r: f64,
    /// Multiplier of the functional in the final bound.
    pub cap0: f64,
    /// Additive constant in the final bound.
    pub cap1: f64,
}

/// Coercivity constants of the functional over fronts in
/// `[a + delta_guard, l_guard]`.
///
/// `cap1` grows as the width floor `delta_guard` shrinks and as the position
/// cap `l_guard` grows; the bound degenerates in either limit, which is why
/// both guards are required up front.
pub fn coercivity_constants(
    model: &ValidatedModel,
    l_guard: f64,
    delta_guard: f64,
) -> Result<CoercivityConstants, SolverError> {
    if !l_guard.is_finite() || !delta_guard.is_finite() {
        return Err(SolverError::BadGuards { reason: "guards must be finite".into() });
    }
    if l_guard <= model.a() {
        return Err(SolverError::BadGuards {
            reason: format!("position cap {l_guard} does not exceed the wall {}", model.a()),
        });
    }
    if delta_guard <= 0.0 {
        return Err(SolverError::BadGuards {
            reason: format!("width floor {delta_guard} must be strictly positive"),
        });
    }
    if delta_guard > l_guard - model.a() {
        return Err(SolverError::BadGuards {
            reason: format!(
                "width floor {delta_guard} exceeds the largest width {}",
                l_guard - model.a()
            ),
        });
    }

    let a0 = model.a0();
    let k = model.k();
    let pa = model.phi_at_a();
    let c_phi = model.c_phi();
    let c_beta = model.c_beta();
    let span = l_guard - model.a();

    // Split the cubic growth of the swelling potential at eta; one third of
    // the cube survives and the rest is absorbed into the offset.
    let eta: f64 = 0.3;
    let c0 = a0 / 3.0 * (1.0 - 2.0 * eta.powf(1.5));
    let spill = a0 / 3.0 * (c_phi / (2.0 * eta)).powi(3) - 2.0 * a0 / 3.0 * pa.powi(3)
        + a0 / 2.0 * pa * pa * c_phi;
    let c1 = spill.max(0.0) + c0 * pa.powi(3) + a0 * pa * pa * c_phi;

    let b = span / (2.0 * c0 * pa) * (c_beta / delta_guard).powi(2) + c_beta * c_beta / k;
    let p = c0 * pa / (2.0 * span);
    let r = c1 / delta_guard + b;
    let cap0 = (8.0 * span * span / k + 2.0 / p).max(2.0);
    let cap1 = cap0 * r;

    Ok(CoercivityConstants { c0, c1, b, p, r, cap0, cap1 })
}

/// Stationarity residuals of a field against the subdifferential of the
/// functional.
#[derive(Debug, Clone, Copy)]
pub struct SubdiffResidual {
    /// Gap in the wall flux identity.
    pub wall: f64,
    /// Gap in the moving-end flux identity.
    pub front: f64,
    /// Largest interior gap between the functional's discrete gradient and
    /// the narrow-stencil diffusion operator.
    pub interior: f64,
}

/// Measure how far a field is from satisfying the stationarity conditions
/// of the functional at front position `s` and ambient moisture `h_val`.
///
/// The two boundary residuals compare one-sided content gradients with the
/// respective flux laws. The interior residual applies the mass-weighted
/// gradient of the discrete Dirichlet term — a wide-stencil diffusion
/// operator — and measures its gap to the narrow stencil; both are
/// second-order consistent, so the gap vanishes at that rate for smooth
/// fields and exactly for constant ones.
pub fn subdiff_residual(
    u: &[f64],
    s: f64,
    h_val: f64,
    model: &ValidatedModel,
    grid: ReferenceGrid,
) -> SubdiffResidual {
    debug_assert_eq!(u.len(), grid.len());
    let n = grid.n();
    let dy = grid.dy();
    let k = model.k();
    let width = s - model.a();
    let big_d = diffusion_coeff(s, model.a(), k);

    let d0 = (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * dy);
    let wall = (-(k / width) * d0 - model.beta(h_val - model.henry() * u[0])).abs();

    let dn = (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * dy);
    let w = model.sigma(u[n]);
    let front = (-(k / width) * dn - model.a0() * w * (w - model.phi(s))).abs();

    let mut interior: f64 = 0.0;
    for i in 2..=n - 2 {
        let wide = big_d * (2.0 * u[i] - u[i - 2] - u[i + 2]) / (4.0 * dy * dy);
        let narrow = big_d * (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (dy * dy);
        interior = interior.max((wide + narrow).abs());
    }

    SubdiffResidual { wall, front, interior }
}
