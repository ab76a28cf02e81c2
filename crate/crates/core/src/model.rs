//! Model data: physical constants, constitutive curves, ambient signal,
//! initial state, and the validation that turns raw specs into a usable model.
//!
//! The model describes water content `u` diffusing through a one-dimensional
//! pore `[a, s(t)]` whose right end swells outward at a rate set by the excess
//! of boundary content over the swelling level `phi(s)`. Water enters at the
//! fixed left end at a rate `beta(h - H u)` driven by the ambient moisture
//! signal `h`.

use crate::error::{ValidationError, Violation};
use crate::interp::{MonotoneCubic, PiecewiseLinear};

/// Number of samples used to bound the derivative of a tabulated curve.
const DENSE_SAMPLES: usize = 10_000;

/// Strictly positive physical constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Fixed left end of the pore.
    pub a: f64,
    /// Swelling-rate coefficient of the moving end.
    pub a0: f64,
    /// Partition constant relating ambient moisture to boundary content.
    pub henry: f64,
    /// Diffusivity of content inside the pore.
    pub k: f64,
    /// End of the modelled time interval.
    pub t_end: f64,
}

/// A constitutive curve before validation: either the built-in rational
/// family or a monotone table.
///
/// The rational family is `r -> cap * r^2 / (r^2 + scale^2)` for `r > 0` and
/// zero otherwise: bounded by `cap`, nondecreasing, continuously
/// differentiable at zero.
#[derive(Debug, Clone, PartialEq)]
pub enum CurveSpec {
    Rational { cap: f64, scale: f64 },
    Tabulated(Vec<(f64, f64)>),
}

/// Ambient moisture signal before validation.
#[derive(Debug, Clone, PartialEq)]
pub enum SignalSpec {
    Constant(f64),
    /// `(t, value)` knots, linearly interpolated, covering the full time range.
    Table(Vec<(f64, f64)>),
}

/// Initial content profile before validation, defined over `[a, s0]`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Constant(f64),
    /// Samples on a uniform grid over `[a, s0]`, linearly interpolated.
    Samples(Vec<f64>),
}

/// A complete model description as plain data.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub physical: PhysicalParams,
    pub beta: CurveSpec,
    pub phi: CurveSpec,
    pub boundary: SignalSpec,
    pub s0: f64,
    pub u0: ProfileSpec,
}

/// A validated constitutive curve.
#[derive(Debug, Clone)]
enum Curve {
    Rational { cap: f64, scale: f64 },
    Tabulated(MonotoneCubic),
}

impl Curve {
    fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        match self {
            Curve::Rational { cap, scale } => {
                let r2 = r * r;
                cap * r2 / (r2 + scale * scale)
            }
            Curve::Tabulated(c) => c.eval(r),
        }
    }

    /// Least upper bound of the curve.
    fn sup(&self) -> f64 {
        match self {
            Curve::Rational { cap, .. } => *cap,
            // Nondecreasing with constant extension: the last knot is the sup.
            Curve::Tabulated(c) => c.last_value(),
        }
    }

    /// Upper bound of the derivative.
    fn sup_prime(&self) -> f64 {
        match self {
            // d/dr [cap r^2/(r^2+b^2)] = 2 cap b^2 r/(r^2+b^2)^2, maximal at
            // r = b/sqrt(3) with value (3 sqrt(3)/8) cap / b.
            Curve::Rational { cap, scale } => 3.0 * 3.0f64.sqrt() / 8.0 * cap / scale,
            // The derivative vanishes beyond the knot range, so sampling the
            // knot span bounds the slope everywhere.
            Curve::Tabulated(c) => {
                let (lo, hi) = (c.first_x(), c.last_x());
                let mut worst: f64 = 0.0;
                for i in 0..=DENSE_SAMPLES {
                    let x = lo + (hi - lo) * i as f64 / DENSE_SAMPLES as f64;
                    worst = worst.max(c.derivative(x).abs());
                }
                worst
            }
        }
    }
}

/// Validated ambient signal.
#[derive(Debug, Clone)]
enum Signal {
    Constant(f64),
    Table(PiecewiseLinear),
}

impl Signal {
    fn eval(&self, t: f64) -> f64 {
        match self {
            Signal::Constant(v) => *v,
            Signal::Table(f) => f.eval(t),
        }
    }

    fn sup(&self) -> f64 {
        match self {
            Signal::Constant(v) => *v,
            Signal::Table(f) => f.max_value(),
        }
    }
}

/// A model that passed every admissibility check, with derived constants
/// cached for the solver and the estimates.
#[derive(Debug, Clone)]
pub struct ValidatedModel {
    physical: PhysicalParams,
    beta: Curve,
    phi: Curve,
    boundary: Signal,
    s0: f64,
    u0: ProfileSpec,
    phi_at_a: f64,
    sup_beta: f64,
    sup_beta_prime: f64,
    sup_phi: f64,
    sup_phi_prime: f64,
    h_sup: f64,
    u_cap: f64,
}

impl ModelSpec {
    /// Check every admissibility condition and build the validated model.
    ///
    /// All violations are collected; dependent checks are skipped when their
    /// inputs are already known to be bad, so each root cause is reported once.
    pub fn validate(&self) -> Result<ValidatedModel, ValidationError> {
        let mut violations = Vec::new();
        let p = self.physical;

        let positive = |v: f64| v.is_finite() && v > 0.0;
        for (field, value) in [
            ("a", p.a),
            ("a0", p.a0),
            ("H", p.henry),
            ("k", p.k),
            ("T", p.t_end),
        ] {
            if !positive(value) {
                violations.push(Violation::A1 { field, value });
            }
        }

        let boundary = self.build_signal(&mut violations);
        let beta = self.build_curve(&self.beta, "uptake curve", 3, &mut violations);
        let phi = self.build_curve(&self.phi, "swelling curve", 4, &mut violations);

        let h_sup = boundary.as_ref().map(Signal::sup);
        let u_cap = match h_sup {
            Some(hs) if positive(p.henry) => Some(hs / p.henry),
            _ => None,
        };

        let phi_at_a = match (&phi, positive(p.a)) {
            (Some(curve), true) => {
                let v = curve.eval(p.a);
                let sup = curve.sup();
                if !positive(sup) || !positive(v) {
                    violations.push(Violation::A4 {
                        detail: format!("swelling curve must be positive at a = {} (got {v})", p.a),
                    });
                    None
                } else {
                    if sup > 2.0 * v {
                        let hint = match &self.phi {
                            CurveSpec::Rational { .. } => " (for the rational family this means r_phi > a)",
                            CurveSpec::Tabulated(_) => "",
                        };
                        violations.push(Violation::A4 {
                            detail: format!(
                                "swelling cap {sup} exceeds twice the level at a ({}){hint}",
                                2.0 * v
                            ),
                        });
                    }
                    if let Some(cap) = u_cap {
                        if sup > cap {
                            violations.push(Violation::A4 {
                                detail: format!(
                                    "swelling cap {sup} exceeds the ambient content ceiling {cap}"
                                ),
                            });
                        }
                    }
                    Some(v)
                }
            }
            _ => None,
        };

        // Initial state.
        if !(self.s0.is_finite() && positive(p.a) && self.s0 > p.a) {
            if self.s0.is_finite() && positive(p.a) {
                violations.push(Violation::A5 {
                    detail: format!("initial front s0 = {} must lie right of a = {}", self.s0, p.a),
                });
            } else if !self.s0.is_finite() {
                violations.push(Violation::A5 {
                    detail: format!("initial front s0 = {} must be finite", self.s0),
                });
            }
        }
        let u0_samples: &[f64] = match &self.u0 {
            ProfileSpec::Constant(c) => std::slice::from_ref(c),
            ProfileSpec::Samples(v) => v,
        };
        if u0_samples.is_empty() {
            violations.push(Violation::A5 { detail: "initial profile has no samples".into() });
        }
        if let ProfileSpec::Samples(v) = &self.u0 {
            if v.len() == 1 {
                violations.push(Violation::A5 {
                    detail: "sampled initial profile needs at least 2 samples".into(),
                });
            }
        }
        for (j, &v) in u0_samples.iter().enumerate() {
            if !v.is_finite() {
                violations.push(Violation::A5 { detail: format!("u0 sample {j} is not finite") });
                continue;
            }
            if let Some(floor) = phi_at_a {
                if v < floor {
                    violations.push(Violation::A5 {
                        detail: format!("u0 sample {j} = {v} below the swelling level at a ({floor})"),
                    });
                }
            }
            if let Some(cap) = u_cap {
                if v > cap {
                    violations.push(Violation::A5 {
                        detail: format!("u0 sample {j} = {v} above the ambient content ceiling {cap}"),
                    });
                }
            }
        }

        if !violations.is_empty() {
            return Err(ValidationError(violations));
        }

        let beta = beta.expect("validated");
        let phi = phi.expect("validated");
        let boundary = boundary.expect("validated");
        let sup_beta = beta.sup();
        let sup_beta_prime = beta.sup_prime();
        let sup_phi = phi.sup();
        let sup_phi_prime = phi.sup_prime();
        let h_sup = h_sup.expect("validated");
        Ok(ValidatedModel {
            physical: p,
            beta,
            phi,
            boundary,
            s0: self.s0,
            u0: self.u0.clone(),
            phi_at_a: phi_at_a.expect("validated"),
            sup_beta,
            sup_beta_prime,
            sup_phi,
            sup_phi_prime,
            h_sup,
            u_cap: u_cap.expect("validated"),
        })
    }

    fn build_signal(&self, violations: &mut Vec<Violation>) -> Option<Signal> {
        match &self.boundary {
            SignalSpec::Constant(v) => {
                if !v.is_finite() || *v < 0.0 {
                    violations.push(Violation::A2 {
                        detail: format!("ambient signal must be finite and nonnegative, got {v}"),
                    });
                    return None;
                }
                Some(Signal::Constant(*v))
            }
            SignalSpec::Table(knots) => {
                let table = match PiecewiseLinear::new(knots.clone()) {
                    Ok(t) => t,
                    Err(e) => {
                        violations.push(Violation::A2 { detail: format!("ambient signal table: {e}") });
                        return None;
                    }
                };
                let mut ok = true;
                if table.min_value() < 0.0 {
                    violations.push(Violation::A2 {
                        detail: format!("ambient signal dips to {}, must stay nonnegative", table.min_value()),
                    });
                    ok = false;
                }
                if table.first_x() > 0.0 {
                    violations.push(Violation::A2 {
                        detail: format!("ambient signal starts at t = {}, must cover t = 0", table.first_x()),
                    });
                    ok = false;
                }
                let t_end = self.physical.t_end;
                if t_end.is_finite() && t_end > 0.0 && table.last_x() < t_end {
                    violations.push(Violation::A2 {
                        detail: format!("ambient signal ends at t = {}, must cover t = {t_end}", table.last_x()),
                    });
                    ok = false;
                }
                ok.then_some(Signal::Table(table))
            }
        }
    }

    fn build_curve(
        &self,
        spec: &CurveSpec,
        role: &str,
        class: u8,
        violations: &mut Vec<Violation>,
    ) -> Option<Curve> {
        let push = |violations: &mut Vec<Violation>, detail: String| {
            violations.push(match class {
                3 => Violation::A3 { detail },
                _ => Violation::A4 { detail },
            });
        };
        match spec {
            CurveSpec::Rational { cap, scale } => {
                let mut ok = true;
                if !cap.is_finite() || *cap <= 0.0 {
                    push(violations, format!("{role} cap must be positive and finite, got {cap}"));
                    ok = false;
                }
                if !scale.is_finite() || *scale <= 0.0 {
                    push(violations, format!("{role} scale must be positive and finite, got {scale}"));
                    ok = false;
                }
                ok.then_some(Curve::Rational { cap: *cap, scale: *scale })
            }
            CurveSpec::Tabulated(knots) => {
                match MonotoneCubic::new(knots) {
                    Ok(c) => {
                        if knots[0] != (0.0, 0.0) {
                            push(
                                violations,
                                format!("{role} table must start with the knot (0, 0), got {:?}", knots[0]),
                            );
                            return None;
                        }
                        Some(Curve::Tabulated(c))
                    }
                    Err(e) => {
                        push(violations, format!("{role} table: {e}"));
                        None
                    }
                }
            }
        }
    }
}

/// Truncation from below: `r` if it exceeds `floor`, else `floor`.
pub fn truncate_below(r: f64, floor: f64) -> f64 {
    if r > floor {
        r
    } else {
        floor
    }
}

impl ValidatedModel {
    pub fn a(&self) -> f64 {
        self.physical.a
    }

    pub fn a0(&self) -> f64 {
        self.physical.a0
    }

    pub fn henry(&self) -> f64 {
        self.physical.henry
    }

    pub fn k(&self) -> f64 {
        self.physical.k
    }

    pub fn t_end(&self) -> f64 {
        self.physical.t_end
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn physical(&self) -> PhysicalParams {
        self.physical
    }

    /// Swelling level at the fixed wall; the floor used by [`Self::sigma`].
    pub fn phi_at_a(&self) -> f64 {
        self.phi_at_a
    }

    /// Upper bound of the uptake curve.
    pub fn sup_beta(&self) -> f64 {
        self.sup_beta
    }

    /// Combined uptake constant: bound of the curve plus bound of its slope.
    pub fn c_beta(&self) -> f64 {
        self.sup_beta + self.sup_beta_prime
    }

    /// Upper bound of the swelling curve.
    pub fn sup_phi(&self) -> f64 {
        self.sup_phi
    }

    /// Combined swelling constant: bound of the curve plus bound of its slope.
    pub fn c_phi(&self) -> f64 {
        self.sup_phi + self.sup_phi_prime
    }

    /// Peak of the ambient signal over the full time range.
    pub fn h_sup(&self) -> f64 {
        self.h_sup
    }

    /// Ceiling for the content: peak ambient moisture over the partition constant.
    pub fn u_cap(&self) -> f64 {
        self.u_cap
    }

    /// Uptake rate for a moisture excess `r`.
    pub fn beta(&self, r: f64) -> f64 {
        self.beta.eval(r)
    }

    /// Swelling level at front position `r`.
    pub fn phi(&self, r: f64) -> f64 {
        self.phi.eval(r)
    }

    /// Content truncated from below by the swelling level at the wall.
    pub fn sigma(&self, r: f64) -> f64 {
        truncate_below(r, self.phi_at_a)
    }

    /// Ambient moisture at time `t`.
    pub fn h(&self, t: f64) -> f64 {
        self.boundary.eval(t)
    }

    /// Initial content at physical position `z` in `[a, s0]`.
    pub fn u0_at(&self, z: f64) -> f64 {
        match &self.u0 {
            ProfileSpec::Constant(c) => *c,
            ProfileSpec::Samples(v) => {
                let m = v.len();
                let width = self.s0 - self.physical.a;
                let x = ((z - self.physical.a) / width * (m - 1) as f64).clamp(0.0, (m - 1) as f64);
                let j = (x.floor() as usize).min(m - 2);
                let t = x - j as f64;
                v[j] + t * (v[j + 1] - v[j])
            }
        }
    }

    /// Initial content sampled on `n + 1` evenly spaced reference nodes.
    pub fn initial_field(&self, n: usize) -> Vec<f64> {
        match &self.u0 {
            ProfileSpec::Constant(c) => vec![*c; n + 1],
            ProfileSpec::Samples(_) => (0..=n)
                .map(|i| {
                    let y = i as f64 / n as f64;
                    self.u0_at(self.physical.a + y * (self.s0 - self.physical.a))
                })
                .collect(),
        }
    }
}

/// The stock model used by examples and experiment defaults: rational curves,
/// constant ambient moisture, constant initial content.
pub fn default_model_spec() -> ModelSpec {
    ModelSpec {
        physical: PhysicalParams { a: 1.0, a0: 1.0, henry: 1.0, k: 1.0, t_end: 1.0 },
        beta: CurveSpec::Rational { cap: 0.5, scale: 1.0 },
        phi: CurveSpec::Rational { cap: 0.5, scale: 1.0 },
        boundary: SignalSpec::Constant(1.0),
        s0: 2.0,
        u0: ProfileSpec::Constant(0.5),
    }
}

/// A resting model: the swelling curve plateaus, the initial content equals
/// the swelling level at `s0`, and the ambient signal balances the wall
/// content exactly, so nothing should move.
pub fn equilibrium_model_spec() -> ModelSpec {
    ModelSpec {
        physical: PhysicalParams { a: 1.0, a0: 1.0, henry: 1.0, k: 1.0, t_end: 1.0 },
        beta: CurveSpec::Rational { cap: 0.5, scale: 1.0 },
        phi: CurveSpec::Tabulated(vec![
            (0.0, 0.0),
            (0.5, 0.3),
            (1.0, 0.4),
            (1.5, 0.5),
            (2.5, 0.5),
        ]),
        boundary: SignalSpec::Constant(0.5),
        s0: 2.0,
        u0: ProfileSpec::Constant(0.5),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_model_validates_with_expected_constants() {
        let m = default_model_spec().validate().expect("default model is admissible");
        assert_eq!(m.phi_at_a(), 0.25);
        assert_eq!(m.sup_beta(), 0.5);
        assert_eq!(m.sup_phi(), 0.5);
        assert_eq!(m.h_sup(), 1.0);
        assert_eq!(m.u_cap(), 1.0);
        // cap + 3 sqrt(3)/8 * cap / scale
        let expected = 0.5 + 3.0 * 3.0f64.sqrt() / 8.0 * 0.5;
        assert!((m.c_beta() - expected).abs() < 1e-15);
        assert!((m.c_phi() - expected).abs() < 1e-15);
    }

    #[test]
    fn uptake_curve_examples() {
        let m = default_model_spec().validate().unwrap();
        assert_eq!(m.beta(-1.0), 0.0);
        assert_eq!(m.beta(0.0), 0.0);
        assert_eq!(m.beta(1.0), 0.25);
    }

    #[test]
    fn swelling_curve_examples() {
        let m = default_model_spec().validate().unwrap();
        assert_eq!(m.phi(1.0), 0.25); // r equal to the scale: half the cap
        assert_eq!(m.phi(-3.0), 0.0);
    }

    #[test]
    fn truncation_examples() {
        assert_eq!(truncate_below(0.3, 0.5), 0.5);
        assert_eq!(truncate_below(0.7, 0.5), 0.7);
        assert_eq!(truncate_below(0.5, 0.5), 0.5);
    }

    #[test]
    fn curves_are_flat_at_zero() {
        let m = default_model_spec().validate().unwrap();
        let h = 1e-8;
        assert!((m.beta(h) - m.beta(0.0)) / h < 1e-7);
        assert!((m.phi(h) - m.phi(0.0)) / h < 1e-7);
    }

    #[test]
    fn rational_slope_bound_matches_dense_sampling() {
        let m = default_model_spec().validate().unwrap();
        let closed_form = 3.0 * 3.0f64.sqrt() / 8.0 * 0.5;
        let mut sampled: f64 = 0.0;
        for i in 0..200_000 {
            let r = 5.0 * i as f64 / 200_000.0;
            let h = 1e-6;
            sampled = sampled.max((m.beta(r + h) - m.beta(r)) / h);
        }
        assert!((closed_form - sampled).abs() < 1e-4, "closed form {closed_form}, sampled {sampled}");
    }

    #[test]
    fn zero_rate_coefficient_is_rejected() {
        let mut spec = default_model_spec();
        spec.physical.a0 = 0.0;
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A1"));
        assert!(err.to_string().contains("a0"));
    }

    #[test]
    fn low_initial_content_is_rejected() {
        let mut spec = default_model_spec();
        spec.u0 = ProfileSpec::Constant(0.1); // below the swelling level at a (0.25)
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A5"));
    }

    #[test]
    fn swelling_scale_beyond_wall_is_rejected() {
        let mut spec = default_model_spec();
        spec.phi = CurveSpec::Rational { cap: 0.5, scale: 1.5 }; // scale > a
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A4"));
    }

    #[test]
    fn all_violations_are_collected() {
        let mut spec = default_model_spec();
        spec.physical.a0 = -1.0;
        spec.u0 = ProfileSpec::Constant(0.1);
        spec.boundary = SignalSpec::Constant(-2.0);
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A1"));
        assert!(err.mentions("A2"));
        assert!(err.mentions("A5"));
    }

    #[test]
    fn ambient_table_must_cover_the_run() {
        let mut spec = default_model_spec();
        spec.boundary = SignalSpec::Table(vec![(0.0, 1.0), (0.5, 1.0)]); // ends before T = 1
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A2"));
    }

    #[test]
    fn ambient_table_interpolates() {
        let mut spec = default_model_spec();
        spec.boundary = SignalSpec::Table(vec![(0.0, 1.0), (0.5, 2.0), (1.0, 0.5)]);
        // Ceiling rises to 2, so u0 = 0.5 still fits under it.
        let m = spec.validate().unwrap();
        assert_eq!(m.h(0.25), 1.5);
        assert_eq!(m.h(2.0), 0.5); // constant extension beyond the last knot
        assert_eq!(m.h_sup(), 2.0);
    }

    #[test]
    fn sampled_initial_profile_interpolates() {
        let mut spec = default_model_spec();
        spec.u0 = ProfileSpec::Samples(vec![0.5, 0.6, 0.7]);
        let m = spec.validate().unwrap();
        assert_eq!(m.u0_at(1.0), 0.5);
        assert!((m.u0_at(1.25) - 0.55).abs() < 1e-15);
        assert_eq!(m.u0_at(2.0), 0.7);
        let field = m.initial_field(4);
        assert!((field[1] - 0.55).abs() < 1e-15);
    }

    #[test]
    fn equilibrium_model_rests_on_its_plateau() {
        let m = equilibrium_model_spec().validate().expect("equilibrium model is admissible");
        assert_eq!(m.phi(2.0), 0.5); // s0 sits on the plateau
        assert_eq!(m.phi(m.a()), 0.4);
        assert_eq!(m.phi_at_a(), 0.4);
        assert_eq!(m.u_cap(), 0.5);
        // Resting state: no uptake, no front motion.
        assert_eq!(m.beta(m.h(0.0) - m.henry() * 0.5), 0.0);
        assert_eq!(m.a0() * (m.sigma(0.5) - m.phi(2.0)), 0.0);
    }

    #[test]
    fn tabulated_uptake_curve_works() {
        let mut spec = default_model_spec();
        spec.beta = CurveSpec::Tabulated(vec![(0.0, 0.0), (0.5, 0.1), (2.0, 0.4)]);
        let m = spec.validate().unwrap();
        assert_eq!(m.beta(-0.5), 0.0);
        assert_eq!(m.beta(0.5), 0.1);
        assert_eq!(m.beta(5.0), 0.4);
        assert_eq!(m.sup_beta(), 0.4);
        assert!(m.c_beta() > 0.4);
    }

    #[test]
    fn decreasing_uptake_table_is_rejected() {
        let mut spec = default_model_spec();
        spec.beta = CurveSpec::Tabulated(vec![(0.0, 0.0), (0.5, 0.3), (1.0, 0.2)]);
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A3"));
    }

    #[test]
    fn uptake_table_must_anchor_at_zero() {
        let mut spec = default_model_spec();
        spec.beta = CurveSpec::Tabulated(vec![(0.1, 0.0), (0.5, 0.3)]);
        let err = spec.validate().unwrap_err();
        assert!(err.mentions("A3"));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn curves_vanish_left_of_zero(r in -100.0f64..=0.0) {
                let m = default_model_spec().validate().unwrap();
                prop_assert_eq!(m.beta(r), 0.0);
                prop_assert_eq!(m.phi(r), 0.0);
            }

            #[test]
            fn curves_are_nondecreasing(r1 in -5.0f64..5.0, dr in 0.0f64..5.0) {
                let m = default_model_spec().validate().unwrap();
                prop_assert!(m.beta(r1 + dr) >= m.beta(r1));
                prop_assert!(m.phi(r1 + dr) >= m.phi(r1));
            }

            #[test]
            fn truncation_never_goes_below_floor(r in -5.0f64..5.0, floor in 0.0f64..2.0) {
                let t = truncate_below(r, floor);
                prop_assert!(t >= floor);
                prop_assert!(t == r || t == floor);
            }

            #[test]
            fn perturbing_one_field_flags_the_matching_class(which in 0usize..4) {
                let mut spec = default_model_spec();
                let class = match which {
                    0 => { spec.physical.k = -0.5; "A1" }
                    1 => { spec.boundary = SignalSpec::Constant(f64::NAN); "A2" }
                    2 => { spec.phi = CurveSpec::Rational { cap: 2.5, scale: 1.0 }; "A4" }
                    _ => { spec.u0 = ProfileSpec::Constant(1.5); "A5" }
                };
                let err = spec.validate().unwrap_err();
                prop_assert!(err.mentions(class), "expected {} in {}", class, err);
            }
        }
    }
}
