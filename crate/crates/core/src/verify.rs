//! Run drivers, runtime audits, and refinement studies.
//!
//! Everything the solver promises about its output is checked here, from
//! per-run bookkeeping (field and rate bounds, the mass ledger) to the
//! refinement behaviour of the discretization. The audits work off plain
//! per-step records, so they can replay equally well from a live run or
//! from CSV artifacts written by an earlier one.

use crate::error::SolverError;
use crate::front::{fixed_point_solve, front_rhs, FixedPointConfig, FixedPointOutcome};
use crate::functional::{psi_eval, trapezoid};
use crate::model::ValidatedModel;
use crate::pde::{step_monolithic, PoreState, StepperConfig};
use crate::transform::ReferenceGrid;

/// Default slack for the pointwise bound audits.
pub const TOL_BOUND: f64 = 1e-8;

/// Admissible ratio window for the temporal mass-ledger refinement (first
/// order: halving the step should halve the error).
pub const MASS_TEMPORAL_WINDOW: (f64, f64) = (1.7, 2.3);

/// Admissible ratio window for the spatial mass-ledger refinement (second
/// order: halving the spacing should quarter the error).
pub const MASS_SPATIAL_WINDOW: (f64, f64) = (3.4, 4.6);

/// Admissible order window for temporal self-convergence.
pub const SELF_TEMPORAL_ORDER_WINDOW: (f64, f64) = (0.8, 1.2);

/// Admissible order window for spatial self-convergence.
pub const SELF_SPATIAL_ORDER_WINDOW: (f64, f64) = (1.8, 2.2);

/// One row of the per-step time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub t: f64,
    pub s: f64,
    /// Instantaneous front rate by the front law at this state.
    pub s_t: f64,
    pub u_wall: f64,
    pub u_front: f64,
    /// Physical moisture mass `(s - a)` times the reference-interval mean.
    pub mass: f64,
    /// Left-rectangle ledger of the wall intake up to this time.
    pub inflow_cum: f64,
    pub min_u: f64,
    pub max_u: f64,
    /// Functional value at this state; NaN when out of domain.
    pub psi: f64,
}

/// Full output of a run: the time series, every field, and step diagnostics.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub records: Vec<RunRecord>,
    /// Field at every time node, starting with the initial field.
    pub fields: Vec<Vec<f64>>,
    pub picard_iterations_max: usize,
    pub cfl_max: f64,
}

fn record_state(
    t: f64,
    s: f64,
    s_t: f64,
    u: &[f64],
    inflow_cum: f64,
    model: &ValidatedModel,
    grid: ReferenceGrid,
) -> RunRecord {
    let n = grid.n();
    let mass = (s - model.a()) * trapezoid(u, grid);
    let (min_u, max_u) = u
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let psi = psi_eval(u, s, model.h(t), model, grid).total().unwrap_or(f64::NAN);
    RunRecord { t, s, s_t, u_wall: u[0], u_front: u[n], mass, inflow_cum, min_u, max_u, psi }
}

/// Run the coupled stepper for `steps` steps from the model's initial state.
pub fn run_monolithic(
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
    steps: usize,
) -> Result<RunOutput, SolverError> {
    let n = grid.n();
    let mut state = PoreState::initial(model, grid);
    let mut inflow_cum = 0.0;
    let mut records = Vec::with_capacity(steps + 1);
    let mut fields = Vec::with_capacity(steps + 1);
    let mut picard_iterations_max = 0;
    let mut cfl_max: f64 = 0.0;

    let rate = |st: &PoreState| model.a0() * (st.u[n] - model.phi(st.s));
    records.push(record_state(0.0, state.s, rate(&state), &state.u, inflow_cum, model, grid));
    fields.push(state.u.clone());

    for _ in 0..steps {
        let t_before = state.t;
        let intake = model.beta(model.h(t_before) - model.henry() * state.u[0]);
        let stats = step_monolithic(&mut state, model, grid, cfg)?;
        // Accumulate with the realized interval so a replay from the records
        // reproduces the ledger bit for bit.
        inflow_cum += (state.t - t_before) * intake;
        picard_iterations_max = picard_iterations_max.max(stats.picard_iterations);
        cfl_max = cfl_max.max(stats.cfl);
        records.push(record_state(state.t, state.s, rate(&state), &state.u, inflow_cum, model, grid));
        fields.push(state.u.clone());
    }

    Ok(RunOutput { records, fields, picard_iterations_max, cfl_max })
}

/// Run the fixed-point construction and lay its converged history out in the
/// same record shape as the coupled run.
///
/// The fields are those of the final inner solve, which followed a path
/// within the fixed-point tolerance of the returned one.
pub fn run_gamma(
    model: &ValidatedModel,
    grid: ReferenceGrid,
    cfg: &StepperConfig,
    steps: usize,
    fp: &FixedPointConfig,
) -> Result<(RunOutput, FixedPointOutcome), SolverError> {
    let n = grid.n();
    let outcome = fixed_point_solve(model, grid, cfg, steps, fp)?;
    let mut records = Vec::with_capacity(steps + 1);
    let mut inflow_cum = 0.0;
    for m in 0..=steps {
        let t = outcome.path.t(m);
        let s = outcome.path.s[m];
        let u = &outcome.fields[m];
        records.push(record_state(t, s, front_rhs(model, u[n], s), u, inflow_cum, model, grid));
        if m < steps {
            let interval = outcome.path.t(m + 1) - t;
            inflow_cum += interval * model.beta(model.h(t) - model.henry() * u[0]);
        }
    }
    let fields = outcome.fields.clone();
    Ok((
        RunOutput { records, fields, picard_iterations_max: 0, cfl_max: 0.0 },
        outcome,
    ))
}

/// Outcome of a pointwise bound audit. Margins measure the worst clearance
/// to each side; a negative margin beyond `tol` is a violation.
#[derive(Debug, Clone, Copy)]
pub struct BoundsReport {
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub tol: f64,
}

impl BoundsReport {
    pub fn ok(&self) -> bool {
        self.lower_margin >= -self.tol && self.upper_margin >= -self.tol
    }
}

/// Check every node of every field against the invariant content band
/// `[phi(a), h_sup / H]`.
pub fn field_bounds(fields: &[Vec<f64>], model: &ValidatedModel, tol: f64) -> BoundsReport {
    let lo = model.phi_at_a();
    let hi = model.u_cap();
    let mut lower_margin = f64::INFINITY;
    let mut upper_margin = f64::INFINITY;
    for field in fields {
        for &v in field {
            lower_margin = lower_margin.min(v - lo);
            upper_margin = upper_margin.min(hi - v);
        }
    }
    BoundsReport { lower_margin, upper_margin, tol }
}

/// Check recorded front rates against the band spanned by the front law,
/// and positions against the cone obtained by integrating that band.
pub fn front_rate_bounds(records: &[RunRecord], model: &ValidatedModel, tol: f64) -> BoundsReport {
    let rate_lo = model.a0() * (model.phi_at_a() - model.c_phi());
    let rate_hi = model.a0() * model.u_cap();
    let s0 = records.first().map_or(model.s0(), |r| r.s);
    let mut lower_margin = f64::INFINITY;
    let mut upper_margin = f64::INFINITY;
    for r in records {
        lower_margin = lower_margin.min(r.s_t - rate_lo);
        upper_margin = upper_margin.min(rate_hi - r.s_t);
        lower_margin = lower_margin.min(r.s - (s0 + rate_lo * r.t));
        upper_margin = upper_margin.min(s0 + rate_hi * r.t - r.s);
    }
    BoundsReport { lower_margin, upper_margin, tol }
}

/// Result of replaying the mass ledger of a run.
#[derive(Debug, Clone)]
pub struct MassAudit {
    /// `|mass(t_n) - mass(0) - sum of past intake|` per record.
    pub errors: Vec<f64>,
    pub max_error: f64,
    /// Worst gap between the recorded intake ledger and its replay.
    pub ledger_gap: f64,
}

/// Replay the left-rectangle intake ledger from the records and compare the
/// mass change against it.
pub fn mass_audit(records: &[RunRecord], model: &ValidatedModel) -> MassAudit {
    let mass0 = records.first().map_or(0.0, |r| r.mass);
    let mut replay = 0.0;
    let mut errors = Vec::with_capacity(records.len());
    let mut max_error: f64 = 0.0;
    let mut ledger_gap: f64 = 0.0;
    for (m, r) in records.iter().enumerate() {
        let e = (r.mass - mass0 - replay).abs();
        errors.push(e);
        max_error = max_error.max(e);
        ledger_gap = ledger_gap.max((r.inflow_cum - replay).abs());
        if m + 1 < records.len() {
            let dt = records[m + 1].t - r.t;
            replay += dt * model.beta(model.h(r.t) - model.henry() * r.u_wall);
        }
    }
    MassAudit { errors, max_error, ledger_gap }
}

/// Errors and successive-ratio trace of a refinement sweep.
#[derive(Debug, Clone)]
pub struct RefinementStudy {
    /// One error per resolution, coarsest first.
    pub errors: Vec<f64>,
    /// `errors[l] / errors[l+1]` per successive pair.
    pub ratios: Vec<f64>,
    /// Base-2 logarithm of each ratio.
    pub orders: Vec<f64>,
}

impl RefinementStudy {
    fn from_errors(errors: Vec<f64>) -> Self {
        let ratios: Vec<f64> = errors.windows(2).map(|w| w[0] / w[1]).collect();
        let orders = ratios.iter().map(|r| r.log2()).collect();
        Self { errors, ratios, orders }
    }

    /// True when every ratio sits inside the window.
    pub fn ratios_within(&self, window: (f64, f64)) -> bool {
        self.ratios.iter().all(|&r| r >= window.0 && r <= window.1)
    }

    /// The finest-pair order, the usual convergence-rate estimate.
    pub fn last_order(&self) -> Option<f64> {
        self.orders.last().copied()
    }
}

/// Worst mass-ledger error at a sequence of shrinking time steps, on a
/// fixed grid. Steps must divide the horizon evenly.
pub fn mass_refinement_temporal(
    model: &ValidatedModel,
    grid: ReferenceGrid,
    dts: &[f64],
) -> Result<RefinementStudy, SolverError> {
    let t_end = model.t_end();
    let mut errors = Vec::with_capacity(dts.len());
    for &dt in dts {
        let steps = (t_end / dt).round() as usize;
        let cfg = StepperConfig::for_model(model, dt);
        let out = run_monolithic(model, grid, &cfg, steps)?;
        errors.push(mass_audit(&out.records, model).max_error);
    }
    Ok(RefinementStudy::from_errors(errors))
}

/// Worst mass-ledger error at a sequence of refining grids, at a fixed
/// (small) time step.
pub fn mass_refinement_spatial(
    model: &ValidatedModel,
    dt: f64,
    ns: &[usize],
) -> Result<RefinementStudy, SolverError> {
    let steps = (model.t_end() / dt).round() as usize;
    let cfg = StepperConfig::for_model(model, dt);
    let mut errors = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = ReferenceGrid::new(n)?;
        let out = run_monolithic(model, grid, &cfg, steps)?;
        errors.push(mass_audit(&out.records, model).max_error);
    }
    Ok(RefinementStudy::from_errors(errors))
}

/// Gap between runs at successive time steps on a fixed grid: worst front
/// gap over shared times combined with the final-field gap.
pub fn self_convergence_temporal(
    model: &ValidatedModel,
    grid: ReferenceGrid,
    dts: &[f64],
) -> Result<RefinementStudy, SolverError> {
    let t_end = model.t_end();
    let mut runs = Vec::with_capacity(dts.len());
    for &dt in dts {
        let steps = (t_end / dt).round() as usize;
        let cfg = StepperConfig::for_model(model, dt);
        runs.push((steps, run_monolithic(model, grid, &cfg, steps)?));
    }
    let mut errors = Vec::new();
    for pair in runs.windows(2) {
        let (coarse_steps, coarse) = &pair[0];
        let (fine_steps, fine) = &pair[1];
        if fine_steps % coarse_steps != 0 {
            return Err(SolverError::MismatchedGrids {
                detail: format!("step counts {coarse_steps} and {fine_steps} do not nest"),
            });
        }
        let stride = fine_steps / coarse_steps;
        let mut gap: f64 = 0.0;
        for (m, rec) in coarse.records.iter().enumerate() {
            gap = gap.max((rec.s - fine.records[m * stride].s).abs());
        }
        let last_c = coarse.fields.last().expect("nonempty run");
        let last_f = fine.fields.last().expect("nonempty run");
        for (a, b) in last_c.iter().zip(last_f.iter()) {
            gap = gap.max((a - b).abs());
        }
        errors.push(gap);
    }
    Ok(RefinementStudy::from_errors(errors))
}

/// Gap between runs at successive grid refinements, at a fixed time step:
/// worst front gap over all times combined with the final-field gap on
/// shared nodes.
pub fn self_convergence_spatial(
    model: &ValidatedModel,
    dt: f64,
    ns: &[usize],
) -> Result<RefinementStudy, SolverError> {
    let steps = (model.t_end() / dt).round() as usize;
    let mut runs = Vec::with_capacity(ns.len());
    for &n in ns {
        let grid = ReferenceGrid::new(n)?;
        let cfg = StepperConfig::for_model(model, dt);
        runs.push((n, run_monolithic(model, grid, &cfg, steps)?));
    }
    let mut errors = Vec::new();
    for pair in runs.windows(2) {
        let (coarse_n, coarse) = &pair[0];
        let (fine_n, fine) = &pair[1];
        if fine_n % coarse_n != 0 {
            return Err(SolverError::MismatchedGrids {
                detail: format!("grids {coarse_n} and {fine_n} do not nest"),
            });
        }
        let stride = fine_n / coarse_n;
        let mut gap: f64 = 0.0;
        for (rec_c, rec_f) in coarse.records.iter().zip(fine.records.iter()) {
            gap = gap.max((rec_c.s - rec_f.s).abs());
        }
        let last_c = coarse.fields.last().expect("nonempty run");
        let last_f = fine.fields.last().expect("nonempty run");
        for (i, a) in last_c.iter().enumerate() {
            gap = gap.max((a - last_f[i * stride]).abs());
        }
        errors.push(gap);
    }
    Ok(RefinementStudy::from_errors(errors))
}

const TIMESERIES_HEADER: &str = "t,s,s_t,u_at_a,u_at_front,mass,inflow_cum,min_u,max_u,psi";

/// Lay the time series out as CSV with full-precision floats.
pub fn write_timeseries_csv(records: &[RunRecord]) -> String {
    let mut out = String::with_capacity(64 * (records.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.t, r.s, r.s_t, r.u_wall, r.u_front, r.mass, r.inflow_cum, r.min_u, r.max_u, r.psi
        ));
    }
    out
}

fn parse_float(token: &str, line: usize) -> Result<f64, SolverError> {
    token.trim().parse::<f64>().map_err(|_| SolverError::MalformedArtifact {
        detail: format!("line {line}: `{token}` is not a float"),
    })
}

/// Parse a time series written by [`write_timeseries_csv`]. Round-trips
/// exactly.
pub fn parse_timeseries_csv(text: &str) -> Result<Vec<RunRecord>, SolverError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == TIMESERIES_HEADER => {}
        other => {
            return Err(SolverError::MalformedArtifact {
                detail: format!("bad time series header: {:?}", other.map(|(_, l)| l)),
            })
        }
    }
    let mut records = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(SolverError::MalformedArtifact {
                detail: format!("line {}: expected 10 columns, got {}", idx + 1, fields.len()),
            });
        }
        let v: Vec<f64> = fields
            .iter()
            .map(|tok| parse_float(tok, idx + 1))
            .collect::<Result<_, _>>()?;
        records.push(RunRecord {
            t: v[0],
            s: v[1],
            s_t: v[2],
            u_wall: v[3],
            u_front: v[4],
            mass: v[5],
            inflow_cum: v[6],
            min_u: v[7],
            max_u: v[8],
            psi: v[9],
        });
    }
    if records.is_empty() {
        return Err(SolverError::MalformedArtifact { detail: "time series has no rows".into() });
    }
    Ok(records)
}

/// Lay the field history out as CSV: one row per time node, `t,s,u_0..u_N`.
pub fn write_fields_csv(times: &[f64], s: &[f64], fields: &[Vec<f64>]) -> String {
    let n = fields.first().map_or(0, |f| f.len() - 1);
    let mut out = String::new();
    out.push_str("t,s");
    for i in 0..=n {
        out.push_str(&format!(",u_{i}"));
    }
    out.push('\n');
    for ((t, sv), field) in times.iter().zip(s.iter()).zip(fields.iter()) {
        out.push_str(&format!("{:.16e},{:.16e}", t, sv));
        for &v in field {
            out.push_str(&format!(",{:.16e}", v));
        }
        out.push('\n');
    }
    out
}

/// Parsed field history: the time nodes, the front positions, and the field
/// at each time node.
pub type FieldHistory = (Vec<f64>, Vec<f64>, Vec<Vec<f64>>);

/// Parse a field history written by [`write_fields_csv`].
pub fn parse_fields_csv(text: &str) -> Result<FieldHistory, SolverError> {
    let mut lines = text.lines().enumerate();
    let width = match lines.next() {
        Some((_, header)) if header.starts_with("t,s,u_0") => header.split(',').count(),
        other => {
            return Err(SolverError::MalformedArtifact {
                detail: format!("bad fields header: {:?}", other.map(|(_, l)| l)),
            })
        }
    };
    let mut times = Vec::new();
    let mut fronts = Vec::new();
    let mut fields = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split(',').collect();
        if tokens.len() != width {
            return Err(SolverError::MalformedArtifact {
                detail: format!("line {}: expected {} columns, got {}", idx + 1, width, tokens.len()),
            });
        }
        let v: Vec<f64> = tokens
            .iter()
            .map(|tok| parse_float(tok, idx + 1))
            .collect::<Result<_, _>>()?;
        times.push(v[0]);
        fronts.push(v[1]);
        fields.push(v[2..].to_vec());
    }
    if fields.is_empty() {
        return Err(SolverError::MalformedArtifact { detail: "field history has no rows".into() });
    }
    Ok((times, fronts, fields))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{default_model_spec, equilibrium_model_spec};

    fn grid(n: usize) -> ReferenceGrid {
        ReferenceGrid::new(n).unwrap()
    }

    #[test]
    fn resting_run_has_an_exact_mass_ledger() {
        let model = equilibrium_model_spec().validate().unwrap();
        let g = grid(16);
        let cfg = StepperConfig::for_model(&model, 0.01);
        let out = run_monolithic(&model, g, &cfg, 100).unwrap();
        let audit = mass_audit(&out.records, &model);
        assert_eq!(audit.max_error, 0.0);
        assert_eq!(audit.ledger_gap, 0.0);
        assert_eq!(out.records.last().unwrap().inflow_cum, 0.0);
    }

    #[test]
    fn wetting_run_keeps_its_bounds() {
        let model = default_model_spec().validate().unwrap();
        let g = grid(32);
        let cfg = StepperConfig::for_model(&model, 0.005);
        let out = run_monolithic(&model, g, &cfg, 200).unwrap();
        let fields = field_bounds(&out.fields, &model, TOL_BOUND);
        assert!(fields.ok(), "field margins {:?}", fields);
        let rates = front_rate_bounds(&out.records, &model, TOL_BOUND);
        assert!(rates.ok(), "rate margins {:?}", rates);
        assert!(out.records.last().unwrap().s > model.s0());
    }

    #[test]
    fn ledger_error_stays_small_on_the_default_run() {
        let model = default_model_spec().validate().unwrap();
        let g = grid(32);
        let cfg = StepperConfig::for_model(&model, 0.005);
        let out = run_monolithic(&model, g, &cfg, 200).unwrap();
        let audit = mass_audit(&out.records, &model);
        assert_eq!(audit.ledger_gap, 0.0);
        assert!(audit.max_error < 0.05, "mass error {}", audit.max_error);
        assert!(audit.max_error > 0.0);
    }

    #[test]
    fn gamma_run_mirrors_the_record_shape() {
        let model = default_model_spec().validate().unwrap();
        let g = grid(16);
        let cfg = StepperConfig::for_model(&model, 0.005);
        let fp = FixedPointConfig::for_model(&model, 0.25);
        let (out, outcome) = run_gamma(&model, g, &cfg, 50, &fp).unwrap();
        assert_eq!(out.records.len(), 51);
        assert_eq!(out.fields.len(), 51);
        assert!(outcome.iterations >= 2);
        assert_eq!(out.records[0].s, model.s0());
    }

    #[test]
    fn timeseries_round_trips_bit_exactly() {
        let model = default_model_spec().validate().unwrap();
        let g = grid(8);
        let cfg = StepperConfig::for_model(&model, 0.01);
        let out = run_monolithic(&model, g, &cfg, 20).unwrap();
        let text = write_timeseries_csv(&out.records);
        let back = parse_timeseries_csv(&text).unwrap();
        assert_eq!(back, out.records);
    }

    #[test]
    fn fields_round_trip_bit_exactly() {
        let model = default_model_spec().validate().unwrap();
        let g = grid(8);
        let cfg = StepperConfig::for_model(&model, 0.01);
        let out = run_monolithic(&model, g, &cfg, 20).unwrap();
        let times: Vec<f64> = out.records.iter().map(|r| r.t).collect();
        let fronts: Vec<f64> = out.records.iter().map(|r| r.s).collect();
        let text = write_fields_csv(&times, &fronts, &out.fields);
        let (t2, s2, f2) = parse_fields_csv(&text).unwrap();
        assert_eq!(t2, times);
        assert_eq!(s2, fronts);
        assert_eq!(f2, out.fields);
    }

    #[test]
    fn malformed_artifacts_are_rejected() {
        assert!(matches!(
            parse_timeseries_csv("wrong,header\n1,2\n"),
            Err(SolverError::MalformedArtifact { .. })
        ));
        let missing = format!("{TIMESERIES_HEADER}\n1.0,2.0\n");
        assert!(matches!(
            parse_timeseries_csv(&missing),
            Err(SolverError::MalformedArtifact { .. })
        ));
        let bad = format!("{TIMESERIES_HEADER}\n1,2,3,4,x,6,7,8,9,10\n");
        assert!(matches!(
            parse_timeseries_csv(&bad),
            Err(SolverError::MalformedArtifact { .. })
        ));
        assert!(matches!(
            parse_fields_csv("nope\n"),
            Err(SolverError::MalformedArtifact { .. })
        ));
    }

    #[test]
    fn temporal_ledger_errors_shrink_with_the_step() {
        let model = default_model_spec().validate().unwrap();
        let g = grid(64);
        let study =
            mass_refinement_temporal(&model, g, &[1.0 / 25.0, 1.0 / 50.0, 1.0 / 100.0]).unwrap();
        assert_eq!(study.errors.len(), 3);
        assert!(study.errors[0] > study.errors[1]);
        assert!(study.errors[1] > study.errors[2]);
    }

    #[test]
    fn refinement_study_summary_helpers() {
        let study = RefinementStudy::from_errors(vec![8.0, 4.0, 2.0]);
        assert_eq!(study.ratios, vec![2.0, 2.0]);
        assert!(study.ratios_within((1.7, 2.3)));
        assert!(!study.ratios_within((3.4, 4.6)));
        assert_eq!(study.last_order(), Some(1.0));
    }
}
