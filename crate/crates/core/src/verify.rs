//! Residual operators for the constructed solution.
//!
//! The central quantity is the inconsistency functional
//!
//! ```text
//! P(x, t) = Q_t(x, t) − √z(t)·(c₁ − q·(3z(t) + Q(x, t)²))
//! ```
//!
//! which vanishes iff `Q` also satisfies the imaginary part of the CNLSE.
//! The algebraic residuals check that `z` and `Q` solve their own quartic
//! ODEs, and [`cnlse_residual`] evaluates the full PDE on any field, with the
//! exact soliton as the oracle that validates the stencils.

use serde::{Deserialize, Serialize};

use crate::ansatz::{
    closed_form_q_invariants, closed_form_z_invariants, z_curve, Ansatz, AnsatzParams,
};
use crate::elliptic::ComplexValue;
use crate::error::{Error, Result};
use crate::numdiff::{central_first, central_second, forward_first, DiffConfig};
use crate::quartic::{QuarticCurve, Sign};

/// Target value of `P(1, 1)` at the default parameters.
pub const TARGET_P_VALUE: f64 = 0.113;

/// Points whose estimated distance to a pole of `Q(·, t)` is below this
/// are flagged `near_pole` in reports.
pub const POLE_FLAG_RADIUS: f64 = 0.05;

/// Magnitudes below this are treated as round-off in [`convergence_order`].
pub const ROUND_OFF_FLOOR: f64 = 1e-14;

/// `d/dt` of a function defined for `t ≥ 0`: central stencil when it fits,
/// the forward 4-point stencil otherwise.
fn time_derivative<F>(f: F, t: f64, cfg: &DiffConfig) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if t - cfg.h_t >= 0.0 {
        central_first(f, t, cfg.h_t, cfg.richardson_levels)
    } else {
        forward_first(f, t, cfg.h_t, cfg.richardson_levels)
    }
}

/// `Q_t(x, t)` by Richardson-refined differences of the closed form.
pub fn q_time_derivative(ansatz: &Ansatz, x: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    cfg.validate()?;
    time_derivative(|s| ansatz.q(x, s), t, cfg)
}

/// `P(x, t)` for an already prepared ansatz.
pub fn inconsistency(ansatz: &Ansatz, x: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    let q_t = q_time_derivative(ansatz, x, t, cfg)?;
    let slice = ansatz.slice(t)?;
    let q = slice.q(x)?;
    let p = ansatz.params();
    Ok(q_t - slice.d() * (p.c1 - p.q * (3.0 * slice.z + q * q)))
}

pub fn residual_p(params: &AnsatzParams, x: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    inconsistency(&Ansatz::new(*params)?, x, t, cfg)
}

/// `P(0, t)` in closed form: `Q(0, t) = Q₀` is constant, so `Q_t = 0`.
pub fn pole_point_p(params: &AnsatzParams, t: f64) -> Result<f64> {
    let z = Ansatz::new(*params)?.z(t)?;
    Ok(-z.sqrt() * (params.c1 - params.q * (3.0 * z + params.q0 * params.q0)))
}

fn relative_quartic_residual(slope: f64, value: f64, curve: &QuarticCurve) -> f64 {
    let r = curve.eval(value);
    (slope * slope - r).abs() / r.abs().max(1.0)
}

/// `|Δ_t z² − R₁(z)| / max(1, |R₁(z)|)` at `t`.
pub fn residual_r1_with(ansatz: &Ansatz, t: f64, cfg: &DiffConfig) -> Result<f64> {
    cfg.validate()?;
    let z_t = time_derivative(|s| ansatz.z(s), t, cfg)?;
    let z = ansatz.z(t)?;
    Ok(relative_quartic_residual(z_t, z, &z_curve(ansatz.params())))
}

/// `|Δ_x Q² − R₂(Q)| / max(1, |R₂(Q)|)` at `(x, t)`.
pub fn residual_r2_with(ansatz: &Ansatz, x: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    cfg.validate()?;
    let slice = ansatz.slice(t)?;
    let q_x = central_first(|s| slice.q(s), x, cfg.h_x, cfg.richardson_levels)?;
    let q = slice.q(x)?;
    Ok(relative_quartic_residual(q_x, q, slice.q_solution.curve()))
}

pub fn residual_r1(params: &AnsatzParams, t: f64, cfg: &DiffConfig) -> Result<f64> {
    residual_r1_with(&Ansatz::new(*params)?, t, cfg)
}

pub fn residual_r2(params: &AnsatzParams, x: f64, t: f64, cfg: &DiffConfig) -> Result<f64> {
    residual_r2_with(&Ansatz::new(*params)?, x, t, cfg)
}

/// `|a − b|` relative to the larger of the two; exact zeros compare equal.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// `|a − b|` relative to the larger of `|a|`, `|b|` and `scale`.
pub fn scaled_deviation(a: f64, b: f64, scale: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(scale.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Largest relative deviation between the classical invariants of a curve
/// and a closed-form pair, measured against the size of the terms summed in
/// each invariant so that cancellation does not inflate it.
pub fn invariant_deviation(curve: &QuarticCurve, closed: (f64, f64)) -> Result<f64> {
    let inv = curve.invariants()?;
    let (s2, s3) = curve.invariant_scales();
    Ok(scaled_deviation(inv.g2(), closed.0, s2).max(scaled_deviation(inv.g3(), closed.1, s3)))
}

/// Deviations of the `R₁` and `R₂` invariants at time `t` from their
/// closed forms.
pub fn invariant_crosscheck(params: &AnsatzParams, t: f64) -> Result<(f64, f64)> {
    let ansatz = Ansatz::new(*params)?;
    let z_dev = invariant_deviation(&z_curve(params), closed_form_z_invariants(params))?;
    let slice = ansatz.slice(t)?;
    let q_dev = invariant_deviation(
        slice.q_solution.curve(),
        closed_form_q_invariants(params, slice.z, slice.z_t),
    )?;
    Ok((z_dev, q_dev))
}

/// A complex field sampled at `(x, t)`.
pub trait FieldSampler {
    fn sample(&self, x: f64, t: f64) -> Result<ComplexValue>;

    /// Closed interval of times on which the field is defined.
    fn time_domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

impl<F> FieldSampler for F
where
    F: Fn(f64, f64) -> Result<ComplexValue>,
{
    fn sample(&self, x: f64, t: f64) -> Result<ComplexValue> {
        self(x, t)
    }
}

impl FieldSampler for Ansatz {
    fn sample(&self, x: f64, t: f64) -> Result<ComplexValue> {
        self.field(x, t)
    }

    fn time_domain(&self) -> (f64, f64) {
        (0.0, f64::INFINITY)
    }
}

/// Exact bright soliton `A = a·sech(a·x)·e^{i·a²·t}` of
/// `i·A_t + A_xx + 2·A|A|² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Soliton {
    pub amplitude: f64,
}

impl FieldSampler for Soliton {
    fn sample(&self, x: f64, t: f64) -> Result<ComplexValue> {
        let a = self.amplitude;
        Ok(ComplexValue::from_polar(a / (a * x).cosh(), a * a * t))
    }
}

pub fn soliton_field(amplitude: f64) -> Result<Soliton> {
    if amplitude > 0.0 && amplitude.is_finite() {
        Ok(Soliton { amplitude })
    } else {
        Err(Error::InvalidParameter(format!(
            "soliton amplitude must be positive, got {amplitude}"
        )))
    }
}

/// `i·A_t + p·A_xx + q·A|A|²` by finite differences on `field`.
pub fn cnlse_residual<S>(
    field: &S,
    x: f64,
    t: f64,
    cfg: &DiffConfig,
    p: f64,
    q: f64,
) -> Result<ComplexValue>
where
    S: FieldSampler + ?Sized,
{
    cfg.validate()?;
    let (t_lo, t_hi) = field.time_domain();
    let span = cfg.h_t * 3.0;
    let in_domain = |s: f64| s >= t_lo && s <= t_hi;
    let at_t = |s: f64| field.sample(x, s);
    let a_t: ComplexValue = if in_domain(t - cfg.h_t) && in_domain(t + cfg.h_t) {
        central_first(at_t, t, cfg.h_t, cfg.richardson_levels)?
    } else if in_domain(t) && in_domain(t + span) {
        forward_first(at_t, t, cfg.h_t, cfg.richardson_levels)?
    } else {
        return Err(Error::StencilOutOfDomain { t });
    };
    let a_xx: ComplexValue =
        central_second(|s| field.sample(s, t), x, cfg.h_x, cfg.richardson_levels)?;
    let a = field.sample(x, t)?;
    Ok(ComplexValue::i() * a_t + p * a_xx + q * a * a.norm_sqr())
}

/// Mean of `log₂` of successive ratios of residual magnitudes taken at
/// steps `h, h/2, h/4`.
pub fn convergence_order(residuals: [f64; 3]) -> Result<f64> {
    if let Some(&bad) = residuals.iter().find(|r| !(r.abs() >= ROUND_OFF_FLOOR)) {
        return Err(Error::DegenerateResiduals { value: bad });
    }
    let [a, b, c] = residuals.map(f64::abs);
    Ok(0.5 * ((a / b).log2() + (b / c).log2()))
}

/// Convergence order of the PDE residual of `field` at `(x, t)`, with the
/// same plain step used in `x` and `t`.
pub fn measured_order<S>(field: &S, x: f64, t: f64, h: f64, p: f64, q: f64) -> Result<f64>
where
    S: FieldSampler + ?Sized,
{
    let mut mags = [0.0; 3];
    for (k, m) in mags.iter_mut().enumerate() {
        let step = h / f64::from(1u32 << k);
        let cfg = DiffConfig {
            h_t: step,
            h_x: step,
            richardson_levels: 1,
        };
        *m = cnlse_residual(field, x, t, &cfg, p, q)?.norm();
    }
    convergence_order(mags)
}

/// Everything evaluated at one point on one branch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub x: f64,
    pub t: f64,
    pub sigma_z: Sign,
    pub sigma_q: Sign,
    #[serde(rename = "P")]
    pub p: f64,
    pub r1: f64,
    pub r2: f64,
    pub pde_abs: f64,
    /// `;`-separated flag tokens; empty when every field was computed.
    pub notes: String,
}

impl ResidualReport {
    pub const CSV_HEADER: [&'static str; 9] = [
        "sigma_z", "sigma_q", "x", "t", "P", "r1", "r2", "pde_abs", "flags",
    ];

    /// One CSV row in header order, numbers at 12 significant digits.
    pub fn csv_fields(&self) -> [String; 9] {
        [
            i8::from(self.sigma_z).to_string(),
            i8::from(self.sigma_q).to_string(),
            format_sig12(self.x),
            format_sig12(self.t),
            format_sig12(self.p),
            format_sig12(self.r1),
            format_sig12(self.r2),
            format_sig12(self.pde_abs),
            self.notes.clone(),
        ]
    }

    pub fn is_flagged(&self) -> bool {
        !self.notes.is_empty()
    }
}

pub fn format_sig12(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.11e}")
    } else {
        "NaN".to_string()
    }
}

fn flag_token(e: &Error) -> &'static str {
    match e {
        Error::PoleProximity { .. } => "pole",
        Error::RealityViolation { .. } => "reality",
        Error::NegativeRadicand { .. } => "radicand",
        Error::StencilOutOfDomain { .. } => "stencil",
        _ => "error",
    }
}

/// Evaluates `P`, both algebraic residuals and `|PDE residual|` at one
/// point. Failures become `NaN` entries with a flag in `notes`.
pub fn evaluate_report(
    params: &AnsatzParams,
    x: f64,
    t: f64,
    cfg: &DiffConfig,
) -> Result<ResidualReport> {
    cfg.validate()?;
    let ansatz = Ansatz::new(*params)?;
    let mut flags: Vec<String> = Vec::new();
    let mut record = |name: &str, r: Result<f64>| match r {
        Ok(v) => v,
        Err(e) => {
            flags.push(format!("{name}:{}", flag_token(&e)));
            f64::NAN
        }
    };
    let p = record("P", inconsistency(&ansatz, x, t, cfg));
    let r1 = record("r1", residual_r1_with(&ansatz, t, cfg));
    let r2 = record("r2", residual_r2_with(&ansatz, x, t, cfg));
    let pde_abs = record(
        "pde",
        cnlse_residual(&ansatz, x, t, cfg, 1.0, params.q).map(|r| r.norm()),
    );
    if t < cfg.h_t {
        flags.push("one_sided_t".into());
    }
    if let Ok(sample) = ansatz.slice(t).and_then(|s| s.q_solution.sample(x)) {
        if sample.pole_distance < POLE_FLAG_RADIUS {
            flags.push("near_pole".into());
        }
    }
    Ok(ResidualReport {
        x,
        t,
        sigma_z: params.sigma_z,
        sigma_q: params.sigma_q,
        p,
        r1,
        r2,
        pde_abs,
        notes: flags.join(";"),
    })
}

/// Reports for all four branch combinations, ordered `++, +−, −+, −−`.
pub fn branch_sweep(
    params: &AnsatzParams,
    x: f64,
    t: f64,
    cfg: &DiffConfig,
) -> Result<Vec<ResidualReport>> {
    let mut out = Vec::with_capacity(4);
    for sz in Sign::BOTH {
        for sq in Sign::BOTH {
            out.push(evaluate_report(&params.with_branch(sz, sq), x, t, cfg)?);
        }
    }
    Ok(out)
}
