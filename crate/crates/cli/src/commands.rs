//! The subcommands. Each returns an exit code or a [`CliError`], which the
//! caller maps to exit code 1.

use std::io::Write;

use clap::ValueEnum;
use cnlse_verify::ansatz::z_curve;
use cnlse_verify::checks::{self, CheckOutcome};
use cnlse_verify::elliptic::{cubic_roots, ComplexValue, EllipticInvariants, Weierstrass};
use cnlse_verify::reference::{
    ansatz_divergence, field_divergence, DivergenceSeries, SpectralGrid, TAPER_FRACTION,
};
use cnlse_verify::verify::{
    cnlse_residual, evaluate_report, format_sig12, invariant_crosscheck, pole_point_p,
    residual_r1_with, residual_r2_with, soliton_field, FieldSampler, TARGET_P_VALUE,
};
use cnlse_verify::{Ansatz, ResidualReport, Sign};
use serde::Serialize;
use serde_json::json;

use crate::config::{BranchSel, RunConfig};
use crate::output::{base_metadata, emit, render};
use crate::{
    CliError, Command, EllipticArgs, EvolveArgs, SelftestArgs, EXIT_FAILURE, EXIT_OK,
    EXIT_TARGET_MISS,
};

type Out<'a> = &'a mut dyn Write;

pub fn dispatch(
    command: &Command,
    cfg: &RunConfig,
    stdout: Out,
    stderr: Out,
) -> Result<i32, CliError> {
    match command {
        Command::PaperCheck => cmd_paper_check(cfg, stdout),
        Command::Scan => cmd_scan(cfg, stdout, stderr),
        Command::Residuals => cmd_residuals(cfg, stdout, stderr),
        Command::Pde => cmd_pde(cfg, stdout, stderr),
        Command::Evolve(args) => cmd_evolve(cfg, args, stdout, stderr),
        Command::Selftest(args) => cmd_selftest(cfg, args, stdout),
        Command::Elliptic(args) => cmd_elliptic(cfg, args, stdout, stderr),
    }
}

fn label((sz, sq): (Sign, Sign)) -> String {
    format!("({},{})", sz.symbol(), sq.symbol())
}

fn say(w: Out, text: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    w.write_fmt(text)
        .and_then(|_| w.write_all(b"\n"))
        .map_err(|e| CliError::new(format!("write failed: {e}")))
}

// ---------------------------------------------------------------- paper-check

#[derive(Debug, Clone, PartialEq)]
pub struct PaperCheck {
    /// One report per requested branch, in branch order.
    pub reports: Vec<ResidualReport>,
    /// Every branch solves both quartic ODEs and has `|P| ≥ nonzero`.
    pub falsified: bool,
    /// Branch closest to the target value, if within tolerance.
    pub matched: Option<(Sign, Sign)>,
    /// `P(0, t)` against its closed form, when `x = 0`.
    pub pole_ok: Option<bool>,
}

impl PaperCheck {
    pub fn exit_code(&self) -> i32 {
        if !self.falsified || self.pole_ok == Some(false) {
            EXIT_FAILURE
        } else if self.matched.is_some() {
            EXIT_OK
        } else {
            EXIT_TARGET_MISS
        }
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "{:>7} {:>7} {:>16} {:>10} {:>10}  {}\n",
            "sigma_z", "sigma_q", "P", "r1", "r2", "target"
        );
        for r in &self.reports {
            let mark = if self.matched == Some((r.sigma_z, r.sigma_q)) {
                "match"
            } else {
                "-"
            };
            s += &format!(
                "{:>7} {:>7} {:>16.10} {:>10.2e} {:>10.2e}  {}\n",
                i8::from(r.sigma_z),
                i8::from(r.sigma_q),
                r.p,
                r.r1,
                r.r2,
                mark
            );
        }
        s
    }
}

pub fn paper_check(cfg: &RunConfig) -> Result<PaperCheck, CliError> {
    let tol = &cfg.tolerances;
    let mut reports = Vec::new();
    for branch in cfg.branches_or(BranchSel::All) {
        let params = cfg.params.with_branch(branch.0, branch.1);
        reports.push(evaluate_report(&params, cfg.x, cfg.t, &cfg.diff)?);
    }
    let falsified = reports
        .iter()
        .all(|r| r.r1 <= tol.r1 && r.r2 <= tol.r2 && r.p.abs() >= tol.nonzero);
    let matched = reports
        .iter()
        .filter(|r| (r.p - TARGET_P_VALUE).abs() <= tol.target)
        .min_by(|a, b| {
            (a.p - TARGET_P_VALUE)
                .abs()
                .total_cmp(&(b.p - TARGET_P_VALUE).abs())
        })
        .map(|r| (r.sigma_z, r.sigma_q));
    let pole_ok = if cfg.x == 0.0 && cfg.t >= 0.0 {
        let closed = pole_point_p(&cfg.params, cfg.t)?;
        Some(reports.iter().all(|r| (r.p - closed).abs() <= tol.pole))
    } else {
        None
    };
    Ok(PaperCheck {
        reports,
        falsified,
        matched,
        pole_ok,
    })
}

fn cmd_paper_check(cfg: &RunConfig, stdout: Out) -> Result<i32, CliError> {
    let check = paper_check(cfg)?;
    write!(
        stdout,
        "P({}, {}) per branch\n{}",
        cfg.x,
        cfg.t,
        check.table()
    )
    .map_err(|e| CliError::new(e.to_string()))?;
    let tol = &cfg.tolerances;
    if check.falsified {
        say(
            stdout,
            format_args!(
                "falsification: holds (r1, r2 <= {:e} and |P| >= {} on every branch)",
                tol.r1.max(tol.r2),
                tol.nonzero
            ),
        )?;
    } else {
        say(
            stdout,
            format_args!("falsification: FAILS on at least one branch"),
        )?;
    }
    match check.matched {
        Some(b) => say(
            stdout,
            format_args!(
                "target value {TARGET_P_VALUE}: reproduced by branch {}",
                label(b)
            ),
        )?,
        None => say(
            stdout,
            format_args!(
                "target value {TARGET_P_VALUE}: not reproduced by any branch (tolerance {})",
                tol.target
            ),
        )?,
    }
    if let Some(ok) = check.pole_ok {
        let closed = pole_point_p(&cfg.params, cfg.t)?;
        say(
            stdout,
            format_args!(
                "pole point: closed form P(0, {}) = {closed}, {}",
                cfg.t,
                if ok { "agrees" } else { "DISAGREES" }
            ),
        )?;
    }
    if let Some(path) = &cfg.out {
        let meta = json!({ "x": cfg.x, "t": cfg.t, "exit_code": check.exit_code() });
        let bytes = report_bytes(cfg, "paper-check", meta, &check.reports)?;
        emit(Some(path), &bytes, stdout)?;
    }
    Ok(check.exit_code())
}

fn report_bytes(
    cfg: &RunConfig,
    command: &str,
    extra: serde_json::Value,
    reports: &[ResidualReport],
) -> Result<Vec<u8>, CliError> {
    let mut meta = base_metadata(command, cfg);
    if let (Some(m), serde_json::Value::Object(e)) = (meta.as_object_mut(), extra) {
        m.extend(e);
    }
    render(cfg, meta, reports, &ResidualReport::CSV_HEADER, |r| {
        r.csv_fields().to_vec()
    })
}

// ----------------------------------------------------------------------- scan

pub fn scan(cfg: &RunConfig) -> Result<Vec<ResidualReport>, CliError> {
    let grid = cfg
        .grid
        .ok_or_else(|| CliError::new("scan needs --grid X0:X1:NX,T0:T1:NT"))?;
    if grid.is_empty() {
        return Err(CliError::new(format!("grid {grid} has no points")));
    }
    let (xs, ts) = (grid.xs(), grid.ts());
    let mut out = Vec::with_capacity(xs.len() * ts.len() * 4);
    for branch in cfg.branches_or(BranchSel::All) {
        let params = cfg.params.with_branch(branch.0, branch.1);
        for &x in &xs {
            for &t in &ts {
                out.push(evaluate_report(&params, x, t, &cfg.diff)?);
            }
        }
    }
    Ok(out)
}

fn cmd_scan(cfg: &RunConfig, stdout: Out, stderr: Out) -> Result<i32, CliError> {
    let reports = scan(cfg)?;
    let grid = cfg.grid.expect("checked by scan");
    let bytes = report_bytes(cfg, "scan", json!({ "grid": grid }), &reports)?;
    emit(cfg.out.as_deref(), &bytes, stdout)?;
    let flagged = reports.iter().filter(|r| r.is_flagged()).count();
    let max_p = reports
        .iter()
        .map(|r| r.p.abs())
        .filter(|p| p.is_finite())
        .fold(0.0, f64::max);
    say(
        stderr,
        format_args!(
            "scan: {} records, {flagged} flagged, max |P| = {}",
            reports.len(),
            format_sig12(max_p)
        ),
    )?;
    Ok(EXIT_OK)
}

// ------------------------------------------------------------------ residuals

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualsRecord {
    pub sigma_z: Sign,
    pub sigma_q: Sign,
    pub x: f64,
    pub t: f64,
    pub r1: f64,
    pub r2: f64,
    pub z_invariants: f64,
    pub q_invariants: f64,
    pub passed: bool,
}

pub fn residuals(cfg: &RunConfig) -> Result<Vec<ResidualsRecord>, CliError> {
    let tol = &cfg.tolerances;
    let mut out = Vec::new();
    for (sz, sq) in cfg.branches_or(BranchSel::All) {
        let params = cfg.params.with_branch(sz, sq);
        let ansatz = Ansatz::new(params)?;
        let r1 = residual_r1_with(&ansatz, cfg.t, &cfg.diff)?;
        let r2 = residual_r2_with(&ansatz, cfg.x, cfg.t, &cfg.diff)?;
        let (z_invariants, q_invariants) = invariant_crosscheck(&params, cfg.t)?;
        let passed =
            r1 <= tol.r1 && r2 <= tol.r2 && z_invariants.max(q_invariants) <= tol.invariants;
        out.push(ResidualsRecord {
            sigma_z: sz,
            sigma_q: sq,
            x: cfg.x,
            t: cfg.t,
            r1,
            r2,
            z_invariants,
            q_invariants,
            passed,
        });
    }
    Ok(out)
}

fn cmd_residuals(cfg: &RunConfig, stdout: Out, stderr: Out) -> Result<i32, CliError> {
    let records = residuals(cfg)?;
    let header = [
        "sigma_z",
        "sigma_q",
        "x",
        "t",
        "r1",
        "r2",
        "z_invariants",
        "q_invariants",
        "passed",
    ];
    let bytes = render(
        cfg,
        base_metadata("residuals", cfg),
        &records,
        &header,
        |r| {
            vec![
                i8::from(r.sigma_z).to_string(),
                i8::from(r.sigma_q).to_string(),
                format_sig12(r.x),
                format_sig12(r.t),
                format_sig12(r.r1),
                format_sig12(r.r2),
                format_sig12(r.z_invariants),
                format_sig12(r.q_invariants),
                r.passed.to_string(),
            ]
        },
    )?;
    emit(cfg.out.as_deref(), &bytes, stdout)?;
    let failed = records.iter().filter(|r| !r.passed).count();
    say(
        stderr,
        format_args!("residuals: {} branches, {failed} failed", records.len()),
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

// ------------------------------------------------------------------------ pde

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PdeRecord {
    pub sigma_z: Sign,
    pub sigma_q: Sign,
    pub x: f64,
    pub t: f64,
    pub residual_re: f64,
    pub residual_im: f64,
    pub residual_abs: f64,
    #[serde(rename = "P")]
    pub p: f64,
}

pub fn pde(cfg: &RunConfig) -> Result<Vec<PdeRecord>, CliError> {
    let mut out = Vec::new();
    for (sz, sq) in cfg.branches_or(BranchSel::All) {
        let params = cfg.params.with_branch(sz, sq);
        let ansatz = Ansatz::new(params)?;
        let r = cnlse_residual(&ansatz, cfg.x, cfg.t, &cfg.diff, 1.0, params.q)?;
        let p = cnlse_verify::verify::inconsistency(&ansatz, cfg.x, cfg.t, &cfg.diff)?;
        out.push(PdeRecord {
            sigma_z: sz,
            sigma_q: sq,
            x: cfg.x,
            t: cfg.t,
            residual_re: r.re,
            residual_im: r.im,
            residual_abs: r.norm(),
            p,
        });
    }
    Ok(out)
}

fn cmd_pde(cfg: &RunConfig, stdout: Out, stderr: Out) -> Result<i32, CliError> {
    let records = pde(cfg)?;
    let header = [
        "sigma_z",
        "sigma_q",
        "x",
        "t",
        "residual_re",
        "residual_im",
        "residual_abs",
        "P",
    ];
    let bytes = render(cfg, base_metadata("pde", cfg), &records, &header, |r| {
        vec![
            i8::from(r.sigma_z).to_string(),
            i8::from(r.sigma_q).to_string(),
            format_sig12(r.x),
            format_sig12(r.t),
            format_sig12(r.residual_re),
            format_sig12(r.residual_im),
            format_sig12(r.residual_abs),
            format_sig12(r.p),
        ]
    })?;
    emit(cfg.out.as_deref(), &bytes, stdout)?;
    let [magnitude, order] =
        checks::soliton_residual(cfg.tolerances.residual, cfg.tolerances.order)?;
    say(
        stderr,
        format_args!(
            "soliton control: |residual| = {:.3e} at h=1e-3, |order - 2| = {:.3e}",
            magnitude.worst, order.worst
        ),
    )?;
    Ok(EXIT_OK)
}

// --------------------------------------------------------------------- evolve

/// Default evolution: the pole-free window of the `(+, +)` branch sampled
/// every 0.05 up to `t = 0.5`.
pub const DEFAULT_EVOLVE_GRID: &str = "-0.8:3.2:1024,0.05:0.5:10";

pub fn evolve(cfg: &RunConfig, args: &EvolveArgs) -> Result<DivergenceSeries, CliError> {
    let grid_spec = match cfg.grid {
        Some(g) => g,
        None => DEFAULT_EVOLVE_GRID.parse().map_err(CliError::new)?,
    };
    if grid_spec.nt == 0 {
        return Err(CliError::new("evolve needs at least one sample time"));
    }
    let times = grid_spec.ts();
    let t_end = times.iter().copied().fold(0.0, f64::max);
    let branches = cfg.branches_or(BranchSel::Pp);
    let [branch] = branches[..] else {
        return Err(CliError::new("evolve takes a single branch"));
    };
    if args.control {
        let grid = SpectralGrid::new(-40.0, 40.0, 1024, args.dt)?;
        let soliton = soliton_field(1.0)?;
        let xs = grid.points();
        let at = |t: f64| {
            xs.iter()
                .map(|&x| soliton.sample(x, t))
                .collect::<Result<Vec<_>, _>>()
        };
        Ok(field_divergence(
            at(0.0)?,
            at,
            &grid,
            1.0,
            2.0,
            t_end,
            &times,
            TAPER_FRACTION,
        )?)
    } else {
        let grid = SpectralGrid::new(grid_spec.x0, grid_spec.x1, grid_spec.nx, args.dt)?;
        let params = cfg.params.with_branch(branch.0, branch.1);
        Ok(ansatz_divergence(&params, &grid, 1.0, t_end, &times)?)
    }
}

fn cmd_evolve(
    cfg: &RunConfig,
    args: &EvolveArgs,
    stdout: Out,
    stderr: Out,
) -> Result<i32, CliError> {
    let series = evolve(cfg, args)?;
    let mut meta = base_metadata("evolve", cfg);
    if let Some(m) = meta.as_object_mut() {
        m.insert(
            "source".into(),
            json!(if args.control { "soliton" } else { "ansatz" }),
        );
        m.insert("run".into(), json!(series.metadata));
        m.insert("monotone_trend".into(), json!(series.monotone_trend));
    }
    let bytes = render(cfg, meta, &series.points, &["t", "l2", "linf"], |p| {
        vec![format_sig12(p.t), format_sig12(p.l2), format_sig12(p.linf)]
    })?;
    emit(cfg.out.as_deref(), &bytes, stdout)?;
    if let Some(last) = series.last() {
        say(
            stderr,
            format_args!(
                "evolve: t = {} l2 = {:.6e} linf = {:.6e} monotone = {}",
                last.t, last.l2, last.linf, series.monotone_trend
            ),
        )?;
    }
    for w in &series.metadata.warnings {
        say(stderr, format_args!("warning: {w:?}"))?;
    }
    Ok(EXIT_OK)
}

// ------------------------------------------------------------------- selftest

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Elliptic,
    Invariants,
    Quartic,
    Equilibrium,
    Residual,
    Reference,
    Falsification,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Elliptic,
        Suite::Invariants,
        Suite::Quartic,
        Suite::Equilibrium,
        Suite::Residual,
        Suite::Reference,
        Suite::Falsification,
    ];
}

/// Falsification core at the configured point: every branch solves both
/// quartic ODEs yet has `|P|` above the floor. Reported as the smallest
/// margin, so `worst ≤ tolerance` reads the same as the other suites.
fn falsification(cfg: &RunConfig) -> Result<Vec<CheckOutcome>, CliError> {
    let tol = &cfg.tolerances;
    let mut r1: f64 = 0.0;
    let mut r2: f64 = 0.0;
    let mut min_p = f64::INFINITY;
    for (sz, sq) in BranchSel::All.branches() {
        let report = evaluate_report(&cfg.params.with_branch(sz, sq), cfg.x, cfg.t, &cfg.diff)?;
        r1 = r1.max(report.r1);
        r2 = r2.max(report.r2);
        min_p = min_p.min(report.p.abs());
    }
    let outcome = |name, worst: f64, tolerance: f64, passed: bool| CheckOutcome {
        suite: "falsification",
        name,
        samples: 4,
        worst,
        tolerance,
        passed,
    };
    Ok(vec![
        outcome("max r1 over branches", r1, tol.r1, r1 <= tol.r1),
        outcome("max r2 over branches", r2, tol.r2, r2 <= tol.r2),
        outcome(
            "min |P| over branches (floor)",
            min_p,
            tol.nonzero,
            min_p >= tol.nonzero,
        ),
    ])
}

pub fn selftest(cfg: &RunConfig, args: &SelftestArgs) -> Result<Vec<CheckOutcome>, CliError> {
    let tol = &cfg.tolerances;
    let seed = args.seed;
    let mut out = Vec::new();
    for suite in Suite::ALL.into_iter().filter(|s| !args.skip.contains(s)) {
        match suite {
            Suite::Elliptic => out.push(checks::wp_identity(200, seed, tol.wp)?),
            Suite::Invariants => {
                out.push(checks::invariant_identities(1000, seed, tol.invariants)?)
            }
            Suite::Quartic => out.push(checks::quartic_ode(100, seed, tol.quartic)?),
            Suite::Equilibrium => out.push(checks::equilibrium(20, seed, tol.equilibrium)?),
            Suite::Residual => out.extend(checks::soliton_residual(tol.residual, tol.order)?),
            Suite::Reference => out.extend(checks::reference_soliton(
                tol.mass,
                tol.soliton,
                tol.reversal,
            )?),
            Suite::Falsification => out.extend(falsification(cfg)?),
        }
    }
    Ok(out)
}

fn cmd_selftest(cfg: &RunConfig, args: &SelftestArgs, stdout: Out) -> Result<i32, CliError> {
    let outcomes = selftest(cfg, args)?;
    say(
        stdout,
        format_args!(
            "{:<14} {:<34} {:>7} {:>12} {:>12}  result",
            "suite", "check", "samples", "worst", "tolerance"
        ),
    )?;
    for o in &outcomes {
        say(
            stdout,
            format_args!(
                "{:<14} {:<34} {:>7} {:>12.3e} {:>12.3e}  {}",
                o.suite,
                o.name,
                o.samples,
                o.worst,
                o.tolerance,
                if o.passed { "PASS" } else { "FAIL" }
            ),
        )?;
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    say(
        stdout,
        format_args!("{} checks, {failed} failed", outcomes.len()),
    )?;
    if let Some(path) = &cfg.out {
        let header = ["suite", "check", "samples", "worst", "tolerance", "passed"];
        let bytes = render(
            cfg,
            base_metadata("selftest", cfg),
            &outcomes,
            &header,
            |o| {
                vec![
                    o.suite.to_string(),
                    o.name.to_string(),
                    o.samples.to_string(),
                    format_sig12(o.worst),
                    format_sig12(o.tolerance),
                    o.passed.to_string(),
                ]
            },
        )?;
        emit(Some(path), &bytes, stdout)?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_FAILURE })
}

// ------------------------------------------------------------------- elliptic

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WpRecord {
    pub u_re: f64,
    pub u_im: f64,
    pub wp_re: f64,
    pub wp_im: f64,
    pub wp_prime_re: f64,
    pub wp_prime_im: f64,
    /// `|℘′² − (4℘³ − g₂℘ − g₃)|`.
    pub defect: f64,
    pub flags: String,
}

fn parse_complex(s: &str) -> Result<ComplexValue, CliError> {
    let bad = || CliError::new(format!("bad argument {s:?}; expected RE or RE,IM"));
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (
            a.trim().parse().map_err(|_| bad())?,
            b.trim().parse().map_err(|_| bad())?,
        ),
        None => (s.trim().parse().map_err(|_| bad())?, 0.0),
    };
    Ok(ComplexValue::new(re, im))
}

/// Invariants default to those of the `z` curve of the configured
/// parameters.
pub fn elliptic(
    cfg: &RunConfig,
    args: &EllipticArgs,
) -> Result<(EllipticInvariants, Vec<WpRecord>), CliError> {
    let own = z_curve(&cfg.params).invariants()?;
    let inv = EllipticInvariants::new(args.g2.unwrap_or(own.g2()), args.g3.unwrap_or(own.g3()))?;
    let us = if args.u.is_empty() {
        vec!["0.3".to_string()]
    } else {
        args.u.clone()
    };
    let wp = Weierstrass::new(inv);
    let mut out = Vec::new();
    for text in &us {
        let u = parse_complex(text)?;
        let record = match wp.eval(u) {
            Ok(v) => WpRecord {
                u_re: u.re,
                u_im: u.im,
                wp_re: v.value.re,
                wp_im: v.value.im,
                wp_prime_re: v.derivative.re,
                wp_prime_im: v.derivative.im,
                defect: (v.derivative * v.derivative - inv.cubic(v.value)).norm(),
                flags: String::new(),
            },
            Err(cnlse_verify::Error::PoleProximity { .. }) => WpRecord {
                u_re: u.re,
                u_im: u.im,
                wp_re: f64::NAN,
                wp_im: f64::NAN,
                wp_prime_re: f64::NAN,
                wp_prime_im: f64::NAN,
                defect: f64::NAN,
                flags: "pole".into(),
            },
            Err(e) => return Err(e.into()),
        };
        out.push(record);
    }
    Ok((inv, out))
}

fn cmd_elliptic(
    cfg: &RunConfig,
    args: &EllipticArgs,
    stdout: Out,
    stderr: Out,
) -> Result<i32, CliError> {
    let (inv, records) = elliptic(cfg, args)?;
    let roots = cubic_roots(inv);
    let mut meta = base_metadata("elliptic", cfg);
    if let Some(m) = meta.as_object_mut() {
        m.insert("invariants".into(), json!(inv));
        m.insert("discriminant".into(), json!(inv.discriminant()));
        m.insert("roots".into(), json!(roots.map(|r| [r.re, r.im])));
    }
    let header = [
        "u_re",
        "u_im",
        "wp_re",
        "wp_im",
        "wp_prime_re",
        "wp_prime_im",
        "defect",
        "flags",
    ];
    let bytes = render(cfg, meta, &records, &header, |r| {
        vec![
            format_sig12(r.u_re),
            format_sig12(r.u_im),
            format_sig12(r.wp_re),
            format_sig12(r.wp_im),
            format_sig12(r.wp_prime_re),
            format_sig12(r.wp_prime_im),
            format_sig12(r.defect),
            r.flags.clone(),
        ]
    })?;
    emit(cfg.out.as_deref(), &bytes, stdout)?;
    say(
        stderr,
        format_args!(
            "g2 = {} g3 = {} discriminant = {} roots = {:?}",
            inv.g2(),
            inv.g3(),
            inv.discriminant(),
            roots.map(|r| (r.re, r.im))
        ),
    )?;
    Ok(EXIT_OK)
}
