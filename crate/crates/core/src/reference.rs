//! Split-step Fourier integrator for `A_t = i·p·A_xx + i·q·|A|²·A` on a
//! periodic window, used to check dynamically whether the ansatz evolves as
//! the equation says it should.
//!
//! Strang splitting: half a linear step as the Fourier multiplier
//! `e^{−i·p·k²·dt/2}`, a full nonlinear step `A ← A·e^{i·q·|A|²·dt}`, then
//! the other linear half. Both substeps are exact, so mass is conserved to
//! round-off.

use std::f64::consts::PI;
use std::sync::Arc;

use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::ansatz::{Ansatz, AnsatzParams};
use crate::elliptic::ComplexValue;
use crate::error::{Error, Result};

/// Outer fraction of the window (at each end) covered by the taper.
pub const TAPER_FRACTION: f64 = 0.1;
/// Deviations are measured on this central fraction of the window.
pub const COMPARE_FRACTION: f64 = 0.6;

/// Periodic grid `x_j = x_min + j·dx`, `j = 0..n`, `dx = (x_max − x_min)/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
    pub dt: f64,
}

impl SpectralGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize, dt: f64) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter(format!(
                "window must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n < 64 || !n.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "grid size must be a power of two and at least 64, got {n}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {dt}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            n,
            dt,
        })
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n).map(|j| self.x_min + j as f64 * dx).collect()
    }

    /// Angular wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        let n = self.n as i64;
        let base = 2.0 * PI / self.length();
        (0..n)
            .map(|j| if j < n / 2 { j } else { j - n })
            .map(|j| base * j as f64)
            .collect()
    }

    pub fn k_max(&self) -> f64 {
        PI / self.dx()
    }

    /// Largest `dt` below which the fastest mode turns by less than half a
    /// radian per step.
    pub fn aliasing_limit(&self, p: f64) -> f64 {
        0.5 / (p.abs() * self.k_max().powi(2))
    }

    /// Same window, `n` and `1/dt` doubled.
    pub fn refined(&self) -> Self {
        Self {
            n: self.n * 2,
            dt: self.dt / 2.0,
            ..*self
        }
    }
}

/// Non-fatal observations recorded during an evolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Warning {
    /// `dt` exceeds [`SpectralGrid::aliasing_limit`].
    Aliasing { dt: f64, limit: f64 },
}

/// A Strang-split stepper bound to one grid and time step.
pub struct SplitStep {
    q: f64,
    dt: f64,
    half_linear: Vec<ComplexValue>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch: Vec<ComplexValue>,
}

impl std::fmt::Debug for SplitStep {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SplitStep")
            .field("q", &self.q)
            .field("dt", &self.dt)
            .field("n", &self.half_linear.len())
            .finish()
    }
}

impl SplitStep {
    /// `dt` may be negative to integrate backwards.
    pub fn new(grid: &SpectralGrid, p: f64, q: f64, dt: f64) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(grid.n);
        let inverse = planner.plan_fft_inverse(grid.n);
        let scale = 1.0 / grid.n as f64;
        let half_linear = grid
            .wavenumbers()
            .into_iter()
            .map(|k| ComplexValue::from_polar(scale, -p * k * k * dt / 2.0))
            .collect();
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            q,
            dt,
            half_linear,
            forward,
            inverse,
            scratch: vec![ComplexValue::new(0.0, 0.0); scratch_len],
        }
    }

    fn linear_half(&mut self, field: &mut [ComplexValue]) {
        self.forward.process_with_scratch(field, &mut self.scratch);
        for (a, m) in field.iter_mut().zip(&self.half_linear) {
            *a *= m;
        }
        self.inverse.process_with_scratch(field, &mut self.scratch);
    }

    pub fn step(&mut self, field: &mut [ComplexValue]) {
        self.linear_half(field);
        let rot = self.q * self.dt;
        for a in field.iter_mut() {
            *a *= ComplexValue::from_polar(1.0, rot * a.norm_sqr());
        }
        self.linear_half(field);
    }

    pub fn run(&mut self, field: &mut [ComplexValue], steps: usize) {
        for _ in 0..steps {
            self.step(field);
        }
    }
}

/// Result of [`split_step_evolve`].
#[derive(Debug, Clone, PartialEq)]
pub struct Evolution {
    pub samples: Vec<ComplexValue>,
    pub warnings: Vec<Warning>,
}

fn check_samples(samples: &[ComplexValue], grid: &SpectralGrid) -> Result<()> {
    if samples.len() != grid.n {
        return Err(Error::InvalidParameter(format!(
            "expected {} samples, got {}",
            grid.n,
            samples.len()
        )));
    }
    match samples.iter().position(|a| !a.is_finite()) {
        Some(index) => Err(Error::NonFiniteSamples { index }),
        None => Ok(()),
    }
}

fn aliasing_warnings(grid: &SpectralGrid, p: f64) -> Vec<Warning> {
    let limit = grid.aliasing_limit(p);
    if grid.dt > limit {
        vec![Warning::Aliasing { dt: grid.dt, limit }]
    } else {
        Vec::new()
    }
}

/// Advances `samples` by `steps` steps of `grid.dt`.
pub fn split_step_evolve(
    samples: &[ComplexValue],
    p: f64,
    q: f64,
    grid: &SpectralGrid,
    steps: usize,
) -> Result<Evolution> {
    check_samples(samples, grid)?;
    let mut field = samples.to_vec();
    SplitStep::new(grid, p, q, grid.dt).run(&mut field, steps);
    Ok(Evolution {
        samples: field,
        warnings: aliasing_warnings(grid, p),
    })
}

/// Discrete mass `Σ|A|²·Δx`.
pub fn mass(samples: &[ComplexValue], dx: f64) -> f64 {
    samples.iter().map(|a| a.norm_sqr()).sum::<f64>() * dx
}

/// Raised-cosine window rising over the outer `fraction` of the grid at
/// each end, 1 in between.
pub fn raised_cosine_taper(n: usize, fraction: f64) -> Vec<f64> {
    (0..n)
        .map(|j| {
            let s = j as f64 / n as f64;
            let edge = s.min(1.0 - s);
            if edge >= fraction {
                1.0
            } else {
                0.5 * (1.0 - (PI * edge / fraction).cos())
            }
        })
        .collect()
}

/// Indices of the central `fraction` of the grid.
pub fn inner_indices(n: usize, fraction: f64) -> std::ops::Range<usize> {
    let margin = ((1.0 - fraction) / 2.0 * n as f64).round() as usize;
    margin..n - margin
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivergencePoint {
    pub t: f64,
    pub l2: f64,
    pub linf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub grid: SpectralGrid,
    pub p: f64,
    pub q: f64,
    pub taper_fraction: f64,
    pub compare_fraction: f64,
    pub steps_per_unit_time: f64,
    pub warnings: Vec<Warning>,
}

/// Deviation of an evolved field from a reference over time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceSeries {
    pub metadata: RunMetadata,
    pub points: Vec<DivergencePoint>,
    /// `l2` is non-decreasing across the sample times.
    pub monotone_trend: bool,
}

impl DivergenceSeries {
    pub fn last(&self) -> Option<&DivergencePoint> {
        self.points.last()
    }
}

fn sorted_times(t_end: f64, sample_times: &[f64], dt: f64) -> Result<Vec<(f64, usize)>> {
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "t_end must be non-negative, got {t_end}"
        )));
    }
    let mut times: Vec<f64> = sample_times
        .iter()
        .copied()
        .filter(|&t| t < t_end)
        .collect();
    if times.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidParameter(
            "sample times must be non-negative".into(),
        ));
    }
    times.push(t_end);
    times.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    times.dedup();
    times
        .into_iter()
        .map(|t| {
            let steps = (t / dt).round();
            if (steps * dt - t).abs() > 1e-9 * t.max(1.0) {
                Err(Error::InvalidParameter(format!(
                    "sample time {t} is not a multiple of dt = {dt}"
                )))
            } else {
                Ok((t, steps as usize))
            }
        })
        .collect()
}

/// Evolves `initial` and compares it against `reference(t)` on the inner
/// part of the window at each sample time.
///
/// `reference` returns the expected field on the grid points at time `t`.
pub fn field_divergence<F>(
    initial: Vec<ComplexValue>,
    mut reference: F,
    grid: &SpectralGrid,
    p: f64,
    q: f64,
    t_end: f64,
    sample_times: &[f64],
    taper_fraction: f64,
) -> Result<DivergenceSeries>
where
    F: FnMut(f64) -> Result<Vec<ComplexValue>>,
{
    check_samples(&initial, grid)?;
    let times = sorted_times(t_end, sample_times, grid.dt)?;
    let mut field = initial;
    if taper_fraction > 0.0 {
        for (a, w) in field
            .iter_mut()
            .zip(raised_cosine_taper(grid.n, taper_fraction))
        {
            *a *= w;
        }
    }
    let inner = inner_indices(grid.n, COMPARE_FRACTION);
    let mut stepper = SplitStep::new(grid, p, q, grid.dt);
    let mut done = 0usize;
    let mut points = Vec::with_capacity(times.len());
    for (t, steps) in times {
        stepper.run(&mut field, steps - done);
        done = steps;
        let expected = reference(t)?;
        check_samples(&expected, grid)?;
        let mut sum = 0.0;
        let mut linf: f64 = 0.0;
        for j in inner.clone() {
            let d = (field[j] - expected[j]).norm();
            sum += d * d;
            linf = linf.max(d);
        }
        points.push(DivergencePoint {
            t,
            l2: (sum * grid.dx()).sqrt(),
            linf,
        });
    }
    let monotone_trend = points.windows(2).all(|w| w[1].l2 >= w[0].l2);
    Ok(DivergenceSeries {
        metadata: RunMetadata {
            grid: *grid,
            p,
            q,
            taper_fraction,
            compare_fraction: COMPARE_FRACTION,
            steps_per_unit_time: 1.0 / grid.dt,
            warnings: aliasing_warnings(grid, p),
        },
        points,
        monotone_trend,
    })
}

/// Errors with [`Error::WindowContainsPole`] if `Q(·, t)` has a pole in the
/// window at any of `times`.
pub fn check_window_poles(ansatz: &Ansatz, grid: &SpectralGrid, times: &[f64]) -> Result<()> {
    let xs = grid.points();
    for &t in times {
        let slice = ansatz.slice(t)?;
        let mut previous: Option<(f64, f64, f64)> = None;
        for &x in xs.iter().chain(std::iter::once(&grid.x_max)) {
            let s = match slice.q_solution.sample(x) {
                Ok(s) => s,
                Err(Error::PoleProximity { .. }) => return Err(Error::WindowContainsPole { x, t }),
                Err(e) => return Err(e),
            };
            if let Some((px, pn, pd)) = previous {
                // A real pole flips the denominator but not the numerator.
                let finite = pd.is_finite() && s.denominator.is_finite();
                if finite
                    && pd.signum() != s.denominator.signum()
                    && pn.signum() == s.numerator.signum()
                {
                    return Err(Error::WindowContainsPole {
                        x: 0.5 * (px + x),
                        t,
                    });
                }
            }
            previous = Some((x, s.numerator, s.denominator));
        }
    }
    Ok(())
}

/// Launches the split-step integrator from `A(x, 0)` of the ansatz and
/// measures how far it drifts from `A(x, t)`.
pub fn ansatz_divergence(
    params: &AnsatzParams,
    grid: &SpectralGrid,
    p: f64,
    t_end: f64,
    sample_times: &[f64],
) -> Result<DivergenceSeries> {
    let ansatz = Ansatz::new(*params)?;
    let times: Vec<f64> = sorted_times(t_end, sample_times, grid.dt)?
        .into_iter()
        .map(|s| s.0)
        .collect();
    let mut checked = vec![0.0];
    checked.extend(&times);
    check_window_poles(&ansatz, grid, &checked)?;
    let xs = grid.points();
    let on_grid = |t: f64| -> Result<Vec<ComplexValue>> {
        let slice = ansatz.field_slice(t)?;
        xs.iter().map(|&x| slice.field(x)).collect()
    };
    let initial = on_grid(0.0)?;
    field_divergence(
        initial,
        on_grid,
        grid,
        p,
        params.q,
        t_end,
        sample_times,
        TAPER_FRACTION,
    )
}

/// Default window for the baseline parameters on the `(+, +)` branch: the
/// poles of `Q(·, t)` stay outside `[−0.8, 3.2]` for `t ∈ [0, 0.5]`.
pub fn default_window(n: usize, dt: f64) -> Result<SpectralGrid> {
    SpectralGrid::new(-0.8, 3.2, n, dt)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{soliton_field, FieldSampler};

    fn soliton_grid() -> SpectralGrid {
        SpectralGrid::new(-40.0, 40.0, 1024, 1e-3).unwrap()
    }

    fn soliton_samples(grid: &SpectralGrid, t: f64) -> Vec<ComplexValue> {
        let s = soliton_field(1.0).unwrap();
        grid.points()
            .into_iter()
            .map(|x| s.sample(x, t).unwrap())
            .collect()
    }

    #[test]
    fn grid_validation() {
        assert!(SpectralGrid::new(0.0, 1.0, 100, 1e-3).is_err());
        assert!(SpectralGrid::new(0.0, 1.0, 32, 1e-3).is_err());
        assert!(SpectralGrid::new(1.0, 0.0, 64, 1e-3).is_err());
        assert!(SpectralGrid::new(0.0, 1.0, 64, 0.0).is_err());
        let g = SpectralGrid::new(0.0, 2.0 * PI, 64, 1e-3).unwrap();
        let k = g.wavenumbers();
        assert_eq!(k[1], 1.0);
        assert_eq!(k[63], -1.0);
        assert_eq!(k[32], -32.0);
    }

    #[test]
    fn fft_round_trip() {
        let grid = soliton_grid();
        let original = soliton_samples(&grid, 0.3);
        let mut field = original.clone();
        // p = q = 0: both substeps are the identity up to the transforms.
        SplitStep::new(&grid, 0.0, 0.0, grid.dt).run(&mut field, 3);
        for (a, b) in field.iter().zip(&original) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_field_stays_zero() {
        let grid = soliton_grid();
        let zero = vec![ComplexValue::new(0.0, 0.0); grid.n];
        let out = split_step_evolve(&zero, 1.0, 2.0, &grid, 50).unwrap();
        assert!(out.samples.iter().all(|a| a.norm() == 0.0));
    }

    #[test]
    fn plane_wave_phase() {
        let grid = SpectralGrid::new(0.0, 10.0, 64, 1e-3).unwrap();
        let a0 = ComplexValue::new(0.6, 0.3);
        let start = vec![a0; grid.n];
        let out = split_step_evolve(&start, 1.0, 2.0, &grid, 1000).unwrap();
        let want = a0 * ComplexValue::from_polar(1.0, 2.0 * a0.norm_sqr() * 1.0);
        for a in &out.samples {
            assert!((a.norm() - a0.norm()).abs() < 1e-12);
            assert!((a - want).norm() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_finite_input() {
        let grid = soliton_grid();
        let mut s = soliton_samples(&grid, 0.0);
        s[7] = ComplexValue::new(f64::NAN, 0.0);
        assert!(matches!(
            split_step_evolve(&s, 1.0, 2.0, &grid, 1),
            Err(Error::NonFiniteSamples { index: 7 })
        ));
    }

    #[test]
    fn aliasing_is_reported_not_fatal() {
        let grid = SpectralGrid::new(-1.0, 1.0, 1024, 1e-3).unwrap();
        let s = vec![ComplexValue::new(0.0, 0.0); grid.n];
        let out = split_step_evolve(&s, 1.0, 2.0, &grid, 1).unwrap();
        assert!(matches!(out.warnings[..], [Warning::Aliasing { .. }]));
        let coarse = SpectralGrid::new(-1.0, 1.0, 64, 1e-5).unwrap();
        assert!(split_step_evolve(&s[..64], 1.0, 2.0, &coarse, 1)
            .unwrap()
            .warnings
            .is_empty());
    }

    #[test]
    fn time_reversal() {
        let grid = soliton_grid();
        let start = soliton_samples(&grid, 0.0);
        let mut field = start.clone();
        SplitStep::new(&grid, 1.0, 2.0, grid.dt).run(&mut field, 500);
        SplitStep::new(&grid, 1.0, 2.0, -grid.dt).run(&mut field, 500);
        let worst = field
            .iter()
            .zip(&start)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "{worst}");
    }

    #[test]
    fn taper_shape() {
        let w = raised_cosine_taper(100, 0.1);
        assert_eq!(w[0], 0.0);
        assert_eq!(w[10], 1.0);
        assert_eq!(w[50], 1.0);
        assert!(w[5] > 0.0 && w[5] < 1.0);
        assert_eq!(inner_indices(100, 0.6), 20..80);
    }

    #[test]
    fn zero_duration_has_zero_deviation() {
        let grid = default_window(256, 1e-3).unwrap();
        let s = ansatz_divergence(&AnsatzParams::baseline(), &grid, 1.0, 0.0, &[]).unwrap();
        assert_eq!(s.points.len(), 1);
        assert_eq!(s.points[0].t, 0.0);
        assert_eq!(s.points[0].linf, 0.0);
    }

    #[test]
    fn window_pole_detection() {
        let ansatz = Ansatz::new(AnsatzParams::baseline()).unwrap();
        // Q(·, 0) has a pole near x = −1.56 on this branch.
        let wide = SpectralGrid::new(-2.0, 3.2, 512, 1e-3).unwrap();
        assert!(matches!(
            check_window_poles(&ansatz, &wide, &[0.0]),
            Err(Error::WindowContainsPole { .. })
        ));
        let times: Vec<f64> = (0..=50).map(|k| k as f64 * 0.01).collect();
        check_window_poles(&ansatz, &default_window(512, 1e-3).unwrap(), &times).unwrap();
    }
}
