//! Finite-difference derivatives with Richardson refinement, and composite
//! Gauss–Legendre quadrature.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values the stencils can difference: reals and complex numbers.
pub trait Differentiable:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
}

impl Differentiable for f64 {}
impl Differentiable for Complex64 {}

/// Step sizes and refinement depth for numerical differentiation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffConfig {
    pub h_t: f64,
    pub h_x: f64,
    /// 1 means a plain stencil; each extra level halves the step once more
    /// and removes the next error term.
    pub richardson_levels: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        Self {
            h_t: 1e-5,
            h_x: 1e-4,
            richardson_levels: 2,
        }
    }
}

impl DiffConfig {
    pub const MAX_LEVELS: usize = 4;

    pub fn validate(&self) -> Result<()> {
        if !(self.h_t > 0.0 && self.h_x > 0.0 && self.h_t.is_finite() && self.h_x.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "difference steps must be positive, got h_t = {}, h_x = {}",
                self.h_t, self.h_x
            )));
        }
        if !(1..=Self::MAX_LEVELS).contains(&self.richardson_levels) {
            return Err(Error::InvalidParameter(format!(
                "richardson_levels must be in 1..={}, got {}",
                Self::MAX_LEVELS,
                self.richardson_levels
            )));
        }
        Ok(())
    }
}

/// Richardson extrapolation over estimates at `h, h/2, h/4, …`.
///
/// `order` is the leading error exponent and `increment` the gap between
/// successive exponents (2 for symmetric stencils, 1 for one-sided ones).
pub fn richardson<T, F>(
    h: f64,
    levels: usize,
    order: u32,
    increment: u32,
    mut estimate: F,
) -> Result<T>
where
    T: Differentiable,
    F: FnMut(f64) -> Result<T>,
{
    let levels = levels.max(1);
    let mut table: Vec<T> = Vec::with_capacity(levels);
    let mut step = h;
    for _ in 0..levels {
        table.push(estimate(step)?);
        step *= 0.5;
    }
    for j in 1..levels {
        let factor = 2f64.powi((order + increment * (j as u32 - 1)) as i32);
        for i in (j..levels).rev() {
            let finer = table[i];
            let coarser = table[i - 1];
            table[i] = finer + (finer - coarser) * (1.0 / (factor - 1.0));
        }
    }
    Ok(table[levels - 1])
}

/// First derivative by central differences.
pub fn central_first<T, F>(f: F, at: f64, h: f64, levels: usize) -> Result<T>
where
    T: Differentiable,
    F: Fn(f64) -> Result<T>,
{
    richardson(h, levels, 2, 2, |s| {
        Ok((f(at + s)? - f(at - s)?) * (0.5 / s))
    })
}

/// Second derivative by the symmetric three-point stencil.
pub fn central_second<T, F>(f: F, at: f64, h: f64, levels: usize) -> Result<T>
where
    T: Differentiable,
    F: Fn(f64) -> Result<T>,
{
    let mid = f(at)?;
    richardson(h, levels, 2, 2, |s| {
        Ok((f(at + s)? + f(at - s)? - mid * 2.0) * (1.0 / (s * s)))
    })
}

/// First derivative by a forward 4-point stencil (third order).
pub fn forward_first<T, F>(f: F, at: f64, h: f64, levels: usize) -> Result<T>
where
    T: Differentiable,
    F: Fn(f64) -> Result<T>,
{
    let f0 = f(at)?;
    richardson(h, levels, 3, 1, |s| {
        Ok(
            (f(at + s)? * 18.0 - f0 * 11.0 - f(at + 2.0 * s)? * 9.0 + f(at + 3.0 * s)? * 2.0)
                * (1.0 / (6.0 * s)),
        )
    })
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut rule = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        rule.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    rule
}

/// Composite Gauss–Legendre integral of `f` over `[a, b]`; the panel count
/// doubles until two successive sums agree to `tol`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let rule = gauss_legendre(16);
    let composite = |panels: usize| -> Result<f64> {
        let width = (b - a) / panels as f64;
        let mut total = 0.0;
        for p in 0..panels {
            let mid = a + (p as f64 + 0.5) * width;
            for &(node, weight) in &rule {
                total += weight * f(mid + 0.5 * width * node)?;
            }
        }
        Ok(0.5 * width * total)
    };
    let mut panels = ((b - a).abs() / 0.25).ceil().max(1.0) as usize;
    let mut previous = composite(panels)?;
    for _ in 0..12 {
        panels *= 2;
        let current = composite(panels)?;
        if (current - previous).abs() <= tol {
            return Ok(current);
        }
        previous = current;
    }
    Err(Error::InvalidParameter(format!(
        "quadrature on [{a}, {b}] did not reach tolerance {tol}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn richardson_sharpens_central_difference() {
        let f = |x: f64| Ok(x.sin());
        let plain: f64 = central_first(f, 0.7, 1e-2, 1).unwrap();
        let refined: f64 = central_first(f, 0.7, 1e-2, 3).unwrap();
        assert!((plain - 0.7f64.cos()).abs() > 1e-6);
        assert!((refined - 0.7f64.cos()).abs() < 1e-12);
    }

    #[test]
    fn forward_stencil_handles_boundary() {
        let f = |x: f64| {
            if x < 0.0 {
                Err(Error::StencilOutOfDomain { t: x })
            } else {
                Ok(x.exp())
            }
        };
        let d: f64 = forward_first(f, 0.0, 1e-3, 2).unwrap();
        assert_relative_eq!(d, 1.0, epsilon = 1e-11);
    }

    #[test]
    fn second_difference_of_complex_exponential() {
        let f = |x: f64| Ok(Complex64::new(0.0, 2.0 * x).exp());
        let d: Complex64 = central_second(f, 0.3, 1e-2, 3).unwrap();
        let want = -4.0 * Complex64::new(0.0, 0.6).exp();
        assert!((d - want).norm() < 1e-10);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let rule = gauss_legendre(16);
        let w: f64 = rule.iter().map(|r| r.1).sum();
        assert_relative_eq!(w, 2.0, epsilon = 1e-14);
        let x30: f64 = rule.iter().map(|&(x, w)| w * x.powi(30)).sum();
        assert_relative_eq!(x30, 2.0 / 31.0, epsilon = 1e-14);
    }

    #[test]
    fn integrates_smooth_functions() {
        let v = integrate(|x| Ok(x.exp()), 0.0, 2.0, 1e-12).unwrap();
        assert_relative_eq!(v, 2f64.exp() - 1.0, epsilon = 1e-13);
        assert_eq!(integrate(Ok, 1.0, 1.0, 1e-12).unwrap(), 0.0);
    }

    #[test]
    fn config_bounds() {
        assert!(DiffConfig::default().validate().is_ok());
        let bad = DiffConfig {
            richardson_levels: 5,
            ..DiffConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = DiffConfig {
            h_t: 0.0,
            ..DiffConfig::default()
        };
        assert!(bad.validate().is_err());
    }
}
