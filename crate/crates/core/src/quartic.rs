//! Quartic curves `(y′)² = R(y)` with
//! `R(y) = α·y⁴ + 4β·y³ + 6γ·y² + 4δ·y + ε`, their classical invariants,
//! and the Weierstrass closed-form solution through a given initial value.

use serde::{Deserialize, Serialize};

use crate::elliptic::{ComplexValue, EllipticInvariants, Weierstrass, WpSettings};
use crate::error::{Error, Result};

/// Branch selector for the `±℘′` term of the solution formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        match s {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;

    fn try_from(v: i8) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            other => Err(Error::InvalidParameter(format!(
                "sign must be ±1, got {other}"
            ))),
        }
    }
}

/// Coefficients of `R(y) = α·y⁴ + 4β·y³ + 6γ·y² + 4δ·y + ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticCurve {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
}

impl QuarticCurve {
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64, epsilon: f64) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
        }
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.alpha, self.beta, self.gamma, self.delta, self.epsilon]
    }

    pub fn is_finite(&self) -> bool {
        self.coefficients().iter().all(|c| c.is_finite())
    }

    pub fn eval(&self, y: f64) -> f64 {
        (((self.alpha * y + 4.0 * self.beta) * y + 6.0 * self.gamma) * y + 4.0 * self.delta) * y
            + self.epsilon
    }

    /// `(R, R′, R″, R‴, R⁗)` at `y`.
    pub fn eval_with_derivatives(&self, y: f64) -> [f64; 5] {
        let (a, b, g, d) = (self.alpha, self.beta, self.gamma, self.delta);
        [
            self.eval(y),
            ((4.0 * a * y + 12.0 * b) * y + 12.0 * g) * y + 4.0 * d,
            (12.0 * a * y + 24.0 * b) * y + 12.0 * g,
            24.0 * a * y + 24.0 * b,
            24.0 * a,
        ]
    }

    /// Sum of the magnitudes of the terms of `R(y)`; the round-off scale of
    /// [`QuarticCurve::eval`].
    pub fn magnitude_at(&self, y: f64) -> f64 {
        let ay = y.abs();
        (((self.alpha.abs() * ay + 4.0 * self.beta.abs()) * ay + 6.0 * self.gamma.abs()) * ay
            + 4.0 * self.delta.abs())
            * ay
            + self.epsilon.abs()
    }

    /// Classical invariants of the binary quartic:
    /// `g2 = αε − 4βδ + 3γ²`, `g3 = αγε + 2βγδ − αδ² − β²ε − γ³`.
    pub fn invariants(&self) -> Result<EllipticInvariants> {
        let (a, b, g, d, e) = (self.alpha, self.beta, self.gamma, self.delta, self.epsilon);
        let g2 = a * e - 4.0 * b * d + 3.0 * g * g;
        let g3 = a * g * e + 2.0 * b * g * d - a * d * d - b * b * e - g * g * g;
        EllipticInvariants::new(g2, g3)
    }

    /// Sums of the absolute values of the terms in `g2` and `g3`; the round-off
    /// in either invariant is a few ulps of these, not of the result.
    pub fn invariant_scales(&self) -> (f64, f64) {
        let (a, b, g, d, e) = (self.alpha, self.beta, self.gamma, self.delta, self.epsilon);
        let s2 = (a * e).abs() + (4.0 * b * d).abs() + 3.0 * g * g;
        let s3 = (a * g * e).abs()
            + (2.0 * b * g * d).abs()
            + (a * d * d).abs()
            + (b * b * e).abs()
            + (g * g * g).abs();
        (s2, s3)
    }
}

/// Free-function form of [`QuarticCurve::eval_with_derivatives`].
pub fn eval_with_derivatives(curve: &QuarticCurve, y: f64) -> [f64; 5] {
    curve.eval_with_derivatives(y)
}

/// Free-function form of [`QuarticCurve::invariants`].
pub fn invariants_from_coefficients(curve: &QuarticCurve) -> Result<EllipticInvariants> {
    curve.invariants()
}

/// One evaluation of the closed-form solution.
///
/// `numerator` and `denominator` are the two parts of the rational term, so
/// `value = y0 + numerator / denominator` away from the `℘` pole. Callers
/// use them to tell solution poles (the denominator changes sign while the
/// quotient flips) from removable zeros of the denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionSample {
    pub value: f64,
    pub slope: f64,
    pub numerator: f64,
    pub denominator: f64,
    /// Newton estimate of the distance to the nearest zero of the
    /// denominator, taken on `D / (℘ − R″/24)²` which stays smooth through
    /// the `℘` pole. Infinite at the pole itself.
    pub pole_distance: f64,
}

/// Weierstrass solution of `(y′)² = R(y)` with `y(0) = y0`.
///
/// Holds the elliptic function for the curve so that repeated evaluation
/// along `ξ` reuses the Laurent coefficients.
#[derive(Debug, Clone)]
pub struct QuarticSolution {
    curve: QuarticCurve,
    y0: f64,
    sigma: Sign,
    derivs: [f64; 5],
    root: f64,
    wp: Weierstrass,
}

impl QuarticSolution {
    pub fn new(curve: QuarticCurve, y0: f64, sigma: Sign) -> Result<Self> {
        Self::with_settings(curve, y0, sigma, WpSettings::default())
    }

    pub fn with_settings(
        curve: QuarticCurve,
        y0: f64,
        sigma: Sign,
        settings: WpSettings,
    ) -> Result<Self> {
        if !curve.is_finite() || !y0.is_finite() {
            return Err(Error::InvalidParameter(
                "quartic coefficients and initial value must be finite".into(),
            ));
        }
        let mut derivs = curve.eval_with_derivatives(y0);
        if derivs[0] < 0.0 {
            // Allow round-off sized negatives so exact double roots stay usable.
            if derivs[0] < -64.0 * f64::EPSILON * curve.magnitude_at(y0) {
                return Err(Error::NegativeRadicand { value: derivs[0] });
            }
            derivs[0] = 0.0;
        }
        let wp = Weierstrass::with_settings(curve.invariants()?, settings);
        Ok(Self {
            curve,
            y0,
            sigma,
            derivs,
            root: derivs[0].sqrt(),
            wp,
        })
    }

    pub fn curve(&self) -> &QuarticCurve {
        &self.curve
    }

    pub fn initial_value(&self) -> f64 {
        self.y0
    }

    pub fn sigma(&self) -> Sign {
        self.sigma
    }

    pub fn invariants(&self) -> EllipticInvariants {
        self.wp.invariants()
    }

    /// Initial slope `y′(0) = −σ·√R(y0)` implied by the formula.
    pub fn initial_slope(&self) -> f64 {
        -self.sigma.value() * self.root
    }

    pub fn value(&self, xi: f64) -> Result<f64> {
        self.sample(xi).map(|s| s.value)
    }

    pub fn sample(&self, xi: f64) -> Result<SolutionSample> {
        if xi == 0.0 {
            return Ok(self.pole_limit(xi));
        }
        let wp = match self.wp.eval(ComplexValue::new(xi, 0.0)) {
            Ok(v) => v,
            Err(Error::PoleProximity { .. }) if xi.abs() < self.wp.settings().pole_guard => {
                return Ok(self.pole_limit(xi));
            }
            Err(e) => return Err(e),
        };
        let [r, r1, r2, r3, r4] = self.derivs;
        let s = self.sigma.value();
        let g2 = self.wp.invariants().g2();

        let shifted = wp.value - r2 / 24.0;
        let second = 6.0 * wp.value * wp.value - g2 / 2.0;
        let num = 0.5 * r1 * shifted + s * self.root * wp.derivative + r * r3 / 24.0;
        let den = 2.0 * shifted * shifted - r * r4 / 48.0;
        let dnum = 0.5 * r1 * wp.derivative + s * self.root * second;
        let dden = 4.0 * shifted * wp.derivative;

        let quotient = num / den;
        let guard = self.wp.settings().pole_guard;
        if !quotient.is_finite() || quotient.norm() * guard > 1.0 {
            return Err(Error::PoleProximity { at: xi });
        }
        let slope = (dnum * den - num * dden) / (den * den);
        let c = r * r4 / 48.0;
        let pole_distance = if c != 0.0 {
            (den * shifted / (2.0 * c * wp.derivative)).norm()
        } else {
            (shifted / wp.derivative).norm()
        };
        Ok(SolutionSample {
            value: self.y0 + quotient.re,
            slope: slope.re,
            numerator: num.re,
            denominator: den.re,
            pole_distance,
        })
    }

    // Both numerator and denominator are dominated by powers of ℘ near the
    // origin; the quotient vanishes there. Inside the pole guard a Taylor
    // step stands in; at ξ = 0 this returns y0 exactly.
    fn pole_limit(&self, xi: f64) -> SolutionSample {
        let v = self.initial_slope();
        let acc = 0.5 * self.derivs[1];
        SolutionSample {
            value: self.y0 + v * xi + 0.5 * acc * xi * xi,
            slope: v + acc * xi,
            numerator: 0.0,
            denominator: f64::INFINITY,
            pole_distance: f64::INFINITY,
        }
    }
}

/// `y(ξ)` for `(y′)² = R(y)`, `y(0) = y0`, on the branch selected by `sigma`.
pub fn weierstrass_solution(curve: &QuarticCurve, y0: f64, sigma: Sign, xi: f64) -> Result<f64> {
    QuarticSolution::new(*curve, y0, sigma)?.value(xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn baseline_z_curve() -> QuarticCurve {
        QuarticCurve::new(-16.0, 8.0, -1.6, 0.13, 0.0)
    }

    #[test]
    fn derivatives_of_pure_quartic() {
        let r = QuarticCurve::new(1.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(r.eval_with_derivatives(2.0), [16.0, 32.0, 48.0, 48.0, 24.0]);
        let zero = QuarticCurve::new(0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(zero.eval_with_derivatives(7.0), [0.0; 5]);
    }

    #[test]
    fn baseline_curve_at_one() {
        // −16 + 32 − 9.6 + 0.52
        assert_relative_eq!(baseline_z_curve().eval(1.0), 6.92, max_relative = 1e-15);
    }

    #[test]
    fn invariants_of_simple_curves() {
        let i = QuarticCurve::new(0.0, 0.0, 1.0, 0.0, 0.0)
            .invariants()
            .unwrap();
        assert_eq!((i.g2(), i.g3()), (3.0, -1.0));
        let i = QuarticCurve::new(1.0, 0.0, 0.0, 0.0, 0.0)
            .invariants()
            .unwrap();
        assert_eq!((i.g2(), i.g3()), (0.0, 0.0));
    }

    #[test]
    fn invariants_of_baseline_z_curve() {
        // K = c1² + 4qc2 = 2.4; g2 = 4K²/3 − 16qc1c3, g3 = 8/27(54q²c3² − 18qc1c3K + K³).
        let i = baseline_z_curve().invariants().unwrap();
        assert_relative_eq!(i.g2(), 3.52, max_relative = 1e-14);
        assert_relative_eq!(i.g3(), 1.0384, max_relative = 1e-14);
    }

    #[test]
    fn pole_limit_is_exact() {
        let s = QuarticSolution::new(baseline_z_curve(), 1.0, Sign::Plus).unwrap();
        assert_eq!(s.value(0.0).unwrap(), 1.0);
        assert_relative_eq!(s.sample(0.0).unwrap().slope, -6.92f64.sqrt());
        // Inside the guard the Taylor step is used.
        let tiny = s.value(1e-12).unwrap();
        assert!((tiny - 1.0).abs() < 1e-11);
    }

    #[test]
    fn double_root_is_equilibrium() {
        // −(y − 1)²(y² + 1)
        let r = QuarticCurve::new(-1.0, 0.5, -1.0 / 3.0, 0.5, -1.0);
        for &xi in &[0.0, 0.1, 0.7, 1.3, 2.9] {
            for sigma in Sign::BOTH {
                let y = weierstrass_solution(&r, 1.0, sigma, xi).unwrap();
                assert!((y - 1.0).abs() <= 1e-10, "xi = {xi}: {y}");
            }
        }
    }

    #[test]
    fn baseline_curve_against_ode_oracle() {
        // y″ = R′(y)/2, y(0) = 1, y′(0) = −σ√6.92, mpmath Taylor integrator.
        let r = baseline_z_curve();
        let plus = weierstrass_solution(&r, 1.0, Sign::Plus, 1.0).unwrap();
        assert_relative_eq!(plus, 0.282_631_417_685_664_8, max_relative = 1e-12);
        let minus = weierstrass_solution(&r, 1.0, Sign::Minus, 1.0).unwrap();
        assert_relative_eq!(minus, 0.400_039_058_976_676_55, max_relative = 1e-12);

        let s = QuarticSolution::new(r, 1.0, Sign::Plus)
            .unwrap()
            .sample(0.5)
            .unwrap();
        assert_relative_eq!(s.value, 0.368_217_304_674_912_7, max_relative = 1e-12);
        assert_relative_eq!(s.slope, -0.439_679_767_980_910_2, max_relative = 1e-11);
    }

    #[test]
    fn negative_radicand_rejected() {
        let r = QuarticCurve::new(-1.0, 0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            weierstrass_solution(&r, 1.0, Sign::Plus, 0.5),
            Err(Error::NegativeRadicand { .. })
        ));
    }

    #[test]
    fn sign_round_trips_through_integer() {
        for s in Sign::BOTH {
            assert_eq!(Sign::try_from(i8::from(s)).unwrap(), s);
        }
        assert!(Sign::try_from(0).is_err());
    }
}
