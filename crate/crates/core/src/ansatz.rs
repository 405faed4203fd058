//! The constructed ansatz objects: `z(t) = d(t)²`, the phase `φ(t)`, the
//! real profile `Q(x, t)` and the field `A = (Q + i·d)·e^{iφ}`.
//!
//! `z` solves `z_t² = R₁(z)` and, at each fixed `t`, `Q` solves
//! `Q_x² = R₂(Q)` whose coefficients depend on `z(t)` and `z_t(t)`. Both are
//! evaluated through the Weierstrass closed form; `p` is fixed to 1.

use serde::{Deserialize, Serialize};

use crate::elliptic::ComplexValue;
use crate::error::{Error, Result};
use crate::numdiff::integrate;
use crate::quartic::{QuarticCurve, QuarticSolution, Sign};

/// Absolute tolerance of the phase quadrature.
pub const PHASE_TOLERANCE: f64 = 1e-12;

/// Full parameterization of the constructed solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnsatzParams {
    /// Nonlinearity coefficient, nonzero.
    pub q: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    /// `z(0) = d(0)²`, positive.
    pub z0: f64,
    /// Constant value of `Q(0, t)`.
    pub q0: f64,
    pub phi0: f64,
    pub sigma_z: Sign,
    pub sigma_q: Sign,
}

impl Default for AnsatzParams {
    fn default() -> Self {
        Self::baseline()
    }
}

impl AnsatzParams {
    /// `q = −1, c₁ = −2, c₂ = 0.4, c₃ = 0.13, z₀ = 1, Q₀ = 1`, `φ₀ = 0`, on
    /// the `(+, +)` branch.
    pub fn baseline() -> Self {
        Self {
            q: -1.0,
            c1: -2.0,
            c2: 0.4,
            c3: 0.13,
            z0: 1.0,
            q0: 1.0,
            phi0: 0.0,
            sigma_z: Sign::Plus,
            sigma_q: Sign::Plus,
        }
    }

    pub fn with_branch(mut self, sigma_z: Sign, sigma_q: Sign) -> Self {
        self.sigma_z = sigma_z;
        self.sigma_q = sigma_q;
        self
    }

    pub fn branch(&self) -> (Sign, Sign) {
        (self.sigma_z, self.sigma_q)
    }

    pub fn validate(&self) -> Result<()> {
        let values = [
            self.q, self.c1, self.c2, self.c3, self.z0, self.q0, self.phi0,
        ];
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("parameters must be finite".into()));
        }
        if self.q == 0.0 {
            return Err(Error::InvalidParameter("q must be nonzero".into()));
        }
        if self.z0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "z0 must be positive, got {}",
                self.z0
            )));
        }
        Ok(())
    }
}

/// Coefficients of `R₁`: `(−16q², 4qc₁, −(2/3)(c₁² + 4qc₂), c₃, 0)`.
pub fn z_curve(params: &AnsatzParams) -> QuarticCurve {
    let AnsatzParams { q, c1, c2, c3, .. } = *params;
    QuarticCurve::new(
        -16.0 * q * q,
        4.0 * q * c1,
        -2.0 / 3.0 * (c1 * c1 + 4.0 * q * c2),
        c3,
        0.0,
    )
}

/// Coefficients of `R₂` for given `z` and signed `z_t`:
/// `(−q/2, 0, (c₁ − 3qz)/6, z_t/(4√z), 2c₂ + (3/2)qz² − c₁z)`.
pub fn q_curve_for(params: &AnsatzParams, z: f64, z_t: f64) -> QuarticCurve {
    let AnsatzParams { q, c1, c2, .. } = *params;
    QuarticCurve::new(
        -q / 2.0,
        0.0,
        (c1 - 3.0 * q * z) / 6.0,
        z_t / (4.0 * z.sqrt()),
        2.0 * c2 + 1.5 * q * z * z - c1 * z,
    )
}

/// Closed-form `g₂` and `g₃` of `R₁` as functions of the parameters.
pub fn closed_form_z_invariants(params: &AnsatzParams) -> (f64, f64) {
    let AnsatzParams { q, c1, c2, c3, .. } = *params;
    let k = c1 * c1 + 4.0 * q * c2;
    let g2 = 4.0 / 3.0 * k * k - 16.0 * q * c1 * c3;
    let g3 = 8.0 / 27.0 * (54.0 * q * q * c3 * c3 - 18.0 * q * c1 * c3 * k + k * k * k);
    (g2, g3)
}

/// Closed-form `g₂` and `g₃` of `R₂` given `z(t)` and `z_t(t)`.
pub fn closed_form_q_invariants(params: &AnsatzParams, z: f64, z_t: f64) -> (f64, f64) {
    let AnsatzParams { q, c1, c2, .. } = *params;
    let g2 = c1 * c1 / 12.0 - q * c2;
    let g3 = -(c1 - 3.0 * q * z) / 216.0
        * (c1 * c1 - 24.0 * q * c1 * z + 36.0 * q * q * z * z + 36.0 * q * c2)
        + q * z_t * z_t / (32.0 * z);
    (g2, g3)
}

/// The ansatz for one parameter set, with the `z` solution prepared.
#[derive(Debug, Clone)]
pub struct Ansatz {
    params: AnsatzParams,
    z_solution: QuarticSolution,
}

impl Ansatz {
    pub fn new(params: AnsatzParams) -> Result<Self> {
        params.validate()?;
        let z_solution = QuarticSolution::new(z_curve(&params), params.z0, params.sigma_z)?;
        Ok(Self { params, z_solution })
    }

    pub fn params(&self) -> &AnsatzParams {
        &self.params
    }

    pub fn z_solution(&self) -> &QuarticSolution {
        &self.z_solution
    }

    /// `(z(t), z_t(t))`, the slope taken from the closed form itself so its
    /// sign is right through turning points.
    pub fn z_state(&self, t: f64) -> Result<(f64, f64)> {
        check_time(t)?;
        let s = self.z_solution.sample(t)?;
        if s.value < 0.0 {
            return Err(Error::RealityViolation { t, z: s.value });
        }
        Ok((s.value, s.slope))
    }

    pub fn z(&self, t: f64) -> Result<f64> {
        self.z_state(t).map(|s| s.0)
    }

    pub fn q_curve(&self, t: f64) -> Result<QuarticCurve> {
        self.slice(t).map(|s| *s.q_solution.curve())
    }

    /// Everything that depends on `t` alone, ready for evaluation along `x`.
    pub fn slice(&self, t: f64) -> Result<TimeSlice> {
        let (z, z_t) = self.z_state(t)?;
        if z <= 0.0 {
            return Err(Error::RealityViolation { t, z });
        }
        let curve = q_curve_for(&self.params, z, z_t);
        let q_solution = QuarticSolution::new(curve, self.params.q0, self.params.sigma_q)?;
        Ok(TimeSlice {
            t,
            z,
            z_t,
            q_solution,
        })
    }

    pub fn q(&self, x: f64, t: f64) -> Result<f64> {
        self.slice(t)?.q(x)
    }

    /// `φ(t) = φ₀ + c₁t − 2q ∫₀ᵗ z(s) ds`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        let integral = integrate(|s| self.z(s), 0.0, t, PHASE_TOLERANCE)?;
        Ok(self.params.phi0 + self.params.c1 * t - 2.0 * self.params.q * integral)
    }

    pub fn field_slice(&self, t: f64) -> Result<FieldSlice> {
        Ok(FieldSlice {
            slice: self.slice(t)?,
            phi: self.phi(t)?,
        })
    }

    pub fn field(&self, x: f64, t: f64) -> Result<ComplexValue> {
        self.field_slice(t)?.field(x)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "time must be finite and non-negative, got {t}"
        )))
    }
}

/// The ansatz frozen at one time.
#[derive(Debug, Clone)]
pub struct TimeSlice {
    pub t: f64,
    pub z: f64,
    pub z_t: f64,
    pub q_solution: QuarticSolution,
}

impl TimeSlice {
    pub fn q(&self, x: f64) -> Result<f64> {
        self.q_solution.value(x)
    }

    pub fn d(&self) -> f64 {
        self.z.sqrt()
    }
}

/// A [`TimeSlice`] plus the phase, enough to assemble `A(x, t)`.
#[derive(Debug, Clone)]
pub struct FieldSlice {
    pub slice: TimeSlice,
    pub phi: f64,
}

impl FieldSlice {
    pub fn field(&self, x: f64) -> Result<ComplexValue> {
        let q = self.slice.q(x)?;
        Ok(ComplexValue::new(q, self.slice.d()) * ComplexValue::from_polar(1.0, self.phi))
    }
}

pub fn z_of_t(params: &AnsatzParams, t: f64) -> Result<f64> {
    Ansatz::new(*params)?.z(t)
}

pub fn q_curve(params: &AnsatzParams, t: f64) -> Result<QuarticCurve> {
    Ansatz::new(*params)?.q_curve(t)
}

pub fn q_of_xt(params: &AnsatzParams, x: f64, t: f64) -> Result<f64> {
    Ansatz::new(*params)?.q(x, t)
}

pub fn phi_of_t(params: &AnsatzParams, t: f64) -> Result<f64> {
    Ansatz::new(*params)?.phi(t)
}

pub fn field_a(params: &AnsatzParams, x: f64, t: f64) -> Result<ComplexValue> {
    Ansatz::new(*params)?.field(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn baseline() -> AnsatzParams {
        AnsatzParams::baseline()
    }

    #[test]
    fn z_curve_coefficients() {
        let c = z_curve(&baseline());
        assert_eq!(c.alpha, -16.0);
        assert_eq!(c.beta, 8.0);
        assert_relative_eq!(c.gamma, -1.6, max_relative = 1e-15);
        assert_eq!(c.delta, 0.13);
        assert_eq!(c.epsilon, 0.0);

        let p = AnsatzParams {
            q: 1.0,
            c1: 0.0,
            c2: 0.0,
            c3: 0.0,
            ..baseline()
        };
        assert_eq!(z_curve(&p).coefficients(), [-16.0, 0.0, 0.0, 0.0, 0.0]);
        let p = AnsatzParams {
            q: -1.0,
            c1: 0.0,
            c2: 0.0,
            c3: 1.0,
            ..baseline()
        };
        assert_eq!(z_curve(&p).coefficients(), [-16.0, 0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn pole_limits_are_bitwise() {
        for sz in Sign::BOTH {
            for sq in Sign::BOTH {
                let a = Ansatz::new(baseline().with_branch(sz, sq)).unwrap();
                assert_eq!(a.z(0.0).unwrap(), 1.0);
                for &t in &[0.0, 0.3, 1.0, 1.7] {
                    assert_eq!(a.q(0.0, t).unwrap(), 1.0);
                }
            }
        }
    }

    #[test]
    fn z_against_ode_oracle() {
        let plus = Ansatz::new(baseline()).unwrap();
        let (z, zt) = plus.z_state(1.0).unwrap();
        assert_relative_eq!(z, 0.282_631_417_685_664_8, max_relative = 1e-12);
        assert_relative_eq!(zt, 0.021_836_176_695_233_64, max_relative = 1e-9);
        let minus = Ansatz::new(baseline().with_branch(Sign::Minus, Sign::Plus)).unwrap();
        let (z, zt) = minus.z_state(1.0).unwrap();
        assert_relative_eq!(z, 0.400_039_058_976_676_55, max_relative = 1e-12);
        assert_relative_eq!(zt, -0.557_279_390_023_330_3, max_relative = 1e-11);
    }

    #[test]
    fn q_curve_at_start() {
        let c = q_curve(&baseline(), 0.0).unwrap();
        assert_relative_eq!(c.epsilon, 1.3, max_relative = 1e-15);
        assert_relative_eq!(6.0 * c.gamma, 1.0, max_relative = 1e-15);
        assert_eq!(c.alpha, 0.5);
        // Slope at t = 0 is −σ_z·√R₁(z₀).
        assert_relative_eq!(c.delta, -6.92f64.sqrt() / 4.0, max_relative = 1e-14);
        let c = q_curve(&baseline().with_branch(Sign::Minus, Sign::Plus), 0.0).unwrap();
        assert_relative_eq!(c.delta, 6.92f64.sqrt() / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn q_against_ode_oracle() {
        // Q″ = R₂′(Q)/2 in x with z(1), z_t(1) from the ODE oracle.
        let expected = [
            (Sign::Plus, Sign::Plus, 0.030_991_585_397_542_367),
            (Sign::Plus, Sign::Minus, 2.259_649_302_233_619),
            (Sign::Minus, Sign::Plus, 0.331_205_192_558_895),
            (Sign::Minus, Sign::Minus, 1.504_753_624_384_824),
        ];
        for (sz, sq, want) in expected {
            let got = q_of_xt(&baseline().with_branch(sz, sq), 1.0, 1.0).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
    }

    #[test]
    fn phase_against_quadrature_oracle() {
        assert_eq!(phi_of_t(&baseline(), 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            phi_of_t(&baseline(), 1.0).unwrap(),
            -1.099_357_500_979_267_1,
            epsilon = 1e-10
        );
        let minus = baseline().with_branch(Sign::Minus, Sign::Minus);
        assert_relative_eq!(
            phi_of_t(&minus, 1.0).unwrap(),
            0.103_912_023_050_437_13,
            epsilon = 1e-10
        );
    }

    #[test]
    fn equilibrium_z_gives_linear_phase() {
        // R₁ = −16z(z − 1)²(z + 2) = −16z⁴ + 48z² − 32z: q = −1, c₁ = 0,
        // c₂ = 3, c₃ = −8.
        let p = AnsatzParams {
            q: -1.0,
            c1: 0.0,
            c2: 3.0,
            c3: -8.0,
            z0: 1.0,
            ..baseline()
        };
        let c = z_curve(&p);
        assert_eq!(c.eval(1.0), 0.0);
        assert_eq!(c.eval_with_derivatives(1.0)[1], 0.0);
        let a = Ansatz::new(p).unwrap();
        for &t in &[0.2, 0.9, 1.6] {
            assert!((a.z(t).unwrap() - 1.0).abs() < 1e-10);
            let want = p.phi0 + (p.c1 - 2.0 * p.q * p.z0) * t;
            assert!((a.phi(t).unwrap() - want).abs() < 1e-10);
        }
    }

    #[test]
    fn field_modulus_identity() {
        let a = Ansatz::new(baseline()).unwrap();
        assert_eq!(a.field(0.0, 0.0).unwrap(), ComplexValue::new(1.0, 1.0));
        for &(x, t) in &[(0.3, 0.2), (1.0, 1.0), (-0.4, 0.7), (1.7, 0.05)] {
            let f = a.field(x, t).unwrap();
            let q = a.q(x, t).unwrap();
            let z = a.z(t).unwrap();
            let lhs = f.norm_sqr();
            assert!((lhs - (q * q + z)).abs() <= 1e-12 * lhs.max(1.0));
        }
    }

    #[test]
    fn rejects_bad_params() {
        assert!(Ansatz::new(AnsatzParams {
            q: 0.0,
            ..baseline()
        })
        .is_err());
        assert!(Ansatz::new(AnsatzParams {
            z0: -1.0,
            ..baseline()
        })
        .is_err());
        assert!(Ansatz::new(baseline()).unwrap().z(-0.1).is_err());
    }

    #[test]
    fn z_touching_zero_is_never_returned_negative() {
        // R₁ = −16z⁴ + 4z: z oscillates between 0 and 4^(-1/3).
        let p = AnsatzParams {
            q: -1.0,
            c1: 0.0,
            c2: 0.0,
            c3: 1.0,
            z0: 0.5,
            ..baseline()
        };
        let a = Ansatz::new(p).unwrap();
        let mut lowest = f64::INFINITY;
        for k in 1..2000 {
            match a.z(k as f64 * 1e-3) {
                Ok(z) => {
                    assert!(z >= 0.0);
                    lowest = lowest.min(z);
                }
                Err(e) => assert!(matches!(
                    e,
                    Error::RealityViolation { .. } | Error::PoleProximity { .. }
                )),
            }
        }
        assert!(lowest < 1e-3);
    }
}
