//! Weierstrass `℘` and `℘′` for real invariants at complex arguments.
//!
//! Evaluation reduces the argument by repeated halving until it sits well
//! inside the disk of convergence of the Laurent expansion at the origin,
//! sums the series there, and then walks back out with the duplication
//! formula. `℘′` is carried through every doubling, so the pair returned
//! always comes from one consistent chain.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numeric carrier for `℘`, `℘′` and the complex field `A`.
pub type ComplexValue = Complex64;

/// The pair `(g2, g3)` defining a Weierstrass function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "InvariantsRepr", try_from = "InvariantsRepr")]
pub struct EllipticInvariants {
    g2: f64,
    g3: f64,
    discriminant: f64,
}

#[derive(Serialize, Deserialize)]
struct InvariantsRepr {
    g2: f64,
    g3: f64,
}

impl From<EllipticInvariants> for InvariantsRepr {
    fn from(inv: EllipticInvariants) -> Self {
        Self {
            g2: inv.g2,
            g3: inv.g3,
        }
    }
}

impl TryFrom<InvariantsRepr> for EllipticInvariants {
    type Error = Error;

    fn try_from(repr: InvariantsRepr) -> Result<Self> {
        Self::new(repr.g2, repr.g3)
    }
}

impl EllipticInvariants {
    pub fn new(g2: f64, g3: f64) -> Result<Self> {
        if !g2.is_finite() || !g3.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "invariants must be finite, got g2 = {g2}, g3 = {g3}"
            )));
        }
        Ok(Self {
            g2,
            g3,
            discriminant: g2 * g2 * g2 - 27.0 * g3 * g3,
        })
    }

    pub fn g2(&self) -> f64 {
        self.g2
    }

    pub fn g3(&self) -> f64 {
        self.g3
    }

    /// `g2³ − 27·g3²`.
    pub fn discriminant(&self) -> f64 {
        self.discriminant
    }

    /// Right-hand side `4s³ − g2·s − g3` of the defining differential identity.
    pub fn cubic(&self, s: ComplexValue) -> ComplexValue {
        4.0 * s * s * s - self.g2 * s - self.g3
    }
}

/// Roots of `4s³ − g2·s − g3 = 0`, sorted by descending real part, ties by
/// descending imaginary part.
pub fn cubic_roots(inv: EllipticInvariants) -> [ComplexValue; 3] {
    // Depressed form s³ + p·s + r = 0.
    let p = -inv.g2 / 4.0;
    let r = -inv.g3 / 4.0;
    let mut roots = if p == 0.0 && r == 0.0 {
        [ComplexValue::new(0.0, 0.0); 3]
    } else if inv.discriminant >= 0.0 && p < 0.0 {
        // Three real roots: trigonometric form.
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * r / (p * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        let mut out = [ComplexValue::new(0.0, 0.0); 3];
        for (k, root) in out.iter_mut().enumerate() {
            let s = m * (theta - 2.0 * PI * k as f64 / 3.0).cos();
            *root = ComplexValue::new(polish_real(s, p, r), 0.0);
        }
        out
    } else {
        // One real root and a conjugate pair.
        let half = r / 2.0;
        let disc = half * half + p * p * p / 27.0;
        let sq = disc.max(0.0).sqrt();
        let w = if half > 0.0 { -half - sq } else { -half + sq };
        let c = w.cbrt();
        let real = if c == 0.0 { 0.0 } else { c - p / (3.0 * c) };
        let real = polish_real(real, p, r);
        // Deflate: s² + real·s + (real² + p) = 0.
        let b = real;
        let k = real * real + p;
        let im = (4.0 * k - b * b).max(0.0).sqrt() / 2.0;
        [
            ComplexValue::new(real, 0.0),
            ComplexValue::new(-b / 2.0, im),
            ComplexValue::new(-b / 2.0, -im),
        ]
    };
    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
    });
    roots
}

fn polish_real(mut s: f64, p: f64, r: f64) -> f64 {
    for _ in 0..2 {
        let f = s * s * s + p * s + r;
        let df = 3.0 * s * s + p;
        if df == 0.0 {
            break;
        }
        let next = s - f / df;
        if !next.is_finite() {
            break;
        }
        s = next;
    }
    s
}

/// Evaluation knobs for [`Weierstrass`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpSettings {
    /// Number of Laurent coefficients kept (terms up to `u^(2·order − 2)`).
    pub order: usize,
    /// Arguments are halved until `|u|` is at most this radius.
    pub halving_radius: f64,
    /// Distance to a lattice pole below which evaluation is refused.
    pub pole_guard: f64,
}

impl Default for WpSettings {
    fn default() -> Self {
        Self {
            order: 24,
            halving_radius: 0.5,
            pole_guard: 1e-10,
        }
    }
}

/// `℘(u)` together with `℘′(u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WpValue {
    pub value: ComplexValue,
    pub derivative: ComplexValue,
}

/// A Weierstrass function with its Laurent coefficients precomputed.
#[derive(Debug, Clone)]
pub struct Weierstrass {
    inv: EllipticInvariants,
    settings: WpSettings,
    // coeffs[n] multiplies u^(2n - 2); entries 0 and 1 are unused.
    coeffs: Vec<f64>,
}

impl Weierstrass {
    pub fn new(inv: EllipticInvariants) -> Self {
        Self::with_settings(inv, WpSettings::default())
    }

    pub fn with_settings(inv: EllipticInvariants, settings: WpSettings) -> Self {
        let coeffs = laurent_coefficients(inv, settings.order.max(3));
        Self {
            inv,
            settings,
            coeffs,
        }
    }

    pub fn invariants(&self) -> EllipticInvariants {
        self.inv
    }

    pub fn settings(&self) -> WpSettings {
        self.settings
    }

    pub fn eval(&self, u: ComplexValue) -> Result<WpValue> {
        let guard = self.settings.pole_guard;
        let norm = u.norm();
        if !(norm >= guard) {
            return Err(Error::PoleProximity { at: norm });
        }

        let mut reduced = u;
        let mut doublings = 0u32;
        while reduced.norm() > self.settings.halving_radius {
            reduced *= 0.5;
            doublings += 1;
        }

        let (mut wp, mut dwp) = self.series(reduced);
        let (g2, g3) = (self.inv.g2, self.inv.g3);
        for _ in 0..doublings {
            // ℘(2u) = ((℘² + g2/4)² + 2·g3·℘) / (4℘³ − g2·℘ − g3). This equals
            // (℘″/2℘′)² − 2℘ but has no cancellation for large ℘, and
            // ℘′(2u) = F′(℘)·℘′(u)/2 keeps the error in ℘′ multiplicative.
            let shifted = wp * wp + g2 / 4.0;
            let num = shifted * shifted + 2.0 * g3 * wp;
            let den = (4.0 * wp * wp - g2) * wp - g3;
            let dnum = (4.0 * wp * wp + g2) * wp + 2.0 * g3;
            let dden = 12.0 * wp * wp - g2;
            let next = num / den;
            let next_d = (dnum - next * dden) / den * dwp * 0.5;
            wp = next;
            dwp = next_d;
            if !(wp.is_finite() && dwp.is_finite()) {
                return Err(Error::PoleProximity { at: 0.0 });
            }
        }

        // ℘ ~ (u − ω)^-2 near a lattice point ω.
        if wp.norm() * guard * guard > 1.0 {
            return Err(Error::PoleProximity {
                at: wp.norm().sqrt().recip(),
            });
        }
        Ok(WpValue {
            value: wp,
            derivative: dwp,
        })
    }

    fn series(&self, u: ComplexValue) -> (ComplexValue, ComplexValue) {
        let u2 = u * u;
        let n_max = self.coeffs.len() - 1;
        // Σ c_n u^(2n-4) and Σ (2n-2) c_n u^(2n-4), Horner in u².
        let mut s = ComplexValue::new(0.0, 0.0);
        let mut ds = ComplexValue::new(0.0, 0.0);
        for n in (2..=n_max).rev() {
            s = s * u2 + self.coeffs[n];
            ds = ds * u2 + self.coeffs[n] * (2 * n - 2) as f64;
        }
        let inv_u2 = u2.inv();
        let wp = inv_u2 + s * u2;
        let dwp = -2.0 * inv_u2 * u.inv() + ds * u;
        (wp, dwp)
    }
}

/// Laurent coefficients `c_n` of `℘(u) = u⁻² + Σ_{n≥2} c_n u^(2n−2)`.
pub fn laurent_coefficients(inv: EllipticInvariants, order: usize) -> Vec<f64> {
    let mut c = vec![0.0; order + 1];
    if order >= 2 {
        c[2] = inv.g2 / 20.0;
    }
    if order >= 3 {
        c[3] = inv.g3 / 28.0;
    }
    for n in 4..=order {
        let s: f64 = (2..=n - 2).map(|m| c[m] * c[n - m]).sum();
        c[n] = 3.0 * s / (((2 * n + 1) * (n - 3)) as f64);
    }
    c
}

/// `℘(u; g2, g3)` with default settings.
pub fn wp(u: ComplexValue, inv: EllipticInvariants) -> Result<ComplexValue> {
    Weierstrass::new(inv).eval(u).map(|v| v.value)
}

/// `℘′(u; g2, g3)` with default settings.
pub fn wp_prime(u: ComplexValue, inv: EllipticInvariants) -> Result<ComplexValue> {
    Weierstrass::new(inv).eval(u).map(|v| v.derivative)
}
