//! Weierstrass-function solutions of the ansatz reduction of the cubic
//! nonlinear Schrödinger equation `i·A_t + p·A_xx + q·A|A|² = 0`, and the
//! residual machinery that tests whether they actually solve it.
//!
//! * [`elliptic`]: `℘` and `℘′` for real invariants.
//! * [`quartic`]: quartic curves, classical invariants, closed-form solutions.
//! * [`ansatz`]: `z(t)`, `φ(t)`, `Q(x, t)` and the field `A(x, t)`.
//! * [`verify`]: the inconsistency functional `P`, algebraic and PDE residuals.
//! * [`reference`]: split-step Fourier integrator used as an independent check.

pub mod ansatz;
pub mod checks;
pub mod elliptic;
pub mod error;
pub mod numdiff;
pub mod quartic;
pub mod reference;
pub mod verify;

pub use ansatz::{Ansatz, AnsatzParams};
pub use elliptic::{ComplexValue, EllipticInvariants, Weierstrass};
pub use error::{Error, Result};
pub use numdiff::DiffConfig;
pub use quartic::{QuarticCurve, QuarticSolution, Sign};
pub use verify::ResidualReport;
