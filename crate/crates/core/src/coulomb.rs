//! Exact Dirac spectrum of the Coulomb potential `-u/r` in `d` dimensions:
//!
//! `D(u) = m [1 + u^2 / (p + sqrt(k_d^2 - u^2))^2]^(-1/2)`,
//!
//! with radial offset `p = nu + (1 + tau)/2`. The dimension enters only
//! through `k_d`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{kappa, AngularState, HalfInt};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoulombLevel {
    kappa: HalfInt,
    nu: u32,
    mass: f64,
}

impl CoulombLevel {
    pub fn new(kappa: HalfInt, nu: u32, mass: f64) -> Result<Self> {
        if kappa.doubled() == 0 {
            return Err(Error::InvalidParameter("k_d must be nonzero".into()));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(CoulombLevel { kappa, nu, mass })
    }

    pub fn from_state(state: &AngularState, mass: f64) -> Result<Self> {
        CoulombLevel::new(kappa(state), state.nu(), mass)
    }

    pub fn kappa(&self) -> HalfInt {
        self.kappa
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `p = nu + (1 + tau)/2`.
    pub fn offset(&self) -> u32 {
        self.nu + u32::from(self.kappa.signum() > 0)
    }

    /// `(B, sqrt(k^2 - u^2))` with `B = p + sqrt(k^2 - u^2)`.
    #[inline]
    fn bracket(&self, u: f64) -> (f64, f64) {
        let k = self.kappa.abs().value();
        let w = ((k - u) * (k + u)).max(0.0).sqrt();
        (self.offset() as f64 + w, w)
    }

    /// `D(u)` without domain checks; valid on `[0, |k_d|]` when `p > 0`.
    #[inline]
    pub(crate) fn energy_unchecked(&self, u: f64) -> f64 {
        let (b, _) = self.bracket(u);
        self.mass * b / b.hypot(u)
    }

    #[inline]
    pub(crate) fn derivative_unchecked(&self, u: f64) -> f64 {
        let (b, w) = self.bracket(u);
        let norm2 = b * b + u * u;
        -self.mass * u * (u * u / w + b) / (norm2 * norm2.sqrt())
    }
}

/// Least upper bound `|k_d|` of the admissible couplings.
pub fn coupling_sup(level: &CoulombLevel) -> f64 {
    level.kappa.abs().value()
}

/// `D(u)` for `0 <= u < |k_d|`.
pub fn energy(level: &CoulombLevel, u: f64) -> Result<f64> {
    let sup = coupling_sup(level);
    if !(u >= 0.0 && u < sup) {
        return Err(Error::out_of_domain("u", u, format!("[0, {sup})")));
    }
    Ok(level.energy_unchecked(u))
}

/// `D(u)` extended by continuity to the closed interval `[0, |k_d|]` when the
/// radial offset is positive.
pub fn energy_closed(level: &CoulombLevel, u: f64) -> Result<f64> {
    let sup = coupling_sup(level);
    let ok = u >= 0.0 && (u < sup || (u == sup && level.offset() > 0));
    if !ok {
        return Err(Error::out_of_domain("u", u, format!("[0, {sup}]")));
    }
    Ok(level.energy_unchecked(u))
}

/// `dD/du = -m u (u^2/w + B) / (B^2 + u^2)^(3/2)`, `w = sqrt(k^2 - u^2)`,
/// on the open interval `(0, |k_d|)`.
pub fn energy_derivative(level: &CoulombLevel, u: f64) -> Result<f64> {
    let sup = coupling_sup(level);
    if !(u > 0.0 && u < sup) {
        return Err(Error::out_of_domain("u", u, format!("(0, {sup})")));
    }
    Ok(level.derivative_unchecked(u))
}
