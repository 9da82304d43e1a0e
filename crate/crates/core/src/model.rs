//! Quantum-number algebra and potential parameters.
//!
//! Half-integer quantities (`j`, `k_d`, and for even `d` also `ell` and `n`)
//! are carried as [`HalfInt`], which stores twice the value as an integer so
//! that label arithmetic and degeneracy pairing are exact.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A multiple of one half, stored as its doubled integer value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt(2 * value)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn signum(self) -> i64 {
        self.0.signum()
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl Serialize for HalfInt {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.value())
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts integers, fractions over 2 (`"7/2"`, `"-1/2"`) and decimals
    /// that are exact multiples of one half (`"3.5"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("'{s}' is not a multiple of 1/2"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            return match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            };
        }
        if let Ok(int) = s.parse::<i64>() {
            return Ok(HalfInt(2 * int));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        let doubled = 2.0 * x;
        if !doubled.is_finite() || doubled.fract() != 0.0 || doubled.abs() > 1e15 {
            return Err(bad());
        }
        Ok(HalfInt(doubled as i64))
    }
}

/// The sign label tau of the spin-orbit coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tau {
    Minus,
    Plus,
}

impl Tau {
    pub const fn sign(self) -> i64 {
        match self {
            Tau::Minus => -1,
            Tau::Plus => 1,
        }
    }

    pub fn from_sign(sign: i64) -> Result<Self> {
        match sign {
            -1 => Ok(Tau::Minus),
            1 => Ok(Tau::Plus),
            other => Err(Error::InvalidParameter(format!(
                "tau must be -1 or +1, got {other}"
            ))),
        }
    }
}

impl Serialize for Tau {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.sign())
    }
}

impl FromStr for Tau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "-1" | "-" | "minus" => Ok(Tau::Minus),
            "1" | "+1" | "+" | "plus" => Ok(Tau::Plus),
            other => Err(Error::InvalidParameter(format!(
                "tau must be -1 or +1, got '{other}'"
            ))),
        }
    }
}

/// Dimension, total angular momentum, sign label and node count of a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct AngularState {
    d: u32,
    j: HalfInt,
    tau: Tau,
    nu: u32,
}

impl AngularState {
    pub fn new(d: u32, j: HalfInt, tau: Tau, nu: u32) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParameter(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        if j.doubled() <= 0 || j.is_integer() {
            return Err(Error::InvalidParameter(format!(
                "j must be a positive half-odd integer, got {j}"
            )));
        }
        Ok(AngularState { d, j, tau, nu })
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn j(&self) -> HalfInt {
        self.j
    }

    pub fn tau(&self) -> Tau {
        self.tau
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn with_nu(self, nu: u32) -> Self {
        AngularState { nu, ..self }
    }
}

/// `k_d = tau (j + (d - 2)/2)`.
pub fn kappa(state: &AngularState) -> HalfInt {
    HalfInt::from_doubled(state.tau.sign() * (state.j.doubled() + state.d as i64 - 2))
}

/// `ell = |k_d| - (d - 1)/2`.
pub fn orbital_ell(state: &AngularState) -> HalfInt {
    HalfInt::from_doubled(kappa(state).abs().doubled() - (state.d as i64 - 1))
}

/// Principal quantum number `n = nu + |k_d| + (1 + tau)/2`.
///
/// `n - |k_d|` is the radial offset entering the Coulomb spectrum.
pub fn principal_n(state: &AngularState) -> HalfInt {
    HalfInt::from_doubled(
        2 * state.nu as i64 + kappa(state).abs().doubled() + (1 + state.tau.sign()),
    )
}

/// Radial offset `nu + (1 + tau)/2`.
pub fn radial_offset(state: &AngularState) -> u32 {
    state.nu + u32::from(state.tau == Tau::Plus)
}

/// Node count of the small component: equal to `nu` for tau = -1, one more
/// for tau = +1.
pub fn small_component_nodes(state: &AngularState) -> u32 {
    match state.tau {
        Tau::Minus => state.nu,
        Tau::Plus => state.nu + 1,
    }
}

/// The power `q` of the softcore shape, including the cutoff limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Power {
    Finite(f64),
    Infinite,
}

impl Power {
    pub fn finite(q: f64) -> Result<Self> {
        if q.is_finite() && q >= 1.0 {
            Ok(Power::Finite(q))
        } else if q == f64::INFINITY {
            Ok(Power::Infinite)
        } else {
            Err(Error::InvalidParameter(format!("q must be >= 1, got {q}")))
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Power::Finite(q) => q,
            Power::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Power::Finite(q) => write!(f, "{q}"),
            Power::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Power {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Power::Finite(q) => serializer.serialize_f64(*q),
            Power::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl FromStr for Power {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Power::Infinite),
            other => {
                let q: f64 = other
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("cannot parse q = '{s}'")))?;
                Power::finite(q)
            }
        }
    }
}

/// Coupling `v`, softness `b`, power `q` and mass `m` of `V(r) = v f_q(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PotentialParams {
    pub v: f64,
    pub b: f64,
    pub q: Power,
    pub m: f64,
}

impl PotentialParams {
    pub fn new(v: f64, b: f64, q: Power, m: f64) -> Result<Self> {
        let params = PotentialParams { v, b, q, m };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x.is_finite() && x > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {x}"
                )))
            }
        };
        positive("v", self.v)?;
        positive("b", self.b)?;
        positive("m", self.m)?;
        if let Power::Finite(q) = self.q {
            Power::finite(q)?;
        }
        Ok(())
    }
}

/// Dilation `r -> delta r`: returns `(v, b/delta, q, delta m)` and the factor
/// `1/delta` that maps energies of the scaled problem back to the original.
pub fn scale_parameters(params: &PotentialParams, delta: f64) -> Result<(PotentialParams, f64)> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "scale factor must be positive, got {delta}"
        )));
    }
    let scaled = PotentialParams {
        v: params.v,
        b: params.b / delta,
        q: params.q,
        m: params.m * delta,
    };
    Ok((scaled, 1.0 / delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn state(d: u32, j: &str, tau: i64, nu: u32) -> AngularState {
        AngularState::new(d, j.parse().unwrap(), Tau::from_sign(tau).unwrap(), nu).unwrap()
    }

    #[test]
    fn kappa_matches_table_labels() {
        assert_eq!(kappa(&state(3, "1/2", -1, 0)), HalfInt::from_int(-1));
        assert_eq!(kappa(&state(2, "1/2", 1, 0)), HalfInt::from_doubled(1));
        assert_eq!(kappa(&state(10, "1/2", -1, 0)), HalfInt::from_doubled(-9));
    }

    #[test]
    fn orbital_ell_examples() {
        assert_eq!(orbital_ell(&state(3, "1/2", -1, 0)), HalfInt::from_int(0));
        assert_eq!(orbital_ell(&state(2, "1/2", -1, 0)), HalfInt::from_int(0));
        assert_eq!(orbital_ell(&state(5, "3/2", -1, 0)), HalfInt::from_int(1));
    }

    #[test]
    fn principal_n_uses_corrected_offset() {
        // 1S, 2P_{1/2} and 2S in three dimensions.
        assert_eq!(principal_n(&state(3, "1/2", -1, 0)), HalfInt::from_int(1));
        assert_eq!(principal_n(&state(3, "1/2", 1, 0)), HalfInt::from_int(2));
        assert_eq!(principal_n(&state(3, "1/2", -1, 1)), HalfInt::from_int(2));
    }

    #[test]
    fn small_component_nodes_follow_tau() {
        assert_eq!(small_component_nodes(&state(3, "1/2", -1, 0)), 0);
        assert_eq!(small_component_nodes(&state(3, "1/2", 1, 0)), 1);
        assert_eq!(small_component_nodes(&state(3, "1/2", 1, 3)), 4);
    }

    #[test]
    fn degeneracy_pairing_of_labels() {
        // |k_d| in {1/2, 1, ..., 5}; realise each |k_d| through some (d, j).
        for doubled_k in 1..=10_i64 {
            // d = 2 gives k = j for odd doubled values, d = 3 for even ones.
            let (d, j2) = if doubled_k % 2 == 1 {
                (2, doubled_k)
            } else {
                (3, doubled_k - 1)
            };
            for nu in 0..=10 {
                let plus = AngularState::new(d, HalfInt::from_doubled(j2), Tau::Plus, nu).unwrap();
                let minus =
                    AngularState::new(d, HalfInt::from_doubled(j2), Tau::Minus, nu + 1).unwrap();
                assert_eq!(kappa(&plus), -kappa(&minus));
                assert_eq!(principal_n(&plus), principal_n(&minus));
            }
        }
    }

    #[test]
    fn special_scaling_laws() {
        let p = PotentialParams::new(0.9, 2.0, Power::Finite(2.0), 1.3).unwrap();
        let (s, f) = scale_parameters(&p, p.b).unwrap();
        assert_eq!((s.b, s.m, f), (1.0, 2.0 * 1.3, 0.5));
        let (s, f) = scale_parameters(&p, 1.0).unwrap();
        assert_eq!((s, f), (p, 1.0));
        let (s, f) = scale_parameters(&p, 1.0 / p.m).unwrap();
        assert!((s.m - 1.0).abs() < 1e-15 && (s.b - 2.0 * 1.3).abs() < 1e-15);
        assert!((f - 1.3).abs() < 1e-15);
        assert!(scale_parameters(&p, 0.0).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!("0.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(1));
        assert_eq!("7/2".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(7));
        assert_eq!(
            "-9/2".parse::<HalfInt>().unwrap(),
            HalfInt::from_doubled(-9)
        );
        assert_eq!("3".parse::<HalfInt>().unwrap(), HalfInt::from_int(3));
        assert!("0.25".parse::<HalfInt>().is_err());
        assert!("1/3".parse::<HalfInt>().is_err());
        assert_eq!("inf".parse::<Power>().unwrap(), Power::Infinite);
        assert!("0.5".parse::<Power>().is_err());
        assert!(AngularState::new(1, HalfInt::from_doubled(1), Tau::Minus, 0).is_err());
        assert!(AngularState::new(3, HalfInt::from_int(1), Tau::Minus, 0).is_err());
        assert!(PotentialParams::new(-1.0, 1.0, Power::Finite(2.0), 1.0).is_err());
    }

    proptest! {
        #[test]
        fn kappa_sign_is_tau(d in 2u32..20, j2 in 0i64..20, plus in any::<bool>(), nu in 0u32..20) {
            let tau = if plus { Tau::Plus } else { Tau::Minus };
            let s = AngularState::new(d, HalfInt::from_doubled(2 * j2 + 1), tau, nu).unwrap();
            let k = kappa(&s);
            prop_assert_eq!(k.signum(), tau.sign());
            prop_assert!(k.abs().doubled() >= 1);
            prop_assert!(principal_n(&s).doubled() >= k.abs().doubled());
        }

        #[test]
        fn scaling_composes(d1 in 0.01f64..100.0, d2 in 0.01f64..100.0) {
            let p = PotentialParams::new(0.7, 1.5, Power::Finite(3.0), 1.0).unwrap();
            let (a, fa) = scale_parameters(&p, d1).unwrap();
            let (ab, fab) = scale_parameters(&a, d2).unwrap();
            let (c, fc) = scale_parameters(&p, d1 * d2).unwrap();
            let rel = |x: f64, y: f64| ((x - y) / y).abs();
            prop_assert!(rel(ab.b, c.b) <= 1e-15);
            prop_assert!(rel(ab.m, c.m) <= 1e-15);
            prop_assert!(rel(fa * fab, fc) <= 1e-15);

            let (back, _) = scale_parameters(&a, 1.0 / d1).unwrap();
            prop_assert!(rel(back.b, p.b) <= 1e-15);
            prop_assert!(rel(back.m, p.m) <= 1e-15);
            prop_assert_eq!(back.v, p.v);
        }
    }
}
