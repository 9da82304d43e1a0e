//! Tangential lower bound for the softcore Coulomb Dirac spectrum.
//!
//! Each tangent `a(t)(-1/r) + c(t)` lies below `f_q`, so the Coulomb level of
//! `v a(t) (-1/r)` shifted by `v c(t)` bounds the eigenvalue from below:
//!
//! `B(t) = D(v a(t)) + v c(t)`,  `E >= E^L = sup_t B(t)`.
//!
//! The supremum is taken over the compactified contact `s = t/(1+t)`, with a
//! coarse scan followed by golden-section refinement, and compared against
//! the `t -> inf` candidate `D(v)` (the Coulomb potential itself).

use serde::Serialize;

use crate::coulomb::{self, CoulombLevel};
use crate::error::{Error, Result};
use crate::model::{kappa, AngularState, PotentialParams, Power};
use crate::potential::{self, SoftcoreShape, TangentLine};

/// Points in the coarse scan of the contact variable.
pub const SCAN_POINTS: usize = 256;
/// Final bracket width of the golden-section refinement.
pub const REFINE_WIDTH: f64 = 1e-12;
/// Relative margin keeping `v a(t)` strictly below `|k_d|`.
pub const DOMAIN_MARGIN: f64 = 1e-12;
/// Interior optima within this of the boundary candidate report the boundary.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundRequest {
    pub state: AngularState,
    pub params: PotentialParams,
}

impl BoundRequest {
    pub fn new(state: AngularState, params: PotentialParams) -> Result<Self> {
        params.validate()?;
        Ok(BoundRequest { state, params })
    }

    pub fn level(&self) -> CoulombLevel {
        CoulombLevel::new(kappa(&self.state), self.state.nu(), self.params.m)
            .expect("validated state and mass")
    }

    pub fn shape(&self) -> SoftcoreShape {
        SoftcoreShape::new(self.params.b, self.params.q).expect("validated params")
    }

    /// `|k_d|`, the supremum of admissible Coulomb couplings.
    pub fn coupling_limit(&self) -> f64 {
        kappa(&self.state).abs().value()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundResult {
    pub energy_lower: f64,
    /// Optimal contact radius; `inf` when the Coulomb potential itself wins.
    pub contact: f64,
    /// `u* = v a(t*)`.
    pub tangent_coupling: f64,
    pub tangent: Option<TangentLine>,
    pub evaluations: u32,
    pub boundary_optimal: bool,
}

/// `B(t) = D(v a(t)) + v c(t)`.
pub fn bound_objective(request: &BoundRequest, t: f64) -> Result<f64> {
    let line = potential::tangent_at(&request.shape(), t)?;
    objective_for_line(request, &request.level(), &line)
}

fn objective_for_line(
    request: &BoundRequest,
    level: &CoulombLevel,
    line: &TangentLine,
) -> Result<f64> {
    let v = request.params.v;
    let u = v * line.a;
    let limit = request.coupling_limit();
    if u >= limit {
        return Err(Error::DomainExceeded { coupling: u, limit });
    }
    Ok(level.energy_unchecked(u) + v * line.c)
}

/// `F(u) = D(u) - u D'(u) + v g(D'(u))`.
///
/// Equal to the optimized bound only where `u = v g'(D'(u))`; elsewhere it is
/// not a bound.
pub fn legendre_objective(request: &BoundRequest, u: f64) -> Result<f64> {
    let level = request.level();
    let slope = coulomb::energy_derivative(&level, u)?;
    let d = coulomb::energy(&level, u)?;
    let g = potential::g_eval(&request.shape(), slope)?;
    Ok(d - u * slope + request.params.v * g)
}

/// `D'(v a(t)) + 1/t`, which vanishes at interior critical points of `B`.
pub fn stationarity_residual(request: &BoundRequest, t: f64) -> Result<f64> {
    let line = potential::tangent_at(&request.shape(), t)?;
    let u = request.params.v * line.a;
    let limit = request.coupling_limit();
    if u >= limit {
        return Err(Error::DomainExceeded { coupling: u, limit });
    }
    let slope = coulomb::energy_derivative(&request.level(), u)?;
    Ok(slope + 1.0 / t)
}

/// Contact variable `s = t/(1+t)` and its inverse.
fn contact_from_s(s: f64) -> f64 {
    s / (1.0 - s)
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    x: f64,
    value: f64,
}

/// Maximizes `f` over `(0, hi]` (or `(0, hi)` when `include_hi` is false) by a
/// uniform scan and golden-section refinement of the best cell.
fn scan_and_refine(
    f: &mut dyn FnMut(f64) -> Option<f64>,
    hi: f64,
    include_hi: bool,
    evaluations: &mut u32,
) -> Option<Candidate> {
    let mut eval = |x: f64| {
        *evaluations += 1;
        f(x)
    };
    let n = SCAN_POINTS;
    let last = if include_hi { n } else { n - 1 };
    let grid: Vec<f64> = (1..=last).map(|i| hi * i as f64 / n as f64).collect();
    let mut best: Option<(usize, Candidate)> = None;
    for (i, &x) in grid.iter().enumerate() {
        if let Some(value) = eval(x) {
            if best.is_none_or(|(_, b)| value > b.value) {
                best = Some((i, Candidate { x, value }));
            }
        }
    }
    let (i, coarse) = best?;
    let lo = if i == 0 { 0.0 } else { grid[i - 1] };
    let up = if i + 1 < grid.len() {
        grid[i + 1]
    } else if include_hi {
        hi
    } else {
        // Last open cell: approach the excluded endpoint.
        hi - (hi - grid[i]) * 1e-9
    };
    let refined = golden_section_max(&mut eval, lo, up, REFINE_WIDTH);
    Some(match refined {
        Some(c) if c.value > coarse.value => c,
        _ => coarse,
    })
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
fn golden_section_max(
    f: &mut dyn FnMut(f64) -> Option<f64>,
    mut a: f64,
    mut b: f64,
    width: f64,
) -> Option<Candidate> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let value = |f: &mut dyn FnMut(f64) -> Option<f64>, x: f64| f(x).unwrap_or(f64::NEG_INFINITY);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = value(f, x1);
    let mut f2 = value(f, x2);
    while b - a > width {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = value(f, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = value(f, x1);
        }
    }
    let (x, v) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    v.is_finite().then_some(Candidate { x, value: v })
}

/// Root of the stationarity residual near a golden-section maximizer.
///
/// The objective is flat at its maximum, so golden section only pins the
/// contact to about `sqrt(eps)`; the residual changes sign there and can be
/// bisected to full precision. Returns `None` when no sign change is found
/// close by (boundary or kink optima).
fn polish_stationary(request: &BoundRequest, t: f64, evaluations: &mut u32) -> Option<f64> {
    let mut residual = |t: f64| {
        *evaluations += 1;
        stationarity_residual(request, t).ok()
    };
    let mut lo = t * (1.0 - 1e-6);
    let mut hi = t * (1.0 + 1e-6);
    let r_lo = residual(lo)?;
    let r_hi = residual(hi)?;
    if !(r_lo > 0.0 && r_hi < 0.0) {
        return None;
    }
    while hi - lo > 2.0 * f64::EPSILON * hi {
        let mid = 0.5 * (lo + hi);
        match residual(mid)? {
            r if r > 0.0 => lo = mid,
            r if r < 0.0 => hi = mid,
            _ => return Some(mid),
        }
    }
    Some(0.5 * (lo + hi))
}

/// Supremum of `B(t)` over the closure of the admissible contacts.
pub fn optimize_bound(request: &BoundRequest) -> Result<BoundResult> {
    let level = request.level();
    let shape = request.shape();
    let v = request.params.v;
    let limit = request.coupling_limit();
    let mut evaluations = 0u32;

    let boundary = (v < limit).then(|| level.energy_unchecked(v));

    let interior = match request.params.q {
        Power::Finite(_) => {
            // a(t) increases from 0 to 1, so admissible contacts form (0, t_max).
            let (s_hi, bounded) = if v >= limit {
                let a_max = limit * (1.0 - DOMAIN_MARGIN) / v;
                let t_max = potential::contact_for_slope(&shape, a_max)?;
                (t_max / (1.0 + t_max), true)
            } else {
                (1.0, false)
            };
            let mut objective = |s: f64| {
                let t = contact_from_s(s);
                let line = potential::tangent_at(&shape, t).ok()?;
                objective_for_line(request, &level, &line).ok()
            };
            scan_and_refine(&mut objective, s_hi, bounded, &mut evaluations).map(|c| {
                let t = contact_from_s(c.x);
                let t = polish_stationary(request, t, &mut evaluations).unwrap_or(t);
                let line = potential::tangent_at(&shape, t).expect("t > 0");
                let value = objective_for_line(request, &level, &line).unwrap_or(c.value);
                (value.max(c.value), line)
            })
        }
        Power::Infinite => {
            // Supporting lines at the kink r = b: slope a in [0, 1],
            // intercept (a - 1)/b.
            let b = request.params.b;
            let a_hi = (limit * (1.0 - DOMAIN_MARGIN) / v).min(1.0);
            let line = |a: f64| TangentLine {
                a,
                c: (a - 1.0) / b,
                t: b,
            };
            let mut objective = |a: f64| objective_for_line(request, &level, &line(a)).ok();
            let at_zero = objective(0.0);
            evaluations += 1;
            let best = scan_and_refine(&mut objective, a_hi, true, &mut evaluations);
            let best = match (best, at_zero) {
                (Some(c), Some(z)) if z > c.value => Some(Candidate { x: 0.0, value: z }),
                (None, Some(z)) => Some(Candidate { x: 0.0, value: z }),
                (c, _) => c,
            };
            best.map(|c| (c.value, line(c.x)))
        }
    };

    let result = match (interior, boundary) {
        (Some((value, _)), Some(edge)) if edge >= value - TIE_TOLERANCE => None,
        (Some((value, line)), _) => Some(BoundResult {
            energy_lower: value,
            contact: line.t,
            tangent_coupling: v * line.a,
            tangent: Some(line),
            evaluations,
            boundary_optimal: false,
        }),
        (None, Some(_)) => None,
        (None, None) => return Err(Error::NoBoundAvailable),
    };
    Ok(result.unwrap_or_else(|| BoundResult {
        energy_lower: boundary.expect("boundary candidate exists"),
        contact: f64::INFINITY,
        tangent_coupling: v,
        tangent: None,
        evaluations,
        boundary_optimal: true,
    }))
}
