//! Dormand-Prince 5(4) with step-size control for two-component linear
//! systems, integrating in either direction and landing exactly on requested
//! stop points.

use crate::error::{Error, Result};

pub type State = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

/// Outcome of one integration leg.
#[derive(Debug, Clone, Copy)]
pub struct Leg {
    pub end: State,
    pub steps: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the fifth- and fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MAX_GROWTH: f64 = 5.0;
const MIN_SHRINK: f64 = 0.2;
pub const MAX_STEPS: usize = 2_000_000;

#[inline]
fn axpy(y: State, h: f64, terms: &[(f64, &State)]) -> State {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Integrates `y' = f(x, y)` from `x0` to `x1`.
///
/// `stops` must be ordered in the direction of integration and lie within
/// `[x0, x1]`; the integrator lands exactly on each. `observe(x, y, is_stop)`
/// sees the initial point and every accepted step. When `renormalize_above`
/// is set, the state is rescaled to unit max-norm whenever it exceeds that
/// magnitude; only ratios and signs survive in that mode.
pub fn integrate<F, O>(
    mut f: F,
    x0: f64,
    y0: State,
    x1: f64,
    stops: &[f64],
    tol: Tolerances,
    renormalize_above: Option<f64>,
    mut observe: O,
) -> Result<Leg>
where
    F: FnMut(f64, &State) -> State,
    O: FnMut(f64, &State, bool),
{
    let dir = if x1 >= x0 { 1.0 } else { -1.0 };
    let span = (x1 - x0).abs();
    let mut x = x0;
    let mut y = y0;
    observe(x, &y, false);
    if span == 0.0 {
        return Ok(Leg { end: y, steps: 0 });
    }

    let mut h = if x0 == 0.0 {
        1e-3 * span
    } else {
        (0.05 * x0.abs()).min(0.05 * span)
    };
    let mut k1 = f(x, &y);
    let mut steps = 0usize;
    let mut next_stop = 0usize;

    while dir * (x1 - x) > 0.0 {
        if steps >= MAX_STEPS {
            return Err(Error::IntegrationFailure {
                r: x,
                reason: format!("exceeded {MAX_STEPS} steps"),
            });
        }
        while next_stop < stops.len() && dir * (stops[next_stop] - x) <= 0.0 {
            next_stop += 1;
        }
        let target = stops.get(next_stop).copied().unwrap_or(x1);
        let remaining = (target - x).abs();
        let mut hit_target = false;
        let mut step = h;
        if step >= remaining {
            step = remaining;
            hit_target = true;
        }
        let hs = dir * step;

        let k2 = f(x + C2 * hs, &axpy(y, hs, &[(A21, &k1)]));
        let k3 = f(x + C3 * hs, &axpy(y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(
            x + C4 * hs,
            &axpy(y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = f(
            x + C5 * hs,
            &axpy(y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let x_new = if hit_target { target } else { x + hs };
        let k6 = f(
            x + hs,
            &axpy(
                y,
                hs,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            y,
            hs,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = f(x_new, &y_new);

        let scale = tol.abs
            + tol.rel
                * y[0]
                    .abs()
                    .max(y[1].abs())
                    .max(y_new[0].abs().max(y_new[1].abs()));
        let mut err = 0.0_f64;
        for i in 0..2 {
            let e =
                hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            err = err.max((e / scale).abs());
        }
        if !err.is_finite() {
            return Err(Error::IntegrationFailure {
                r: x,
                reason: "non-finite error estimate".into(),
            });
        }

        if err <= 1.0 {
            x = x_new;
            y = y_new;
            k1 = k7;
            steps += 1;
            if let Some(limit) = renormalize_above {
                let size = y[0].abs().max(y[1].abs());
                if size > limit {
                    y = [y[0] / size, y[1] / size];
                    k1 = [k1[0] / size, k1[1] / size];
                }
            }
            observe(x, &y, hit_target && next_stop < stops.len());
            let grow = if err == 0.0 {
                MAX_GROWTH
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_SHRINK, MAX_GROWTH)
            };
            // A step clipped to a stop says nothing about the natural size.
            h = if hit_target {
                h.max(step * grow)
            } else {
                step * grow
            };
        } else {
            h = step * (SAFETY * err.powf(-0.25)).max(MIN_SHRINK);
            if h <= 4.0 * f64::EPSILON * x.abs() || h < f64::MIN_POSITIVE {
                return Err(Error::IntegrationFailure {
                    r: x,
                    reason: format!("step size underflow (h = {h:e})"),
                });
            }
        }
    }
    Ok(Leg { end: y, steps })
}
