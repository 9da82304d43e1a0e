//! The softcore Coulomb shape `f_q(r) = -1/(r^q + b^q)^(1/q)`, its
//! representation `f_q(r) = g(-1/r)` over the Coulomb base, and the family of
//! tangent lines `a (-1/r) + c` that lie below it.
//!
//! Every power is evaluated through ratios bounded by one, so nothing
//! overflows for large `q` or large `r`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Power;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SoftcoreShape {
    b: f64,
    q: Power,
}

/// Logarithms of `t/S` and `b/S`, where `S = (t^q + b^q)^(1/q)`.
#[derive(Debug, Clone, Copy)]
struct LogRatios {
    ln_s: f64,
    ln_t_over_s: f64,
    ln_b_over_s: f64,
}

impl SoftcoreShape {
    pub fn new(b: f64, q: Power) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "softness b must be positive, got {b}"
            )));
        }
        if let Power::Finite(q) = q {
            Power::finite(q)?;
        }
        Ok(SoftcoreShape { b, q })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn q(&self) -> Power {
        self.q
    }

    /// `(r^q + b^q)^(1/q)` for `r >= 0`.
    #[inline]
    pub fn radius_norm(&self, r: f64) -> f64 {
        let (lo, hi) = if r < self.b { (r, self.b) } else { (self.b, r) };
        match self.q {
            Power::Infinite => hi,
            Power::Finite(q) => {
                let x = lo / hi;
                if x == 0.0 {
                    hi
                } else {
                    hi * ((q * x.ln()).exp().ln_1p() / q).exp()
                }
            }
        }
    }

    /// `f_q(r)`; infallible form of [`shape_eval`] for hot loops.
    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        -1.0 / self.radius_norm(r)
    }

    fn log_ratios(&self, q: f64, t: f64) -> LogRatios {
        // With x = min(t, b)/max(t, b): ln S = ln max + ln1p(x^q)/q.
        let (ln_lo_over_hi, t_is_larger) = if t >= self.b {
            ((self.b / t).ln(), true)
        } else {
            ((t / self.b).ln(), false)
        };
        let correction = (q * ln_lo_over_hi).exp().ln_1p() / q;
        let ln_hi = if t_is_larger { t.ln() } else { self.b.ln() };
        let ln_s = ln_hi + correction;
        LogRatios {
            ln_s,
            ln_t_over_s: t.ln() - ln_s,
            ln_b_over_s: self.b.ln() - ln_s,
        }
    }
}

fn check_h(h: f64) -> Result<f64> {
    if h.is_finite() && h < 0.0 {
        Ok(-1.0 / h)
    } else {
        Err(Error::out_of_domain("h", h, "(-inf, 0)"))
    }
}

/// `f_q(r)`; the cutoff limit is `-1/b` inside `r < b` and `-1/r` outside.
pub fn shape_eval(shape: &SoftcoreShape, r: f64) -> Result<f64> {
    if !(r >= 0.0) || r.is_infinite() {
        return Err(Error::out_of_domain("r", r, "[0, inf)"));
    }
    Ok(shape.value(r))
}

/// `g(h) = -1/((-1/h)^q + b^q)^(1/q)`, so that `g(-1/r) = f_q(r)`.
pub fn g_eval(shape: &SoftcoreShape, h: f64) -> Result<f64> {
    let t = check_h(h)?;
    Ok(shape.value(t))
}

/// `dg/dh = (t/S)^(q+1)` with `t = -1/h`.
///
/// For the cutoff limit `g(h) = max(h, -1/b)` and the kink at `h = -1/b`
/// reports the midpoint slope 1/2.
pub fn g_prime(shape: &SoftcoreShape, h: f64) -> Result<f64> {
    let t = check_h(h)?;
    Ok(slope_at(shape, t))
}

/// `d2g/dh2 = (q+1) b^q t^(q+2) / S^(2q+1)`; identically zero away from the
/// kink in the cutoff limit.
pub fn g_second(shape: &SoftcoreShape, h: f64) -> Result<f64> {
    let t = check_h(h)?;
    match shape.q {
        Power::Infinite => Ok(0.0),
        Power::Finite(q) => {
            let lr = shape.log_ratios(q, t);
            let ln =
                (q + 1.0).ln() + q * (lr.ln_b_over_s + lr.ln_t_over_s) + 2.0 * t.ln() - lr.ln_s;
            Ok(ln.exp())
        }
    }
}

fn slope_at(shape: &SoftcoreShape, t: f64) -> f64 {
    match shape.q {
        Power::Infinite => {
            if t > shape.b {
                1.0
            } else if t < shape.b {
                0.0
            } else {
                0.5
            }
        }
        Power::Finite(q) => ((q + 1.0) * shape.log_ratios(q, t).ln_t_over_s).exp(),
    }
}

/// The shifted Coulomb potential `a (-1/r) + c` touching `f_q` at `r = t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TangentLine {
    pub a: f64,
    pub c: f64,
    pub t: f64,
}

impl TangentLine {
    #[inline]
    pub fn value(&self, r: f64) -> f64 {
        -self.a / r + self.c
    }
}

/// Tangent at contact radius `t`: `a = g'(-1/t)`, `c = g(-1/t) + a/t`.
pub fn tangent_at(shape: &SoftcoreShape, t: f64) -> Result<TangentLine> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::out_of_domain("t", t, "(0, inf)"));
    }
    let line = match shape.q {
        Power::Infinite => {
            let a = slope_at(shape, t);
            let c = if t > shape.b {
                0.0
            } else {
                -1.0 / shape.b + a / shape.b
            };
            TangentLine { a, c, t }
        }
        Power::Finite(q) => {
            let lr = shape.log_ratios(q, t);
            let a = ((q + 1.0) * lr.ln_t_over_s).exp();
            // c = -1/S + a/t = -(b/S)^q / S, free of cancellation for t >> b.
            let c = -(q * lr.ln_b_over_s - lr.ln_s).exp();
            TangentLine { a, c, t }
        }
    };
    Ok(line)
}

/// Contact radius whose tangent has slope `a` in `(0, 1)`; inverse of the
/// strictly increasing map `t -> a(t)`.
///
/// Only defined for finite `q`: in the cutoff limit every slope in `[0, 1]`
/// belongs to the single contact `t = b`.
pub fn contact_for_slope(shape: &SoftcoreShape, a: f64) -> Result<f64> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::out_of_domain("a", a, "(0, 1)"));
    }
    match shape.q {
        Power::Infinite => Ok(shape.b),
        Power::Finite(q) => {
            // (t/S)^q = y = a^(q/(q+1)) and t = b (y/(1-y))^(1/q).
            let ln_y = q / (q + 1.0) * a.ln();
            let one_minus_y = -ln_y.exp_m1();
            Ok(shape.b * ((ln_y - one_minus_y.ln()) / q).exp())
        }
    }
}

/// `a (-1/r) + c`.
pub fn tangent_eval(line: &TangentLine, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::out_of_domain("r", r, "(0, inf]"));
    }
    Ok(line.value(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shape(b: f64, q: f64) -> SoftcoreShape {
        SoftcoreShape::new(b, Power::finite(q).unwrap()).unwrap()
    }

    const FRAC_1_SQRT_8: f64 = 0.353_553_390_593_273_8;

    #[test]
    fn shape_values() {
        assert_eq!(shape_eval(&shape(2.0, 2.0), 0.0).unwrap(), -0.5);
        let cut = SoftcoreShape::new(1.0, Power::Infinite).unwrap();
        assert_eq!(shape_eval(&cut, 0.5).unwrap(), -1.0);
        assert_eq!(shape_eval(&cut, 2.0).unwrap(), -0.5);
        assert_relative_eq!(
            shape_eval(&shape(2.0, 2.0), 2.0).unwrap(),
            -FRAC_1_SQRT_8,
            max_relative = 1e-15
        );
        assert!(shape_eval(&shape(2.0, 2.0), -1.0).is_err());
    }

    #[test]
    fn value_at_origin_is_minus_inverse_b() {
        for q in [1.0, 2.0, 7.5, 300.0] {
            assert_eq!(shape(0.37, q).value(0.0), -1.0 / 0.37);
        }
        let cut = SoftcoreShape::new(0.37, Power::Infinite).unwrap();
        assert_eq!(cut.value(0.0), -1.0 / 0.37);
    }

    #[test]
    fn no_overflow_for_large_powers() {
        let s = shape(1.0, 10.0);
        let f = s.value(1e3);
        assert!(f.is_finite());
        assert_relative_eq!(f, -1e-3, max_relative = 1e-15);
        let s = shape(1.0, 1e4);
        assert!(s.value(1e200).is_finite());
    }

    #[test]
    fn g_examples() {
        let s = shape(2.0, 2.0);
        assert_relative_eq!(
            g_eval(&s, -0.5).unwrap(),
            -FRAC_1_SQRT_8,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            g_prime(&s, -0.5).unwrap(),
            FRAC_1_SQRT_8,
            max_relative = 1e-14
        );
        for r in [0.1, 1.0, 10.0] {
            assert_eq!(g_eval(&s, -1.0 / r).unwrap(), s.value(r));
        }
        assert!(g_eval(&s, 0.0).is_err());
        assert!(g_prime(&s, 0.3).is_err());
        assert!(g_second(&s, f64::NAN).is_err());
    }

    #[test]
    fn coulomb_limit_is_identity() {
        let s = shape(1e-12, 2.0);
        for h in [-10.0, -1.0, -0.01] {
            assert_relative_eq!(g_eval(&s, h).unwrap(), h, max_relative = 1e-9);
            assert_relative_eq!(g_prime(&s, h).unwrap(), 1.0, max_relative = 1e-9);
            assert!(g_second(&s, h).unwrap().abs() < 1e-9);
            let line = tangent_at(&s, -1.0 / h).unwrap();
            assert!((line.a - 1.0).abs() < 1e-9 && line.c.abs() < 1e-9);
        }
    }

    #[test]
    fn slope_tends_to_one_near_zero_h() {
        let s = shape(2.0, 2.0);
        assert!((g_prime(&s, -1e-9).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn convexity_signs() {
        for q in [1.0, 2.0, 7.0] {
            for h in [-10.0, -1.0, -0.1] {
                assert!(g_second(&shape(2.0, q), h).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn derivatives_match_central_differences() {
        for q in [1.0, 2.0, 3.5, 8.0] {
            let s = shape(1.3, q);
            let mut h = -100.0_f64;
            while h > -0.01 {
                let step = 1e-5 * h.abs();
                let g = |x: f64| g_eval(&s, x).unwrap();
                let gp = |x: f64| g_prime(&s, x).unwrap();
                let fd1 = (g(h + step) - g(h - step)) / (2.0 * step);
                let fd2 = (gp(h + step) - gp(h - step)) / (2.0 * step);
                assert_relative_eq!(gp(h), fd1, max_relative = 1e-6);
                assert_relative_eq!(g_second(&s, h).unwrap(), fd2, max_relative = 1e-6);
                h *= 0.7;
            }
        }
    }

    #[test]
    fn second_derivative_matches_second_difference() {
        let s = shape(2.0, 2.0);
        let h = -0.5;
        let step = 1e-4;
        let g = |x: f64| g_eval(&s, x).unwrap();
        let fd = (g(h + step) - 2.0 * g(h) + g(h - step)) / (step * step);
        assert_relative_eq!(g_second(&s, h).unwrap(), fd, max_relative = 1e-6);
    }

    #[test]
    fn tangent_examples() {
        let s = shape(2.0, 2.0);
        let line = tangent_at(&s, 2.0).unwrap();
        assert_relative_eq!(line.a, 2f64.powf(-1.5), max_relative = 1e-14);
        assert_relative_eq!(line.c, -(2f64.powf(-2.5)), max_relative = 1e-14);
        assert_relative_eq!(
            tangent_eval(&line, 2.0).unwrap(),
            s.value(2.0),
            max_relative = 1e-12
        );
        let at_one = tangent_eval(&line, 1.0).unwrap();
        assert_relative_eq!(at_one, -0.530_330_085_889_910_6, max_relative = 1e-14);
        assert!(at_one <= s.value(1.0));
        assert_relative_eq!(
            tangent_eval(&line, 1e300).unwrap(),
            line.c,
            max_relative = 1e-15
        );

        let a = |t| tangent_at(&s, t).unwrap().a;
        assert!(a(1.0) < a(2.0) && a(2.0) < a(4.0));
        assert!(tangent_at(&s, 0.0).is_err());
        assert!(tangent_eval(&line, 0.0).is_err());
    }

    #[test]
    fn cutoff_tangents() {
        let cut = SoftcoreShape::new(2.0, Power::Infinite).unwrap();
        let inner = tangent_at(&cut, 1.0).unwrap();
        assert_eq!((inner.a, inner.c), (0.0, -0.5));
        let outer = tangent_at(&cut, 3.0).unwrap();
        assert_eq!((outer.a, outer.c), (1.0, 0.0));
        let kink = tangent_at(&cut, 2.0).unwrap();
        assert_eq!(kink.value(2.0), -0.5);
        for r in [0.1, 1.0, 2.0, 5.0, 50.0] {
            for line in [inner, outer, kink] {
                assert!(line.value(r) <= cut.value(r) + 1e-15);
            }
        }
    }

    #[test]
    fn slope_inverse_round_trip() {
        for q in [1.0, 2.0, 6.0, 40.0] {
            let s = shape(0.8, q);
            for t in [1e-3, 0.1, 0.8, 3.0, 50.0] {
                let a = tangent_at(&s, t).unwrap().a;
                // The inverse loses digits as a -> 1; test where it is
                // well conditioned.
                if a > 0.0 && a < 1.0 - 1e-4 {
                    assert_relative_eq!(contact_for_slope(&s, a).unwrap(), t, max_relative = 1e-9);
                }
            }
        }
    }

    #[test]
    fn tangents_lie_below_the_shape() {
        let ts = [0.1, 0.3, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0];
        let rs = [0.01, 0.05, 0.2, 0.7, 1.0, 3.0, 9.0, 30.0, 100.0];
        for q in [1.0, 2.0, 4.0, 10.0, 64.0] {
            for b in [0.1, 1.0, 7.0] {
                let s = shape(b, q);
                for &t in &ts {
                    let line = tangent_at(&s, t).unwrap();
                    // a = 1 - O((b/t)^q) rounds to 1 for large q t/b.
                    assert!(line.a > 0.0 && line.a <= 1.0);
                    assert!((line.value(t) - s.value(t)).abs() <= 1e-12 * s.value(t).abs());
                    for &r in &rs {
                        assert!(line.value(r) <= s.value(r) + 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn monotone_convergence_in_q() {
        let cut = SoftcoreShape::new(1.5, Power::Infinite).unwrap();
        for r in [0.3, 1.0, 1.5, 2.0, 6.0] {
            let mut prev_value = f64::INFINITY;
            let mut prev_gap = f64::INFINITY;
            let mut q = 1.0;
            while q <= 1024.0 {
                let f = shape(1.5, q).value(r);
                let gap = (f - cut.value(r)).abs();
                assert!(f <= prev_value);
                assert!(gap <= prev_gap);
                prev_value = f;
                prev_gap = gap;
                q *= 2.0;
            }
            assert!(prev_gap < 1e-2);
        }
    }
}
