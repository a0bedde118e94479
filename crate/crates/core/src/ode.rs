//! Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) for small fixed-size
//! real systems, generic over the state scalar.
//!
//! Both consumers in this crate — the two-level mode evolution and the
//! continuation of parabolic cylinder functions along rays — are smooth
//! oscillatory systems whose solution norm stays within a few orders of
//! magnitude of its initial size.  The error norm therefore scales every
//! component by the *uniform* state magnitude `max(‖y₀‖∞, ‖y₁‖∞)` rather than
//! per-component magnitudes: individual components pass through zeros each
//! oscillation period, and per-component scaling would collapse the step size
//! there for no accuracy gain.
//!
//! The state scalar is either `f64` or the double-double type [`Dd`].  Plain
//! `f64` runs carry a rounding floor: every step rounds a few dozen
//! intermediate quantities, which biases long unitary evolutions at the level
//! of `~10 eps × steps` no matter how tight the tolerance — about 1e-8 of
//! norm drift over a million steps.  The double-double path removes that
//! floor (at roughly an order of magnitude in cost) and is used where
//! invariants must be certified to 1e-9.

use crate::error::{Error, Result};

/// Scalar a state component can be stored in.
pub trait OdeScalar: Copy {
    /// Lift an `f64`.
    fn from_f64(x: f64) -> Self;
    /// Round to the nearest `f64`.
    fn to_f64(self) -> f64;
    /// Sum of two scalars.
    fn add(self, o: Self) -> Self;
    /// Product with an `f64` coefficient.
    fn scale(self, c: f64) -> Self;
}

impl OdeScalar for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline]
    fn add(self, o: Self) -> Self {
        self + o
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        self * c
    }
}

/// Unevaluated double-double value `hi + lo` (`|lo| ≤ ulp(hi)/2`), giving
/// roughly 31 significant digits.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Dd {
    /// Leading component.
    pub hi: f64,
    /// Trailing correction.
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // Requires |a| ≥ |b|.
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    // Dekker split; exact for |a|, |b| < ~1e292, far beyond any state here.
    let p = a * b;
    let c = 134_217_729.0 * a;
    let ah = c - (c - a);
    let al = a - ah;
    let c = 134_217_729.0 * b;
    let bh = c - (c - b);
    let bl = b - bh;
    let e = ((ah * bh - p) + ah * bl + al * bh) + al * bl;
    (p, e)
}

impl Dd {
    /// `self / b` at full double-double accuracy.
    #[inline]
    pub fn div(self, b: f64) -> Self {
        let q0 = self.hi / b;
        let (p, e) = two_prod(q0, b);
        let q1 = (((self.hi - p) - e) + self.lo) / b;
        let (hi, lo) = quick_two_sum(q0, q1);
        Dd { hi, lo }
    }
}

impl OdeScalar for Dd {
    #[inline]
    fn from_f64(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    #[inline]
    fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        let (hi, lo) = quick_two_sum(s, e + self.lo + o.lo);
        Dd { hi, lo }
    }
    #[inline]
    fn scale(self, c: f64) -> Self {
        let (p, e) = two_prod(self.hi, c);
        let (hi, lo) = quick_two_sum(p, e + self.lo * c);
        Dd { hi, lo }
    }
}

/// Tolerances and budgets for one integration.
#[derive(Debug, Clone, Copy)]
pub struct OdeSettings {
    /// Relative tolerance on the local error.
    pub rel_tol: f64,
    /// Absolute tolerance floor added to the scale.
    pub abs_tol: f64,
    /// Largest step magnitude allowed (∞ = unrestricted).
    pub max_step: f64,
    /// Hard cap on accepted + rejected steps before giving up.
    pub max_steps: u64,
}

impl Default for OdeSettings {
    fn default() -> Self {
        OdeSettings {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            max_steps: 50_000_000,
        }
    }
}

impl OdeSettings {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::integration_msg(format!(
                "relative tolerance must be positive and finite, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::integration_msg(format!(
                "absolute tolerance must be non-negative, got {}",
                self.abs_tol
            )));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::integration_msg(format!(
                "maximum step must be positive, got {}",
                self.max_step
            )));
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau.
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
// Fifth-order weights (also the last stage's row: first-same-as-last).
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Difference between fifth- and embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn inf_norm<T: OdeScalar, const D: usize>(y: &[T; D]) -> f64 {
    y.iter().fold(0.0f64, |m, v| m.max(v.to_f64().abs()))
}

fn axpy<T: OdeScalar, const D: usize>(y: &[T; D], h: f64, terms: &[(f64, &[T; D])]) -> [T; D] {
    let mut out = *y;
    for (c, k) in terms {
        let ch = c * h;
        for i in 0..D {
            out[i] = out[i].add(k[i].scale(ch));
        }
    }
    out
}

/// Integrate `dy/dt = rhs(t, y)` from `t0` to `t1` (either direction) and
/// return the state at `t1`.
///
/// Errors when the step size underflows, the step budget is exhausted, the
/// settings are invalid, or the state stops being finite.
pub fn integrate<T, const D: usize, F>(
    mut rhs: F,
    t0: f64,
    t1: f64,
    y0: [T; D],
    settings: &OdeSettings,
) -> Result<[T; D]>
where
    T: OdeScalar,
    F: FnMut(f64, &[T; D]) -> [T; D],
{
    settings.validate()?;
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::integration_msg(format!(
            "integration bounds must be finite, got [{t0}, {t1}]"
        )));
    }
    let span = t1 - t0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();

    let mut t = t0;
    let mut y = y0;
    let mut f0 = rhs(t, &y);

    let mut h = initial_step(&mut rhs, t, &y, &f0, span, settings) * dir;
    let mut n_steps: u64 = 0;

    loop {
        if (t - t1) * dir >= 0.0 {
            return Ok(y);
        }
        n_steps += 1;
        if n_steps > settings.max_steps {
            return Err(Error::integration_msg(format!(
                "step budget of {} exhausted at t = {t}",
                settings.max_steps
            )));
        }
        // Do not step past the endpoint.
        if (t + h - t1) * dir > 0.0 {
            h = t1 - t;
        }
        if h.abs() < 16.0 * f64::EPSILON * t.abs().max(t1.abs()).max(1e-300) {
            return Err(Error::integration_msg(format!(
                "step size underflow at t = {t} (h = {h})"
            )));
        }

        let k1 = f0;
        let k2 = rhs(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs(
            t + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            t + h,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y1 = axpy(
            &y,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = rhs(t + h, &y1);

        // Embedded error estimate, scaled by the uniform state magnitude.
        let scale = settings.abs_tol + settings.rel_tol * inf_norm(&y).max(inf_norm(&y1));
        let mut err_sq = 0.0;
        for i in 0..D {
            let e = h
                * (E1 * k1[i].to_f64()
                    + E3 * k3[i].to_f64()
                    + E4 * k4[i].to_f64()
                    + E5 * k5[i].to_f64()
                    + E6 * k6[i].to_f64()
                    + E7 * k7[i].to_f64());
            let r = e / scale;
            err_sq += r * r;
        }
        let err = (err_sq / D as f64).sqrt();

        if !err.is_finite() {
            return Err(Error::integration_msg(format!(
                "state became non-finite at t = {t}"
            )));
        }

        if err <= 1.0 {
            t += h;
            y = y1;
            f0 = k7; // first-same-as-last
        }

        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h = (h * factor).clamp(-settings.max_step, settings.max_step);
    }
}

/// Starting step size: the standard two-trial heuristic of Hairer, Nørsett &
/// Wanner, restricted to the span and the configured maximum.
fn initial_step<T, const D: usize, F>(
    rhs: &mut F,
    t0: f64,
    y0: &[T; D],
    f0: &[T; D],
    span: f64,
    settings: &OdeSettings,
) -> f64
where
    T: OdeScalar,
    F: FnMut(f64, &[T; D]) -> [T; D],
{
    let dir = span.signum();
    let scale = settings.abs_tol + settings.rel_tol * inf_norm(y0);
    let d0 = inf_norm(y0) / scale;
    let d1 = inf_norm(f0) / scale;
    let h0 = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * (d0 / d1)
    };
    let h0 = h0.min(span.abs());

    let y1 = axpy(y0, h0 * dir, &[(1.0, f0)]);
    let f1 = rhs(t0 + h0 * dir, &y1);
    let mut d2 = 0.0f64;
    for i in 0..D {
        d2 = d2.max((f1[i].to_f64() - f0[i].to_f64()).abs());
    }
    let d2 = d2 / scale / h0;

    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span.abs()).min(settings.max_step)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn harmonic(omega: f64) -> impl FnMut(f64, &[f64; 2]) -> [f64; 2] {
        move |_t, y| [y[1], -omega * omega * y[0]]
    }

    #[test]
    fn harmonic_oscillator_long_span() {
        // 100 periods at ω = 3.
        let omega = 3.0;
        let t1 = 100.0 * 2.0 * std::f64::consts::PI / omega;
        let settings = OdeSettings::default();
        let y = integrate(harmonic(omega), 0.0, t1, [1.0, 0.0], &settings).unwrap();
        assert_abs_diff_eq!(y[0], 1.0, epsilon = 1e-7);
        assert_abs_diff_eq!(y[1], 0.0, epsilon = 1e-7);
    }

    #[test]
    fn backward_integration_matches_forward() {
        let settings = OdeSettings::default();
        let fwd = integrate(harmonic(2.0), 0.0, 5.0, [0.3, -1.1], &settings).unwrap();
        let back = integrate(harmonic(2.0), 5.0, 0.0, fwd, &settings).unwrap();
        assert_abs_diff_eq!(back[0], 0.3, epsilon = 1e-8);
        assert_abs_diff_eq!(back[1], -1.1, epsilon = 1e-8);
    }

    #[test]
    fn exponential_decay_is_exact_enough() {
        let settings = OdeSettings {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..Default::default()
        };
        let y = integrate(|_t, y: &[f64; 1]| [-y[0]], 0.0, 3.0, [2.0], &settings).unwrap();
        assert_abs_diff_eq!(y[0], 2.0 * (-3.0f64).exp(), epsilon = 1e-11);
    }

    #[test]
    fn tighter_tolerance_is_more_accurate() {
        let exact = (10.0f64 * 1.7).sin() / 1.7;
        let run = |rtol: f64| {
            let s = OdeSettings {
                rel_tol: rtol,
                abs_tol: 0.0,
                ..Default::default()
            };
            let y = integrate(harmonic(1.7), 0.0, 10.0, [0.0, 1.0], &s).unwrap();
            (y[0] - exact).abs()
        };
        let loose = run(1e-5);
        let tight = run(1e-11);
        assert!(tight < loose * 1e-2, "loose {loose:.3e} tight {tight:.3e}");
    }

    #[test]
    fn zero_span_returns_initial_state() {
        let y = integrate(harmonic(1.0), 2.0, 2.0, [0.5, 0.5], &OdeSettings::default()).unwrap();
        assert_eq!(y, [0.5, 0.5]);
    }

    #[test]
    fn step_budget_is_enforced() {
        let s = OdeSettings {
            max_steps: 10,
            ..Default::default()
        };
        let err = integrate(harmonic(50.0), 0.0, 1000.0, [1.0, 0.0], &s).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }));
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let s = OdeSettings {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate(harmonic(1.0), 0.0, 1.0, [1.0, 0.0], &s).is_err());
    }

    #[test]
    fn double_double_arithmetic_is_consistent() {
        // (1 + 2⁻⁶⁰) round-trips through scale and add without losing the
        // trailing part.
        let a = Dd { hi: 1.0, lo: 2f64.powi(-60) };
        let b = a.scale(3.0);
        assert_eq!(b.hi, 3.0);
        assert_abs_diff_eq!(b.lo, 3.0 * 2f64.powi(-60), epsilon = 1e-30);
        let c = a.add(Dd::from_f64(-1.0));
        assert_abs_diff_eq!(c.to_f64(), 2f64.powi(-60), epsilon = 1e-35);
    }

    #[test]
    fn double_double_state_matches_f64_state() {
        let s = OdeSettings {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..Default::default()
        };
        let yf = integrate(harmonic(2.5), 0.0, 7.0, [1.0, 0.0], &s).unwrap();
        let yd = integrate(
            |_t, y: &[Dd; 2]| [y[1], y[0].scale(-2.5 * 2.5)],
            0.0,
            7.0,
            [Dd::from_f64(1.0), Dd::from_f64(0.0)],
            &s,
        )
        .unwrap();
        assert_abs_diff_eq!(yf[0], yd[0].to_f64(), epsilon = 1e-10);
        assert_abs_diff_eq!(yf[1], yd[1].to_f64(), epsilon = 1e-10);
    }
}
