//! Chain model: ramp protocol, momentum grid, dispersion, and the static
//! Bogoliubov ground state of a single momentum mode.

use serde::Serialize;

use crate::error::{Error, Result};

/// Linear ramp of the transverse field ending at zero field.
///
/// The field follows `g(t) = -t/τ_Q`, starting at `t_i = -g_i τ_Q` (where it
/// equals `g_i`) and reaching `g = 0` at `t = 0`.  With [`hold`](Self::hold)
/// set, the protocol keeps `g = 0` for `t > 0` (free post-quench evolution);
/// otherwise positive times are out of range.  `τ_Q = 0` denotes the sudden
/// quench: the field jumps from `g_i` to `0` at `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuenchProtocol {
    /// Initial transverse field, `g_i > 0` (finite).
    pub g_i: f64,
    /// Quench time `τ_Q ≥ 0`; larger is slower.  Zero is the sudden quench.
    pub tau_q: f64,
    /// Whether `g = 0` is held for `t > 0`.
    pub hold: bool,
}

impl QuenchProtocol {
    /// Ramp from `g_i` down to zero over quench time `tau_q`, without a hold
    /// period.
    pub fn new(g_i: f64, tau_q: f64) -> Result<Self> {
        if !(g_i.is_finite() && g_i > 0.0) {
            return Err(Error::Domain(format!(
                "initial field must be finite and positive, got g_i = {g_i}"
            )));
        }
        if !(tau_q.is_finite() && tau_q >= 0.0) {
            return Err(Error::Domain(format!(
                "quench time must be finite and non-negative, got tau_q = {tau_q}"
            )));
        }
        Ok(QuenchProtocol {
            g_i,
            tau_q,
            hold: false,
        })
    }

    /// Same ramp, but holding `g = 0` after the ramp ends.
    pub fn with_hold(mut self) -> Self {
        self.hold = true;
        self
    }

    /// Start time of the ramp, `t_i = -g_i τ_Q`.
    pub fn t_i(&self) -> f64 {
        -self.g_i * self.tau_q
    }

    /// Field value at time `t`.
    ///
    /// Errors when `t` lies before the ramp starts, or after it ends without a
    /// hold period.
    pub fn ramp_value(&self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite, got t = {t}")));
        }
        if t > 0.0 {
            return if self.hold {
                Ok(0.0)
            } else {
                Err(Error::Domain(format!(
                    "t = {t} is after the ramp ends (no hold period configured)"
                )))
            };
        }
        if t < self.t_i() {
            return Err(Error::Domain(format!(
                "t = {t} is before the ramp starts at t_i = {}",
                self.t_i()
            )));
        }
        if t == 0.0 {
            // Also covers the sudden quench, whose ramp era is the single
            // instant t = 0.
            return Ok(0.0);
        }
        Ok(-t / self.tau_q)
    }

    /// Whether this is the sudden quench (`τ_Q = 0`).
    pub fn is_sudden(&self) -> bool {
        self.tau_q == 0.0
    }
}

/// Positive-momentum grid of an `N`-site ring in the even-parity sector:
/// `q_k = π(2k-1)/N` for `k = 1..N/2`.
///
/// These momenta are the midpoints of `N/2` equal cells covering `(0, π)`, so
/// `(2/N) Σ_k f(q_k)` is the midpoint quadrature of `(1/π) ∫_0^π f(q) dq` and
/// converges superalgebraically for smooth periodic integrands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumGrid {
    n_sites: usize,
    q: Vec<f64>,
}

impl MomentumGrid {
    /// Grid for a ring of `n_sites` sites; `n_sites` must be even and ≥ 2.
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites < 2 || n_sites % 2 != 0 {
            return Err(Error::Domain(format!(
                "site count must be even and at least 2, got {n_sites}"
            )));
        }
        let n = n_sites as f64;
        let q = (1..=n_sites / 2)
            .map(|k| std::f64::consts::PI * (2 * k - 1) as f64 / n)
            .collect();
        Ok(MomentumGrid { n_sites, q })
    }

    /// Number of ring sites `N`.
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Number of positive momenta, `N/2`.
    pub fn n_modes(&self) -> usize {
        self.q.len()
    }

    /// The positive momenta in increasing order.
    pub fn q(&self) -> &[f64] {
        &self.q
    }

    /// Grid spacing `2π/N`.
    pub fn spacing(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_sites as f64
    }

    /// Midpoint-quadrature sum `(2/N) Σ_k f(q_k)`.
    pub fn mean(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let sum: f64 = self.q.iter().map(|&q| f(q)).sum();
        2.0 * sum / self.n_sites as f64
    }
}

/// Quasiparticle dispersion `ω_q = 2 √(1 + g² - 2 g cos q)` of the chain at
/// transverse field `g`.
///
/// Vanishes only at the critical point `g = 1`, `q = 0`.
pub fn dispersion(g: f64, q: f64) -> Result<f64> {
    if !(g >= 0.0) {
        return Err(Error::Domain(format!(
            "field must be non-negative, got g = {g}"
        )));
    }
    if !(0.0..=std::f64::consts::PI).contains(&q) {
        return Err(Error::Domain(format!("momentum must lie in [0, π], got q = {q}")));
    }
    // 1 + g² - 2 g cos q = (g - cos q)² + sin² q ≥ 0 in exact arithmetic; the
    // grouped form is also non-negative in floating point.
    let c = q.cos();
    let s = q.sin();
    let arg = (g - c) * (g - c) + s * s;
    Ok(2.0 * arg.sqrt())
}

/// Static Bogoliubov amplitudes `(u, v)` of the single-mode ground state.
///
/// Both components are real and non-negative in the convention used
/// throughout: `u = cos(θ_q/2)`, `v = sin(θ_q/2)` with
/// `θ_q = atan2(sin q, g - cos q) ∈ (0, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StaticBogoliubov {
    /// Amplitude on the bare vacuum component, `u ≥ 0`.
    pub u: f64,
    /// Amplitude on the paired component, `v ≥ 0`.
    pub v: f64,
}

impl StaticBogoliubov {
    /// `u² + v²`, equal to 1 up to rounding.
    pub fn norm(&self) -> f64 {
        self.u * self.u + self.v * self.v
    }
}

/// Ground state of one momentum mode at transverse field `g`.
///
/// Requires `q ∈ (0, π)` strictly (the decoupled endpoint modes are not part
/// of the positive-momentum grid) and `g ≥ 0`; `g = +∞` is allowed and yields
/// the fully polarized state `(u, v) = (1, 0)`.
pub fn static_ground_state(g: f64, q: f64) -> Result<StaticBogoliubov> {
    if !(g >= 0.0) {
        return Err(Error::Domain(format!(
            "field must be non-negative, got g = {g}"
        )));
    }
    if !(q > 0.0 && q < std::f64::consts::PI) {
        return Err(Error::Domain(format!(
            "momentum must lie strictly inside (0, π), got q = {q}"
        )));
    }
    // atan2(sin q, g - cos q): the numerator is positive on (0, π), so
    // θ ∈ (0, π) and both half-angle components are non-negative.  For
    // g = +∞, atan2(finite, +∞) = 0 gives the polarized state directly.
    let theta = q.sin().atan2(g - q.cos());
    Ok(StaticBogoliubov {
        u: (0.5 * theta).cos(),
        v: (0.5 * theta).sin(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn protocol_rejects_bad_inputs() {
        assert!(QuenchProtocol::new(0.0, 1.0).is_err());
        assert!(QuenchProtocol::new(-2.0, 1.0).is_err());
        assert!(QuenchProtocol::new(f64::INFINITY, 1.0).is_err());
        assert!(QuenchProtocol::new(f64::NAN, 1.0).is_err());
        assert!(QuenchProtocol::new(8.0, -0.5).is_err());
        assert!(QuenchProtocol::new(8.0, f64::NAN).is_err());
        assert!(QuenchProtocol::new(8.0, 0.0).is_ok());
    }

    #[test]
    fn ramp_endpoints_and_midpoint() {
        let p = QuenchProtocol::new(4.0, 2.0).unwrap();
        assert_eq!(p.t_i(), -8.0);
        assert_abs_diff_eq!(p.ramp_value(-8.0).unwrap(), 4.0);
        assert_abs_diff_eq!(p.ramp_value(-3.0).unwrap(), 1.5);
        assert_abs_diff_eq!(p.ramp_value(0.0).unwrap(), 0.0);
        assert!(p.ramp_value(-8.0000001).is_err());
        assert!(p.ramp_value(0.5).is_err());
        assert_abs_diff_eq!(p.with_hold().ramp_value(17.0).unwrap(), 0.0);
    }

    #[test]
    fn sudden_quench_ramp_is_the_single_instant_zero() {
        let p = QuenchProtocol::new(200.0, 0.0).unwrap();
        assert!(p.is_sudden());
        assert_eq!(p.t_i(), 0.0);
        assert_eq!(p.ramp_value(0.0).unwrap(), 0.0);
        assert!(p.ramp_value(-1e-12).is_err());
        assert!(p.ramp_value(1e-12).is_err());
        assert_eq!(p.with_hold().ramp_value(3.0).unwrap(), 0.0);
    }

    #[test]
    fn grid_is_antiperiodic_midpoints() {
        let grid = MomentumGrid::new(8).unwrap();
        assert_eq!(grid.n_modes(), 4);
        let expect = [PI / 8.0, 3.0 * PI / 8.0, 5.0 * PI / 8.0, 7.0 * PI / 8.0];
        for (a, b) in grid.q().iter().zip(expect) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(grid.spacing(), PI / 4.0, epsilon = 1e-15);
        assert!(MomentumGrid::new(7).is_err());
        assert!(MomentumGrid::new(0).is_err());
    }

    #[test]
    fn grid_mean_resolves_discrete_orthogonality() {
        // (2/N) Σ cos(qR) over the antiperiodic grid is exactly δ_{R,0} for
        // 0 ≤ R < N.
        let grid = MomentumGrid::new(64).unwrap();
        assert_abs_diff_eq!(grid.mean(|_| 1.0), 1.0, epsilon = 1e-14);
        for r in 1..10usize {
            let s = grid.mean(|q| (q * r as f64).cos());
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-13);
        }
        // (2/N) Σ sin² q = 1/2 on any even grid with N ≥ 4.
        assert_abs_diff_eq!(grid.mean(|q| q.sin() * q.sin()), 0.5, epsilon = 1e-13);
    }

    #[test]
    fn dispersion_known_values() {
        assert_abs_diff_eq!(dispersion(1.0, 0.0).unwrap(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dispersion(2.0, PI).unwrap(), 6.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dispersion(0.0, 1.234).unwrap(), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            dispersion(1.0, PI / 2.0).unwrap(),
            2.0 * 2.0f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(dispersion(-0.1, 1.0).is_err());
        assert!(dispersion(1.0, -0.1).is_err());
        assert!(dispersion(1.0, 3.2).is_err());
    }

    #[test]
    fn ground_state_limits() {
        // Zero field: u = sin(q/2), v = cos(q/2).
        for q in [0.3, 1.0, 2.0, 3.0] {
            let gs = static_ground_state(0.0, q).unwrap();
            assert_relative_eq!(gs.u, (q / 2.0).sin(), max_relative = 1e-14);
            assert_relative_eq!(gs.v, (q / 2.0).cos(), max_relative = 1e-14);
        }
        // Infinite field: fully polarized.
        let gs = static_ground_state(f64::INFINITY, 1.7).unwrap();
        assert_eq!(gs.u, 1.0);
        assert_eq!(gs.v, 0.0);
        // Large finite field: v ≈ sin q / (2 (g - cos q)).
        let gs = static_ground_state(100.0, 1.0).unwrap();
        let expect = 1.0f64.sin() / (2.0 * (100.0 - 1.0f64.cos()));
        assert_relative_eq!(gs.v, expect, max_relative = 1e-4);
        // Endpoints rejected.
        assert!(static_ground_state(2.0, 0.0).is_err());
        assert!(static_ground_state(2.0, PI).is_err());
    }

    proptest! {
        #[test]
        fn ground_state_is_normalized_and_non_negative(
            g in 0.0f64..50.0,
            q in 1e-6f64..(PI - 1e-6),
        ) {
            let gs = static_ground_state(g, q).unwrap();
            prop_assert!(gs.u >= 0.0 && gs.v >= 0.0);
            prop_assert!((gs.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn ground_state_diagonalizes_the_mode_hamiltonian(
            g in 0.0f64..20.0,
            q in 1e-3f64..(PI - 1e-3),
        ) {
            // (u, v) must be the +ω_q eigenvector of ((ε, Δ), (Δ, -ε)) with
            // ε = 2(g - cos q), Δ = 2 sin q: ε u + Δ v = ω u and
            // Δ u - ε v = ω v.
            let gs = static_ground_state(g, q).unwrap();
            let eps = 2.0 * (g - q.cos());
            let del = 2.0 * q.sin();
            let om = dispersion(g, q).unwrap();
            prop_assert!((eps * gs.u + del * gs.v - om * gs.u).abs() < 1e-9);
            prop_assert!((del * gs.u - eps * gs.v - om * gs.v).abs() < 1e-9);
        }

        #[test]
        fn ramp_is_linear_between_endpoints(
            g in 0.1f64..30.0,
            tau in 1e-6f64..100.0,
            f in 0.0f64..1.0,
        ) {
            let p = QuenchProtocol::new(g, tau).unwrap();
            let t = p.t_i() * f;
            let val = p.ramp_value(t).unwrap();
            prop_assert!((val - g * f).abs() <= 1e-12 * g.max(1.0));
        }
    }
}
