//! The entangled coherent channel
//! `|E⟩ = N (cos(θ/2)|α,α⟩ + sin(θ/2) e^{iφ} |−α,−α⟩)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::cat_algebra::{check_range, CoherentAlpha};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcsParams {
    alpha: CoherentAlpha,
    theta: f64,
    phi: f64,
}

impl EcsParams {
    /// θ ∈ [0, π]; φ ∈ [0, 2π] (2π is accepted and equivalent to 0).
    pub fn new(alpha: CoherentAlpha, theta: f64, phi: f64) -> Result<Self> {
        check_range("theta", theta, 0.0, PI, "[0, pi]")?;
        check_range("phi", phi, 0.0, TAU, "[0, 2pi]")?;
        Ok(Self { alpha, theta, phi })
    }

    pub fn from_mean_photon_number(alpha_sq: f64, theta: f64, phi: f64) -> Result<Self> {
        Self::new(CoherentAlpha::from_mean_photon_number(alpha_sq)?, theta, phi)
    }

    pub fn alpha(&self) -> CoherentAlpha {
        self.alpha
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `sinθ cosφ`, the combination through which the channel enters most formulas.
    pub fn sin_theta_cos_phi(&self) -> f64 {
        self.theta.sin() * self.phi.cos()
    }
}

/// Coefficients of `|++⟩, |+−⟩, |−+⟩, |−−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcsQubitAmplitudes {
    pub a_pp: Complex64,
    pub a_pm: Complex64,
    pub a_mp: Complex64,
    pub a_mm: Complex64,
}

impl EcsQubitAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        self.a_pp.norm_sqr() + self.a_pm.norm_sqr() + self.a_mp.norm_sqr() + self.a_mm.norm_sqr()
    }
}

/// `C± = cos(θ/2) ± sin(θ/2) e^{iφ}`.
pub fn c_coefficients(theta: f64, phi: f64) -> (Complex64, Complex64) {
    let c = Complex64::new((0.5 * theta).cos(), 0.0);
    let s = Complex64::from_polar((0.5 * theta).sin(), phi);
    (c + s, c - s)
}

/// `N = (1 + x⁴ sinθ cosφ)^{-1/2}`.
pub fn norm_constant(p: &EcsParams) -> f64 {
    let x4 = p.alpha.overlaps().x4;
    (1.0 + x4 * p.sin_theta_cos_phi()).powf(-0.5)
}

pub fn qubit_amplitudes(p: &EcsParams) -> EcsQubitAmplitudes {
    let o = p.alpha.overlaps();
    let n = norm_constant(p);
    let (cp, cm) = c_coefficients(p.theta, p.phi);
    let cross = cm * (0.5 * n * o.one_minus_x4.sqrt());
    EcsQubitAmplitudes {
        a_pp: cp * (0.5 * n * (1.0 + o.x2)),
        a_pm: cross,
        a_mp: cross,
        a_mm: cp * (0.5 * n * o.one_minus_x2),
    }
}

/// `C = (1 − x⁴) sinθ / (1 + x⁴ sinθ cosφ)`.
pub fn concurrence_closed(p: &EcsParams) -> f64 {
    let o = p.alpha.overlaps();
    o.one_minus_x4 * p.theta.sin() / (1.0 + o.x4 * p.sin_theta_cos_phi())
}

/// Pure two-qubit concurrence `2|a₊₊a₋₋ − a₊₋a₋₊|`.
pub fn concurrence_numeric(a: &EcsQubitAmplitudes) -> Result<f64> {
    let n = a.norm_sqr();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::Norm {
            what: "two-qubit amplitudes",
            norm_sqr: n,
        });
    }
    Ok(2.0 * (a.a_pp * a.a_mm - a.a_pm * a.a_mp).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn params(alpha_sq: f64, theta: f64, phi: f64) -> EcsParams {
        EcsParams::from_mean_photon_number(alpha_sq, theta, phi).unwrap()
    }

    #[test]
    fn c_coefficient_poles() {
        let (cp, cm) = c_coefficients(0.0, 2.0);
        assert_abs_diff_eq!((cp - 1.0).norm(), 0.0);
        assert_abs_diff_eq!((cm - 1.0).norm(), 0.0);
        let (cp, cm) = c_coefficients(PI / 2.0, PI);
        assert_abs_diff_eq!(cp.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!((cm - SQRT_2).norm(), 0.0, epsilon = 1e-15);
        let (cp, cm) = c_coefficients(PI / 2.0, 0.0);
        assert_abs_diff_eq!((cp - SQRT_2).norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(cm.norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn c_coefficients_sum_to_two() {
        for k in 0..40 {
            let (cp, cm) = c_coefficients(0.07 * k as f64, 0.15 * k as f64);
            assert_abs_diff_eq!(cp.norm_sqr() + cm.norm_sqr(), 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn norm_constant_values() {
        assert_abs_diff_eq!(norm_constant(&params(1.0, 0.0, 1.0)), 1.0);
        assert_abs_diff_eq!(
            norm_constant(&params(1.0, PI / 2.0, PI)),
            1.009_285_569_283_428,
            epsilon = 1e-12
        );
    }

    #[test]
    fn mecs_amplitudes_are_bell_like() {
        let a = qubit_amplitudes(&params(0.8, PI / 2.0, PI));
        assert_abs_diff_eq!(a.a_pp.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.a_mm.norm(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(a.a_pm.norm(), FRAC_1_SQRT_2, epsilon = 1e-14);
        assert_eq!(a.a_pm, a.a_mp);
    }

    #[test]
    fn product_channel_amplitudes() {
        // |α⟩|α⟩ with |α⟩ = (p⁻¹|+⟩ + q⁻¹|−⟩)/√2.
        let p = params(0.6, 0.0, 0.0);
        let o = p.alpha().overlaps();
        let a = qubit_amplitudes(&p);
        let (u, v) = (o.p_inv() * FRAC_1_SQRT_2, o.q_inv() * FRAC_1_SQRT_2);
        assert_abs_diff_eq!(a.a_pp.re, u * u, epsilon = 1e-15);
        assert_abs_diff_eq!(a.a_pm.re, u * v, epsilon = 1e-15);
        assert_abs_diff_eq!(a.a_mm.re, v * v, epsilon = 1e-15);
        assert_abs_diff_eq!(concurrence_numeric(&a).unwrap(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn concurrence_examples() {
        for alpha_sq in [0.1, 0.5, 1.0, 3.0] {
            assert_abs_diff_eq!(
                concurrence_closed(&params(alpha_sq, PI / 2.0, PI)),
                1.0,
                epsilon = 1e-15
            );
        }
        let x4 = (-4.0f64).exp();
        let c = concurrence_closed(&params(1.0, PI / 2.0, 0.0));
        assert_abs_diff_eq!(c, (1.0 - x4) / (1.0 + x4), epsilon = 1e-15);
        assert_abs_diff_eq!(c, 0.964_027_580_075_817, epsilon = 1e-12);
        assert_eq!(concurrence_closed(&params(1.0, 0.0, 0.3)), 0.0);
    }

    #[test]
    fn numeric_concurrence_simple_states() {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        let bell = EcsQubitAmplitudes { a_pp: z, a_pm: h, a_mp: h, a_mm: z };
        assert_abs_diff_eq!(concurrence_numeric(&bell).unwrap(), 1.0, epsilon = 1e-15);
        let prod = EcsQubitAmplitudes { a_pp: one, a_pm: z, a_mp: z, a_mm: z };
        assert_eq!(concurrence_numeric(&prod).unwrap(), 0.0);
        let bad = EcsQubitAmplitudes { a_pp: one, a_pm: one, a_mp: z, a_mm: z };
        assert!(matches!(concurrence_numeric(&bad), Err(Error::Norm { .. })));
    }

    #[test]
    fn nmecs_concurrence_grows_to_one() {
        let cs: Vec<f64> = (1..=60)
            .map(|k| concurrence_closed(&params(0.1 * k as f64, PI / 2.0, 0.0)))
            .collect();
        assert!(cs.windows(2).all(|w| w[1] >= w[0]));
        assert!(cs[59] > 1.0 - 1e-10);
    }

    #[test]
    fn phi_reflection_symmetry() {
        for k in 0..50 {
            let theta = PI * k as f64 / 49.0;
            let phi = TAU * ((k * 7) % 50) as f64 / 50.0;
            let a = concurrence_closed(&params(0.9, theta, phi));
            let b = concurrence_closed(&params(0.9, theta, TAU - phi));
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn angle_domain_checked() {
        assert!(EcsParams::from_mean_photon_number(1.0, 3.5, 0.0).is_err());
        assert!(EcsParams::from_mean_photon_number(1.0, 1.0, -0.1).is_err());
        assert!(EcsParams::from_mean_photon_number(0.0, 1.0, 0.1).is_err());
    }
}
