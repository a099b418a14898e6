//! Coherent states and the even/odd cat basis.
//!
//! A coherent pair `|α⟩, |−α⟩` spans the same two-dimensional space as the
//! orthonormal cat states
//!
//! ```text
//! |±⟩ = [2(1 ± x²)]^{-1/2} (|α⟩ ± |−α⟩),   x = exp(−|α|²),
//! ```
//!
//! so a superposed coherent state `ε₊|α⟩ + ε₋|−α⟩` is a genuine qubit
//! `A₊|+⟩ + A₋|−⟩`. This module converts between the two coordinate systems.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Every complex scalar in the crate (ε±, A±, C±, phases).
pub type ComplexAmp = Complex64;

/// Tolerance used when flagging a qubit or SCS as normalized.
pub const NORM_TOL: f64 = 1e-12;

pub(crate) fn check_finite(name: &'static str, z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value: if z.re.is_finite() { z.im } else { z.re },
            domain: "finite complex numbers",
        })
    }
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
    domain: &'static str,
) -> Result<()> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(())
    } else {
        Err(Error::Domain {
            name,
            value,
            domain,
        })
    }
}

/// Coherent amplitude α with |α|² > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentAlpha {
    alpha: Complex64,
}

impl CoherentAlpha {
    pub fn new(alpha: Complex64) -> Result<Self> {
        let n = alpha.norm_sqr();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::DegenerateAlpha(n));
        }
        Ok(Self { alpha })
    }

    /// Real, non-negative α with the given mean photon number |α|².
    pub fn from_mean_photon_number(alpha_sq: f64) -> Result<Self> {
        if !(alpha_sq.is_finite() && alpha_sq > 0.0) {
            return Err(Error::DegenerateAlpha(alpha_sq));
        }
        Self::new(Complex64::new(alpha_sq.sqrt(), 0.0))
    }

    pub fn value(&self) -> Complex64 {
        self.alpha
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn overlaps(&self) -> Overlaps {
        Overlaps::from_mean_photon_number(self.mean_photon_number())
    }
}

/// Powers of `x = exp(−|α|²)` and the differences that appear in every
/// closed form, with `1 − x²` and `1 − x⁴` computed without cancellation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Overlaps {
    pub x: f64,
    pub x2: f64,
    pub x4: f64,
    pub one_minus_x2: f64,
    pub one_minus_x4: f64,
}

impl Overlaps {
    /// Valid for any `alpha_sq ≥ 0`; at zero the differences vanish.
    pub fn from_mean_photon_number(alpha_sq: f64) -> Self {
        Self {
            x: (-alpha_sq).exp(),
            x2: (-2.0 * alpha_sq).exp(),
            x4: (-4.0 * alpha_sq).exp(),
            one_minus_x2: -(-2.0 * alpha_sq).exp_m1(),
            one_minus_x4: -(-4.0 * alpha_sq).exp_m1(),
        }
    }

    /// `(1 + x²)^{1/2}`, the inverse of the branch constant `p`.
    pub fn p_inv(&self) -> f64 {
        (1.0 + self.x2).sqrt()
    }

    /// `(1 − x²)^{1/2}`, the inverse of the branch constant `q`.
    pub fn q_inv(&self) -> f64 {
        self.one_minus_x2.sqrt()
    }

    pub fn p(&self) -> f64 {
        1.0 / self.p_inv()
    }

    pub fn q(&self) -> f64 {
        1.0 / self.q_inv()
    }
}

/// `x = exp(−|α|²)`. Note `⟨α|−α⟩ = x²` for any complex α.
pub fn overlap_x(alpha: &CoherentAlpha) -> f64 {
    (-alpha.mean_photon_number()).exp()
}

/// Qubit in the cat basis, `A₊|+⟩ + A₋|−⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatQubit {
    a_plus: Complex64,
    a_minus: Complex64,
    normalized: bool,
}

impl CatQubit {
    pub fn new(a_plus: Complex64, a_minus: Complex64) -> Result<Self> {
        check_finite("a_plus", a_plus)?;
        check_finite("a_minus", a_minus)?;
        let n = a_plus.norm_sqr() + a_minus.norm_sqr();
        Ok(Self {
            a_plus,
            a_minus,
            normalized: (n - 1.0).abs() <= NORM_TOL,
        })
    }

    pub fn a_plus(&self) -> Complex64 {
        self.a_plus
    }

    pub fn a_minus(&self) -> Complex64 {
        self.a_minus
    }

    pub fn as_array(&self) -> [Complex64; 2] {
        [self.a_plus, self.a_minus]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a_plus.norm_sqr() + self.a_minus.norm_sqr()
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::Norm {
                what: "cat qubit",
                norm_sqr: self.norm_sqr(),
            })
        }
    }
}

/// Superposed coherent state `ε₊|α⟩ + ε₋|−α⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScsCoefficients {
    eps_plus: Complex64,
    eps_minus: Complex64,
    alpha: CoherentAlpha,
    normalized: bool,
}

impl ScsCoefficients {
    pub fn new(eps_plus: Complex64, eps_minus: Complex64, alpha: CoherentAlpha) -> Result<Self> {
        check_finite("eps_plus", eps_plus)?;
        check_finite("eps_minus", eps_minus)?;
        let mut s = Self {
            eps_plus,
            eps_minus,
            alpha,
            normalized: false,
        };
        s.normalized = (s.norm_sqr() - 1.0).abs() <= NORM_TOL;
        Ok(s)
    }

    pub fn eps_plus(&self) -> Complex64 {
        self.eps_plus
    }

    pub fn eps_minus(&self) -> Complex64 {
        self.eps_minus
    }

    pub fn alpha(&self) -> CoherentAlpha {
        self.alpha
    }

    /// `|ε₊|² + |ε₋|² + 2x² Re(ε₊* ε₋)`.
    pub fn norm_sqr(&self) -> f64 {
        let x2 = self.alpha.overlaps().x2;
        self.eps_plus.norm_sqr()
            + self.eps_minus.norm_sqr()
            + 2.0 * x2 * (self.eps_plus.conj() * self.eps_minus).re
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.normalized {
            Ok(())
        } else {
            Err(Error::Norm {
                what: "superposed coherent state",
                norm_sqr: self.norm_sqr(),
            })
        }
    }
}

/// `A₊ = cos(ω/2)`, `A₋ = sin(ω/2) e^{iξ}` with ω ∈ [0, π], ξ ∈ [0, 2π].
pub fn angles_to_qubit(omega: f64, xi: f64) -> Result<CatQubit> {
    check_range("omega", omega, 0.0, PI, "[0, pi]")?;
    check_range("xi", xi, 0.0, TAU, "[0, 2pi]")?;
    let (s, c) = (0.5 * omega).sin_cos();
    CatQubit::new(
        Complex64::new(c, 0.0),
        Complex64::from_polar(s, xi),
    )
}

/// `A± = (ε₊ ± ε₋) [(1 ± x²)/2]^{1/2}`.
pub fn epsilon_to_qubit(s: &ScsCoefficients) -> Result<CatQubit> {
    s.require_normalized()?;
    let o = s.alpha.overlaps();
    let a_plus = (s.eps_plus + s.eps_minus) * (0.5 * (1.0 + o.x2)).sqrt();
    let a_minus = (s.eps_plus - s.eps_minus) * (0.5 * o.one_minus_x2).sqrt();
    CatQubit::new(a_plus, a_minus)
}

/// `ε± = (1/√2) [A₊ (1 + x²)^{-1/2} ± A₋ (1 − x²)^{-1/2}]`.
pub fn qubit_to_epsilon(q: &CatQubit, alpha: CoherentAlpha) -> Result<ScsCoefficients> {
    q.require_normalized()?;
    let o = alpha.overlaps();
    if o.one_minus_x2 <= 0.0 {
        return Err(Error::DegenerateAlpha(alpha.mean_photon_number()));
    }
    let even = q.a_plus * o.p();
    let odd = q.a_minus * o.q();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    ScsCoefficients::new((even + odd) * h, (even - odd) * h, alpha)
}
