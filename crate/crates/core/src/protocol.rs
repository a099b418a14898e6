//! Analytic teleportation pipeline: photon-count branches, Bob's
//! corrections, teleported states and average fidelities.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::cat_algebra::{angles_to_qubit, CatQubit};
use crate::ecs::{c_coefficients, norm_constant, EcsParams};
use crate::error::{Error, Result};

/// Photon-count outcome on Alice's modes (3, 4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OutcomeLabel {
    /// (0, 0)
    OO,
    /// (NZE, 0)
    NzeO,
    /// (0, NZE)
    ONze,
    /// (ODD, 0)
    OddO,
    /// (0, ODD)
    OOdd,
}

impl OutcomeLabel {
    pub const ALL: [OutcomeLabel; 5] = [
        OutcomeLabel::OO,
        OutcomeLabel::NzeO,
        OutcomeLabel::ONze,
        OutcomeLabel::OddO,
        OutcomeLabel::OOdd,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeLabel::OO => "(0,0)",
            OutcomeLabel::NzeO => "(NZE,0)",
            OutcomeLabel::ONze => "(0,NZE)",
            OutcomeLabel::OddO => "(ODD,0)",
            OutcomeLabel::OOdd => "(0,ODD)",
        }
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StrategyId {
    /// |C₊| ≥ |C₋|, i.e. cosφ ≥ 0.
    S1,
    /// |C₊| < |C₋|, i.e. cosφ < 0.
    S2,
}

impl fmt::Display for StrategyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyId::S1 => "S1",
            StrategyId::S2 => "S2",
        })
    }
}

/// `cosφ` values within this distance of zero count as the tie `cosφ = 0`,
/// so φ = π/2 and φ = 3π/2 both select strategy 1 despite rounding.
pub const STRATEGY_TIE_TOL: f64 = 1e-12;

pub fn select_strategy(phi: f64) -> StrategyId {
    if phi.cos() >= -STRATEGY_TIE_TOL {
        StrategyId::S1
    } else {
        StrategyId::S2
    }
}

/// Unitary on the (|+⟩, |−⟩) coordinates of mode 2, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionUnitary(pub [[Complex64; 2]; 2]);

impl CorrectionUnitary {
    fn real(m: [[f64; 2]; 2]) -> Self {
        let c = |v: f64| Complex64::new(v, 0.0);
        Self([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::real([[1.0, 0.0], [0.0, 1.0]])
    }

    /// `|+⟩⟨+| − |−⟩⟨−|`
    pub fn parity_flip() -> Self {
        Self::real([[1.0, 0.0], [0.0, -1.0]])
    }

    /// `|+⟩⟨−| + |−⟩⟨+|`
    pub fn swap() -> Self {
        Self::real([[0.0, 1.0], [1.0, 0.0]])
    }

    /// `|+⟩⟨−| − |−⟩⟨+|`
    pub fn signed_swap() -> Self {
        Self::real([[0.0, 1.0], [-1.0, 0.0]])
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entry of `U†U − I`.
    pub fn unitarity_error(&self) -> f64 {
        let m = &self.0;
        let mut worst: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let g = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - target).norm());
            }
        }
        worst
    }
}

pub fn correction_unitary(s: StrategyId, o: OutcomeLabel) -> CorrectionUnitary {
    use OutcomeLabel::*;
    match (s, o) {
        (StrategyId::S1, OO | NzeO) => CorrectionUnitary::identity(),
        (StrategyId::S1, ONze) => CorrectionUnitary::parity_flip(),
        (StrategyId::S1, OddO) => CorrectionUnitary::swap(),
        (StrategyId::S1, OOdd) => CorrectionUnitary::signed_swap(),
        (StrategyId::S2, OO | OddO) => CorrectionUnitary::identity(),
        (StrategyId::S2, OOdd) => CorrectionUnitary::parity_flip(),
        (StrategyId::S2, NzeO) => CorrectionUnitary::swap(),
        (StrategyId::S2, ONze) => CorrectionUnitary::signed_swap(),
    }
}

/// One photon-count outcome. `raw_state` is Bob's unnormalized mode-2
/// state in the cat basis; its squared norm is the outcome probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub label: OutcomeLabel,
    pub raw_state: [Complex64; 2],
    pub prob: f64,
}

/// Splits the network output into the five photon-count branches.
pub fn decompose_branches(q: &CatQubit, p: &EcsParams) -> Result<[Branch; 5]> {
    q.require_normalized()?;
    let o = p.alpha().overlaps();
    let (pp, qq) = (o.p(), o.q());
    let (p_inv, q_inv) = (o.p_inv(), o.q_inv());
    let (cp, cm) = c_coefficients(p.theta(), p.phi());
    let (ap, am) = (q.a_plus(), q.a_minus());
    let g = norm_constant(p) * FRAC_1_SQRT_2;

    // ε₊ + ε₋ = √2 A₊ p
    let eps_sum = ap * (std::f64::consts::SQRT_2 * pp);
    let even = g * 0.5 * o.one_minus_x2;
    let odd = g * 0.5 * p_inv * q_inv;

    let row = |label, scale: f64, top: Complex64, bottom: Complex64| {
        let raw_state = [top * (scale * p_inv), bottom * (scale * q_inv)];
        Branch {
            label,
            raw_state,
            prob: raw_state[0].norm_sqr() + raw_state[1].norm_sqr(),
        }
    };

    let (cpa, cma) = (cp * ap * pp, cm * ap * pp);
    let (cpb, cmb) = (cp * am * qq, cm * am * qq);
    let vac = g * o.x;
    Ok([
        row(OutcomeLabel::OO, vac, eps_sum * cp, eps_sum * cm),
        row(OutcomeLabel::NzeO, even, cpa + cmb, cma + cpb),
        row(OutcomeLabel::ONze, even, cpa - cmb, cma - cpb),
        row(OutcomeLabel::OddO, odd, cma + cpb, cpa + cmb),
        row(OutcomeLabel::OOdd, odd, cma - cpb, cpa - cmb),
    ])
}

/// Bob's state after the correction, both unnormalized and normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TeleportedState {
    pub label: OutcomeLabel,
    pub prob: f64,
    pub raw: [Complex64; 2],
    pub normalized: [Complex64; 2],
}

/// Branches below this probability are treated as impossible.
pub const ZERO_BRANCH_PROB: f64 = 1e-300;

pub fn teleported_state(b: &Branch, u: &CorrectionUnitary) -> Result<TeleportedState> {
    if b.prob.is_nan() || b.prob < ZERO_BRANCH_PROB {
        return Err(Error::ZeroBranch(b.label.as_str()));
    }
    let raw = u.apply(b.raw_state);
    let norm = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
    Ok(TeleportedState {
        label: b.label,
        prob: b.prob,
        raw,
        normalized: [raw[0] / norm, raw[1] / norm],
    })
}

/// `|⟨I|T⟩|²` against the normalized teleported state.
pub fn branch_fidelity(t: &TeleportedState, q: &CatQubit) -> f64 {
    let ov = q.a_plus().conj() * t.normalized[0] + q.a_minus().conj() * t.normalized[1];
    ov.norm_sqr()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchOutcome {
    pub label: OutcomeLabel,
    pub prob: f64,
    pub fidelity: f64,
}

/// Per-branch probabilities and fidelities plus their weighted sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assembly {
    pub branches: Vec<BranchOutcome>,
    pub average: f64,
}

pub fn assemble(q: &CatQubit, p: &EcsParams, s: StrategyId) -> Result<Assembly> {
    let mut branches = Vec::with_capacity(5);
    let mut average = 0.0;
    for b in decompose_branches(q, p)? {
        let fidelity = match teleported_state(&b, &correction_unitary(s, b.label)) {
            Ok(t) => branch_fidelity(&t, q),
            Err(Error::ZeroBranch(_)) => 0.0,
            Err(e) => return Err(e),
        };
        average += b.prob * fidelity;
        branches.push(BranchOutcome {
            label: b.label,
            prob: b.prob,
            fidelity,
        });
    }
    Ok(Assembly { branches, average })
}

/// `Σᵢ Pᵢ Fᵢ` assembled branch by branch.
pub fn assembled_average_fidelity(q: &CatQubit, p: &EcsParams, s: StrategyId) -> Result<f64> {
    Ok(assemble(q, p, s)?.average)
}

/// Closed-form average fidelity for input angles (ω, ξ) under strategy `s`.
pub fn average_fidelity(omega: f64, xi: f64, p: &EcsParams, s: StrategyId) -> Result<f64> {
    // Validates the angle domains.
    angles_to_qubit(omega, xi)?;
    Ok(average_fidelity_unchecked(omega, xi, p, s))
}

pub(crate) fn average_fidelity_unchecked(
    omega: f64,
    xi: f64,
    p: &EcsParams,
    s: StrategyId,
) -> f64 {
    let o = p.alpha().overlaps();
    let (x2, x4) = (o.x2, o.x4);
    let n2 = 1.0 / (1.0 + x4 * p.sin_theta_cos_phi());
    let sc = p.sin_theta_cos_phi();
    let (st, ct) = p.theta().sin_cos();
    let (sw, cw) = omega.sin_cos();
    let (sx, cx) = xi.sin_cos();
    let sw2 = sw * sw;
    let cx2 = cx * cx;
    let skew = cx2 + x4 * sx * sx;
    let shift = 1.0 - x2 * cw;

    let vacuum = 2.0 * x2 * (1.0 + cw) / (1.0 + x2)
        * (1.0
            + x2 * sc
            + cw * (sc + x2)
            + o.one_minus_x4.sqrt() * sw * (ct * cx - st * p.phi().sin() * sx));
    let even_sq = o.one_minus_x2 * o.one_minus_x2;

    let rest = match s {
        StrategyId::S1 => {
            (1.0 + sc) * shift * shift
                + even_sq * (1.0 + sc + sw2 * (1.0 - sc) * skew / o.one_minus_x4)
                + o.one_minus_x4 * (1.0 - sc) * sw2 * cx2
        }
        StrategyId::S2 => {
            even_sq * ((1.0 - sc) * shift * shift / o.one_minus_x4 + (1.0 + sc) * sw2 * cx2)
                + o.one_minus_x4 * (1.0 - sc)
                + sw2 * (1.0 + sc) * skew
        }
    };
    0.25 * n2 * (vacuum + rest)
}

/// Reduced average fidelity on the NMECS slice (θ = π/2, φ = 0), strategy 1.
pub fn nmecs_average_fidelity(alpha_sq: f64, omega: f64) -> f64 {
    let o = crate::cat_algebra::Overlaps::from_mean_photon_number(alpha_sq);
    1.0 - o.x2 * (1.0 + o.x2) * omega.sin().powi(2) / (2.0 * (1.0 + o.x4))
}

/// Reduced average fidelity on the MECS slice (θ = π/2, φ = π), strategy 2.
pub fn mecs_average_fidelity(alpha_sq: f64, omega: f64) -> f64 {
    let o = crate::cat_algebra::Overlaps::from_mean_photon_number(alpha_sq);
    let c2 = (0.5 * omega).cos().powi(2);
    let s2 = (0.5 * omega).sin().powi(2);
    1.0 - 2.0 * o.x2 * c2 * (c2 + o.x2 * s2) / (1.0 + o.x2).powi(2)
}
