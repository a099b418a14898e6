//! Worst-case (minimum over input states) average fidelity, its closed
//! forms on the two featured channels, and the sweep data behind the
//! fidelity surfaces and gap curve.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::cat_algebra::Overlaps;
use crate::ecs::{concurrence_closed, EcsParams};
use crate::error::{Error, Result};
use crate::protocol::{average_fidelity_unchecked, select_strategy, StrategyId};

/// Coarse grid resolution over ω ∈ [0, π] (inclusive).
pub const OMEGA_GRID: usize = 61;
/// Coarse grid resolution over ξ ∈ [0, 2π) (half-open).
pub const XI_GRID: usize = 121;
/// Refinement stops once both coordinate brackets are narrower than this.
pub const REFINE_WIDTH: f64 = 1e-7;
/// Mean photon numbers of the three fidelity-surface panels.
pub const SURFACE_ALPHA_SQ: [f64; 3] = [0.5, 1.0, 1.5];

// Moves smaller than this are treated as ties, so degenerate directions
// keep the earliest grid point.
const IMPROVEMENT: f64 = 1e-15;
const MAX_CYCLES: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinFidelityResult {
    pub f_min: f64,
    pub omega_star: f64,
    pub xi_star: f64,
    pub strategy: StrategyId,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub alpha_sq: f64,
    pub theta: f64,
    pub phi: f64,
    pub f_min: f64,
    pub omega_star: f64,
    pub xi_star: f64,
    pub concurrence: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapPoint {
    pub alpha_sq: f64,
    pub f1: f64,
    pub f2: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapCurve {
    pub points: Vec<GapPoint>,
    pub argmax: usize,
}

impl GapCurve {
    pub fn peak(&self) -> GapPoint {
        self.points[self.argmax]
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Grid search over ω ∈ [0, π] × ξ ∈ [0, 2π), then per-axis golden-section
/// coordinate descent from the best grid point.
pub(crate) fn minimize_on_sphere(f: impl Fn(f64, f64) -> f64) -> (f64, f64, f64) {
    let d_omega = PI / (OMEGA_GRID - 1) as f64;
    let d_xi = TAU / XI_GRID as f64;

    let (mut omega, mut xi, mut best) = (0.0, 0.0, f64::INFINITY);
    for i in 0..OMEGA_GRID {
        let w = i as f64 * d_omega;
        for j in 0..XI_GRID {
            let x = j as f64 * d_xi;
            let v = f(w, x);
            if v < best - IMPROVEMENT {
                (omega, xi, best) = (w, x, v);
            }
        }
    }

    let (mut h_omega, mut h_xi) = (d_omega, d_xi);
    for _ in 0..MAX_CYCLES {
        if h_omega < REFINE_WIDTH && h_xi < REFINE_WIDTH {
            break;
        }

        let mut moved = 0.0;
        if h_omega >= REFINE_WIDTH {
            let lo = (omega - h_omega).max(0.0);
            let hi = (omega + h_omega).min(PI);
            let (w, v) = golden_section(|t| f(t, xi), lo, hi, 1e-3 * h_omega);
            if v < best - IMPROVEMENT {
                moved = (w - omega).abs();
                (omega, best) = (w, v);
            }
            if moved < 0.25 * h_omega {
                h_omega *= 0.5;
            }
        }

        let mut moved = 0.0;
        if h_xi >= REFINE_WIDTH {
            let (x, v) = golden_section(|t| f(omega, t), xi - h_xi, xi + h_xi, 1e-3 * h_xi);
            if v < best - IMPROVEMENT {
                moved = (x - xi).abs();
                (xi, best) = (x, v);
            }
            if moved < 0.25 * h_xi {
                h_xi *= 0.5;
            }
        }
    }
    (best, omega, xi.rem_euclid(TAU))
}

/// Minimum of the average fidelity over all input qubits, using the
/// strategy selected by φ.
pub fn min_average_fidelity(p: &EcsParams) -> Result<MinFidelityResult> {
    Ok(min_average_fidelity_with(p, select_strategy(p.phi())))
}

/// As [`min_average_fidelity`] with an explicitly chosen strategy.
pub fn min_average_fidelity_with(p: &EcsParams, strategy: StrategyId) -> MinFidelityResult {
    let (f_min, omega_star, xi_star) =
        minimize_on_sphere(|w, x| average_fidelity_unchecked(w, x, p, strategy));
    MinFidelityResult {
        f_min,
        omega_star,
        xi_star,
        strategy,
    }
}

/// Worst-case fidelity on the NMECS channel (θ = π/2, φ = 0):
/// `1 − x²(1 + x²) / [2(1 + x⁴)]`. Finite for every `alpha_sq ≥ 0`.
pub fn fmin_nmecs_closed(alpha_sq: f64) -> f64 {
    let o = Overlaps::from_mean_photon_number(alpha_sq);
    1.0 - o.x2 * (1.0 + o.x2) / (2.0 * (1.0 + o.x4))
}

/// Worst-case fidelity on the MECS channel (θ = π/2, φ = π):
/// `1 − 2x² / (1 + x²)²`.
pub fn fmin_mecs_closed(alpha_sq: f64) -> f64 {
    let o = Overlaps::from_mean_photon_number(alpha_sq);
    1.0 - 2.0 * o.x2 / (1.0 + o.x2).powi(2)
}

/// `D = x²(3 + x⁴)(1 − x²) / [2(1 + x⁴)(1 + x²)²]`.
pub fn fidelity_gap(alpha_sq: f64) -> f64 {
    let o = Overlaps::from_mean_photon_number(alpha_sq);
    o.x2 * (3.0 + o.x4) * o.one_minus_x2 / (2.0 * (1.0 + o.x4) * (1.0 + o.x2).powi(2))
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| {
                if k == n - 1 {
                    b
                } else {
                    a + (b - a) * k as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// θ ∈ [0, π] and φ ∈ [0, 2π] grids, both inclusive.
pub fn surface_grids(n_theta: usize, n_phi: usize) -> (Vec<f64>, Vec<f64>) {
    (linspace(0.0, PI, n_theta), linspace(0.0, TAU, n_phi))
}

/// One record per (θ, φ) grid point, θ-major. Points are evaluated in
/// parallel; output order follows the grid.
pub fn sweep_surface(alpha_sq: f64, theta_grid: &[f64], phi_grid: &[f64]) -> Result<Vec<SweepRecord>> {
    if theta_grid.is_empty() || phi_grid.is_empty() {
        return Err(Error::Domain {
            name: "grid size",
            value: 0.0,
            domain: "at least one point per axis",
        });
    }
    let params = theta_grid
        .iter()
        .flat_map(|&t| phi_grid.iter().map(move |&f| (t, f)))
        .map(|(t, f)| EcsParams::from_mean_photon_number(alpha_sq, t, f))
        .collect::<Result<Vec<_>>>()?;

    Ok(params
        .par_iter()
        .map(|p| {
            let m = min_average_fidelity_with(p, select_strategy(p.phi()));
            SweepRecord {
                alpha_sq,
                theta: p.theta(),
                phi: p.phi(),
                f_min: m.f_min,
                omega_star: m.omega_star,
                xi_star: m.xi_star,
                concurrence: concurrence_closed(p),
            }
        })
        .collect())
}

/// Samples the two worst-case fidelities and their gap at `steps` evenly
/// spaced mean photon numbers in `[from, to]`.
pub fn gap_curve(from: f64, to: f64, steps: usize) -> Result<GapCurve> {
    if !(from.is_finite() && from >= 0.0) {
        return Err(Error::Domain {
            name: "alpha_sq range start",
            value: from,
            domain: "[0, inf)",
        });
    }
    if !(to.is_finite() && to > from) {
        return Err(Error::Domain {
            name: "alpha_sq range end",
            value: to,
            domain: "(start, inf)",
        });
    }
    if steps < 2 {
        return Err(Error::Domain {
            name: "steps",
            value: steps as f64,
            domain: "at least 2",
        });
    }
    let points: Vec<GapPoint> = linspace(from, to, steps)
        .into_iter()
        .map(|a| GapPoint {
            alpha_sq: a,
            f1: fmin_nmecs_closed(a),
            f2: fmin_mecs_closed(a),
            d: fidelity_gap(a),
        })
        .collect();
    let argmax = points
        .iter()
        .enumerate()
        .fold(0, |best, (k, pt)| if pt.d > points[best].d { k } else { best });
    Ok(GapCurve { points, argmax })
}
