//! Seeded cross-validation of the closed forms against each other and
//! against the Fock-space oracle.

use std::f64::consts::{PI, TAU};
use std::fmt::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::{fidelity_gap, fmin_mecs_closed, fmin_nmecs_closed};
use crate::cat_algebra::{angles_to_qubit, qubit_to_epsilon};
use crate::ecs::{concurrence_closed, concurrence_numeric, qubit_amplitudes, EcsParams};
use crate::error::Result;
use crate::fock_oracle::{channel_register, network_cutoff, OracleRun};
use crate::format::fmt_sig;
use crate::protocol::{assembled_average_fidelity, average_fidelity, decompose_branches, StrategyId};

pub const NORM_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-12;
pub const CLOSED_FORM_TOL: f64 = 1e-12;
pub const ORACLE_FIDELITY_TOL: f64 = 1e-8;
pub const ORACLE_BRANCH_TOL: f64 = 1e-9;
pub const CONCURRENCE_TOL: f64 = 1e-12;
pub const GAP_TOL: f64 = 1e-12;

const STRATEGIES: [StrategyId; 2] = [StrategyId::S1, StrategyId::S2];

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub count: usize,
    /// Pins |α|² for every tuple instead of drawing it from [0.1, 3].
    pub alpha_sq: Option<f64>,
    /// Forces the oracle cutoff.
    pub cutoff: Option<usize>,
    pub oracle_tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            count: 100,
            alpha_sq: None,
            cutoff: None,
            oracle_tol: ORACLE_FIDELITY_TOL,
        }
    }
}

/// One randomized test point: channel (|α|², θ, φ) and input (ω, ξ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tuple {
    pub alpha_sq: f64,
    pub theta: f64,
    pub phi: f64,
    pub omega: f64,
    pub xi: f64,
}

impl Tuple {
    pub fn params(&self) -> Result<EcsParams> {
        EcsParams::from_mean_photon_number(self.alpha_sq, self.theta, self.phi)
    }

    fn describe(&self) -> String {
        format!(
            "alpha_sq={} theta={} phi={} omega={} xi={}",
            fmt_sig(self.alpha_sq),
            fmt_sig(self.theta),
            fmt_sig(self.phi),
            fmt_sig(self.omega),
            fmt_sig(self.xi)
        )
    }
}

pub fn random_tuples(seed: u64, count: usize, alpha_sq: Option<f64>) -> Vec<Tuple> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let drawn = rng.gen_range(0.1..=3.0);
            Tuple {
                alpha_sq: alpha_sq.unwrap_or(drawn),
                theta: rng.gen_range(0.0..=PI),
                phi: rng.gen_range(0.0..TAU),
                omega: rng.gen_range(0.0..=PI),
                xi: rng.gen_range(0.0..TAU),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_error: f64,
    pub passed: bool,
    /// Extra figures printed after the main error.
    pub detail: Option<String>,
    /// Worst tuple or error diagnosis when the suite fails.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub count: usize,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "seed {} tuples {}", self.seed, self.count).unwrap();
        for s in &self.suites {
            write!(
                out,
                "{:<24} {} max_err={} tol={}",
                s.name,
                if s.passed { "PASS" } else { "FAIL" },
                fmt_sig(s.max_error),
                fmt_sig(s.tolerance)
            )
            .unwrap();
            if let Some(d) = &s.detail {
                write!(out, " {d}").unwrap();
            }
            out.push('\n');
            if let Some(f) = &s.failure {
                writeln!(out, "    {f}").unwrap();
            }
        }
        writeln!(out, "{}", if self.passed() { "ALL PASS" } else { "FAILED" }).unwrap();
        out
    }
}

/// Running maximum that remembers the first index attaining it.
#[derive(Debug, Clone, Copy, Default)]
struct Worst {
    value: f64,
    index: Option<usize>,
}

impl Worst {
    fn push(&mut self, index: usize, value: f64) {
        if self.index.is_none() || value > self.value || value.is_nan() && !self.value.is_nan() {
            self.value = value;
            self.index = Some(index);
        }
    }
}

fn suite(
    name: &'static str,
    tolerance: f64,
    tuples: &[Tuple],
    errors: Vec<Result<f64>>,
) -> SuiteReport {
    let mut worst = Worst::default();
    for (i, e) in errors.iter().enumerate() {
        match e {
            Ok(v) => worst.push(i, *v),
            Err(err) => {
                return SuiteReport {
                    name,
                    tolerance,
                    max_error: f64::NAN,
                    passed: false,
                    detail: None,
                    failure: Some(format!("{err} at {}", tuples[i].describe())),
                }
            }
        }
    }
    let passed = worst.value <= tolerance;
    SuiteReport {
        name,
        tolerance,
        max_error: worst.value,
        passed,
        detail: None,
        failure: (!passed).then(|| {
            let i = worst.index.unwrap_or(0);
            format!("worst tuple: {}", tuples[i].describe())
        }),
    }
}

fn normalization_error(t: &Tuple, cutoff: Option<usize>) -> Result<f64> {
    let p = t.params()?;
    let q = angles_to_qubit(t.omega, t.xi)?;
    let s = qubit_to_epsilon(&q, p.alpha())?;
    let cut = cutoff.unwrap_or_else(|| network_cutoff(&p.alpha()));
    let channel = channel_register(&p, cut)?;
    Ok([
        (s.norm_sqr() - 1.0).abs(),
        (qubit_amplitudes(&p).norm_sqr() - 1.0).abs(),
        (channel.norm_sqr() - 1.0).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max))
}

fn completeness_error(t: &Tuple) -> Result<f64> {
    let q = angles_to_qubit(t.omega, t.xi)?;
    let total: f64 = decompose_branches(&q, &t.params()?)?.iter().map(|b| b.prob).sum();
    Ok((total - 1.0).abs())
}

fn closed_form_error(t: &Tuple) -> Result<f64> {
    let p = t.params()?;
    let q = angles_to_qubit(t.omega, t.xi)?;
    let mut worst: f64 = 0.0;
    for s in STRATEGIES {
        let closed = average_fidelity(t.omega, t.xi, &p, s)?;
        worst = worst.max((closed - assembled_average_fidelity(&q, &p, s)?).abs());
    }
    Ok(worst)
}

/// Largest difference between two cat-basis vectors after aligning their
/// global phase.
pub fn phase_aligned_distance(a: [Complex64; 2], b: [Complex64; 2]) -> f64 {
    let ov = b[0].conj() * a[0] + b[1].conj() * a[1];
    let phase = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    (a[0] - b[0] * phase).norm().max((a[1] - b[1] * phase).norm())
}

/// (fidelity error over both strategies, worst branch probability/state error).
pub fn oracle_errors(t: &Tuple, cutoff: Option<usize>) -> Result<(f64, f64)> {
    let p = t.params()?;
    let q = angles_to_qubit(t.omega, t.xi)?;
    let s = qubit_to_epsilon(&q, p.alpha())?;
    let run = OracleRun::new(&s, &p, cutoff)?;

    let mut fid: f64 = 0.0;
    for strategy in STRATEGIES {
        let analytic = average_fidelity(t.omega, t.xi, &p, strategy)?;
        fid = fid.max((analytic - run.average_fidelity(strategy)).abs());
    }

    let mut branch: f64 = (run.total_probability() - 1.0).abs();
    for (a, o) in decompose_branches(&q, &p)?.iter().zip(&run.branches) {
        debug_assert_eq!(a.label, o.label);
        branch = branch
            .max((a.prob - o.prob).abs())
            .max(phase_aligned_distance(a.raw_state, [o.b_plus, o.b_minus]))
            .max(o.residual);
    }
    Ok((fid, branch))
}

fn concurrence_error(t: &Tuple) -> Result<f64> {
    let p = t.params()?;
    Ok((concurrence_closed(&p) - concurrence_numeric(&qubit_amplitudes(&p))?).abs())
}

fn gap_error(t: &Tuple) -> Result<f64> {
    let a = t.alpha_sq;
    Ok((fidelity_gap(a) - (fmin_nmecs_closed(a) - fmin_mecs_closed(a))).abs())
}

pub fn run(cfg: &VerifyConfig) -> VerifyReport {
    let tuples = random_tuples(cfg.seed, cfg.count, cfg.alpha_sq);
    let each = |f: &(dyn Fn(&Tuple) -> Result<f64> + Sync)| -> Vec<Result<f64>> {
        tuples.par_iter().map(f).collect()
    };

    let oracle: Vec<Result<(f64, f64)>> = tuples
        .par_iter()
        .map(|t| oracle_errors(t, cfg.cutoff))
        .collect();
    let mut oracle_suite = suite(
        "oracle_equivalence",
        cfg.oracle_tol,
        &tuples,
        oracle.iter().map(|r| r.clone().map(|(f, _)| f)).collect(),
    );
    if oracle_suite.failure.is_none() || oracle_suite.max_error.is_finite() {
        let branch = suite(
            "oracle_branches",
            ORACLE_BRANCH_TOL,
            &tuples,
            oracle.iter().map(|r| r.clone().map(|(_, b)| b)).collect(),
        );
        oracle_suite.detail = Some(format!(
            "branch_err={} branch_tol={}",
            fmt_sig(branch.max_error),
            fmt_sig(ORACLE_BRANCH_TOL)
        ));
        if !branch.passed {
            oracle_suite.passed = false;
            oracle_suite.failure = branch.failure;
        }
    }

    let suites = vec![
        suite(
            "normalization",
            NORM_TOL,
            &tuples,
            each(&|t| normalization_error(t, cfg.cutoff)),
        ),
        suite(
            "probability_completeness",
            COMPLETENESS_TOL,
            &tuples,
            each(&completeness_error),
        ),
        suite(
            "closed_vs_branches",
            CLOSED_FORM_TOL,
            &tuples,
            each(&closed_form_error),
        ),
        oracle_suite,
        suite(
            "concurrence",
            CONCURRENCE_TOL,
            &tuples,
            each(&concurrence_error),
        ),
        suite("gap_identity", GAP_TOL, &tuples, each(&gap_error)),
    ];
    VerifyReport {
        seed: cfg.seed,
        count: cfg.count,
        suites,
    }
}
