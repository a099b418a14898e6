//! Brute-force reference path in a truncated photon-number basis.
//!
//! States are explicit Fock-space vectors, the optical network is an
//! explicit two-mode unitary, and photon counting is done by zeroing the
//! non-matching number slices. Nothing here uses the cat-basis closed
//! forms except to label the final qubit coordinates.

use num_complex::Complex64;

use crate::cat_algebra::{CoherentAlpha, ScsCoefficients};
use crate::ecs::{norm_constant, EcsParams};
use crate::error::{Error, Result};
use crate::protocol::{correction_unitary, OutcomeLabel, StrategyId, ZERO_BRANCH_PROB};

/// Poisson tail mass allowed beyond the cutoff.
pub const TAIL_TOL: f64 = 1e-12;

/// Tail mass allowed on the beam-splitter inputs. The splitter mixes every
/// |n, m⟩ with the same total, so inputs are carried well past the output
/// cutoff before the result is truncated.
pub const INPUT_TAIL_TOL: f64 = 1e-28;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `Σ_{n > cutoff} e^{−λ} λⁿ / n!`.
pub fn poisson_tail(mean: f64, cutoff: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    let ln_mean = mean.ln();
    let mut ln_fact: f64 = (1..=cutoff + 1).map(|k| (k as f64).ln()).sum();
    let mut n = cutoff + 1;
    let mut tail = 0.0;
    loop {
        let term = (-mean + n as f64 * ln_mean - ln_fact).exp();
        tail += term;
        if (n as f64) > mean && term < tail * 1e-17 {
            break;
        }
        if n > cutoff + 10_000 {
            break;
        }
        n += 1;
        ln_fact += (n as f64).ln();
    }
    tail
}

/// Smallest cutoff whose Poisson tail for a coherent amplitude of modulus
/// `amplitude` is below [`TAIL_TOL`].
pub fn required_cutoff(amplitude: f64) -> usize {
    let mean = amplitude * amplitude;
    let mut c = 0;
    while poisson_tail(mean, c) >= TAIL_TOL {
        c += 1;
    }
    c
}

/// Cutoff used by [`run_network`] for a given channel amplitude.
pub fn network_cutoff(alpha: &CoherentAlpha) -> usize {
    required_cutoff(std::f64::consts::SQRT_2 * alpha.value().norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    pub amps: Vec<Complex64>,
}

impl FockVector {
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            amps: vec![ZERO; cutoff + 1],
        }
    }

    pub fn vacuum(cutoff: usize) -> Self {
        let mut v = Self::zeros(cutoff);
        v.amps[0] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn cutoff(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &FockVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scaled(&self, c: Complex64) -> FockVector {
        FockVector {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: Complex64, other: &FockVector, b: Complex64) -> FockVector {
        FockVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(u, v)| a * u + b * v)
                .collect(),
        }
    }
}

/// Coherent-state amplitudes without the tail check.
pub(crate) fn coherent_amps(alpha: Complex64, cutoff: usize) -> FockVector {
    let mut amps = Vec::with_capacity(cutoff + 1);
    let mut a = Complex64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    amps.push(a);
    for n in 1..=cutoff {
        a = a * alpha / (n as f64).sqrt();
        amps.push(a);
    }
    FockVector { amps }
}

/// `|α⟩` truncated at `cutoff`; fails if the discarded tail exceeds [`TAIL_TOL`].
pub fn coherent_fock(alpha: Complex64, cutoff: usize) -> Result<FockVector> {
    if poisson_tail(alpha.norm_sqr(), cutoff) >= TAIL_TOL {
        return Err(Error::CutoffTooSmall {
            cutoff,
            required: required_cutoff(alpha.norm()),
            amplitude: alpha.norm(),
        });
    }
    Ok(coherent_amps(alpha, cutoff))
}

/// Orthonormal even/odd cat states at the given cutoff, normalized numerically.
pub fn cat_basis(alpha: &CoherentAlpha, cutoff: usize) -> (FockVector, FockVector) {
    let one = Complex64::new(1.0, 0.0);
    let a = coherent_amps(alpha.value(), cutoff);
    let b = coherent_amps(-alpha.value(), cutoff);
    let even = a.combine(one, &b, one);
    let odd = a.combine(one, &b, -one);
    let even = even.scaled(Complex64::new(even.norm_sqr().sqrt().recip(), 0.0));
    let odd = odd.scaled(Complex64::new(odd.norm_sqr().sqrt().recip(), 0.0));
    (even, odd)
}

/// Coordinates of `v` on the cat basis and the squared norm left outside it.
pub fn fock_to_cat_qubit(v: &FockVector, alpha: &CoherentAlpha) -> (Complex64, Complex64, f64) {
    let (even, odd) = cat_basis(alpha, v.cutoff());
    let b_plus = even.inner(v);
    let b_minus = odd.inner(v);
    let residual = v
        .amps
        .iter()
        .zip(even.amps.iter().zip(&odd.amps))
        .map(|(a, (e, o))| (a - b_plus * e - b_minus * o).norm_sqr())
        .sum();
    (b_plus, b_minus, residual)
}

/// Photon-count class for one detector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountProjector {
    /// n = 0
    Vac,
    /// n even, n ≥ 2
    Nze,
    /// n odd
    Odd,
}

impl CountProjector {
    pub fn contains(self, n: usize) -> bool {
        match self {
            CountProjector::Vac => n == 0,
            CountProjector::Nze => n >= 2 && n.is_multiple_of(2),
            CountProjector::Odd => n % 2 == 1,
        }
    }

    pub fn for_outcome(o: OutcomeLabel) -> (CountProjector, CountProjector) {
        use CountProjector::*;
        match o {
            OutcomeLabel::OO => (Vac, Vac),
            OutcomeLabel::NzeO => (Nze, Vac),
            OutcomeLabel::ONze => (Vac, Nze),
            OutcomeLabel::OddO => (Odd, Vac),
            OutcomeLabel::OOdd => (Vac, Odd),
        }
    }
}

/// Joint state of one to three labelled modes sharing a cutoff.
/// Amplitudes are row-major with the first label most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRegister {
    labels: Vec<u8>,
    dim: usize,
    amps: Vec<Complex64>,
}

impl ModeRegister {
    pub fn from_amps(labels: Vec<u8>, cutoff: usize, amps: Vec<Complex64>) -> Self {
        let dim = cutoff + 1;
        assert!((1..=3).contains(&labels.len()), "1 to 3 modes supported");
        assert_eq!(amps.len(), dim.pow(labels.len() as u32));
        Self { labels, dim, amps }
    }

    /// Tensor product of single-mode vectors with a common cutoff.
    pub fn product(modes: &[(u8, &FockVector)]) -> Self {
        let cutoff = modes[0].1.cutoff();
        assert!(modes.iter().all(|(_, v)| v.cutoff() == cutoff));
        let mut amps = vec![Complex64::new(1.0, 0.0)];
        for (_, v) in modes {
            amps = amps
                .iter()
                .flat_map(|a| v.amps.iter().map(move |b| a * b))
                .collect();
        }
        Self::from_amps(modes.iter().map(|(l, _)| *l).collect(), cutoff, amps)
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn cutoff(&self) -> usize {
        self.dim - 1
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn relabel(mut self, labels: &[u8]) -> Self {
        assert_eq!(labels.len(), self.labels.len());
        self.labels = labels.to_vec();
        self
    }

    fn position(&self, label: u8) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == label)
            .ok_or(Error::ModeIndex(label))
    }

    fn stride(&self, pos: usize) -> usize {
        self.dim.pow((self.labels.len() - 1 - pos) as u32)
    }

    fn digit(&self, flat: usize, pos: usize) -> usize {
        (flat / self.stride(pos)) % self.dim
    }

    /// Drops every component with a photon number above `cutoff` on any mode.
    pub fn truncate(&self, cutoff: usize) -> ModeRegister {
        let dim = cutoff + 1;
        if dim >= self.dim {
            return self.clone();
        }
        let modes = self.labels.len();
        let amps = (0..dim.pow(modes as u32))
            .map(|flat| {
                let mut rest = flat;
                let mut src = 0;
                for pos in (0..modes).rev() {
                    src += (rest % dim) * self.stride(pos);
                    rest /= dim;
                }
                self.amps[src]
            })
            .collect();
        ModeRegister {
            labels: self.labels.clone(),
            dim,
            amps,
        }
    }

    /// Amplitude at the given photon numbers, one per mode in label order.
    pub fn amp(&self, index: &[usize]) -> Complex64 {
        let flat = index.iter().fold(0, |acc, &n| acc * self.dim + n);
        self.amps[flat]
    }

    /// Symmetric beam splitter `|α⟩ᵢ|β⟩ⱼ → |(α+β)/√2⟩ᵢ|(α−β)/√2⟩ⱼ`.
    /// Output components above the cutoff are dropped.
    pub fn apply_beam_splitter(&self, i: u8, j: u8) -> Result<ModeRegister> {
        let (pi, pj) = (self.position(i)?, self.position(j)?);
        if pi == pj {
            return Err(Error::ModeIndex(j));
        }
        let table = BeamSplitterTable::new(self.cutoff());
        let (si, sj) = (self.stride(pi), self.stride(pj));
        let c = self.cutoff();
        let mut out = vec![ZERO; self.amps.len()];
        for base in 0..self.amps.len() {
            if self.digit(base, pi) != 0 || self.digit(base, pj) != 0 {
                continue;
            }
            for n in 0..self.dim {
                for m in 0..self.dim {
                    let a = self.amps[base + n * si + m * sj];
                    if a == ZERO {
                        continue;
                    }
                    let total = n + m;
                    let coeffs = table.get(n, m);
                    for k in total.saturating_sub(c)..=total.min(c) {
                        out[base + k * si + (total - k) * sj] += a * coeffs[k];
                    }
                }
            }
        }
        Ok(ModeRegister {
            labels: self.labels.clone(),
            dim: self.dim,
            amps: out,
        })
    }

    /// `(−1)ⁿ` on mode `i`, mapping `|α⟩ → |−α⟩`.
    pub fn apply_phase_flip(&self, i: u8) -> Result<ModeRegister> {
        let pos = self.position(i)?;
        let amps = self
            .amps
            .iter()
            .enumerate()
            .map(|(flat, a)| if self.digit(flat, pos) % 2 == 1 { -a } else { *a })
            .collect();
        Ok(ModeRegister {
            labels: self.labels.clone(),
            dim: self.dim,
            amps,
        })
    }
}

/// Output amplitudes of `|n, m⟩` through the beam splitter, indexed by the
/// photon number of the first output mode.
struct BeamSplitterTable {
    dim: usize,
    rows: Vec<Vec<f64>>,
}

impl BeamSplitterTable {
    fn new(cutoff: usize) -> Self {
        let dim = cutoff + 1;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // (a† ± b†)/√2 on a vector over k = photons in the first mode.
        let raise = |v: &[f64], sign: f64| {
            let total = v.len() - 1;
            let mut w = vec![0.0; v.len() + 1];
            for (k, &a) in v.iter().enumerate() {
                w[k + 1] += h * ((k + 1) as f64).sqrt() * a;
                w[k] += sign * h * ((total - k + 1) as f64).sqrt() * a;
            }
            w
        };
        let mut rows = vec![Vec::new(); dim * dim];
        rows[0] = vec![1.0];
        for m in 1..dim {
            let prev = &rows[m - 1];
            let s = (m as f64).sqrt().recip();
            rows[m] = raise(prev, -1.0).into_iter().map(|a| a * s).collect();
        }
        for n in 1..dim {
            for m in 0..dim {
                let prev = &rows[(n - 1) * dim + m];
                let s = (n as f64).sqrt().recip();
                rows[n * dim + m] = raise(prev, 1.0).into_iter().map(|a| a * s).collect();
            }
        }
        Self { dim, rows }
    }

    fn get(&self, n: usize, m: usize) -> &[f64] {
        &self.rows[n * self.dim + m]
    }
}

/// The two-mode channel state on modes (1, 2).
pub fn channel_register(p: &EcsParams, cutoff: usize) -> Result<ModeRegister> {
    let alpha = p.alpha().value();
    let plus = coherent_fock(alpha, cutoff)?;
    let minus = coherent_fock(-alpha, cutoff)?;
    let n = norm_constant(p);
    let c = Complex64::new(n * (0.5 * p.theta()).cos(), 0.0);
    let s = Complex64::from_polar(n * (0.5 * p.theta()).sin(), p.phi());
    let pp = ModeRegister::product(&[(1, &plus), (2, &plus)]);
    let mm = ModeRegister::product(&[(1, &minus), (2, &minus)]);
    let amps = pp
        .amps
        .iter()
        .zip(&mm.amps)
        .map(|(a, b)| c * a + s * b)
        .collect();
    Ok(ModeRegister::from_amps(vec![1, 2], cutoff, amps))
}

/// Input SCS on mode 0.
pub fn scs_fock(s: &ScsCoefficients, cutoff: usize) -> Result<FockVector> {
    let alpha = s.alpha().value();
    let plus = coherent_fock(alpha, cutoff)?;
    let minus = coherent_fock(-alpha, cutoff)?;
    Ok(plus.combine(s.eps_plus(), &minus, s.eps_minus()))
}

fn resolve_cutoff(alpha: &CoherentAlpha, cutoff: Option<usize>) -> Result<usize> {
    let required = network_cutoff(alpha);
    match cutoff {
        Some(c) if c < required => Err(Error::CutoffTooSmall {
            cutoff: c,
            required,
            amplitude: std::f64::consts::SQRT_2 * alpha.value().norm(),
        }),
        Some(c) => Ok(c),
        None => Ok(required),
    }
}

fn check_same_alpha(s: &ScsCoefficients, p: &EcsParams) -> Result<()> {
    if s.alpha() != p.alpha() {
        return Err(Error::Domain {
            name: "alpha",
            value: s.alpha().mean_photon_number(),
            domain: "the channel's coherent amplitude",
        });
    }
    Ok(())
}

/// Sends the input (mode 0) and channel (modes 1, 2) through the beam
/// splitter on modes (0, 1). The result carries labels (3, 4, 2).
pub fn run_network(
    s: &ScsCoefficients,
    p: &EcsParams,
    cutoff: Option<usize>,
) -> Result<ModeRegister> {
    check_same_alpha(s, p)?;
    let cutoff = resolve_cutoff(&p.alpha(), cutoff)?;
    let mean = p.alpha().mean_photon_number();
    let mut working = cutoff;
    while poisson_tail(mean, working) >= INPUT_TAIL_TOL {
        working += 1;
    }
    let input = scs_fock(s, working)?;
    let channel = channel_register(p, working)?;
    let amps = input
        .amps
        .iter()
        .flat_map(|a| channel.amps.iter().map(move |b| a * b))
        .collect();
    let reg = ModeRegister::from_amps(vec![0, 1, 2], working, amps);
    Ok(reg
        .apply_beam_splitter(0, 1)?
        .truncate(cutoff)
        .relabel(&[3, 4, 2]))
}

/// Projects modes 3 and 4 onto the given count classes. Returns the
/// outcome probability and Bob's unnormalized mode-2 state, read off as
/// the dominant column of the conditional reduced density matrix.
pub fn measure_branch(
    r: &ModeRegister,
    c3: CountProjector,
    c4: CountProjector,
) -> Result<(f64, FockVector)> {
    let (p3, p4, p2) = (r.position(3)?, r.position(4)?, r.position(2)?);
    let dim = r.dim;
    let (s3, s4, s2) = (r.stride(p3), r.stride(p4), r.stride(p2));
    let mut rho = vec![ZERO; dim * dim];
    for n3 in (0..dim).filter(|&n| c3.contains(n)) {
        for n4 in (0..dim).filter(|&n| c4.contains(n)) {
            let base = n3 * s3 + n4 * s4;
            let v: Vec<Complex64> = (0..dim).map(|k| r.amps[base + k * s2]).collect();
            for a in 0..dim {
                if v[a] == ZERO {
                    continue;
                }
                for b in 0..dim {
                    rho[a * dim + b] += v[a] * v[b].conj();
                }
            }
        }
    }
    let prob: f64 = (0..dim).map(|k| rho[k * dim + k].re).sum();
    let (k, pk) = (0..dim)
        .map(|k| (k, rho[k * dim + k].re))
        .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
    let mut bob = FockVector::zeros(dim - 1);
    if pk > 0.0 {
        let s = pk.sqrt().recip();
        for a in 0..dim {
            bob.amps[a] = rho[a * dim + k] * s;
        }
    }
    Ok((prob, bob))
}

/// One outcome as seen by the oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleBranch {
    pub label: OutcomeLabel,
    pub prob: f64,
    pub bob: FockVector,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
    pub residual: f64,
}

/// Everything the oracle needs to score both strategies for one input.
#[derive(Debug, Clone)]
pub struct OracleRun {
    pub alpha: CoherentAlpha,
    pub input: FockVector,
    pub output: ModeRegister,
    pub branches: Vec<OracleBranch>,
}

impl OracleRun {
    pub fn new(s: &ScsCoefficients, p: &EcsParams, cutoff: Option<usize>) -> Result<Self> {
        let output = run_network(s, p, cutoff)?;
        let alpha = p.alpha();
        let input = scs_fock(s, output.cutoff())?;
        let branches = OutcomeLabel::ALL
            .iter()
            .map(|&label| {
                let (c3, c4) = CountProjector::for_outcome(label);
                let (prob, bob) = measure_branch(&output, c3, c4)?;
                let (b_plus, b_minus, residual) = fock_to_cat_qubit(&bob, &alpha);
                Ok(OracleBranch {
                    label,
                    prob,
                    bob,
                    b_plus,
                    b_minus,
                    residual,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alpha,
            input,
            output,
            branches,
        })
    }

    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|b| b.prob).sum()
    }

    /// `Σᵢ Pᵢ |⟨I|Tᵢ⟩|² / ⟨Tᵢ|Tᵢ⟩`, with overlaps taken in Fock space.
    pub fn average_fidelity(&self, strategy: StrategyId) -> f64 {
        let (even, odd) = cat_basis(&self.alpha, self.input.cutoff());
        self.branches
            .iter()
            .filter(|b| b.prob >= ZERO_BRANCH_PROB)
            .map(|b| {
                let [t_plus, t_minus] =
                    correction_unitary(strategy, b.label).apply([b.b_plus, b.b_minus]);
                let t = even.combine(t_plus, &odd, t_minus);
                let norm = t.norm_sqr();
                if norm == 0.0 {
                    return 0.0;
                }
                b.prob * self.input.inner(&t).norm_sqr() / norm
            })
            .sum()
    }
}

pub fn oracle_average_fidelity(
    s: &ScsCoefficients,
    p: &EcsParams,
    strategy: StrategyId,
    cutoff: Option<usize>,
) -> Result<f64> {
    Ok(OracleRun::new(s, p, cutoff)?.average_fidelity(strategy))
}
