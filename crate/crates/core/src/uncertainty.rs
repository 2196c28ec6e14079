//! Uncertainty relations and quantum speed limits.
//!
//! Robertson and Schrödinger bounds for arbitrary observable pairs, the
//! Mandelstam–Tamm time `ΔT(t)`, the orthogonalization time `τ⊥` with the
//! Margolus–Levitin bounds, and the unified speed limit `τ_QSL`.

use std::fmt;

use num_complex::Complex;

use crate::dynamics::{ehrenfest_rate, Evolution, Scenario};
use crate::error::{Error, Result};
use crate::hilbert::{anticommutator, commutator, HermitianObservable, QuantumState, SpectralDecomposition};
use crate::qstat;
use crate::scalar::Scalar;

/// A bound holds when `lhs − rhs ≥ −SLACK_TOL`.
pub const SLACK_TOL: f64 = 1e-10;
/// `ΔH` at or below this makes the Mandelstam–Tamm product undefined.
pub const MT_MIN_ENERGY_SPREAD: f64 = 1e-12;
/// Relative factor of the rate threshold below which `ΔT` is flagged infinite.
pub const RATE_THRESHOLD_FACTOR: f64 = 1e-12;
/// Energy denominators below this make a speed-limit bound infinite.
pub const ENERGY_FLOOR: f64 = 1e-14;
/// Default `|⟨Ψ(0)|Ψ(t)⟩|` accepted as orthogonal.
pub const DEFAULT_TOL_ORTH: f64 = 1e-9;
/// Coarse scan resolution of the `τ⊥` search.
pub const SCAN_POINTS: usize = 10_000;
/// Default horizon in units of the slowest period `2πħ/gap_min`.
pub const HORIZON_PERIODS: f64 = 20.0;

const NORMALIZATION_TOL: f64 = 1e-10;
const BISECTION_REL: f64 = 1e-12;
const BISECTION_MAX_ITER: usize = 200;

/// A real number or `+∞`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Extended<T> {
    Finite(T),
    Infinite,
}

impl<T: Scalar> Extended<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }

    pub fn finite(&self) -> Option<T> {
        match *self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    /// As a float, with `Infinite` mapped to `+inf`.
    pub fn to_scalar(&self) -> T {
        self.finite().unwrap_or_else(T::infinity)
    }

    pub fn map(self, f: impl FnOnce(T) -> T) -> Self {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::Infinite => Extended::Infinite,
        }
    }
}

impl<T: Scalar> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("inf"),
        }
    }
}

/// One instance of an inequality `lhs ≥ rhs`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct BoundCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub slack: T,
    pub satisfied: bool,
}

impl<T: Scalar> BoundCheck<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        let slack = lhs - rhs;
        Self { lhs, rhs, slack, satisfied: slack >= -T::tol(SLACK_TOL) }
    }
}

struct PairMoments<T> {
    delta_a: T,
    delta_b: T,
    covariance: T,
    half_commutator: T,
}

fn pair_moments<T: Scalar>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    psi: &QuantumState<T>,
) -> Result<PairMoments<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let sa = qstat::stats(a, psi)?;
    let sb = qstat::stats(b, psi)?;
    let v = psi.amplitudes();
    let anti = anticommutator(a, b)?.sandwich(v)?;
    let comm = commutator(a, b)?.sandwich(v)?;
    let half = T::lit(0.5);
    Ok(PairMoments {
        delta_a: sa.stddev,
        delta_b: sb.stddev,
        covariance: anti.re * half - sa.mean * sb.mean,
        half_commutator: comm.norm() * half,
    })
}

/// `ΔA·ΔB ≥ ½|⟨[A,B]⟩|`.
pub fn robertson<T: Scalar>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    psi: &QuantumState<T>,
) -> Result<BoundCheck<T>> {
    let m = pair_moments(a, b, psi)?;
    Ok(BoundCheck::new(m.delta_a * m.delta_b, m.half_commutator))
}

/// `ΔA·ΔB ≥ sqrt(|½⟨{A,B}⟩ − ⟨A⟩⟨B⟩|² + |½⟨[A,B]⟩|²)`.
pub fn schrodinger<T: Scalar>(
    a: &HermitianObservable<T>,
    b: &HermitianObservable<T>,
    psi: &QuantumState<T>,
) -> Result<BoundCheck<T>> {
    let m = pair_moments(a, b, psi)?;
    Ok(BoundCheck::new(m.delta_a * m.delta_b, m.covariance.hypot(m.half_commutator)))
}

/// Mandelstam–Tamm quantities of observable `A` at one time.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct MtSample<T> {
    pub t: T,
    pub delta_a: T,
    /// `|d⟨A⟩/dt|`.
    pub rate: T,
    /// `ΔA / |d⟨A⟩/dt|`, infinite where the rate vanishes.
    pub delta_t: Extended<T>,
    /// `ΔE·ΔT`.
    pub product: Extended<T>,
}

/// `1e-12·(E_max − E_min)·‖A‖/ħ`: rates at or below this flag `ΔT` as infinite.
pub fn rate_threshold<T: Scalar>(spectrum: &SpectralDecomposition<T>, a_norm: T, hbar: T) -> T {
    T::tol(RATE_THRESHOLD_FACTOR) * spectrum.spread() * a_norm / hbar
}

/// Precomputed pieces for repeated `ΔT(t)` evaluation.
pub struct MtContext<'a, T> {
    observable: &'a HermitianObservable<T>,
    evolution: Evolution<T>,
    commutator: crate::hilbert::ComplexMatrix<T>,
    delta_e: T,
    threshold: T,
}

impl<'a, T: Scalar> MtContext<'a, T> {
    pub fn new(a: &'a HermitianObservable<T>, s: &Scenario<T>) -> Result<Self> {
        let evolution = s.evolution()?;
        let delta_e = qstat::stats(s.hamiltonian(), s.initial_state())?.stddev;
        if delta_e <= T::tol(MT_MIN_ENERGY_SPREAD) {
            return Err(Error::EnergyEigenstate { delta_h: delta_e.as_f64() });
        }
        let threshold = rate_threshold(evolution.spectrum(), a.spectral_norm()?, s.hbar());
        Ok(Self { observable: a, commutator: commutator(a, s.hamiltonian())?, evolution, delta_e, threshold })
    }

    /// `ΔE = ΔH`, constant along the evolution.
    pub fn delta_e(&self) -> T {
        self.delta_e
    }

    pub fn rate_threshold(&self) -> T {
        self.threshold
    }

    pub fn sample(&self, t: T) -> Result<MtSample<T>> {
        let psi = self.evolution.state_at(t);
        let delta_a = qstat::stats(self.observable, &psi)?.stddev;
        let rate = ehrenfest_rate(&self.commutator, &psi, self.evolution.hbar())?.abs();
        let (delta_t, product) = if rate <= self.threshold {
            (Extended::Infinite, Extended::Infinite)
        } else {
            let dt = delta_a / rate;
            (Extended::Finite(dt), Extended::Finite(self.delta_e * dt))
        };
        Ok(MtSample { t, delta_a, rate, delta_t, product })
    }
}

/// `ΔT(t)` and `ΔE·ΔT(t)` for observable `a`; the rate comes from the
/// commutator expectation, not from finite differences.
pub fn mt_sample<T: Scalar>(a: &HermitianObservable<T>, s: &Scenario<T>, t: T) -> Result<MtSample<T>> {
    MtContext::new(a, s)?.sample(t)
}

/// [`mt_sample`] at every grid time of `s`.
pub fn mt_series<T: Scalar>(a: &HermitianObservable<T>, s: &Scenario<T>) -> Result<Vec<MtSample<T>>> {
    let ctx = MtContext::new(a, s)?;
    s.grid().times().into_iter().map(|t| ctx.sample(t)).collect()
}

fn probabilities<T: Scalar>(spectrum: &SpectralDecomposition<T>, amplitudes: &[Complex<T>]) -> Result<Vec<T>> {
    if amplitudes.len() != spectrum.dim() {
        return Err(Error::DimensionMismatch { expected: spectrum.dim(), found: amplitudes.len() });
    }
    let p: Vec<T> = amplitudes.iter().map(|a| a.norm_sqr()).collect();
    let total = p.iter().fold(T::zero(), |acc, &x| acc + x);
    if (total - T::one()).abs() > T::tol(NORMALIZATION_TOL) {
        return Err(Error::NotNormalized { norm_sqr: total.as_f64() });
    }
    Ok(p)
}

fn overlap_of<T: Scalar>(energies: &[T], p: &[T], t: T, hbar: T) -> Complex<T> {
    energies
        .iter()
        .zip(p)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (&e, &pk)| acc + Complex::from_polar(pk, -e * t / hbar))
}

/// `d|⟨Ψ(0)|Ψ(t)⟩|²/dt`.
fn overlap_sqr_slope<T: Scalar>(energies: &[T], p: &[T], t: T, hbar: T) -> T {
    let mut value = Complex::new(T::zero(), T::zero());
    let mut slope = Complex::new(T::zero(), T::zero());
    for (&e, &pk) in energies.iter().zip(p) {
        let term = Complex::from_polar(pk, -e * t / hbar);
        value = value + term;
        slope = slope + term * Complex::new(T::zero(), -e / hbar);
    }
    let two = T::lit(2.0);
    (value.conj() * slope).re * two
}

/// `⟨Ψ(0)|Ψ(t)⟩ = Σ_k |α_k|² e^{−iE_k t/ħ}`.
pub fn overlap<T: Scalar>(
    spectrum: &SpectralDecomposition<T>,
    amplitudes: &[Complex<T>],
    t: T,
    hbar: T,
) -> Result<Complex<T>> {
    let p = probabilities(spectrum, amplitudes)?;
    Ok(overlap_of(spectrum.eigenvalues(), &p, t, hbar))
}

/// `max(0, 2·max_k|α_k|² − 1)`: a time-independent floor on `|⟨Ψ(0)|Ψ(t)⟩|`.
pub fn overlap_floor<T: Scalar>(amplitudes: &[Complex<T>]) -> T {
    let pmax = amplitudes.iter().fold(T::zero(), |acc, a| acc.max(a.norm_sqr()));
    (pmax + pmax - T::one()).max(T::zero())
}

/// Outcome of the orthogonalization-time search.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Orthogonalization<T> {
    /// Earliest `t > 0` with `|⟨Ψ(0)|Ψ(t)⟩| ≤ tol_orth`.
    Found { tau_perp: T },
    /// `|⟨Ψ(0)|Ψ(t)⟩| ≥ min_overlap_bound > 0` for every `t`.
    NeverOrthogonal { min_overlap_bound: T },
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct OrthogonalizationResult<T> {
    pub kind: Orthogonalization<T>,
    /// Smallest overlap seen by the scan; for an analytic certificate this is
    /// the certified floor itself.
    pub min_observed_overlap: T,
    pub horizon: T,
}

impl<T: Scalar> OrthogonalizationResult<T> {
    pub fn tau_perp(&self) -> Option<T> {
        match self.kind {
            Orthogonalization::Found { tau_perp } => Some(tau_perp),
            Orthogonalization::NeverOrthogonal { .. } => None,
        }
    }
}

/// `20·2πħ/gap_min`, or `None` when no two eigenvalues differ.
pub fn default_horizon<T: Scalar>(spectrum: &SpectralDecomposition<T>, hbar: T) -> Option<T> {
    spectrum.min_gap().map(|gap| T::lit(HORIZON_PERIODS) * T::lit(2.0) * T::PI() * hbar / gap)
}

/// Earliest orthogonalization time.
///
/// When `2·max|α_k|² − 1 > tol_orth` the state provably never becomes
/// orthogonal and no search runs. Otherwise `|⟨Ψ(0)|Ψ(t)⟩|` is scanned on
/// 10⁴ points over `[0, horizon]`; every discrete local minimum is refined
/// by bisection on the slope of `|⟨Ψ(0)|Ψ(t)⟩|²` and the first one at or
/// below `tol_orth` is returned. A search that finds nothing is reported as
/// [`Error::Inconclusive`], never as a certificate.
pub fn ml_tau_perp<T: Scalar>(
    spectrum: &SpectralDecomposition<T>,
    amplitudes: &[Complex<T>],
    hbar: T,
    tol_orth: T,
    horizon: T,
) -> Result<OrthogonalizationResult<T>> {
    if !(tol_orth > T::zero() && tol_orth < T::lit(0.1)) {
        return Err(Error::InvalidParameter(format!("tol_orth must lie in (0, 0.1), got {tol_orth}")));
    }
    if !(horizon > T::zero()) || !horizon.is_finite() {
        return Err(Error::InvalidParameter(format!("horizon must be positive, got {horizon}")));
    }
    if !(hbar > T::zero()) {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    let p = probabilities(spectrum, amplitudes)?;
    let energies = spectrum.eigenvalues();

    let bound = overlap_floor(amplitudes);
    if bound > tol_orth {
        return Ok(OrthogonalizationResult {
            kind: Orthogonalization::NeverOrthogonal { min_overlap_bound: bound },
            min_observed_overlap: bound,
            horizon,
        });
    }

    // All populated levels at one energy: the overlap is a pure phase.
    let floor = T::tol(1e-12) * spectrum.spread().abs().max(T::one());
    let populated: Vec<T> = energies.iter().zip(&p).filter(|(_, &pk)| pk > T::zero()).map(|(&e, _)| e).collect();
    let lo_e = populated.iter().fold(T::infinity(), |acc, &e| acc.min(e));
    let hi_e = populated.iter().fold(T::neg_infinity(), |acc, &e| acc.max(e));
    if hi_e - lo_e <= floor {
        return Ok(OrthogonalizationResult {
            kind: Orthogonalization::NeverOrthogonal { min_overlap_bound: T::one() },
            min_observed_overlap: T::one(),
            horizon,
        });
    }

    let last = T::lit((SCAN_POINTS - 1) as f64);
    let times: Vec<T> = (0..SCAN_POINTS).map(|i| horizon * T::lit(i as f64) / last).collect();
    let values: Vec<T> = times.iter().map(|&t| overlap_of(energies, &p, t, hbar).norm()).collect();
    let mut min_observed = values.iter().fold(T::infinity(), |acc, &v| acc.min(v));

    for i in 1..SCAN_POINTS - 1 {
        if !(values[i] <= values[i - 1] && values[i] <= values[i + 1]) {
            continue;
        }
        let (mut lo, mut hi) = (times[i - 1], times[i + 1]);
        for _ in 0..BISECTION_MAX_ITER {
            if hi - lo <= T::tol(BISECTION_REL) * hi {
                break;
            }
            let mid = (lo + hi) * T::lit(0.5);
            if overlap_sqr_slope(energies, &p, mid, hbar) > T::zero() {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let t_star = (lo + hi) * T::lit(0.5);
        let value = overlap_of(energies, &p, t_star, hbar).norm();
        min_observed = min_observed.min(value);
        if value <= tol_orth {
            return Ok(OrthogonalizationResult {
                kind: Orthogonalization::Found { tau_perp: t_star },
                min_observed_overlap: min_observed,
                horizon,
            });
        }
    }

    Err(Error::Inconclusive { horizon: horizon.as_f64(), min_observed_overlap: min_observed.as_f64() })
}

/// [`ml_tau_perp`] with `tol_orth = 1e-9` and [`default_horizon`]; a spectrum
/// with no distinct eigenvalues is certified never-orthogonal with floor 1.
pub fn ml_tau_perp_default<T: Scalar>(
    spectrum: &SpectralDecomposition<T>,
    amplitudes: &[Complex<T>],
    hbar: T,
) -> Result<OrthogonalizationResult<T>> {
    match default_horizon(spectrum, hbar) {
        Some(horizon) => ml_tau_perp(spectrum, amplitudes, hbar, T::tol(DEFAULT_TOL_ORTH), horizon),
        None => {
            probabilities(spectrum, amplitudes)?;
            Ok(OrthogonalizationResult {
                kind: Orthogonalization::NeverOrthogonal { min_overlap_bound: T::one() },
                min_observed_overlap: T::one(),
                horizon: T::zero(),
            })
        }
    }
}

/// Energy statistics of the amplitude distribution.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct EnergyMoments<T> {
    /// `⟨H⟩` as given.
    pub mean: T,
    /// `⟨H'⟩` with the spectrum shifted so that `E_min = 0`.
    pub mean_above_ground: T,
    /// `ΔH`.
    pub stddev: T,
}

pub fn energy_moments<T: Scalar>(
    spectrum: &SpectralDecomposition<T>,
    amplitudes: &[Complex<T>],
) -> Result<EnergyMoments<T>> {
    let p = probabilities(spectrum, amplitudes)?;
    let energies = spectrum.eigenvalues();
    let e_min = spectrum.min_eigenvalue();
    let mut mean = T::zero();
    let mut above = T::zero();
    for (&e, &pk) in energies.iter().zip(&p) {
        mean = mean + pk * e;
        above = above + pk * (e - e_min);
    }
    let variance = energies.iter().zip(&p).fold(T::zero(), |acc, (&e, &pk)| acc + pk * (e - mean) * (e - mean));
    Ok(EnergyMoments { mean, mean_above_ground: above, stddev: variance.sqrt() })
}

fn half_pi_hbar_over<T: Scalar>(energy: T, hbar: T) -> Extended<T> {
    if energy.abs() < T::tol(ENERGY_FLOOR) {
        Extended::Infinite
    } else {
        Extended::Finite(T::PI() * hbar / (energy + energy))
    }
}

/// Right-hand sides of the Margolus–Levitin bounds on `τ⊥`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct MlBounds<T> {
    /// `πħ/(2ΔH)`.
    pub levi1: Extended<T>,
    /// `πħ/(2⟨H'⟩)` with the spectrum shifted to `E_min = 0`.
    pub levi2: Extended<T>,
    /// `πħ/(2⟨H⟩)` with the Hamiltonian as given; infinite when `⟨H⟩ = 0`
    /// and negative when `⟨H⟩ < 0`.
    pub levi2_unshifted: Extended<T>,
}

pub fn ml_bounds<T: Scalar>(
    spectrum: &SpectralDecomposition<T>,
    amplitudes: &[Complex<T>],
    hbar: T,
) -> Result<MlBounds<T>> {
    let m = energy_moments(spectrum, amplitudes)?;
    Ok(MlBounds {
        levi1: half_pi_hbar_over(m.stddev, hbar),
        levi2: half_pi_hbar_over(m.mean_above_ground, hbar),
        levi2_unshifted: half_pi_hbar_over(m.mean, hbar),
    })
}

/// `τ_QSL = h / (4·min{ΔH, ⟨H'⟩})`, `⟨H'⟩` measured from `E_min = 0`.
/// Infinite for any energy eigenstate.
pub fn qsl_tau<T: Scalar>(
    spectrum: &SpectralDecomposition<T>,
    amplitudes: &[Complex<T>],
    hbar: T,
) -> Result<Extended<T>> {
    let m = energy_moments(spectrum, amplitudes)?;
    Ok(half_pi_hbar_over(m.stddev.min(m.mean_above_ground), hbar))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ComplexMatrix;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sx() -> HermitianObservable<f64> {
        HermitianObservable::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    fn sy() -> HermitianObservable<f64> {
        let m = ComplexMatrix::new(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        HermitianObservable::new(m).unwrap()
    }

    fn sz() -> HermitianObservable<f64> {
        HermitianObservable::from_real_diagonal(&[1.0, -1.0])
    }

    fn qubit_spectrum() -> SpectralDecomposition<f64> {
        sz().scaled(0.5).eigen().unwrap()
    }

    /// Amplitudes in ascending energy order for `α1|↑z⟩ + α2|↓z⟩`.
    fn amps(p_up: f64) -> Vec<Complex<f64>> {
        vec![c((1.0 - p_up).sqrt(), 0.0), c(p_up.sqrt(), 0.0)]
    }

    #[test]
    fn robertson_examples() {
        let up = QuantumState::basis(2, 0);
        let r = robertson(&sz(), &sz(), &up).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        assert!(r.satisfied);
        let r = robertson(&sx(), &sy(), &up).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        assert!(r.slack.abs() < 1e-15);
    }

    #[test]
    fn robertson_for_clock_and_hamiltonian() {
        let h = sz().scaled(0.5);
        let plus = QuantumState::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let r = robertson(&sx(), &h, &plus).unwrap();
        // Δσx = 0 at t = 0 and ⟨σy⟩ = 0.
        assert!(r.lhs.abs() < 1e-15 && r.rhs.abs() < 1e-15 && r.satisfied);
        // Quarter period later both sides equal ½.
        let quarter = QuantumState::new(vec![c(0.5, -0.5), c(0.5, 0.5)]).unwrap();
        let r = robertson(&sx(), &h, &quarter).unwrap();
        assert!((r.lhs - 0.5).abs() < 1e-15 && (r.rhs - 0.5).abs() < 1e-15);
    }

    #[test]
    fn schrodinger_covariance_vanishes_for_pauli_pair() {
        let s = schrodinger(&sx(), &sy(), &QuantumState::basis(2, 0)).unwrap();
        assert!((s.rhs - 1.0).abs() < 1e-15 && s.satisfied);
    }

    #[test]
    fn mismatched_dims_error() {
        let three = HermitianObservable::<f64>::identity(3);
        assert!(robertson(&sx(), &three, &QuantumState::basis(2, 0)).is_err());
    }

    #[test]
    fn bound_check_tolerance() {
        assert!(BoundCheck::new(1.0, 1.0 + 5e-11).satisfied);
        assert!(!BoundCheck::new(1.0, 1.0 + 5e-10).satisfied);
    }

    #[test]
    fn overlap_examples() {
        let spec = qubit_spectrum();
        let a = amps(0.5);
        assert!((overlap(&spec, &a, 0.0, 1.0).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        assert!(overlap(&spec, &a, PI, 1.0).unwrap().norm() < 1e-15);
        assert!(overlap(&spec, &[c(1.0, 0.0), c(1.0, 0.0)], 0.0, 1.0).is_err());
    }

    #[test]
    fn tau_perp_for_maximal_coherence() {
        let spec = qubit_spectrum();
        let r = ml_tau_perp_default(&spec, &amps(0.5), 1.0).unwrap();
        let tau = r.tau_perp().unwrap();
        assert!((tau - PI).abs() < 1e-9, "{tau}");
    }

    #[test]
    fn tau_perp_certificate_for_dominant_level() {
        let spec = qubit_spectrum();
        let r = ml_tau_perp_default(&spec, &amps(0.95), 1.0).unwrap();
        match r.kind {
            Orthogonalization::NeverOrthogonal { min_overlap_bound } => {
                assert!((min_overlap_bound - 0.9).abs() < 1e-12)
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tau_perp_parameter_validation() {
        let spec = qubit_spectrum();
        assert!(ml_tau_perp(&spec, &amps(0.5), 1.0, 0.0, 10.0).is_err());
        assert!(ml_tau_perp(&spec, &amps(0.5), 1.0, 0.2, 10.0).is_err());
        assert!(ml_tau_perp(&spec, &amps(0.5), 1.0, 1e-9, -1.0).is_err());
    }

    #[test]
    fn short_horizon_is_inconclusive() {
        let spec = qubit_spectrum();
        match ml_tau_perp(&spec, &amps(0.5), 1.0, 1e-9, 1.0) {
            Err(Error::Inconclusive { min_observed_overlap, .. }) => assert!(min_observed_overlap > 0.8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_spectrum_never_orthogonalizes() {
        let spec = HermitianObservable::<f64>::identity(2).eigen().unwrap();
        let r = ml_tau_perp_default(&spec, &amps(0.5), 1.0).unwrap();
        assert_eq!(r.kind, Orthogonalization::NeverOrthogonal { min_overlap_bound: 1.0 });
    }

    #[test]
    fn ml_bounds_for_symmetric_qubit() {
        let spec = qubit_spectrum();
        let b = ml_bounds(&spec, &amps(0.5), 1.0).unwrap();
        assert!((b.levi1.finite().unwrap() - PI).abs() < 1e-15);
        assert!((b.levi2.finite().unwrap() - PI).abs() < 1e-15);
        assert_eq!(b.levi2_unshifted, Extended::Infinite);
    }

    #[test]
    fn ml_bounds_for_ground_state() {
        let spec = qubit_spectrum();
        let b = ml_bounds(&spec, &amps(0.0), 1.0).unwrap();
        assert!(b.levi1.is_infinite() && b.levi2.is_infinite());
        assert_eq!(qsl_tau(&spec, &amps(0.0), 1.0).unwrap(), Extended::Infinite);
    }

    #[test]
    fn qsl_examples() {
        let spec = qubit_spectrum();
        let tau = qsl_tau(&spec, &amps(0.5), 1.0).unwrap().finite().unwrap();
        assert!((tau - PI).abs() < 1e-15);
        // |α1|² = 0.95 on the upper level: ΔH = sqrt(0.95·0.05) < ⟨H'⟩ = 0.95.
        let tau = qsl_tau(&spec, &amps(0.95), 1.0).unwrap().finite().unwrap();
        let delta_h = (0.95f64 * 0.05).sqrt();
        assert!((delta_h - 0.2179).abs() < 1e-4);
        assert!((tau - PI / (2.0 * delta_h)).abs() < 1e-12);
    }

    #[test]
    fn extended_display() {
        assert_eq!(Extended::<f64>::Infinite.to_string(), "inf");
        assert_eq!(Extended::Finite(1.5f64).to_string(), "1.5");
        assert!(Extended::<f64>::Infinite.to_scalar().is_infinite());
    }
}
