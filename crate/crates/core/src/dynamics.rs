//! Closed-system evolution in the energy eigenbasis.
//!
//! A [`Scenario`] is diagonalized once; every sampled state is then
//! `Σ_k α_k(0) e^{−iE_k t/ħ} |E_k⟩`, so no integrator error accumulates along
//! the time grid.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{inner, HermitianObservable, QuantumState, SpectralDecomposition};
use crate::qstat::{self, coherence_of_amplitudes, CoherenceSummary, StatSummary};
use crate::scalar::Scalar;

/// Absolute drift tolerance for conserved quantities.
pub const CONSERVATION_TOL: f64 = 1e-10;
/// Tolerance for offset-invariance comparisons.
pub const OFFSET_TOL: f64 = 1e-10;
/// Allowed imaginary part of `⟨[A,H]⟩/(iħ)`.
pub const EHRENFEST_RESIDUE_TOL: f64 = 1e-9;
/// Number of samples in the default grid.
pub const DEFAULT_STEPS: usize = 1000;

/// Uniform sampling of `[start, stop]` with `steps` points, both ends included.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct TimeGrid<T> {
    pub start: T,
    pub stop: T,
    pub steps: usize,
}

impl<T: Scalar> TimeGrid<T> {
    pub fn new(start: T, stop: T, steps: usize) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite()) || !(start < stop) {
            return Err(Error::InvalidScenario(format!("time grid needs finite start < stop, got [{start}, {stop}]")));
        }
        if steps < 2 {
            return Err(Error::InvalidScenario(format!("time grid needs at least 2 steps, got {steps}")));
        }
        Ok(Self { start, stop, steps })
    }

    /// Spacing between consecutive samples.
    pub fn step(&self) -> T {
        (self.stop - self.start) / T::lit((self.steps - 1) as f64)
    }

    pub fn times(&self) -> Vec<T> {
        let span = self.stop - self.start;
        let last = T::lit((self.steps - 1) as f64);
        (0..self.steps)
            .map(|k| if k + 1 == self.steps { self.stop } else { self.start + span * T::lit(k as f64) / last })
            .collect()
    }
}

/// `[0, 4π/ω_char]` with `ω_char = (E_max − E_min)/ħ`, i.e. two periods of the
/// slowest full-spectrum oscillation. A fully degenerate spectrum has no
/// oscillation; it gets `[0, 4π]`.
pub fn default_grid<T: Scalar>(spectrum: &SpectralDecomposition<T>, hbar: T) -> TimeGrid<T> {
    let spread = spectrum.spread();
    let four_pi = T::lit(4.0) * T::PI();
    let stop = if spread > T::zero() { four_pi * hbar / spread } else { four_pi };
    TimeGrid { start: T::zero(), stop, steps: DEFAULT_STEPS }
}

/// `1e-4` of the characteristic period `2πħ/(E_max − E_min)`, or `1e-4` for a
/// degenerate spectrum.
pub fn default_fd_step<T: Scalar>(spectrum: &SpectralDecomposition<T>, hbar: T) -> T {
    let spread = spectrum.spread();
    if spread > T::zero() {
        T::lit(1e-4) * T::lit(2.0) * T::PI() * hbar / spread
    } else {
        T::lit(1e-4)
    }
}

/// A closed quantum system with the quantities to record along its evolution.
#[derive(Clone, Debug)]
pub struct Scenario<T> {
    hbar: T,
    hamiltonian: HermitianObservable<T>,
    initial_state: QuantumState<T>,
    grid: TimeGrid<T>,
    observables: Vec<(String, HermitianObservable<T>)>,
}

impl<T: Scalar> Scenario<T> {
    pub fn new(
        hbar: T,
        hamiltonian: HermitianObservable<T>,
        initial_state: QuantumState<T>,
        grid: TimeGrid<T>,
        observables: Vec<(String, HermitianObservable<T>)>,
    ) -> Result<Self> {
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(Error::InvalidScenario(format!("hbar must be positive, got {hbar}")));
        }
        let grid = TimeGrid::new(grid.start, grid.stop, grid.steps)?;
        let n = hamiltonian.dim();
        if initial_state.dim() != n {
            return Err(Error::InvalidScenario(format!(
                "initial state has dimension {}, Hamiltonian has {n}",
                initial_state.dim()
            )));
        }
        if !initial_state.is_normalized(T::tol(qstat::STATE_NORM_TOL)) {
            return Err(Error::NotNormalized { norm_sqr: initial_state.norm_sqr().as_f64() });
        }
        for (i, (name, obs)) in observables.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidScenario("observable names must be nonempty".into()));
            }
            if observables[..i].iter().any(|(other, _)| other == name) {
                return Err(Error::InvalidScenario(format!("duplicate observable name `{name}`")));
            }
            if obs.dim() != n {
                return Err(Error::InvalidScenario(format!(
                    "observable `{name}` has dimension {}, Hamiltonian has {n}",
                    obs.dim()
                )));
            }
        }
        Ok(Self { hbar, hamiltonian, initial_state, grid, observables })
    }

    /// Like [`Scenario::new`] with [`default_grid`].
    pub fn with_default_grid(
        hbar: T,
        hamiltonian: HermitianObservable<T>,
        initial_state: QuantumState<T>,
        observables: Vec<(String, HermitianObservable<T>)>,
    ) -> Result<Self> {
        let grid = default_grid(&hamiltonian.eigen()?, hbar);
        Self::new(hbar, hamiltonian, initial_state, grid, observables)
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn hamiltonian(&self) -> &HermitianObservable<T> {
        &self.hamiltonian
    }

    pub fn initial_state(&self) -> &QuantumState<T> {
        &self.initial_state
    }

    pub fn grid(&self) -> TimeGrid<T> {
        self.grid
    }

    pub fn observables(&self) -> &[(String, HermitianObservable<T>)] {
        &self.observables
    }

    pub fn observable(&self, name: &str) -> Result<&HermitianObservable<T>> {
        self.observables
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, o)| o)
            .ok_or_else(|| Error::UnknownObservable(name.to_string()))
    }

    /// Same scenario with a different grid.
    pub fn with_grid(&self, grid: TimeGrid<T>) -> Result<Self> {
        let grid = TimeGrid::new(grid.start, grid.stop, grid.steps)?;
        Ok(Self { grid, ..self.clone() })
    }

    /// Same scenario with a different Hamiltonian of the same dimension.
    pub fn with_hamiltonian(&self, hamiltonian: HermitianObservable<T>) -> Result<Self> {
        Self::new(self.hbar, hamiltonian, self.initial_state.clone(), self.grid, self.observables.clone())
    }

    /// Diagonalizes the Hamiltonian and projects the initial state.
    pub fn evolution(&self) -> Result<Evolution<T>> {
        let spectrum = self.hamiltonian.eigen()?;
        let amplitudes = energy_amplitudes(&self.initial_state, &spectrum)?;
        Ok(Evolution { spectrum, amplitudes, hbar: self.hbar })
    }
}

/// A diagonalized scenario: spectrum plus initial energy amplitudes.
#[derive(Clone, Debug)]
pub struct Evolution<T> {
    spectrum: SpectralDecomposition<T>,
    amplitudes: Vec<Complex<T>>,
    hbar: T,
}

impl<T: Scalar> Evolution<T> {
    pub fn spectrum(&self) -> &SpectralDecomposition<T> {
        &self.spectrum
    }

    /// `α_k(0)` in ascending energy order.
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    /// `|Ψ(t)⟩`.
    pub fn state_at(&self, t: T) -> QuantumState<T> {
        self.spectrum.evolve_amplitudes(&self.amplitudes, t, self.hbar)
    }

    /// `α_k(t) = α_k(0) e^{−iE_k t/ħ}`.
    pub fn amplitudes_at(&self, t: T) -> Vec<Complex<T>> {
        self.amplitudes
            .iter()
            .zip(self.spectrum.eigenvalues())
            .map(|(&a, &e)| a * Complex::from_polar(T::one(), -e * t / self.hbar))
            .collect()
    }
}

/// `α_k = ⟨E_k|Ψ(0)⟩`.
pub fn energy_amplitudes<T: Scalar>(
    psi0: &QuantumState<T>,
    spectrum: &SpectralDecomposition<T>,
) -> Result<Vec<Complex<T>>> {
    spectrum.amplitudes_of(psi0)
}

/// Sampled evolution of a scenario.
#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub hbar: T,
    /// Energy eigenvalues, ascending.
    pub energies: Vec<T>,
    pub series: Vec<(String, Vec<StatSummary<T>>)>,
    pub energy: Vec<StatSummary<T>>,
    pub coherence: Vec<CoherenceSummary<T>>,
    pub states: Option<Vec<QuantumState<T>>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn series(&self, name: &str) -> Result<&[StatSummary<T>]> {
        self.series
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, s)| s.as_slice())
            .ok_or_else(|| Error::UnknownObservable(name.to_string()))
    }

    pub fn means(&self, name: &str) -> Result<Vec<T>> {
        Ok(self.series(name)?.iter().map(|s| s.mean).collect())
    }
}

/// Samples every observable, the energy statistics and the energy coherence
/// on the scenario grid.
pub fn evolve<T: Scalar>(s: &Scenario<T>) -> Result<Trajectory<T>> {
    run(s, false)
}

/// [`evolve`], also keeping the state at every sample.
pub fn evolve_with_states<T: Scalar>(s: &Scenario<T>) -> Result<Trajectory<T>> {
    run(s, true)
}

fn run<T: Scalar>(s: &Scenario<T>, keep_states: bool) -> Result<Trajectory<T>> {
    let evo = s.evolution()?;
    let times = s.grid.times();
    let mut series: Vec<(String, Vec<StatSummary<T>>)> =
        s.observables.iter().map(|(n, _)| (n.clone(), Vec::with_capacity(times.len()))).collect();
    let mut energy = Vec::with_capacity(times.len());
    let mut coherence = Vec::with_capacity(times.len());
    let mut states = keep_states.then(|| Vec::with_capacity(times.len()));

    for &t in &times {
        let psi = evo.state_at(t);
        for ((_, obs), (_, out)) in s.observables.iter().zip(series.iter_mut()) {
            out.push(qstat::stats(obs, &psi)?);
        }
        energy.push(qstat::stats(&s.hamiltonian, &psi)?);
        coherence.push(coherence_of_amplitudes(&evo.spectrum.amplitudes_of(&psi)?));
        if let Some(states) = states.as_mut() {
            states.push(psi);
        }
    }

    Ok(Trajectory {
        times,
        hbar: s.hbar,
        energies: evo.spectrum.eigenvalues().to_vec(),
        series,
        energy,
        coherence,
        states,
    })
}

/// Largest drift from the initial value of each conserved quantity.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct ConservationReport<T> {
    pub energy_mean_drift: T,
    pub energy_variance_drift: T,
    pub energy_stddev_drift: T,
    pub coherence_drift: T,
    pub predictability_drift: T,
    pub tolerance: T,
    pub passed: bool,
}

impl<T: Scalar> ConservationReport<T> {
    /// `(name, drift)` pairs in a fixed order.
    pub fn drifts(&self) -> [(&'static str, T); 5] {
        [
            ("energy_mean", self.energy_mean_drift),
            ("energy_variance", self.energy_variance_drift),
            ("energy_stddev", self.energy_stddev_drift),
            ("coherence", self.coherence_drift),
            ("predictability", self.predictability_drift),
        ]
    }
}

fn max_drift<T: Scalar>(values: impl Iterator<Item = T>) -> T {
    let mut first = None;
    let mut worst = T::zero();
    for v in values {
        match first {
            None => first = Some(v),
            Some(f) => worst = worst.max((v - f).abs()),
        }
    }
    worst
}

/// Checks that `⟨H⟩`, `Var(H)`, `ΔH`, `𝒞` and `𝒫` stay within `1e-10` of their
/// initial values.
pub fn check_conservation<T: Scalar>(tr: &Trajectory<T>) -> ConservationReport<T> {
    check_conservation_with(tr, T::tol(CONSERVATION_TOL))
}

/// [`check_conservation`] with an explicit absolute tolerance, e.g. one
/// scaled by `‖H‖_F`.
pub fn check_conservation_with<T: Scalar>(tr: &Trajectory<T>, tolerance: T) -> ConservationReport<T> {
    let energy_mean_drift = max_drift(tr.energy.iter().map(|s| s.mean));
    let energy_variance_drift = max_drift(tr.energy.iter().map(|s| s.variance));
    let energy_stddev_drift = max_drift(tr.energy.iter().map(|s| s.stddev));
    let coherence_drift = max_drift(tr.coherence.iter().map(|c| c.coherence));
    let predictability_drift = max_drift(tr.coherence.iter().map(|c| c.predictability));
    let passed = [energy_mean_drift, energy_variance_drift, energy_stddev_drift, coherence_drift, predictability_drift]
        .iter()
        .all(|&d| d < tolerance);
    ConservationReport {
        energy_mean_drift,
        energy_variance_drift,
        energy_stddev_drift,
        coherence_drift,
        predictability_drift,
        tolerance,
        passed,
    }
}

/// `H + E0·I`.
pub fn shift_hamiltonian<T: Scalar>(h: &HermitianObservable<T>, e0: T) -> HermitianObservable<T> {
    h.shifted(e0)
}

/// Comparison of a scenario with its energy-shifted copy.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct OffsetReport<T> {
    pub e0: T,
    /// Largest difference of any observable mean, variance, stddev, or of the
    /// energy coherence/predictability, over all samples.
    pub max_stat_difference: T,
    /// Largest `| |⟨Ψ(t)|Ψ'(t)⟩| − 1 |` over all samples.
    pub max_overlap_deviation: T,
    pub tolerance: T,
    pub passed: bool,
}

/// Evolves `s` with `H` and with `H + E0·I` and compares every recorded series.
pub fn offset_invariance_check<T: Scalar>(s: &Scenario<T>, e0: T) -> Result<OffsetReport<T>> {
    let shifted = s.with_hamiltonian(shift_hamiltonian(&s.hamiltonian, e0))?;
    let a = evolve_with_states(s)?;
    let b = evolve_with_states(&shifted)?;

    let mut max_stat_difference = T::zero();
    for ((_, sa), (_, sb)) in a.series.iter().zip(&b.series) {
        for (x, y) in sa.iter().zip(sb) {
            max_stat_difference = max_stat_difference
                .max((x.mean - y.mean).abs())
                .max((x.variance - y.variance).abs())
                .max((x.stddev - y.stddev).abs());
        }
    }
    for (x, y) in a.coherence.iter().zip(&b.coherence) {
        max_stat_difference =
            max_stat_difference.max((x.coherence - y.coherence).abs()).max((x.predictability - y.predictability).abs());
    }
    let mut max_overlap_deviation = T::zero();
    let states_a = a.states.as_deref().unwrap_or_default();
    let states_b = b.states.as_deref().unwrap_or_default();
    for (x, y) in states_a.iter().zip(states_b) {
        max_overlap_deviation = max_overlap_deviation.max((inner(x, y)?.norm() - T::one()).abs());
    }
    let tolerance = T::tol(OFFSET_TOL);
    Ok(OffsetReport {
        e0,
        max_stat_difference,
        max_overlap_deviation,
        tolerance,
        passed: max_stat_difference < tolerance && max_overlap_deviation < tolerance,
    })
}

/// `d⟨A⟩/dt = ⟨[A,H]⟩/(iħ)` at `|Ψ(t)⟩`, real part after the residue check.
pub(crate) fn ehrenfest_rate<T: Scalar>(
    commutator: &crate::hilbert::ComplexMatrix<T>,
    psi: &QuantumState<T>,
    hbar: T,
) -> Result<T> {
    let z = commutator.sandwich(psi.amplitudes())?;
    let rate = z / Complex::new(T::zero(), hbar);
    qstat::real_part(rate, T::one(), EHRENFEST_RESIDUE_TOL)
}

/// `|centered difference of ⟨A⟩ − ⟨[A,H]⟩/(iħ)|` at time `t`.
pub fn ehrenfest_residual<T: Scalar>(a: &HermitianObservable<T>, s: &Scenario<T>, t: T, fd_step: T) -> Result<T> {
    let evo = s.evolution()?;
    ehrenfest_residual_with(a, s, &evo, t, fd_step)
}

/// [`ehrenfest_residual`] reusing a precomputed [`Evolution`] of `s`.
pub fn ehrenfest_residual_with<T: Scalar>(
    a: &HermitianObservable<T>,
    s: &Scenario<T>,
    evo: &Evolution<T>,
    t: T,
    fd_step: T,
) -> Result<T> {
    if !(fd_step > T::zero()) || !fd_step.is_finite() {
        return Err(Error::InvalidParameter(format!("fd_step must be positive, got {fd_step}")));
    }
    let comm = crate::hilbert::commutator(a, &s.hamiltonian)?;
    let forward = qstat::expectation(a, &evo.state_at(t + fd_step))?;
    let backward = qstat::expectation(a, &evo.state_at(t - fd_step))?;
    let fd = (forward - backward) / (fd_step + fd_step);
    let exact = ehrenfest_rate(&comm, &evo.state_at(t), s.hbar)?;
    Ok((fd - exact).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ComplexMatrix;
    use crate::random;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sx() -> HermitianObservable<f64> {
        HermitianObservable::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    fn qubit_scenario(a1: Complex<f64>, a2: Complex<f64>) -> Scenario<f64> {
        let h = HermitianObservable::from_real_diagonal(&[0.5, -0.5]);
        let psi = QuantumState::new(vec![a1, a2]).unwrap();
        Scenario::with_default_grid(1.0, h, psi, vec![("sx".into(), sx())]).unwrap()
    }

    #[test]
    fn grid_includes_both_ends() {
        let g = TimeGrid::new(0.0, 2.0, 5).unwrap();
        assert_eq!(g.times(), vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        assert_eq!(g.step(), 0.5);
        assert!(TimeGrid::new(1.0, 1.0, 5).is_err());
        assert!(TimeGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn default_grid_spans_two_periods() {
        let spec = HermitianObservable::from_real_diagonal(&[0.5, -0.5]).eigen().unwrap();
        let g = default_grid(&spec, 1.0);
        assert_eq!(g.start, 0.0);
        assert!((g.stop - 4.0 * std::f64::consts::PI).abs() < 1e-15);
        assert_eq!(g.steps, 1000);
        let degenerate = HermitianObservable::<f64>::identity(2).eigen().unwrap();
        assert_eq!(default_fd_step(&degenerate, 1.0), 1e-4);
    }

    #[test]
    fn scenario_validation() {
        let h = HermitianObservable::from_real_diagonal(&[0.5, -0.5]);
        let psi = QuantumState::basis(2, 0);
        let grid = TimeGrid { start: 0.0, stop: 1.0, steps: 10 };
        assert!(Scenario::new(0.0, h.clone(), psi.clone(), grid, vec![]).is_err());
        assert!(Scenario::new(1.0, h.clone(), QuantumState::basis(3, 0), grid, vec![]).is_err());
        let dup = vec![("a".to_string(), sx()), ("a".to_string(), sx())];
        assert!(Scenario::new(1.0, h.clone(), psi.clone(), grid, dup).is_err());
        let empty = vec![(String::new(), sx())];
        assert!(Scenario::new(1.0, h.clone(), psi.clone(), grid, empty).is_err());
        let bad_grid = TimeGrid { start: 1.0, stop: 0.0, steps: 10 };
        assert!(Scenario::new(1.0, h, psi, bad_grid, vec![]).is_err());
    }

    #[test]
    fn energy_amplitudes_follow_ascending_order() {
        let spec = HermitianObservable::from_real_diagonal(&[0.5, -0.5]).eigen().unwrap();
        let up = QuantumState::basis(2, 0);
        let a = energy_amplitudes(&up, &spec).unwrap();
        assert_eq!(a, vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let plus = QuantumState::new(vec![c(r, 0.0), c(r, 0.0)]).unwrap();
        for z in energy_amplitudes(&plus, &spec).unwrap() {
            assert!((z.norm() - r).abs() < 1e-15);
        }
    }

    #[test]
    fn sx_projector_oscillates() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let up_x = QuantumState::new(vec![c(r, 0.0), c(r, 0.0)]).unwrap();
        let proj = HermitianObservable::projector(&up_x);
        let h = HermitianObservable::from_real_diagonal(&[0.5, -0.5]);
        let s = Scenario::with_default_grid(1.0, h, up_x, vec![("up".into(), proj)]).unwrap();
        let tr = evolve(&s).unwrap();
        for (t, m) in tr.times.iter().zip(tr.means("up").unwrap()) {
            assert!((m - (0.5 + 0.5 * t.cos())).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenstate_gives_flat_sx_projector() {
        let s = qubit_scenario(c(1.0, 0.0), c(0.0, 0.0));
        let tr = evolve(&s).unwrap();
        assert!(tr.means("sx").unwrap().iter().all(|m| m.abs() < 1e-15));
        let report = check_conservation(&tr);
        assert!(report.passed);
        assert!(report.drifts().iter().all(|(_, d)| *d < 1e-15));
    }

    #[test]
    fn states_are_kept_on_request() {
        let s = qubit_scenario(c(0.6, 0.0), c(0.0, 0.8));
        assert!(evolve(&s).unwrap().states.is_none());
        let tr = evolve_with_states(&s).unwrap();
        let states = tr.states.as_ref().unwrap();
        assert_eq!(states.len(), tr.len());
        assert!(states.iter().all(|p| p.is_normalized(1e-10)));
        assert!(tr.series("missing").is_err());
    }

    #[test]
    fn random_scenario_conserves_energy_statistics() {
        let mut rng = random::rng(11);
        let h: HermitianObservable<f64> = random::hermitian(&mut rng, 4);
        let psi = random::state(&mut rng, 4);
        let s = Scenario::with_default_grid(1.0, h, psi, vec![]).unwrap();
        assert!(check_conservation(&evolve(&s).unwrap()).passed);
    }

    #[test]
    fn shift_moves_eigenvalues_only() {
        let mut rng = random::rng(3);
        let h: HermitianObservable<f64> = random::hermitian(&mut rng, 3);
        let a = h.eigen().unwrap();
        let b = shift_hamiltonian(&h, 2.5).eigen().unwrap();
        for (x, y) in a.eigenvalues().iter().zip(b.eigenvalues()) {
            assert!((y - x - 2.5).abs() < 1e-12);
        }
        for (u, v) in a.eigenvectors().iter().zip(b.eigenvectors()) {
            assert!((inner(u, v).unwrap().norm() - 1.0).abs() < 1e-10);
        }
        assert_eq!(shift_hamiltonian(&h, 0.0), h);
        let shifted = shift_hamiltonian(&HermitianObservable::from_real_diagonal(&[0.5, -0.5]), 0.5);
        assert_eq!(shifted, HermitianObservable::from_real_diagonal(&[1.0, 0.0]));
    }

    #[test]
    fn offset_is_unobservable() {
        let s = qubit_scenario(c(0.6, 0.0), c(0.0, 0.8));
        for e0 in [0.0, 7.3, -5.0] {
            let r = offset_invariance_check(&s, e0).unwrap();
            assert!(r.passed, "{r:?}");
        }
        let exact = offset_invariance_check(&s, 0.0).unwrap();
        assert_eq!(exact.max_stat_difference, 0.0);
    }

    #[test]
    fn ehrenfest_for_conserved_observables() {
        let s = qubit_scenario(c(0.6, 0.0), c(0.0, 0.8));
        let h = s.hamiltonian().clone();
        assert!(ehrenfest_residual(&h, &s, 0.3, 1e-4).unwrap() < 1e-10);
        let sz = HermitianObservable::from_real_diagonal(&[1.0, -1.0]);
        assert!(ehrenfest_residual(&sz, &s, 1.1, 1e-4).unwrap() < 1e-10);
        assert!(ehrenfest_residual(&sz, &s, 1.1, 0.0).is_err());
    }

    #[test]
    fn ehrenfest_for_sx_with_absolute_step() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = qubit_scenario(c(r, 0.0), c(r, 0.0));
        let res = ehrenfest_residual(&sx(), &s, 1.0, 1e-4).unwrap();
        // Truncation error of the centered difference: sin(t)·h²/6.
        let expected = 1.0f64.sin() * 1e-8 / 6.0;
        assert!(res < 1e-8);
        assert!((res - expected).abs() < 2e-11, "{res} vs {expected}");
    }
}
