//! Single-qubit clock: `H = (ħω/2)σz` with `Ψ(0) = α1|↑z⟩ + α2|↓z⟩`.
//!
//! Presets reproduce the panels of the qubit figures; the closed forms here
//! are used as oracles against the generic pipeline.

use num_complex::Complex;

use crate::dynamics::{Scenario, Trajectory};
use crate::error::{Error, Result};
use crate::hilbert::{ComplexMatrix, HermitianObservable, QuantumState};
use crate::qstat::{coherence_of_amplitudes, CoherenceSummary};
use crate::scalar::Scalar;
use crate::uncertainty::{Extended, RATE_THRESHOLD_FACTOR};

/// A series whose range is at or below this carries no clock signal.
pub const CLOCK_RANGE_TOL: f64 = 1e-9;
const PRESET_NORM_TOL: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Axis {
    X,
    Y,
    Z,
}

fn c<T: Scalar>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// Pauli matrix along `axis`.
pub fn pauli<T: Scalar>(axis: Axis) -> HermitianObservable<T> {
    let entries = match axis {
        Axis::X => [c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)],
        Axis::Y => [c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)],
        Axis::Z => [c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)],
    };
    HermitianObservable::new(ComplexMatrix::new(2, entries.to_vec()).expect("2x2"))
        .expect("Pauli matrices are Hermitian")
}

/// `|↑⟩` (`up = true`) or `|↓⟩` along `axis`.
pub fn spin_state<T: Scalar>(axis: Axis, up: bool) -> QuantumState<T> {
    let r = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let sign = if up { T::one() } else { -T::one() };
    let amps = match axis {
        Axis::Z if up => vec![Complex::new(T::one(), z), Complex::new(z, z)],
        Axis::Z => vec![Complex::new(z, z), Complex::new(T::one(), z)],
        Axis::X => vec![Complex::new(r, z), Complex::new(sign * r, z)],
        Axis::Y => vec![Complex::new(r, z), Complex::new(z, sign * r)],
    };
    QuantumState::new(amps).expect("unit vector")
}

/// `|s⟩⟨s|` for a spin state along `axis`.
pub fn spin_projector<T: Scalar>(axis: Axis, up: bool) -> HermitianObservable<T> {
    HermitianObservable::projector(&spin_state(axis, up))
}

/// `ω`, `ħ` and the initial amplitudes on `|↑z⟩`, `|↓z⟩`.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct QubitPreset<T> {
    pub omega: T,
    pub alpha1: Complex<T>,
    pub alpha2: Complex<T>,
    pub hbar: T,
}

impl<T: Scalar> QubitPreset<T> {
    pub fn new(omega: T, alpha1: Complex<T>, alpha2: Complex<T>, hbar: T) -> Result<Self> {
        if !(omega > T::zero()) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("omega must be positive and finite, got {omega}")));
        }
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(Error::InvalidParameter(format!("hbar must be positive and finite, got {hbar}")));
        }
        let norm = alpha1.norm_sqr() + alpha2.norm_sqr();
        if !norm.is_finite() || (norm - T::one()).abs() > T::tol(PRESET_NORM_TOL) {
            return Err(Error::NotNormalized { norm_sqr: norm.as_f64() });
        }
        Ok(Self { omega, alpha1, alpha2, hbar })
    }

    /// Real amplitudes `α1 = sqrt(p_up)`, `α2 = sqrt(1 − p_up)` with `ħ = ω = 1`.
    pub fn from_population(p_up: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_up) {
            return Err(Error::InvalidParameter(format!("population must lie in [0, 1], got {p_up}")));
        }
        Self::new(T::one(), c(p_up.sqrt(), 0.0), c((1.0 - p_up).sqrt(), 0.0), T::one())
    }

    /// `α1·conj(α2)`.
    pub fn cross(&self) -> Complex<T> {
        self.alpha1 * self.alpha2.conj()
    }

    pub fn initial_state(&self) -> QuantumState<T> {
        QuantumState::from_vec_unchecked(vec![self.alpha1, self.alpha2])
    }

    pub fn hamiltonian(&self) -> HermitianObservable<T> {
        pauli(Axis::Z).scaled(self.hbar * self.omega * T::lit(0.5))
    }

    /// Coherence in the energy basis; symmetric in the two amplitudes.
    pub fn coherence(&self) -> CoherenceSummary<T> {
        coherence_of_amplitudes(&[self.alpha1, self.alpha2])
    }

    /// Largest energy population.
    pub fn max_population(&self) -> T {
        self.alpha1.norm_sqr().max(self.alpha2.norm_sqr())
    }
}

/// Preset names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 10] =
    ["fig1A", "fig1B", "fig1C", "fig1D", "fig2A", "fig2B", "fig2C", "fig2D", "fig3AB", "fig3CD"];

/// `|α1|²` of each named preset.
pub fn preset_population(name: &str) -> Result<f64> {
    Ok(match name {
        "fig1A" | "fig2A" => 1.0,
        "fig1B" | "fig2C" => 5.0 / 6.0,
        "fig1C" => 2.0 / 3.0,
        "fig1D" | "fig2D" => 0.5,
        "fig2B" => 39.0 / 40.0,
        "fig3AB" => 19.0 / 20.0,
        "fig3CD" => 11.0 / 20.0,
        other => return Err(Error::UnknownPreset(other.to_string())),
    })
}

/// Named figure preset with `ħ = ω = 1` and real amplitudes.
pub fn preset<T: Scalar>(name: &str) -> Result<QubitPreset<T>> {
    QubitPreset::from_population(preset_population(name)?)
}

/// `sx`, the spin projectors along x (`sx_up`, `sx_down`) and along z
/// (`sz_up`, `sz_down`).
pub fn standard_observables<T: Scalar>() -> Vec<(String, HermitianObservable<T>)> {
    vec![
        ("sx".into(), pauli(Axis::X)),
        ("sx_up".into(), spin_projector(Axis::X, true)),
        ("sx_down".into(), spin_projector(Axis::X, false)),
        ("sz_up".into(), spin_projector(Axis::Z, true)),
        ("sz_down".into(), spin_projector(Axis::Z, false)),
    ]
}

/// Scenario over two periods `[0, 4π/ω]` with 1000 samples.
pub fn qubit_scenario<T: Scalar>(
    p: &QubitPreset<T>,
    observables: Vec<(String, HermitianObservable<T>)>,
) -> Result<Scenario<T>> {
    Scenario::with_default_grid(p.hbar, p.hamiltonian(), p.initial_state(), observables)
}

/// `⟨σx⟩(t) = 2[Re(α1α2*) cos ωt + Im(α1α2*) sin ωt]`.
pub fn analytic_sx_mean<T: Scalar>(p: &QubitPreset<T>, t: T) -> T {
    let z = p.cross();
    let (s, co) = (p.omega * t).sin_cos();
    T::lit(2.0) * (z.re * co + z.im * s)
}

/// `Δσx(t) = |α1² e^{−iωt} − α2² e^{iωt}|`.
pub fn analytic_sx_std<T: Scalar>(p: &QubitPreset<T>, t: T) -> T {
    let phase = Complex::from_polar(T::one(), -p.omega * t);
    (p.alpha1 * p.alpha1 * phase - p.alpha2 * p.alpha2 * phase.conj()).norm()
}

/// `|d⟨σx⟩/dt| = 2ω|Re(α1α2*) sin ωt − Im(α1α2*) cos ωt|`.
pub fn analytic_sx_rate<T: Scalar>(p: &QubitPreset<T>, t: T) -> T {
    let z = p.cross();
    let (s, co) = (p.omega * t).sin_cos();
    T::lit(2.0) * p.omega * (z.re * s - z.im * co).abs()
}

/// `ΔT(t) = Δσx / |d⟨σx⟩/dt|`, infinite where the rate is at or below
/// `1e-12·ω`. A state without coherence has no clock at all.
pub fn analytic_mt_delta_t<T: Scalar>(p: &QubitPreset<T>, t: T) -> Result<Extended<T>> {
    if p.cross().norm() == T::zero() {
        return Err(Error::StaticClock);
    }
    let rate = analytic_sx_rate(p, t);
    if rate <= T::tol(RATE_THRESHOLD_FACTOR) * p.omega {
        return Ok(Extended::Infinite);
    }
    Ok(Extended::Finite(analytic_sx_std(p, t) / rate))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExtremumKind {
    /// Maximum.
    Tick,
    /// Minimum.
    Tock,
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Extremum<T> {
    pub t: T,
    pub value: T,
    pub kind: ExtremumKind,
}

#[derive(Clone, PartialEq, Debug)]
pub struct TickTockReport<T> {
    pub extrema: Vec<Extremum<T>>,
    /// Mean spacing of consecutive extrema.
    pub delta_t: T,
    /// `E_max − E_min`, `ħω` for the qubit.
    pub delta_e: T,
    /// `delta_e · delta_t`.
    pub product: T,
    /// `h/2 = πħ`.
    pub half_planck: T,
}

impl<T: Scalar> TickTockReport<T> {
    /// `|product/(h/2) − 1|`.
    pub fn relative_deviation(&self) -> T {
        (self.product / self.half_planck - T::one()).abs()
    }
}

/// Interior extrema of a sampled series, refined by a parabola through the
/// three samples around each sign change of the first difference.
pub fn find_extrema<T: Scalar>(times: &[T], values: &[T]) -> Vec<Extremum<T>> {
    let mut out = Vec::new();
    if times.len() < 3 || times.len() != values.len() {
        return out;
    }
    for i in 1..values.len() - 1 {
        let before = values[i] - values[i - 1];
        let after = values[i + 1] - values[i];
        let kind = if before > T::zero() && after <= T::zero() {
            ExtremumKind::Tick
        } else if before < T::zero() && after >= T::zero() {
            ExtremumKind::Tock
        } else {
            continue;
        };
        let (ym, y0, yp) = (values[i - 1], values[i], values[i + 1]);
        let h = (times[i + 1] - times[i - 1]) * T::lit(0.5);
        let curvature = ym - y0 - y0 + yp;
        let (t, value) = if curvature == T::zero() {
            (times[i], y0)
        } else {
            let offset = (ym - yp) / (curvature + curvature);
            let value = y0 - (ym - yp) * offset * T::lit(0.25);
            (times[i] + h * offset, value)
        };
        out.push(Extremum { t, value, kind });
    }
    out
}

/// Tick/tock analysis of the named series of `tr`.
pub fn tick_tock<T: Scalar>(tr: &Trajectory<T>, name: &str) -> Result<TickTockReport<T>> {
    let values = tr.means(name)?;
    let lo = values.iter().fold(T::infinity(), |a, &v| a.min(v));
    let hi = values.iter().fold(T::neg_infinity(), |a, &v| a.max(v));
    if !(hi - lo > T::tol(CLOCK_RANGE_TOL)) {
        return Err(Error::NoClockSignal(format!("series `{name}` has range {:e}", (hi - lo).as_f64())));
    }
    let extrema = find_extrema(&tr.times, &values);
    if extrema.len() < 3 {
        return Err(Error::NoClockSignal(format!(
            "series `{name}` has {} interior extrema, at least 3 needed",
            extrema.len()
        )));
    }
    if extrema.windows(2).any(|w| w[0].kind == w[1].kind) {
        return Err(Error::NoClockSignal(format!("extrema of `{name}` do not alternate")));
    }
    let count = T::lit((extrema.len() - 1) as f64);
    let delta_t = (extrema[extrema.len() - 1].t - extrema[0].t) / count;
    let e_min = tr.energies.iter().fold(T::infinity(), |a, &e| a.min(e));
    let e_max = tr.energies.iter().fold(T::neg_infinity(), |a, &e| a.max(e));
    let delta_e = e_max - e_min;
    Ok(TickTockReport { extrema, delta_t, delta_e, product: delta_e * delta_t, half_planck: T::PI() * tr.hbar })
}
