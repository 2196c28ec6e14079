//! Expectation values, spreads and the ℓ1 coherence of a state.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::hilbert::{HermitianObservable, QuantumState, SpectralDecomposition};
use crate::scalar::Scalar;

/// States further than this from unit norm are rejected.
pub const STATE_NORM_TOL: f64 = 1e-9;
/// Allowed imaginary part of `⟨ψ|A|ψ⟩`, relative to `max(1, ‖A‖_F)`.
pub const EXPECTATION_RESIDUE_TOL: f64 = 1e-10;
/// Negative variances down to this value are rounding and clamp to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;

/// Mean, variance and standard deviation of an observable in a state.
#[derive(Clone, Copy, PartialEq, Debug, Default)]
pub struct StatSummary<T> {
    pub mean: T,
    pub variance: T,
    pub stddev: T,
}

impl<T: Scalar> StatSummary<T> {
    /// From `⟨A⟩` and `Var(A)`, applying the rounding clamp.
    pub fn from_variance(mean: T, variance: T) -> Result<Self> {
        let variance = if variance < T::zero() {
            if variance >= -T::tol(VARIANCE_CLAMP) {
                T::zero()
            } else {
                return Err(Error::NegativeVariance { variance: variance.as_f64() });
            }
        } else {
            variance
        };
        Ok(Self { mean, variance, stddev: variance.sqrt() })
    }

    /// From the raw moments `⟨A⟩` and `⟨A²⟩`.
    pub fn from_moments(mean: T, second_moment: T) -> Result<Self> {
        Self::from_variance(mean, second_moment - mean * mean)
    }
}

/// ℓ1 coherence and predictability of a state in a fixed basis.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct CoherenceSummary<T> {
    pub coherence: T,
    pub predictability: T,
    pub basis_dim: usize,
}

fn check_state<T: Scalar>(a: &HermitianObservable<T>, psi: &QuantumState<T>) -> Result<()> {
    if a.dim() != psi.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: psi.dim() });
    }
    if !psi.is_normalized(T::tol(STATE_NORM_TOL)) {
        return Err(Error::NotNormalized { norm_sqr: psi.norm_sqr().as_f64() });
    }
    Ok(())
}

/// Real part of a complex quantity that should be real, with the residue check.
pub(crate) fn real_part<T: Scalar>(z: Complex<T>, scale: T, tol: f64) -> Result<T> {
    let tolerance = T::tol(tol) * scale.max(T::one());
    if z.im.abs() > tolerance {
        return Err(Error::ImaginaryResidue { residue: z.im.as_f64(), tolerance: tolerance.as_f64() });
    }
    Ok(z.re)
}

/// `⟨ψ|A|ψ⟩`.
pub fn expectation<T: Scalar>(a: &HermitianObservable<T>, psi: &QuantumState<T>) -> Result<T> {
    check_state(a, psi)?;
    let z = a.matrix().sandwich(psi.amplitudes())?;
    real_part(z, a.matrix().frobenius_norm(), EXPECTATION_RESIDUE_TOL)
}

/// Mean, variance and standard deviation of `a` in `psi`.
///
/// The variance is evaluated as `‖(A − ⟨A⟩)ψ‖²`, which equals
/// `⟨A²⟩ − ⟨A⟩²` for Hermitian `A` but does not cancel catastrophically near
/// eigenstates.
pub fn stats<T: Scalar>(a: &HermitianObservable<T>, psi: &QuantumState<T>) -> Result<StatSummary<T>> {
    check_state(a, psi)?;
    let v = psi.amplitudes();
    let av = a.matrix().apply(v)?;
    let z = v.iter().zip(&av).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y);
    let mean = real_part(z, a.matrix().frobenius_norm(), EXPECTATION_RESIDUE_TOL)?;
    let variance = av.iter().zip(v).fold(T::zero(), |acc, (y, x)| acc + (y - x * mean).norm_sqr());
    StatSummary::from_variance(mean, variance)
}

/// Coherence of the amplitude vector `α` (assumed normalized).
///
/// `𝒞 = (1/(n−1)) Σ_{i≠j} |α_i||α_j|` over ordered pairs. `𝒫` is evaluated as
/// `sqrt((1−𝒞)(1+𝒞))` with `1−𝒞 = Σ_{i<j}(|α_i|−|α_j|)²/(n−1)`, which holds for
/// unit vectors and stays accurate as `𝒞 → 1`.
pub fn coherence_of_amplitudes<T: Scalar>(alphas: &[Complex<T>]) -> CoherenceSummary<T> {
    let n = alphas.len();
    if n < 2 {
        return CoherenceSummary { coherence: T::zero(), predictability: T::one(), basis_dim: n };
    }
    let moduli: Vec<T> = alphas.iter().map(|a| a.norm()).collect();
    let mut cross = T::zero();
    let mut spread = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            cross = cross + moduli[i] * moduli[j];
            let d = moduli[i] - moduli[j];
            spread = spread + d * d;
        }
    }
    let norm = T::lit((n - 1) as f64);
    let coherence = ((cross + cross) / norm).min(T::one()).max(T::zero());
    let deficit = (spread / norm).min(T::one());
    let predictability = (deficit * (T::one() + coherence)).sqrt();
    CoherenceSummary { coherence, predictability, basis_dim: n }
}

/// ℓ1 coherence of `psi` in the eigenbasis `basis`.
pub fn l1_coherence<T: Scalar>(psi: &QuantumState<T>, basis: &SpectralDecomposition<T>) -> Result<CoherenceSummary<T>> {
    let alphas = basis.amplitudes_of(psi)?;
    Ok(coherence_of_amplitudes(&alphas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::ComplexMatrix;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn sx() -> HermitianObservable<f64> {
        HermitianObservable::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    fn sz() -> HermitianObservable<f64> {
        HermitianObservable::from_real_diagonal(&[1.0, -1.0])
    }

    fn qubit(a1: Complex<f64>, a2: Complex<f64>) -> QuantumState<f64> {
        QuantumState::new(vec![a1, a2]).unwrap()
    }

    #[test]
    fn energy_expectation_of_superposition() {
        let (hbar, omega) = (1.0, 2.5);
        let h = sz().scaled(hbar * omega / 2.0);
        let (p1, p2) = (0.8f64, 0.2f64);
        let psi = qubit(c(p1.sqrt(), 0.0), c(0.0, p2.sqrt()));
        let e = expectation(&h, &psi).unwrap();
        assert!((e - hbar * omega / 2.0 * (p1 - p2)).abs() < 1e-15);
        let s = stats(&h, &psi).unwrap();
        assert!((s.stddev - hbar * omega * p1.sqrt() * p2.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mutually_unbiased_expectation_is_zero() {
        assert_eq!(expectation(&sx(), &QuantumState::basis(2, 0)).unwrap(), 0.0);
    }

    #[test]
    fn eigenstate_has_zero_variance() {
        let s = stats(&sz(), &QuantumState::basis(2, 0)).unwrap();
        assert_eq!(s, StatSummary { mean: 1.0, variance: 0.0, stddev: 0.0 });
    }

    #[test]
    fn rejects_unnormalized_and_mismatched() {
        let bad = QuantumState::unnormalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(expectation(&sx(), &bad), Err(Error::NotNormalized { .. })));
        let three = QuantumState::basis(3, 0);
        assert!(matches!(stats(&sx(), &three), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn variance_clamp_rule() {
        let s = StatSummary::from_moments(1.0, 1.0 - 5e-13).unwrap();
        assert_eq!(s.variance, 0.0);
        assert_eq!(s.stddev, 0.0);
        assert!(matches!(StatSummary::from_moments(1.0, 0.9), Err(Error::NegativeVariance { .. })));
        let ok = StatSummary::from_moments(0.0, 0.25).unwrap();
        assert_eq!(ok.stddev, 0.5);
    }

    #[test]
    fn quoted_coherence_values() {
        let cases =
            [(5.0 / 6.0, 0.745), (39.0 / 40.0, 0.312), (2.0 / 3.0, 0.943), (19.0 / 20.0, 0.436), (11.0 / 20.0, 0.995)];
        for (p1, expected) in cases {
            let alphas = [c(f64::sqrt(p1), 0.0), c(f64::sqrt(1.0 - p1), 0.0)];
            let s = coherence_of_amplitudes(&alphas);
            assert!((s.coherence - expected).abs() < 5e-4, "{p1}: {}", s.coherence);
        }
    }

    #[test]
    fn eigenstate_has_no_coherence() {
        let s = coherence_of_amplitudes(&[c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(s.coherence, 0.0);
        assert_eq!(s.predictability, 1.0);
    }

    #[test]
    fn maximal_coherence_has_zero_predictability() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let s = coherence_of_amplitudes(&[c(r, 0.0), c(0.0, r)]);
        assert!((s.coherence - 1.0).abs() < 1e-15);
        assert!(s.predictability < 1e-15);
        let uniform = vec![c(0.5, 0.0); 4];
        let s = coherence_of_amplitudes(&uniform);
        assert!((s.coherence - 1.0).abs() < 1e-15 && s.predictability == 0.0);
    }

    #[test]
    fn l1_coherence_in_energy_basis() {
        let spec = sz().eigen().unwrap();
        let psi = qubit(c((5.0f64 / 6.0).sqrt(), 0.0), c((1.0f64 / 6.0).sqrt(), 0.0));
        let s = l1_coherence(&psi, &spec).unwrap();
        assert_eq!(s.basis_dim, 2);
        assert!((s.coherence - 2.0 * (5.0f64 / 36.0).sqrt()).abs() < 1e-15);
        assert!(l1_coherence(&QuantumState::basis(3, 0), &spec).is_err());
    }
}
