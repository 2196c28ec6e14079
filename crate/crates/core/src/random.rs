//! Seeded generators for random observables and states.
//!
//! Used by the verification suites and tests. Everything is driven by a
//! ChaCha stream so a seed fully determines the output on every platform.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hilbert::{ComplexMatrix, HermitianObservable, QuantumState};
use crate::scalar::Scalar;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn entry<T: Scalar, R: Rng>(rng: &mut R) -> Complex<T> {
    Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::lit(rng.gen_range(-1.0..1.0)))
}

/// Hermitian matrix with entries uniform in the unit square, symmetrized
/// exactly.
pub fn hermitian<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> HermitianObservable<T> {
    let mut m = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    for r in 0..dim {
        m[r * dim + r] = Complex::new(T::lit(rng.gen_range(-1.0..1.0)), T::zero());
        for c in r + 1..dim {
            let z = entry::<T, R>(rng);
            m[r * dim + c] = z;
            m[c * dim + r] = z.conj();
        }
    }
    HermitianObservable::new(ComplexMatrix::new(dim, m).expect("finite entries"))
        .expect("exactly Hermitian by construction")
}

/// Normalized state with independent complex components.
pub fn state<T: Scalar, R: Rng>(rng: &mut R, dim: usize) -> QuantumState<T> {
    loop {
        let amps: Vec<Complex<T>> = (0..dim).map(|_| entry::<T, R>(rng)).collect();
        if let Ok(s) = QuantumState::normalize(amps) {
            return s;
        }
    }
}
