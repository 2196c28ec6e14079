//! Dense complex linear algebra over a finite-dimensional Hilbert space.
//!
//! Matrices are small (n up to a few dozen) and stored row-major in a flat
//! `Vec`. Hermitian eigendecomposition uses cyclic complex Jacobi rotations;
//! the time propagator is assembled from the spectrum, never from a power
//! series.

use std::fmt;
use std::ops::Index;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Relative Hermiticity tolerance, multiplied by the Frobenius norm.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Normalization tolerance enforced by [`QuantumState::new`].
pub const NORMALIZATION_TOL: f64 = 1e-12;

const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;
const PHASE_TIE_TOL: f64 = 1e-12;
const DEGENERACY_TOL: f64 = 1e-12;

fn check_finite<T: Scalar>(entries: &[Complex<T>]) -> Result<()> {
    match entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Dense square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn new(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(Error::ShapeMismatch { dim, expected: dim * dim, found: data.len() });
        }
        check_finite(&data)?;
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::ShapeMismatch { dim, expected: dim, found: row.len() });
            }
            data.extend(row);
        }
        Self::new(dim, data)
    }

    /// Real matrix from row-major entries.
    pub fn from_real(dim: usize, entries: &[T]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, T::zero())).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be at least 1");
        Self { dim, data: vec![Complex::new(T::zero(), T::zero()); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![T::one(); dim])
    }

    pub fn diagonal(values: &[T]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.data[i * m.dim + i] = Complex::new(v, T::zero());
        }
        m
    }

    /// Outer product `|a⟩⟨b|`.
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        let n = a.len();
        let mut data = Vec::with_capacity(n * n);
        for ai in a {
            for bj in b {
                data.push(ai * bj.conj());
            }
        }
        Self::new(n, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    fn check_dim(&self, other: usize) -> Result<()> {
        if self.dim == other {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim, found: other })
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_dim(other.dim)?;
        Ok(self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                data.push(self.get(c, r).conj());
            }
        }
        Self { dim: n, data }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim)?;
        let n = self.dim;
        let mut data = vec![Complex::new(T::zero(), T::zero()); n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.data[r * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for c in 0..n {
                    data[r * n + c] = data[r * n + c] + a * other.data[k * n + c];
                }
            }
        }
        Ok(Self { dim: n, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        self.check_dim(other.dim)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { dim: self.dim, data })
    }

    pub fn scale(&self, k: Complex<T>) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * k).collect() }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check_dim(v.len())?;
        Ok(self.apply_unchecked(v))
    }

    fn apply_unchecked(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        let n = self.dim;
        (0..n)
            .map(|r| {
                self.data[r * n..(r + 1) * n]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    /// Sesquilinear form `⟨v|M|v⟩`.
    pub fn sandwich(&self, v: &[Complex<T>]) -> Result<Complex<T>> {
        let mv = self.apply(v)?;
        Ok(dot(v, &mv))
    }

    /// Largest `|M_ij − conj(M_ji)|` and where it occurs.
    pub fn hermitian_deviation(&self) -> (T, usize, usize) {
        let n = self.dim;
        let mut worst = (T::zero(), 0, 0);
        for r in 0..n {
            for c in r..n {
                let d = (self.get(r, c) - self.get(c, r).conj()).norm();
                if d > worst.0 {
                    worst = (d, r, c);
                }
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_deviation().0 <= T::tol(HERMITIAN_TOL) * self.frobenius_norm()
    }

    /// Largest `|M_ij + conj(M_ji)|`; zero for anti-Hermitian matrices.
    pub fn anti_hermitian_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self.get(r, c) + self.get(c, r).conj()).norm());
            }
        }
        worst
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<_> = self.data.chunks(self.dim).collect();
        f.debug_struct("ComplexMatrix").field("dim", &self.dim).field("rows", &rows).finish()
    }
}

fn dot<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// A Hermitian matrix: an observable or a Hamiltonian.
#[derive(Clone, PartialEq, Debug)]
pub struct HermitianObservable<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianObservable<T> {
    /// Accepts `matrix` if `max |M_ij − conj(M_ji)| ≤ 1e-12·‖M‖_F`.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let (deviation, row, col) = matrix.hermitian_deviation();
        let tolerance = T::tol(HERMITIAN_TOL) * matrix.frobenius_norm();
        if deviation > tolerance {
            return Err(Error::NotHermitian { row, col, deviation: deviation.as_f64(), tolerance: tolerance.as_f64() });
        }
        Ok(Self { matrix })
    }

    pub fn from_real_diagonal(values: &[T]) -> Self {
        Self { matrix: ComplexMatrix::diagonal(values) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    /// Rank-one projector `|v⟩⟨v|` onto a normalized state.
    pub fn projector(state: &QuantumState<T>) -> Self {
        let a = state.amplitudes();
        let matrix = ComplexMatrix::outer(a, a).expect("same vector on both sides");
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    /// Multiplies by a real factor.
    pub fn scaled(&self, k: T) -> Self {
        Self { matrix: self.matrix.scale(Complex::new(k, T::zero())) }
    }

    /// Adds `e0` to every diagonal entry.
    pub fn shifted(&self, e0: T) -> Self {
        let mut matrix = self.matrix.clone();
        let n = matrix.dim;
        for i in 0..n {
            matrix.data[i * n + i].re = matrix.data[i * n + i].re + e0;
        }
        Self { matrix }
    }

    /// Sum of two observables.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.add(&other.matrix)? })
    }

    pub fn eigen(&self) -> Result<SpectralDecomposition<T>> {
        hermitian_eigendecomposition(self)
    }

    /// Operator norm: the largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> Result<T> {
        let spec = self.eigen()?;
        let ev = spec.eigenvalues();
        Ok(ev[0].abs().max(ev[ev.len() - 1].abs()))
    }
}

/// State vector `|ψ⟩`.
#[derive(Clone, PartialEq, Debug)]
pub struct QuantumState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> QuantumState<T> {
    /// Accepts amplitudes whose squared norm is 1 within `1e-12`.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let state = Self::unnormalized(amplitudes)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - T::one()).abs() > T::tol(NORMALIZATION_TOL) {
            return Err(Error::NotNormalized { norm_sqr: norm_sqr.as_f64() });
        }
        Ok(state)
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalize(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let state = Self::unnormalized(amplitudes)?;
        let norm = state.norm_sqr().sqrt();
        if norm == T::zero() {
            return Err(Error::ZeroState);
        }
        let inv = T::one() / norm;
        Ok(Self { amplitudes: state.amplitudes.into_iter().map(|z| z * inv).collect() })
    }

    /// Wraps a vector without any normalization requirement. Operations that
    /// need a physical state check normalization themselves.
    pub fn unnormalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(&amplitudes)?;
        Ok(Self { amplitudes })
    }

    pub(crate) fn from_vec_unchecked(amplitudes: Vec<Complex<T>>) -> Self {
        Self { amplitudes }
    }

    /// Computational basis vector `|k⟩`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); dim];
        amplitudes[k] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.norm_sqr() - T::one()).abs() <= tol
    }

    /// Multiplies every amplitude by `phase`.
    pub fn with_global_phase(&self, phase: Complex<T>) -> Self {
        Self { amplitudes: self.amplitudes.iter().map(|z| z * phase).collect() }
    }
}

/// `⟨a|b⟩ = Σ conj(a_i)·b_i`.
pub fn inner<T: Scalar>(a: &QuantumState<T>, b: &QuantumState<T>) -> Result<Complex<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(dot(&a.amplitudes, &b.amplitudes))
}

/// `[A, B] = AB − BA`. Anti-Hermitian for Hermitian inputs.
pub fn commutator<T: Scalar>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<ComplexMatrix<T>> {
    let ab = a.matrix.matmul(&b.matrix)?;
    let ba = b.matrix.matmul(&a.matrix)?;
    ab.sub(&ba)
}

/// `AB + BA`. Hermitian for Hermitian inputs.
pub fn anticommutator<T: Scalar>(a: &HermitianObservable<T>, b: &HermitianObservable<T>) -> Result<ComplexMatrix<T>> {
    let ab = a.matrix.matmul(&b.matrix)?;
    let ba = b.matrix.matmul(&a.matrix)?;
    ab.add(&ba)
}

/// Eigenvalues in ascending order with an orthonormal set of eigenvectors.
#[derive(Clone, PartialEq, Debug)]
pub struct SpectralDecomposition<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Vec<QuantumState<T>>,
}

impl<T: Scalar> SpectralDecomposition<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[QuantumState<T>] {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `E_max − E_min`.
    pub fn spread(&self) -> T {
        self.max_eigenvalue() - self.min_eigenvalue()
    }

    /// Smallest gap between distinct eigenvalues, if any two differ.
    pub fn min_gap(&self) -> Option<T> {
        let floor = T::tol(DEGENERACY_TOL) * self.spread().abs().max(T::one());
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .filter(|&g| g > floor)
            .fold(None, |acc: Option<T>, g| Some(acc.map_or(g, |a| a.min(g))))
    }

    /// `Σ_k E_k |E_k⟩⟨E_k|`.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.weighted_sum(|e| Complex::new(e, T::zero()))
    }

    fn weighted_sum(&self, weight: impl Fn(T) -> Complex<T>) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for (&e, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = weight(e);
            let a = v.amplitudes();
            for r in 0..n {
                let wr = a[r] * w;
                for c in 0..n {
                    m.data[r * n + c] = m.data[r * n + c] + wr * a[c].conj();
                }
            }
        }
        m
    }

    /// Gram matrix `⟨E_i|E_j⟩`.
    pub fn gram(&self) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut data = Vec::with_capacity(n * n);
        for vi in &self.eigenvectors {
            for vj in &self.eigenvectors {
                data.push(dot(vi.amplitudes(), vj.amplitudes()));
            }
        }
        ComplexMatrix { dim: n, data }
    }

    /// Energy-basis amplitudes `α_k = ⟨E_k|ψ⟩`.
    pub fn amplitudes_of(&self, psi: &QuantumState<T>) -> Result<Vec<Complex<T>>> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(self.eigenvectors.iter().map(|v| dot(v.amplitudes(), psi.amplitudes())).collect())
    }

    /// `Σ_k α_k e^{−iE_k t/ħ} |E_k⟩`.
    pub fn evolve_amplitudes(&self, alphas: &[Complex<T>], t: T, hbar: T) -> QuantumState<T> {
        let n = self.dim();
        let mut out = vec![Complex::new(T::zero(), T::zero()); n];
        for ((&e, v), &alpha) in self.eigenvalues.iter().zip(&self.eigenvectors).zip(alphas) {
            let coeff = alpha * Complex::from_polar(T::one(), -e * t / hbar);
            for (o, a) in out.iter_mut().zip(v.amplitudes()) {
                *o = *o + coeff * a;
            }
        }
        QuantumState::from_vec_unchecked(out)
    }

    /// `U(t) = Σ_k e^{−iE_k t/ħ} |E_k⟩⟨E_k|`.
    pub fn propagator(&self, t: T, hbar: T) -> Result<ComplexMatrix<T>> {
        if !t.is_finite() {
            return Err(Error::InvalidParameter(format!("time must be finite, got {t}")));
        }
        if !(hbar > T::zero()) || !hbar.is_finite() {
            return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
        }
        Ok(self.weighted_sum(|e| Complex::from_polar(T::one(), -e * t / hbar)))
    }
}

/// Index of the largest-modulus component; near-ties go to the lowest index.
fn pivot_index<T: Scalar>(v: &[Complex<T>]) -> usize {
    let max = v.iter().fold(T::zero(), |acc, z| acc.max(z.norm()));
    let floor = max - T::tol(PHASE_TIE_TOL);
    v.iter().position(|z| z.norm() >= floor).unwrap_or(0)
}

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Output is deterministic: each eigenvector is phased so that its
/// largest-modulus component is real and non-negative, eigenvalues ascend,
/// and within a degenerate cluster vectors are ordered by the index of that
/// component.
pub fn hermitian_eigendecomposition<T: Scalar>(obs: &HermitianObservable<T>) -> Result<SpectralDecomposition<T>> {
    let src = obs.matrix();
    let n = src.dim();
    let zero = Complex::new(T::zero(), T::zero());
    let half = T::lit(0.5);

    // Work on the exact Hermitian part; identical to the input when the input
    // is exactly Hermitian.
    let mut a = vec![zero; n * n];
    for r in 0..n {
        for c in 0..n {
            a[r * n + c] = (src.get(r, c) + src.get(c, r).conj()) * half;
        }
    }
    let mut v = vec![zero; n * n];
    for i in 0..n {
        v[i * n + i] = Complex::new(T::one(), T::zero());
    }

    let norm = src.frobenius_norm();
    let threshold = T::tol(JACOBI_TOL) * norm;
    let off_norm = |a: &[Complex<T>]| {
        let mut s = T::zero();
        for r in 0..n {
            for c in 0..n {
                if r != c {
                    s = s + a[r * n + c].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a);
        if off <= threshold {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, residual: off.as_f64() });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r == T::zero() {
                    continue;
                }
                let phase = apq / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let theta = (aqq - app) / (r + r);
                let t = if theta.abs() > T::lit(1e150) {
                    T::one() / (theta + theta)
                } else {
                    let sign = if theta < T::zero() { -T::one() } else { T::one() };
                    sign / (theta.abs() + (theta * theta + T::one()).sqrt())
                };
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;

                // G = diag(1, conj(phase)) · [[c, s], [-s, c]] on the (p, q) plane.
                let g_pp = Complex::new(c, T::zero());
                let g_pq = Complex::new(s, T::zero());
                let g_qp = phase.conj() * (-s);
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * g_pp + akq * g_qp;
                    a[k * n + q] = akp * g_pq + akq * g_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[q * n + k] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[p * n + q] = zero;
                a[q * n + p] = zero;
                a[p * n + p] = Complex::new(app - t * r, T::zero());
                a[q * n + q] = Complex::new(aqq + t * r, T::zero());

                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * g_pp + vkq * g_qp;
                    v[k * n + q] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }

    struct Pair<T> {
        value: T,
        vector: Vec<Complex<T>>,
        pivot: usize,
    }

    let mut pairs: Vec<Pair<T>> = (0..n)
        .map(|k| {
            let mut vector: Vec<Complex<T>> = (0..n).map(|i| v[i * n + k]).collect();
            let pivot = pivot_index(&vector);
            let z = vector[pivot];
            let modulus = z.norm();
            if modulus > T::zero() {
                let rot = z.conj() / modulus;
                for x in vector.iter_mut() {
                    *x = *x * rot;
                }
                vector[pivot] = Complex::new(modulus, T::zero());
            }
            Pair { value: a[k * n + k].re, vector, pivot }
        })
        .collect();

    pairs.sort_by(|x, y| x.value.partial_cmp(&y.value).expect("finite eigenvalues"));

    // Reorder degenerate clusters by pivot index, keeping the values ascending.
    let cluster_tol = T::tol(DEGENERACY_TOL) * norm.max(T::min_positive_value());
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && pairs[end].value - pairs[end - 1].value <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            let mut values: Vec<T> = pairs[start..end].iter().map(|p| p.value).collect();
            pairs[start..end].sort_by_key(|p| p.pivot);
            values.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            for (p, val) in pairs[start..end].iter_mut().zip(values) {
                p.value = val;
            }
        }
        start = end;
    }

    let (eigenvalues, eigenvectors) =
        pairs.into_iter().map(|p| (p.value, QuantumState::from_vec_unchecked(p.vector))).unzip();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// `e^{−iHt/ħ}` via the spectral decomposition of `h`.
pub fn propagator<T: Scalar>(h: &HermitianObservable<T>, t: T, hbar: T) -> Result<ComplexMatrix<T>> {
    hermitian_eigendecomposition(h)?.propagator(t, hbar)
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn sigma_x() -> HermitianObservable<f64> {
        HermitianObservable::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap()
    }

    fn sigma_y() -> HermitianObservable<f64> {
        let m = ComplexMatrix::new(2, vec![c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap();
        HermitianObservable::new(m).unwrap()
    }

    fn sigma_z() -> HermitianObservable<f64> {
        HermitianObservable::from_real_diagonal(&[1.0, -1.0])
    }

    #[test]
    fn inner_of_basis_vectors() {
        let up = QuantumState::<f64>::basis(2, 0);
        let down = QuantumState::<f64>::basis(2, 1);
        assert_eq!(inner(&up, &up).unwrap(), c(1.0, 0.0));
        assert_eq!(inner(&up, &down).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn inner_rejects_mismatched_dims() {
        let a = QuantumState::<f64>::basis(2, 0);
        let b = QuantumState::<f64>::basis(3, 0);
        assert!(matches!(inner(&a, &b), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn state_construction_checks_norm() {
        assert!(matches!(QuantumState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]), Err(Error::NotNormalized { .. })));
        let s = QuantumState::normalize(vec![c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(QuantumState::<f64>::normalize(vec![c(0.0, 0.0)]), Err(Error::ZeroState));
        assert!(matches!(QuantumState::unnormalized(vec![c(f64::NAN, 0.0)]), Err(Error::NonFinite { index: 0 })));
    }

    #[test]
    fn commutator_of_pauli_pair() {
        let comm = commutator(&sigma_x(), &sigma_y()).unwrap();
        let expected = sigma_z().matrix().scale(c(0.0, 2.0));
        assert!(comm.max_abs_diff(&expected).unwrap() < 1e-15);
        assert!(comm.anti_hermitian_deviation() < 1e-15);
    }

    #[test]
    fn commutator_with_self_and_identity_vanishes() {
        let z = sigma_z();
        assert_eq!(commutator(&z, &z).unwrap().max_abs(), 0.0);
        let h = sigma_x().scaled(0.7);
        let shifted = h.shifted(3.0);
        assert!(commutator(&h, &shifted).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn non_hermitian_matrix_is_rejected_with_location() {
        let m = ComplexMatrix::from_real(2, &[1.0, 2.0, 0.0, 1.0]).unwrap();
        match HermitianObservable::new(m) {
            Err(Error::NotHermitian { row, col, .. }) => assert_eq!((row, col), (0, 1)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn imaginary_diagonal_is_not_hermitian() {
        let m = ComplexMatrix::new(1, vec![c(1.0, 0.5)]).unwrap();
        assert!(HermitianObservable::new(m).is_err());
    }

    #[test]
    fn qubit_hamiltonian_spectrum() {
        let omega = 1.7;
        let h = sigma_z().scaled(omega / 2.0);
        let spec = h.eigen().unwrap();
        assert_eq!(spec.eigenvalues(), &[-omega / 2.0, omega / 2.0]);
        assert_eq!(spec.eigenvectors()[0], QuantumState::basis(2, 1));
        assert_eq!(spec.eigenvectors()[1], QuantumState::basis(2, 0));
    }

    #[test]
    fn identity_is_degenerate() {
        let spec = HermitianObservable::<f64>::identity(4).eigen().unwrap();
        assert_eq!(spec.eigenvalues(), &[1.0; 4]);
        for (k, v) in spec.eigenvectors().iter().enumerate() {
            assert_eq!(*v, QuantumState::basis(4, k));
        }
        assert_eq!(spec.min_gap(), None);
    }

    #[test]
    fn sigma_x_eigenvectors_follow_phase_convention() {
        let spec = sigma_x().eigen().unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert!((spec.eigenvalues()[0] + 1.0).abs() < 1e-15);
        assert!((spec.eigenvalues()[1] - 1.0).abs() < 1e-15);
        let down = spec.eigenvectors()[0].amplitudes();
        let up = spec.eigenvectors()[1].amplitudes();
        // Equal moduli: the tie goes to index 0, which is made real positive.
        assert!((down[0] - c(r, 0.0)).norm() < 1e-15 && (down[1] - c(-r, 0.0)).norm() < 1e-15);
        assert!((up[0] - c(r, 0.0)).norm() < 1e-15 && (up[1] - c(r, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_cluster_is_ordered_by_pivot() {
        // Eigenvalue 2 twice (spanned by e2 and e0) and 1 once.
        let h = HermitianObservable::from_real_diagonal(&[2.0, 1.0, 2.0]);
        let spec = h.eigen().unwrap();
        assert_eq!(spec.eigenvalues(), &[1.0, 2.0, 2.0]);
        assert_eq!(spec.eigenvectors()[1], QuantumState::basis(3, 0));
        assert_eq!(spec.eigenvectors()[2], QuantumState::basis(3, 2));
    }

    #[test]
    fn zero_matrix_decomposes() {
        let spec = HermitianObservable::<f64>::new(ComplexMatrix::zeros(3)).unwrap().eigen().unwrap();
        assert_eq!(spec.eigenvalues(), &[0.0; 3]);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let h = sigma_x().plus(&sigma_z().scaled(0.3)).unwrap();
        let u = propagator(&h, 0.0, 1.0).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn propagator_phases_energy_eigenstate() {
        let omega = 2.0;
        let t = 0.37;
        let h = sigma_z().scaled(omega / 2.0);
        let u = propagator(&h, t, 1.0).unwrap();
        let out = u.apply(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let expected = Complex::from_polar(1.0, -omega * t / 2.0);
        assert!((out[0] - expected).norm() < 1e-15);
        assert!(out[1].norm() < 1e-15);
    }

    #[test]
    fn propagator_rejects_bad_parameters() {
        let h = sigma_z();
        assert!(propagator(&h, f64::NAN, 1.0).is_err());
        assert!(propagator(&h, 1.0, 0.0).is_err());
        assert!(propagator(&h, 1.0, -1.0).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let h = HermitianObservable::<f32>::new(ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap();
        let spec = h.eigen().unwrap();
        assert!((spec.eigenvalues()[0] + 1.0).abs() < 1e-6);
        let rec = spec.reconstruct();
        assert!(rec.max_abs_diff(h.matrix()).unwrap() < 1e-6);
    }
}
