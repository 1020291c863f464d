//! Pure states, density matrices, reproducible random streams and Haar sampling.

use num_complex::Complex;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, trace_norm_hermitian, ComplexMatrix, Spectrum};
use crate::scalar::{real, Scalar};

const DEGENERATE_DRAW_NORM: f64 = 1e-100;
const MAX_DRAW_ATTEMPTS: usize = 10;

/// Random stream identified by `(master_seed, stream_index)`.
///
/// The same pair always yields the same draws, so sample `i` of an ensemble
/// does not depend on how samples are scheduled across workers.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_index);
        Self {
            master_seed,
            stream_index,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> PureState<T> {
    /// Accepts amplitudes whose squared norm is 1 within the scalar's norm tolerance.
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("empty state vector".into()));
        }
        let norm_sq: T = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !norm_sq.is_finite() || (norm_sq - T::one()).abs() > T::tolerances().norm {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sq} differs from 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm: T = amplitudes.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if amplitudes.is_empty() || !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalize zero vector".into()));
        }
        let inv = real(norm.recip());
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z * inv).collect(),
        })
    }

    /// Computational basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::mismatch(dim, index + 1));
        }
        let mut amplitudes = vec![real(T::zero()); dim];
        amplitudes[index] = real(T::one());
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::mismatch(self.dim(), other.dim()));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn kron(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|&a| other.amplitudes.iter().map(move |&b| a * b))
            .collect();
        Self { amplitudes }
    }

    pub fn with_global_phase(&self, theta: T) -> Self {
        let phase = Complex::from_polar(T::one(), theta);
        Self {
            amplitudes: self.amplitudes.iter().map(|&z| z * phase).collect(),
        }
    }

    /// `U|psi>`; `unitary` must be unitary within tolerance.
    pub fn evolve(&self, unitary: &ComplexMatrix<T>) -> Result<Self> {
        if unitary.dim() != self.dim() {
            return Err(Error::mismatch(self.dim(), unitary.dim()));
        }
        let amplitudes = (0..self.dim())
            .map(|i| {
                unitary
                    .row(i)
                    .iter()
                    .zip(&self.amplitudes)
                    .map(|(u, a)| u * a)
                    .sum()
            })
            .collect();
        Self::new(amplitudes)
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        let matrix = ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
            .expect("outer product of equal-length vectors");
        DensityMatrix { matrix }
    }
}

/// Haar-random pure state: `2*dim` standard normals as real and imaginary
/// parts, normalized.
pub fn sample_haar_pure<T: Scalar>(dim: usize, rng: &mut RngStream) -> Result<PureState<T>> {
    if dim < 2 {
        return Err(Error::out_of_range("dim", dim as f64, "dim >= 2"));
    }
    for _ in 0..MAX_DRAW_ATTEMPTS {
        let draws: Vec<(f64, f64)> = (0..dim)
            .map(|_| (rng.standard_normal(), rng.standard_normal()))
            .collect();
        let norm = draws.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        if norm < DEGENERATE_DRAW_NORM {
            continue;
        }
        let amplitudes = draws
            .into_iter()
            .map(|(re, im)| Complex::new(T::lit(re / norm), T::lit(im / norm)))
            .collect();
        return Ok(PureState { amplitudes });
    }
    Err(Error::DegenerateDraw {
        attempts: MAX_DRAW_ATTEMPTS,
    })
}

/// Haar-random unitary from Gram-Schmidt orthonormalization of a complex
/// Gaussian matrix (columns drawn in order from `rng`).
pub fn sample_haar_unitary<T: Scalar>(dim: usize, rng: &mut RngStream) -> Result<ComplexMatrix<T>> {
    if dim < 1 {
        return Err(Error::out_of_range("dim", dim as f64, "dim >= 1"));
    }
    let mut columns: Vec<Vec<Complex<f64>>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut attempts = 0;
        loop {
            attempts += 1;
            let mut col: Vec<Complex<f64>> = (0..dim)
                .map(|_| Complex::new(rng.standard_normal(), rng.standard_normal()))
                .collect();
            for prev in &columns {
                let overlap: Complex<f64> = prev.iter().zip(&col).map(|(p, c)| p.conj() * c).sum();
                for (c, p) in col.iter_mut().zip(prev) {
                    *c -= overlap * p;
                }
            }
            let norm = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-8 {
                col.iter_mut().for_each(|z| *z /= norm);
                columns.push(col);
                break;
            }
            if attempts == MAX_DRAW_ATTEMPTS {
                return Err(Error::DegenerateDraw { attempts });
            }
        }
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| {
        let z = columns[j][i];
        Complex::new(T::lit(z.re), T::lit(z.im))
    }))
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Validates Hermiticity, unit trace and positivity at the scalar's tolerances.
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a matrix produced by a trace-preserving, completely positive
    /// map of a valid state. Checked in debug builds only.
    pub(crate) fn from_cptp_output(matrix: ComplexMatrix<T>) -> Self {
        let rho = Self { matrix };
        debug_assert!(rho.validate().is_ok(), "{:?}", rho.validate());
        rho
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(T::one() / T::lit(dim as f64)),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let tol = T::tolerances();
        self.matrix.require_hermitian()?;
        let trace = self.matrix.trace();
        if (trace.re - T::one()).abs() > tol.trace || trace.im.abs() > tol.trace {
            return Err(Error::InvalidState(format!("trace {trace} differs from 1")));
        }
        let min = self.spectrum()?.min();
        if min < -tol.psd {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min} below -{}",
                tol.psd
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn spectrum(&self) -> Result<Spectrum<T>> {
        hermitian_eigenvalues(&self.matrix)
    }

    /// Eigenvalues with values in `[-tol_psd, 0)` reported as zero. The
    /// stored matrix is never modified.
    pub fn clamped_eigenvalues(&self) -> Result<Vec<T>> {
        let psd = T::tolerances().psd;
        Ok(self
            .spectrum()?
            .values()
            .iter()
            .map(|&v| {
                if v < T::zero() && v >= -psd {
                    T::zero()
                } else {
                    v
                }
            })
            .collect())
    }

    /// `tr(rho^2)`
    pub fn purity(&self) -> T {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.as_slice().iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.kron(&other.matrix),
        }
    }

    /// `U rho U^dagger` for a unitary `U`.
    pub fn conjugate_by(&self, unitary: &ComplexMatrix<T>) -> Result<Self> {
        let residual = unitary.unitarity_residual();
        if residual > T::tolerances().unitary {
            return Err(Error::NotUnitary {
                residual: residual.as_f64(),
            });
        }
        let m = unitary.matmul(&self.matrix)?.matmul(&unitary.adjoint())?;
        Ok(Self::from_cptp_output(m))
    }
}

/// `tr|rho - omega|`, in `[0, 2]`.
pub fn trace_distance<T: Scalar>(rho: &DensityMatrix<T>, omega: &DensityMatrix<T>) -> Result<T> {
    trace_norm_hermitian(&rho.matrix.sub(&omega.matrix)?)
}

/// `||psi - chi||`, in `[0, 2]`.
pub fn euclidean_distance<T: Scalar>(psi: &PureState<T>, chi: &PureState<T>) -> Result<T> {
    if psi.dim() != chi.dim() {
        return Err(Error::mismatch(psi.dim(), chi.dim()));
    }
    Ok(psi
        .amplitudes
        .iter()
        .zip(&chi.amplitudes)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<T>()
        .sqrt())
}
