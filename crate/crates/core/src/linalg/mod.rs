//! Dense complex linear algebra sized for registers of up to about a dozen qubits.

mod eigen;
mod matrix;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, trace_norm_hermitian, Spectrum};
pub use matrix::ComplexMatrix;

pub fn kron<T: crate::Scalar>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    a.kron(b)
}

#[cfg(test)]
pub(crate) mod test_util {
    use super::ComplexMatrix;
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn random_matrix(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        ComplexMatrix::from_fn(dim, |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix<f64> {
        let m = random_matrix(dim, rng);
        m.add(&m.adjoint()).unwrap().scale_real(0.5)
    }
}
