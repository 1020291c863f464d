use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};

/// Dense square complex matrix in row-major order.
///
/// Subsystem ordering in tensor products is most-significant factor first:
/// for `kron(A, B)` the row index is `i * dim(B) + k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![Complex::new(T::zero(), T::zero()); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = real(T::one());
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix from row-major entries; fails unless the length is a
    /// perfect square and every entry is finite.
    pub fn from_row_major(data: Vec<Complex<T>>) -> Result<Self> {
        let dim = (data.len() as f64).sqrt().round() as usize;
        if dim == 0 || dim * dim != data.len() {
            return Err(Error::mismatch(dim.max(1) * dim.max(1), data.len()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite matrix entry".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            if row.len() != dim {
                return Err(Error::mismatch(dim, row.len()));
            }
        }
        Self::from_row_major(rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| real(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(values: &[T]) -> Self {
        let values: Vec<_> = values.iter().map(|&v| real(v)).collect();
        Self::diag(&values)
    }

    /// `|a><b|`
    pub fn outer(a: &[Complex<T>], b: &[Complex<T>]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::mismatch(a.len(), b.len()));
        }
        Ok(Self::from_fn(a.len(), |i, j| a[i] * b[j].conj()))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::mismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        self.scale(real(factor))
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).norm())
            .fold(T::zero(), T::max))
    }

    /// Largest entry of `|M - M^dagger|`.
    pub fn hermitian_deviation(&self) -> T {
        let n = self.dim;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub(crate) fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermitian_deviation();
        if deviation > T::tolerances().herm || deviation.is_nan() {
            return Err(Error::NotHermitian {
                deviation: deviation.as_f64(),
            });
        }
        Ok(())
    }

    /// Largest entry of `|U^dagger U - I|`.
    pub fn unitarity_residual(&self) -> T {
        let product = self
            .adjoint()
            .matmul(self)
            .expect("adjoint has the same dimension");
        product
            .max_abs_diff(&Self::identity(self.dim))
            .expect("identity has the same dimension")
    }

    /// `(kron(A,B))[(i*dB+k),(j*dB+l)] = A[i,j] * B[k,l]`
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim, other.dim);
        let n = da * db;
        let mut out = Self::zeros(n);
        for i in 0..da {
            for j in 0..da {
                let a = self[(i, j)];
                for k in 0..db {
                    for l in 0..db {
                        out.data[(i * db + k) * n + j * db + l] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Transposes the second tensor factor of a `dA x dB` bipartite operator:
    /// `PT(M)[(i,k),(j,l)] = M[(i,l),(j,k)]`.
    pub fn partial_transpose(&self, da: usize, db: usize) -> Result<Self> {
        if da * db != self.dim {
            return Err(Error::mismatch(self.dim, da * db));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..da {
            for j in 0..da {
                for k in 0..db {
                    for l in 0..db {
                        out.data[(i * db + k) * n + j * db + l] =
                            self.data[(i * db + l) * n + j * db + k];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Traces out one factor of a `d_keep * d_traced` operator. With
    /// `traced_last` the traced factor is the trailing one.
    pub fn partial_trace(&self, d_keep: usize, d_traced: usize, traced_last: bool) -> Result<Self> {
        if d_keep * d_traced != self.dim {
            return Err(Error::mismatch(self.dim, d_keep * d_traced));
        }
        let n = self.dim;
        let index = |keep: usize, traced: usize| {
            if traced_last {
                keep * d_traced + traced
            } else {
                traced * d_keep + keep
            }
        };
        Ok(Self::from_fn(d_keep, |i, j| {
            (0..d_traced)
                .map(|e| self.data[index(i, e) * n + index(j, e)])
                .sum()
        }))
    }

    /// Reorders the qubit factors of a `2^n` operator so that new qubit `q`
    /// is old qubit `order[q]`.
    pub fn permute_qubits(&self, order: &[usize]) -> Result<Self> {
        let n_qubits = order.len();
        if n_qubits >= usize::BITS as usize || 1usize << n_qubits != self.dim {
            return Err(Error::mismatch(self.dim, 1usize << n_qubits.min(63)));
        }
        let mut seen = vec![false; n_qubits];
        for &q in order {
            if q >= n_qubits || seen[q] {
                return Err(Error::InvalidSplit(format!(
                    "{order:?} is not a permutation of 0..{n_qubits}"
                )));
            }
            seen[q] = true;
        }
        // qubit 0 is the most significant bit
        let remap = |new_index: usize| {
            let mut old = 0usize;
            for (new_q, &old_q) in order.iter().enumerate() {
                let bit = (new_index >> (n_qubits - 1 - new_q)) & 1;
                old |= bit << (n_qubits - 1 - old_q);
            }
            old
        };
        let old_of: Vec<usize> = (0..self.dim).map(remap).collect();
        Ok(Self::from_fn(self.dim, |i, j| self[(old_of[i], old_of[j])]))
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.dim + j]
    }
}
