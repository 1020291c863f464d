//! Hermitian spectra.
//!
//! Two independent solvers live here. [`hermitian_eigenvalues`] reduces the
//! matrix to a real symmetric tridiagonal form with complex Householder
//! reflections and then runs implicit QL; it is the fast path used by the
//! negativity and trace-norm routines (dimension up to 256 in the ensembles).
//! [`hermitian_eigen`] is a cyclic complex Jacobi solver that also returns
//! eigenvectors; it is slower but serves as a cross-check and as the source
//! of eigenvectors for residual tests.

use num_complex::Complex;

use super::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{real, Scalar};

const QL_ITERATIONS_PER_EIGENVALUE: usize = 60;
const JACOBI_SWEEP_BUDGET: usize = 100;

/// Eigenvalues of a Hermitian matrix, sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    eigenvalues: Vec<T>,
}

impl<T: Scalar> Spectrum<T> {
    fn from_unsorted(mut eigenvalues: Vec<T>) -> Self {
        eigenvalues.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
        Self { eigenvalues }
    }

    pub fn values(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn min(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> T {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn sum(&self) -> T {
        self.eigenvalues.iter().copied().sum()
    }

    /// Sum of absolute values.
    pub fn abs_sum(&self) -> T {
        self.eigenvalues.iter().map(|v| v.abs()).sum()
    }

    /// Sum of the negative eigenvalues' magnitudes.
    pub fn negative_mass(&self) -> T {
        self.eigenvalues
            .iter()
            .filter(|v| **v < T::zero())
            .map(|v| -*v)
            .sum()
    }
}

/// Eigenvalues via Householder tridiagonalization and implicit QL.
pub fn hermitian_eigenvalues<T: Scalar>(m: &ComplexMatrix<T>) -> Result<Spectrum<T>> {
    m.require_hermitian()?;
    let (diag, offdiag) = tridiagonalize(m);
    let values = tridiagonal_ql(diag, offdiag)?;
    Ok(Spectrum::from_unsorted(values))
}

/// `sum_i |lambda_i|` for a Hermitian matrix.
pub fn trace_norm_hermitian<T: Scalar>(m: &ComplexMatrix<T>) -> Result<T> {
    Ok(hermitian_eigenvalues(m)?.abs_sum())
}

/// Reduces a Hermitian matrix to a real symmetric tridiagonal matrix with
/// the same spectrum: returns `(diagonal, |sub-diagonal|)`.
///
/// A Hermitian tridiagonal matrix is diagonally-unitarily similar to the real
/// one with the moduli of its off-diagonals, so the phases are dropped.
fn tridiagonalize<T: Scalar>(m: &ComplexMatrix<T>) -> (Vec<T>, Vec<T>) {
    let n = m.dim();
    let mut a: Vec<Complex<T>> = m.as_slice().to_vec();
    let mut diag = vec![T::zero(); n];
    let mut offdiag = vec![T::zero(); n.saturating_sub(1)];
    let zero = real(T::zero());
    let two = T::lit(2.0);

    let mut v = vec![zero; n];
    let mut p = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let tail_sq: T = (k + 2..n).map(|i| a[i * n + k].norm_sqr()).sum();
        diag[k] = a[k * n + k].re;
        if tail_sq == T::zero() {
            offdiag[k] = x0.norm();
            continue;
        }
        let norm_x = (x0.norm_sqr() + tail_sq).sqrt();
        let x0_abs = x0.norm();
        let phase = if x0_abs > T::zero() {
            x0 / real(x0_abs)
        } else {
            real(T::one())
        };
        let alpha = -phase * real(norm_x);

        // v = x - alpha e_1, stored in v[0..len]
        v[0] = x0 - alpha;
        for i in 1..len {
            v[i] = a[(k + 1 + i) * n + k];
        }
        let v_norm_sq: T = v[..len].iter().map(|z| z.norm_sqr()).sum();
        let tau = two / v_norm_sq;

        // p = tau * B v  with B the trailing block
        for i in 0..len {
            let row = (k + 1 + i) * n + k + 1;
            let mut acc = zero;
            for j in 0..len {
                acc += a[row + j] * v[j];
            }
            p[i] = acc * real(tau);
        }
        // v^dagger p is real for Hermitian B
        let vp: T = (0..len).map(|i| (v[i].conj() * p[i]).re).sum();
        let half_k = real(tau * vp / two);
        for i in 0..len {
            p[i] -= half_k * v[i];
        }
        // B <- B - v w^dagger - w v^dagger  (w stored in p)
        for i in 0..len {
            let row = (k + 1 + i) * n + k + 1;
            let (vi, wi) = (v[i], p[i]);
            for j in 0..len {
                a[row + j] -= vi * p[j].conj() + wi * v[j].conj();
            }
        }
        offdiag[k] = norm_x;
    }
    if n >= 2 {
        diag[n - 2] = a[(n - 2) * n + n - 2].re;
        offdiag[n - 2] = a[(n - 1) * n + n - 2].norm();
    }
    diag[n - 1] = a[(n - 1) * n + n - 1].re;
    (diag, offdiag)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
fn tridiagonal_ql<T: Scalar>(mut d: Vec<T>, offdiag: Vec<T>) -> Result<Vec<T>> {
    let n = d.len();
    let mut e = offdiag;
    e.push(T::zero());
    let eps = T::epsilon();
    let two = T::lit(2.0);
    let floor = eps
        * d.iter()
            .zip(&e)
            .fold(T::zero(), |acc, (di, ei)| acc.max(di.abs() + ei.abs()));

    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > QL_ITERATIONS_PER_EIGENVALUE {
                return Err(Error::NoConvergence {
                    budget: QL_ITERATIONS_PER_EIGENVALUE,
                    unit: "QL iterations per eigenvalue",
                });
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(d)
}

/// Eigen-decomposition by cyclic complex Jacobi rotations.
///
/// Returns the ascending spectrum and a unitary whose column `k` is the
/// eigenvector for `spectrum.values()[k]`.
pub fn hermitian_eigen<T: Scalar>(m: &ComplexMatrix<T>) -> Result<(Spectrum<T>, ComplexMatrix<T>)> {
    m.require_hermitian()?;
    let n = m.dim();
    let mut a = m.clone();
    let mut vecs = ComplexMatrix::identity(n);
    let threshold = T::tolerances().jacobi * m.frobenius_norm();

    let off_norm = |a: &ComplexMatrix<T>| -> T {
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    acc += a[(i, j)].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let mut converged = off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_SWEEP_BUDGET {
            return Err(Error::NoConvergence {
                budget: JACOBI_SWEEP_BUDGET,
                unit: "Jacobi sweeps",
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut vecs, p, q);
            }
        }
        converged = off_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite"));
    let values: Vec<T> = order.iter().map(|&i| a[(i, i)].re).collect();
    let sorted_vecs = ComplexMatrix::from_fn(n, |r, c| vecs[(r, order[c])]);
    Ok((
        Spectrum {
            eigenvalues: values,
        },
        sorted_vecs,
    ))
}

/// Annihilates `a[p][q]` with `a <- G^dagger a G`, `vecs <- vecs G`.
fn rotate<T: Scalar>(a: &mut ComplexMatrix<T>, vecs: &mut ComplexMatrix<T>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let b = apq.norm();
    if b == T::zero() {
        return;
    }
    let n = a.dim();
    let phase = apq / real(b); // e^{i phi}
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (T::lit(2.0) * b);
    let t = T::one().copysign(theta) / (theta.abs() + theta.hypot(T::one()));
    let c = T::one() / t.hypot(T::one());
    let s = t * c;
    let (cc, sc) = (real(c), real(s));
    let conj_phase = phase.conj();

    for k in 0..n {
        let (akp, akq) = (a[(k, p)], a[(k, q)]);
        a[(k, p)] = cc * akp - sc * conj_phase * akq;
        a[(k, q)] = sc * akp + cc * conj_phase * akq;
    }
    for k in 0..n {
        let (apk, aqk) = (a[(p, k)], a[(q, k)]);
        a[(p, k)] = cc * apk - sc * phase * aqk;
        a[(q, k)] = sc * apk + cc * phase * aqk;
    }
    a[(p, q)] = real(T::zero());
    a[(q, p)] = real(T::zero());
    a[(p, p)] = real(app - t * b);
    a[(q, q)] = real(aqq + t * b);

    for k in 0..n {
        let (vkp, vkq) = (vecs[(k, p)], vecs[(k, q)]);
        vecs[(k, p)] = cc * vkp - sc * conj_phase * vkq;
        vecs[(k, q)] = sc * vkp + cc * conj_phase * vkq;
    }
}
