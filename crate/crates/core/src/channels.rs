//! Open-system maps: Kraus channels, local product channels, explicit
//! system-environment dilations and sampled contraction coefficients.
//!
//! Besides the phase-damping (dephasing) model, amplitude damping and
//! depolarizing channels are provided as extensions to exercise the
//! state-independence checks on more than one noise family.

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::scalar::{cplx, real, Scalar};
use crate::states::{sample_haar_pure, trace_distance, DensityMatrix, RngStream};

const MAX_PAIR_REDRAWS: usize = 10;

/// A completely positive, trace-preserving map on `dim x dim` density matrices.
pub trait Channel<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>>;
}

/// Channel given by Kraus operators with `sum_k K_k^dagger K_k = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel<T> {
    dim: usize,
    kraus: Vec<ComplexMatrix<T>>,
}

impl<T: Scalar> QuantumChannel<T> {
    pub fn new(kraus: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let dim = kraus
            .first()
            .ok_or(Error::InvalidChannel {
                residual: f64::INFINITY,
            })?
            .dim();
        for k in &kraus {
            if k.dim() != dim {
                return Err(Error::mismatch(dim, k.dim()));
            }
        }
        let channel = Self { dim, kraus };
        let residual = channel.completeness_residual();
        if !(residual <= T::tolerances().norm) {
            return Err(Error::InvalidChannel {
                residual: residual.as_f64(),
            });
        }
        Ok(channel)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            kraus: vec![ComplexMatrix::identity(dim)],
        }
    }

    /// Phase damping: `K0 = diag(1, sqrt(1-p))`, `K1 = diag(0, sqrt(p))`.
    pub fn dephasing_qubit(p: T) -> Result<Self> {
        check_probability("p", p)?;
        let k0 = ComplexMatrix::diag_real(&[T::one(), (T::one() - p).sqrt()]);
        let k1 = ComplexMatrix::diag_real(&[T::zero(), p.sqrt()]);
        Ok(Self {
            dim: 2,
            kraus: vec![k0, k1],
        })
    }

    /// Amplitude damping with decay probability `gamma` (extension).
    pub fn amplitude_damping(gamma: T) -> Result<Self> {
        check_probability("gamma", gamma)?;
        let (z, o) = (T::zero(), T::one());
        let k0 = ComplexMatrix::from_real_rows(&[vec![o, z], vec![z, (o - gamma).sqrt()]])?;
        let k1 = ComplexMatrix::from_real_rows(&[vec![z, gamma.sqrt()], vec![z, z]])?;
        Ok(Self {
            dim: 2,
            kraus: vec![k0, k1],
        })
    }

    /// Depolarizing: identity with weight `1-p`, each Pauli with `p/3` (extension).
    pub fn depolarizing(p: T) -> Result<Self> {
        check_probability("p", p)?;
        let (z, o) = (T::zero(), T::one());
        let w0 = real((o - p).sqrt());
        let w = real((p / T::lit(3.0)).sqrt());
        let x = ComplexMatrix::from_real_rows(&[vec![z, o], vec![o, z]])?;
        let y = ComplexMatrix::from_rows(&[vec![real(z), cplx(z, -o)], vec![cplx(z, o), real(z)]])?;
        let zz = ComplexMatrix::diag_real(&[o, -o]);
        Ok(Self {
            dim: 2,
            kraus: vec![
                ComplexMatrix::identity(2).scale(w0),
                x.scale(w),
                y.scale(w),
                zz.scale(w),
            ],
        })
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix<T>] {
        &self.kraus
    }

    /// Largest entry of `|sum_k K_k^dagger K_k - I|`.
    pub fn completeness_residual(&self) -> T {
        let mut acc = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            acc = acc
                .add(&k.adjoint().matmul(k).expect("equal dims"))
                .expect("equal dims");
        }
        acc.max_abs_diff(&ComplexMatrix::identity(self.dim))
            .expect("equal dims")
    }

    /// `sum_k K_k rho K_k^dagger`
    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.dim {
            return Err(Error::mismatch(self.dim, rho.dim()));
        }
        let mut out = ComplexMatrix::zeros(self.dim);
        for k in &self.kraus {
            let term = k.matmul(rho.matrix())?.matmul(&k.adjoint())?;
            out = out.add(&term)?;
        }
        Ok(DensityMatrix::from_cptp_output(out))
    }
}

impl<T: Scalar> Channel<T> for QuantumChannel<T> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        QuantumChannel::apply(self, rho)
    }
}

fn check_probability<T: Scalar>(name: &'static str, p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::out_of_range(name, p.as_f64(), "0 <= value <= 1"));
    }
    Ok(())
}

/// Dense channel whose Kraus set is every tensor product of the per-qubit
/// Kraus operators (qubit 0 is the leading factor).
pub fn tensor_local_channels<T: Scalar>(
    per_qubit: &[QuantumChannel<T>],
) -> Result<QuantumChannel<T>> {
    let first = per_qubit.first().ok_or(Error::mismatch(1, 0))?;
    if let Some(bad) = per_qubit.iter().find(|c| c.dim != 2) {
        return Err(Error::mismatch(2, bad.dim));
    }
    let mut kraus = first.kraus.clone();
    for factor in &per_qubit[1..] {
        kraus = kraus
            .iter()
            .flat_map(|a| factor.kraus.iter().map(move |b| a.kron(b)))
            .collect();
    }
    let dim = kraus[0].dim();
    Ok(QuantumChannel { dim, kraus })
}

/// Product of independent single-qubit channels, applied factor by factor
/// without materializing the `2^N`-operator Kraus set.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalChannels<T> {
    factors: Vec<QuantumChannel<T>>,
}

impl<T: Scalar> LocalChannels<T> {
    pub fn new(factors: Vec<QuantumChannel<T>>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::mismatch(1, 0));
        }
        if let Some(bad) = factors.iter().find(|c| c.dim != 2) {
            return Err(Error::mismatch(2, bad.dim));
        }
        Ok(Self { factors })
    }

    pub fn uniform(channel: QuantumChannel<T>, n_qubits: usize) -> Result<Self> {
        Self::new(vec![channel; n_qubits])
    }

    /// `dephasing(p)` on each of `n_qubits` qubits.
    pub fn dephasing(p: T, n_qubits: usize) -> Result<Self> {
        Self::uniform(QuantumChannel::dephasing_qubit(p)?, n_qubits)
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[QuantumChannel<T>] {
        &self.factors
    }

    pub fn to_dense(&self) -> QuantumChannel<T> {
        tensor_local_channels(&self.factors).expect("factors validated on construction")
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let n = self.factors.len();
        let dim = 1usize << n;
        if rho.dim() != dim {
            return Err(Error::mismatch(dim, rho.dim()));
        }
        let mut current: Vec<Complex<T>> = rho.matrix().as_slice().to_vec();
        let mut next = vec![real(T::zero()); dim * dim];
        let mut scratch = vec![real(T::zero()); dim * dim];
        for (qubit, factor) in self.factors.iter().enumerate() {
            let stride = 1usize << (n - 1 - qubit);
            next.iter_mut().for_each(|z| *z = real(T::zero()));
            for k in factor.kraus_ops() {
                let op = [k[(0, 0)], k[(0, 1)], k[(1, 0)], k[(1, 1)]];
                // rows: scratch = (I (x) K (x) I) current
                for r in 0..dim {
                    if r & stride != 0 {
                        continue;
                    }
                    let (r0, r1) = (r * dim, (r | stride) * dim);
                    for c in 0..dim {
                        let (a, b) = (current[r0 + c], current[r1 + c]);
                        scratch[r0 + c] = op[0] * a + op[1] * b;
                        scratch[r1 + c] = op[2] * a + op[3] * b;
                    }
                }
                // columns: next += scratch (I (x) K^dagger (x) I)
                let adj = [op[0].conj(), op[2].conj(), op[1].conj(), op[3].conj()];
                for r in 0..dim {
                    let row = r * dim;
                    for c in 0..dim {
                        if c & stride != 0 {
                            continue;
                        }
                        let (a, b) = (scratch[row + c], scratch[row + (c | stride)]);
                        next[row + c] += a * adj[0] + b * adj[2];
                        next[row + (c | stride)] += a * adj[1] + b * adj[3];
                    }
                }
            }
            std::mem::swap(&mut current, &mut next);
        }
        let matrix = ComplexMatrix::from_row_major(current)?;
        Ok(DensityMatrix::from_cptp_output(matrix))
    }
}

impl<T: Scalar> Channel<T> for LocalChannels<T> {
    fn dim(&self) -> usize {
        1usize << self.factors.len()
    }

    fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        LocalChannels::apply(self, rho)
    }
}

/// Markovian decoherence parametrization `p = 1 - exp(-gamma t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecoherenceParams {
    pub gamma: Option<f64>,
    pub t: Option<f64>,
    pub p: f64,
}

impl DecoherenceParams {
    pub fn from_rate(gamma: f64, t: f64) -> Result<Self> {
        Ok(Self {
            gamma: Some(gamma),
            t: Some(t),
            p: markov_p(gamma, t)?,
        })
    }

    pub fn from_probability(p: f64) -> Result<Self> {
        check_probability("p", p)?;
        Ok(Self {
            gamma: None,
            t: None,
            p,
        })
    }
}

/// `1 - exp(-gamma t)` for `gamma, t >= 0`.
pub fn markov_p<T: Scalar>(gamma: T, t: T) -> Result<T> {
    if !(gamma >= T::zero()) || gamma.is_infinite() {
        return Err(Error::out_of_range(
            "gamma",
            gamma.as_f64(),
            "0 <= gamma < inf",
        ));
    }
    if !(t >= T::zero()) || t.is_infinite() {
        return Err(Error::out_of_range("t", t.as_f64(), "0 <= t < inf"));
    }
    Ok(-(-gamma * t).exp_m1())
}

/// Unitary system-environment evolution followed by tracing out the
/// environment: `rho -> tr_E[U (rho (x) rho_E) U^dagger]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation<T> {
    system_dim: usize,
    env_dim: usize,
    unitary: ComplexMatrix<T>,
    env_state: DensityMatrix<T>,
}

impl<T: Scalar> Dilation<T> {
    pub fn new(
        system_dim: usize,
        env_dim: usize,
        unitary: ComplexMatrix<T>,
        env_state: DensityMatrix<T>,
    ) -> Result<Self> {
        if unitary.dim() != system_dim * env_dim {
            return Err(Error::mismatch(system_dim * env_dim, unitary.dim()));
        }
        if env_state.dim() != env_dim {
            return Err(Error::mismatch(env_dim, env_state.dim()));
        }
        let residual = unitary.unitarity_residual();
        if !(residual <= T::tolerances().unitary) {
            return Err(Error::NotUnitary {
                residual: residual.as_f64(),
            });
        }
        Ok(Self {
            system_dim,
            env_dim,
            unitary,
            env_state,
        })
    }

    /// Controlled rotation of an environment qubit prepared in `|0>`: the
    /// environment turns by `theta` with `sin^2 theta = p` when the system is
    /// in `|1>`, reproducing single-qubit dephasing.
    pub fn dephasing_qubit(p: T) -> Result<Self> {
        check_probability("p", p)?;
        let (z, o) = (T::zero(), T::one());
        let (s, c) = (p.sqrt(), (o - p).sqrt());
        let unitary = ComplexMatrix::from_real_rows(&[
            vec![o, z, z, z],
            vec![z, o, z, z],
            vec![z, z, c, -s],
            vec![z, z, s, c],
        ])?;
        let env = DensityMatrix::new(ComplexMatrix::diag_real(&[o, z]))?;
        Self::new(2, 2, unitary, env)
    }

    /// SWAP between system and an environment of the same dimension.
    pub fn swap(env_state: DensityMatrix<T>) -> Result<Self> {
        let d = env_state.dim();
        let unitary = ComplexMatrix::from_fn(d * d, |row, col| {
            let (a, b) = (row / d, row % d);
            if col == b * d + a {
                real(T::one())
            } else {
                real(T::zero())
            }
        });
        Self::new(d, d, unitary, env_state)
    }

    pub fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        if rho.dim() != self.system_dim {
            return Err(Error::mismatch(self.system_dim, rho.dim()));
        }
        let joint = rho.matrix().kron(self.env_state.matrix());
        let evolved = self
            .unitary
            .matmul(&joint)?
            .matmul(&self.unitary.adjoint())?;
        let reduced = evolved.partial_trace(self.system_dim, self.env_dim, true)?;
        Ok(DensityMatrix::from_cptp_output(reduced))
    }
}

impl<T: Scalar> Channel<T> for Dilation<T> {
    fn dim(&self) -> usize {
        self.system_dim
    }

    fn apply(&self, rho: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        Dilation::apply(self, rho)
    }
}

/// `D_tr(L rho, L omega) / D_tr(rho, omega)`.
pub fn contraction_ratio<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    rho: &DensityMatrix<T>,
    omega: &DensityMatrix<T>,
) -> Result<T> {
    let before = trace_distance(rho, omega)?;
    if before < T::lit(1e-12) {
        return Err(Error::DegeneratePair {
            threshold: 1e-12,
            attempts: 1,
        });
    }
    let after = trace_distance(&channel.apply(rho)?, &channel.apply(omega)?)?;
    Ok(after / before)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContractionEstimate<T> {
    /// Largest observed ratio; a lower bound on the contraction coefficient.
    pub max_ratio: T,
    pub min_ratio: T,
    pub n_pairs: usize,
    /// Stream index of the pair attaining `max_ratio`.
    pub argmax_pair: u64,
}

/// Samples `n_pairs` Haar-random pure-state pairs; pair `i` draws from
/// stream `(seed, i)`.
pub fn estimate_contraction<T: Scalar, C: Channel<T> + ?Sized>(
    channel: &C,
    n_pairs: usize,
    seed: u64,
) -> Result<ContractionEstimate<T>> {
    if n_pairs == 0 {
        return Err(Error::out_of_range("n_pairs", 0.0, "n_pairs >= 1"));
    }
    let dim = channel.dim();
    let ratios: Vec<T> = (0..n_pairs as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = RngStream::new(seed, idx);
            for _ in 0..MAX_PAIR_REDRAWS {
                let rho = sample_haar_pure::<T>(dim, &mut rng)?.projector();
                let omega = sample_haar_pure::<T>(dim, &mut rng)?.projector();
                match contraction_ratio(channel, &rho, &omega) {
                    Err(Error::DegeneratePair { .. }) => continue,
                    other => return other,
                }
            }
            Err(Error::DegeneratePair {
                threshold: 1e-12,
                attempts: MAX_PAIR_REDRAWS,
            })
        })
        .collect::<Result<_>>()?;
    let (argmax, max_ratio) =
        ratios
            .iter()
            .copied()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, r)| {
                if r > best.1 {
                    (i, r)
                } else {
                    best
                }
            });
    let min_ratio = ratios.iter().copied().fold(T::infinity(), T::min);
    Ok(ContractionEstimate {
        max_ratio,
        min_ratio,
        n_pairs,
        argmax_pair: argmax as u64,
    })
}
