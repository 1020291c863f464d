//! Bipartite negativity, its Lipschitz constants, and the chain of
//! inequalities bounding the entanglement difference of two evolved pure
//! states by the distance between the initial vectors.

use serde::{Deserialize, Serialize};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::linalg::{trace_norm_hermitian, ComplexMatrix};
use crate::scalar::Scalar;
use crate::states::{euclidean_distance, trace_distance, DensityMatrix, PureState};

/// Split of an `n_qubits` register into `A` (the smaller side) and `B`.
///
/// If the requested side is the larger one the sides are relabeled, so
/// `dim_a() <= dim_b()` always holds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SplitRepr", into = "SplitRepr")]
pub struct BipartiteSplit {
    n_qubits: usize,
    side_a: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SplitRepr {
    n_qubits: usize,
    side_a: Vec<usize>,
}

impl TryFrom<SplitRepr> for BipartiteSplit {
    type Error = Error;

    fn try_from(r: SplitRepr) -> Result<Self> {
        BipartiteSplit::new(r.n_qubits, r.side_a)
    }
}

impl From<BipartiteSplit> for SplitRepr {
    fn from(s: BipartiteSplit) -> Self {
        SplitRepr {
            n_qubits: s.n_qubits,
            side_a: s.side_a,
        }
    }
}

impl BipartiteSplit {
    pub fn new(n_qubits: usize, side_a: impl IntoIterator<Item = usize>) -> Result<Self> {
        if n_qubits < 2 {
            return Err(Error::InvalidSplit(format!(
                "need at least 2 qubits, got {n_qubits}"
            )));
        }
        let mut side_a: Vec<usize> = side_a.into_iter().collect();
        side_a.sort_unstable();
        side_a.dedup();
        if let Some(&q) = side_a.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidSplit(format!(
                "qubit {q} outside register of {n_qubits}"
            )));
        }
        if side_a.is_empty() || side_a.len() == n_qubits {
            return Err(Error::InvalidSplit(
                "side A must be a nonempty proper subset".into(),
            ));
        }
        if 2 * side_a.len() > n_qubits {
            side_a = (0..n_qubits).filter(|q| !side_a.contains(q)).collect();
        }
        Ok(Self { n_qubits, side_a })
    }

    /// Qubit 0 against the rest.
    pub fn one_vs_rest(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, [0])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn side_a(&self) -> &[usize] {
        &self.side_a
    }

    pub fn side_b(&self) -> Vec<usize> {
        (0..self.n_qubits)
            .filter(|q| !self.side_a.contains(q))
            .collect()
    }

    pub fn dim_a(&self) -> usize {
        1 << self.side_a.len()
    }

    pub fn dim_b(&self) -> usize {
        1 << (self.n_qubits - self.side_a.len())
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Qubit order placing side A first; `None` when it already is.
    fn leading_order(&self) -> Option<Vec<usize>> {
        let order: Vec<usize> = self.side_a.iter().copied().chain(self.side_b()).collect();
        if order.iter().enumerate().all(|(i, &q)| i == q) {
            None
        } else {
            Some(order)
        }
    }

    pub fn lipschitz(&self) -> LipschitzConstants {
        LipschitzConstants::for_dim_a(self.dim_a()).expect("dim_a >= 2 for a valid split")
    }
}

/// Lipschitz constants of negativity with respect to the trace distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzConstants {
    pub eta_n: f64,
    pub eta_n_normalized: f64,
    pub n_max: f64,
}

impl LipschitzConstants {
    pub fn for_dim_a(dim_a: usize) -> Result<Self> {
        Ok(Self {
            eta_n: lipschitz_negativity(dim_a)?,
            eta_n_normalized: lipschitz_normalized_negativity(dim_a)?,
            n_max: max_negativity(dim_a)?,
        })
    }
}

fn check_dim_a(dim_a: usize) -> Result<f64> {
    if dim_a < 2 {
        return Err(Error::out_of_range("dim_a", dim_a as f64, "dim_a >= 2"));
    }
    Ok(dim_a as f64)
}

/// `d_A / 2`
pub fn lipschitz_negativity(dim_a: usize) -> Result<f64> {
    Ok(check_dim_a(dim_a)? / 2.0)
}

/// `d_A / (d_A - 1)`
pub fn lipschitz_normalized_negativity(dim_a: usize) -> Result<f64> {
    let d = check_dim_a(dim_a)?;
    Ok(d / (d - 1.0))
}

/// `(d_A - 1) / 2`, attained by maximally entangled states.
pub fn max_negativity(dim_a: usize) -> Result<f64> {
    Ok((check_dim_a(dim_a)? - 1.0) / 2.0)
}

fn check_state_dim<T: Scalar>(rho: &DensityMatrix<T>, split: &BipartiteSplit) -> Result<()> {
    if rho.dim() != split.dim() {
        return Err(Error::mismatch(split.dim(), rho.dim()));
    }
    Ok(())
}

/// Partial transpose over side B, after moving side A to the leading factor.
pub fn partial_transpose_b<T: Scalar>(
    rho: &DensityMatrix<T>,
    split: &BipartiteSplit,
) -> Result<ComplexMatrix<T>> {
    check_state_dim(rho, split)?;
    match split.leading_order() {
        None => rho.matrix().partial_transpose(split.dim_a(), split.dim_b()),
        Some(order) => rho
            .matrix()
            .permute_qubits(&order)?
            .partial_transpose(split.dim_a(), split.dim_b()),
    }
}

/// `(||rho^{T_B}||_tr - 1) / 2` without clamping.
pub fn negativity_raw<T: Scalar>(rho: &DensityMatrix<T>, split: &BipartiteSplit) -> Result<T> {
    let pt = partial_transpose_b(rho, split)?;
    Ok((trace_norm_hermitian(&pt)? - T::one()) / T::lit(2.0))
}

/// Negativity with rounding-level negative values reported as zero.
pub fn negativity<T: Scalar>(rho: &DensityMatrix<T>, split: &BipartiteSplit) -> Result<T> {
    Ok(clamp_rounding(negativity_raw(rho, split)?))
}

pub fn normalized_negativity<T: Scalar>(
    rho: &DensityMatrix<T>,
    split: &BipartiteSplit,
) -> Result<T> {
    let n_max = T::lit(split.lipschitz().n_max);
    Ok(negativity(rho, split)? / n_max)
}

pub(crate) fn clamp_rounding<T: Scalar>(value: T) -> T {
    if value < T::zero() && value > -T::tolerances().clamp {
        T::zero()
    } else {
        value
    }
}

/// A bipartite entanglement quantifier with a known Lipschitz constant
/// relative to the trace distance.
pub trait EntanglementMeasure<T: Scalar>: Sync {
    fn name(&self) -> &'static str;

    fn evaluate(&self, rho: &DensityMatrix<T>) -> Result<T>;

    fn lipschitz_constant(&self) -> T;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Negativity {
    pub split: BipartiteSplit,
}

impl<T: Scalar> EntanglementMeasure<T> for Negativity {
    fn name(&self) -> &'static str {
        "negativity"
    }

    fn evaluate(&self, rho: &DensityMatrix<T>) -> Result<T> {
        negativity(rho, &self.split)
    }

    fn lipschitz_constant(&self) -> T {
        T::lit(self.split.lipschitz().eta_n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedNegativity {
    pub split: BipartiteSplit,
}

impl<T: Scalar> EntanglementMeasure<T> for NormalizedNegativity {
    fn name(&self) -> &'static str {
        "normalized_negativity"
    }

    fn evaluate(&self, rho: &DensityMatrix<T>) -> Result<T> {
        normalized_negativity(rho, &self.split)
    }

    fn lipschitz_constant(&self) -> T {
        T::lit(self.split.lipschitz().eta_n_normalized)
    }
}

/// Terms of the chain
/// `|E(rho) - E(omega)| <= eta_E D(L chi, L psi) <= eta_E eta_L D(chi, psi) <= 2 eta_E eta_L ||chi - psi||`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainReport<T> {
    pub entanglement_difference: T,
    pub evolved_distance_bound: T,
    pub initial_distance_bound: T,
    pub euclidean_bound: T,
    /// One flag per inequality, left to right.
    pub holds: [bool; 3],
}

impl<T: Scalar> ChainReport<T> {
    pub fn all_hold(&self) -> bool {
        self.holds.iter().all(|&h| h)
    }

    /// Smallest `rhs - lhs` across the three inequalities.
    pub fn min_slack(&self) -> T {
        let terms = [
            self.entanglement_difference,
            self.evolved_distance_bound,
            self.initial_distance_bound,
            self.euclidean_bound,
        ];
        terms
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(T::infinity(), T::min)
    }
}

/// Evaluates the chain with `eta_L = 1`, the universal contraction bound.
pub fn check_entanglement_difference_chain<T, C, M>(
    chi: &PureState<T>,
    psi: &PureState<T>,
    channel: &C,
    measure: &M,
) -> Result<ChainReport<T>>
where
    T: Scalar,
    C: Channel<T> + ?Sized,
    M: EntanglementMeasure<T> + ?Sized,
{
    check_entanglement_difference_chain_with(chi, psi, channel, measure, T::one())
}

pub fn check_entanglement_difference_chain_with<T, C, M>(
    chi: &PureState<T>,
    psi: &PureState<T>,
    channel: &C,
    measure: &M,
    eta_channel: T,
) -> Result<ChainReport<T>>
where
    T: Scalar,
    C: Channel<T> + ?Sized,
    M: EntanglementMeasure<T> + ?Sized,
{
    if chi.dim() != psi.dim() {
        return Err(Error::mismatch(chi.dim(), psi.dim()));
    }
    let slack = T::lit(1e-9);
    let eta_e = measure.lipschitz_constant();
    let (rho0, omega0) = (chi.projector(), psi.projector());
    let (rho, omega) = (channel.apply(&rho0)?, channel.apply(&omega0)?);

    let entanglement_difference = (measure.evaluate(&rho)? - measure.evaluate(&omega)?).abs();
    let evolved_distance_bound = eta_e * trace_distance(&rho, &omega)?;
    let initial_distance_bound = eta_e * eta_channel * trace_distance(&rho0, &omega0)?;
    let euclidean_bound = T::lit(2.0) * eta_e * eta_channel * euclidean_distance(chi, psi)?;

    Ok(ChainReport {
        entanglement_difference,
        evolved_distance_bound,
        initial_distance_bound,
        euclidean_bound,
        holds: [
            entanglement_difference <= evolved_distance_bound + slack,
            evolved_distance_bound <= initial_distance_bound + slack,
            initial_distance_bound <= euclidean_bound + slack,
        ],
    })
}
