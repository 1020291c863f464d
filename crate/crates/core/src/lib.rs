//! Entanglement dynamics of Haar-random pure states under local decoherence.
//!
//! The crate evolves uniformly sampled pure states of qubit registers through
//! local noise channels, measures bipartite negativity, and compares how
//! tightly the resulting distribution concentrates with Levy-type bounds.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64` (or `f32` with a `32` suffix).
//!
//! ```
//! use entconc::channels::LocalChannels;
//! use entconc::concentration::{negativity_bound, run_ensemble, ExperimentConfig};
//! use entconc::entanglement::{negativity, BipartiteSplit};
//! use entconc::states::{sample_haar_pure, RngStream};
//!
//! let split = BipartiteSplit::one_vs_rest(3)?;
//! let psi = sample_haar_pure::<f64>(8, &mut RngStream::new(42, 0))?;
//! let rho = LocalChannels::dephasing(0.3, 3)?.apply(&psi.projector())?;
//! assert!(negativity(&rho, &split)? <= 0.5 + 1e-9);
//!
//! let cfg = ExperimentConfig::new(3, vec![0.0, 0.3], 200, 42)?;
//! let stats = run_ensemble::<f64>(&cfg)?;
//! assert!(stats[1].mean < stats[0].mean);
//!
//! let bound: f64 = negativity_bound(0.1, 2, 128, 1.0)?;
//! assert!((bound - 3.9946).abs() < 1e-3);
//! # Ok::<(), entconc::Error>(())
//! ```

pub mod channels;
pub mod concentration;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod scalar;
pub mod states;
pub mod stats;

pub use error::{Error, Result};
pub use scalar::{Scalar, Tolerances};

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
pub type Spectrum64 = linalg::Spectrum<f64>;
pub type PureState64 = states::PureState<f64>;
pub type PureState32 = states::PureState<f32>;
pub type DensityMatrix64 = states::DensityMatrix<f64>;
pub type DensityMatrix32 = states::DensityMatrix<f32>;
pub type QuantumChannel64 = channels::QuantumChannel<f64>;
pub type QuantumChannel32 = channels::QuantumChannel<f32>;
pub type LocalChannels64 = channels::LocalChannels<f64>;
pub type Dilation64 = channels::Dilation<f64>;
pub type BoundInputs64 = concentration::BoundInputs<f64>;
