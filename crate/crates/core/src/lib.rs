//! Mean-field theory of the tricritical Dicke triangle: three cavities of
//! three-level atoms coupled by complex photon hopping.

pub mod boundaries;
pub mod error;
pub mod landau;
pub mod meanfield;
pub mod model;
pub mod normal_phase;
pub mod oracle;
pub mod scaling;

pub use boundaries::{CriticalKind, CriticalPoint};
pub use error::{Error, Result};
pub use landau::LandauCoefficients;
pub use meanfield::{minimize_energy, observables, MeanFieldSolution, Observables, Phase};
pub use model::{atomic_ground, mf_energy, mf_gradient, AtomicGroundState, ModelParams, OrderParameterSet};
pub use normal_phase::NormalPhaseSpectrum;
pub use scaling::ScalingFit;
