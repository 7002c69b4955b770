//! Simulation of quantum-enhanced Sagnac interferometry.
//!
//! Fock-space states (number states and the truncated two-mode squeezed
//! vacuum) are propagated exactly through the folded Sagnac loop and detector
//! beam splitters; an independent Gaussian-moment path cross-checks the
//! squeezed-light correlators without truncation.

pub mod closed_form;
pub mod detection;
pub mod error;
pub mod fock;
pub mod moments;
pub mod network;
pub mod sagnac;
pub mod sources;
pub mod sweep;

pub use detection::{DetectionScheme, FringePoint, SchemeKind};
pub use error::{Error, Result};
pub use fock::{make_fock_state, FockBasis, OccupationVector, PureState};
pub use moments::GaussianMoments;
pub use network::{BeamSplitter, NetworkElement, PhaseShifter, ScatteringMatrix};
pub use sagnac::{ClassicalField, RotationParameters};
pub use sources::SqueezedSourceParams;
