//! Numerical verification of current-algebra cocycles, Chern-Simons and
//! winding invariants, Schwinger terms, crossed modules and 1-D Dirac
//! spectral flow.

pub mod chern_simons;
pub mod cocycle_lab;
pub mod crossed_module;
pub mod error;
pub mod finite_group;
pub mod fixtures;
pub mod forms;
pub mod geom_forms;
pub mod jet;
pub mod liealg;
pub mod quadrature;
pub mod random;
pub mod runner;
pub mod schwinger;
pub mod spectral;

pub use crossed_module::{check_axioms, from_central_extension, AxiomReport, CrossedModule};
pub use error::{Error, Result};
pub use geom_forms::{GroupMap, LieForm, Manifold, ManifoldGrid};
pub use liealg::{build_gauge_basis, GaugeBasis, GaugeKind, SpinBasis, TensorAlgebra, TensorElement};
pub use runner::{emit_report, run_scenario, Check, Provenance, ScenarioConfig, Status, VerificationReport, SCENARIOS};
pub use schwinger::{CurrentCase, SchwingerEngine};
pub use spectral::{assemble, spectral_flow, FourierDirac};
