//! The assembled verification pipeline: direct sums, the circle-method
//! approximation, the transform-identity certifiers, the frequency
//! decomposition, and the bound-ratio experiments.

pub mod omega;
pub mod params;
pub mod poisson;
pub mod stilde;
pub mod sums;
pub mod sweep;
pub mod voronoi;

pub use omega::{omega_decomposition, OmegaRecord};
pub use params::{ExperimentParams, ParamsError};
pub use poisson::{poisson_identity_check, PoissonReport};
pub use stilde::{stilde_consistency, stilde_x, StildeMode};
pub use sums::{approx_error_report, direct_sum, jutila_sum, ApproxErrorRecord, SumResult, Window};
pub use sweep::{
    bound_ratio_sweep, first_sign_disagreement, write_sweep_csv, SweepGrid, SweepRecord,
};
pub use voronoi::{voronoi_identity_check, voronoi_identity_check_all, VoronoiReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{what} = {requested} exceeds the desk-scale budget {limit}")]
    Budget {
        what: &'static str,
        limit: u64,
        requested: u64,
    },
    #[error("quadrature failed to converge in {what} (error estimate {err:e})")]
    NonConvergence { what: &'static str, err: f64 },
    #[error("truncation scan failed to certify a cutoff for {what}")]
    NoCutoff { what: &'static str },
    #[error(transparent)]
    Params(#[from] params::ParamsError),
    #[error(transparent)]
    Hecke(#[from] crate::hecke::HeckeError),
    #[error(transparent)]
    Character(#[from] crate::characters::CharacterError),
    #[error(transparent)]
    Circle(#[from] crate::circle::CircleError),
}
