//! Smooth weights, Bessel kernels, and the oscillatory integrals carrying
//! the analytic content of the transform chain.

pub mod bessel;
pub mod bump;
pub mod integrals;

pub use bessel::{bessel_j, bessel_table, BesselTable};
pub use bump::BumpFunction;
pub use integrals::{
    bump_fourier, hankel_transform, i1_below_turning_point, i2_continuous, integral_i1,
    integral_i2, integral_im, scan_cutoff, KernelMode, OscillatoryIntegralResult,
};
