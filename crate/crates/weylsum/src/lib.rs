//! weylsum: a desk-scale numerical laboratory for twisted GL(2) short
//! character sums.
//!
//! The crate assembles the arithmetic objects (Dirichlet characters, cusp
//! form coefficients, complete exponential sums), the circle-method
//! machinery (flexible Farey moduli sets and their step-function
//! approximation to the unit-interval indicator), the analytic transforms
//! (Bessel kernels, Hankel and Fourier integrals), and a pipeline that
//! certifies every finitely checkable identity in the chain: Voronoi
//! summation, twisted Poisson summation, the dual evaluation of the
//! circle-method sum, the Cauchy-Schwarz frequency decomposition, and the
//! bound-ratio sweeps.

pub mod arith;
pub mod characters;
pub mod circle;
pub mod expsums;
pub mod harness;
pub mod hecke;
pub mod numeric;
pub mod pipeline;
pub mod tolerances;
pub mod transforms;
