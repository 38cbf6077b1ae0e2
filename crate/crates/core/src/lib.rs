//! Numerical machinery for analytic functions on the unit disc: boundary
//! grids, outer factorization, Dirichlet-type norms, polynomial approximation
//! and lemma-level inequality checks.

pub mod approx;
pub mod blaschke;
pub mod carleson;
pub mod error;
pub mod factorization;
pub mod families;
pub mod grid;
pub mod harness;
pub mod norms;
pub mod poisson;
pub mod quadrature;
pub mod scalar;
pub mod sets;
pub mod spectral;
pub mod taylor;

pub use error::{Error, Result};
pub use scalar::{Cplx, Scalar};

pub type DiscFunction64 = factorization::DiscFunction<f64>;
pub type DiscFunction32 = factorization::DiscFunction<f32>;
pub type LogModulus64 = factorization::LogModulus<f64>;
pub type LogModulus32 = factorization::LogModulus<f32>;
pub type BoundaryGrid64 = grid::BoundaryGrid<f64>;
pub type BoundaryGrid32 = grid::BoundaryGrid<f32>;
pub type ArcSet64 = sets::ArcSet<f64>;
pub type ArcSet32 = sets::ArcSet<f32>;
pub type BlaschkeProduct64 = blaschke::BlaschkeProduct<f64>;
pub type BlaschkeProduct32 = blaschke::BlaschkeProduct<f32>;
pub type NormReport64 = norms::NormReport<f64>;
pub type NormReport32 = norms::NormReport<f32>;
