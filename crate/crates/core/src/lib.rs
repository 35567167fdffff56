//! Numerical toolkit for deciding local stability of a star-shaped cavity in a
//! two-dimensional linearly elastic body.
//!
//! The solid occupies the region between a star-shaped cavity boundary, given
//! by a radial profile `h(θ)`, and an outer circle of radius `R0` on which a
//! radial stretching displacement is prescribed. The crate solves the plane
//! Lamé equilibrium on that region, evaluates the energy functional
//! (bulk elastic energy plus cavity perimeter), assembles the constrained
//! second-variation quadratic form over Fourier perturbations of the profile,
//! and reports its spectrum. The round cavity admits closed forms for every
//! quantity involved, which the numerical paths are tested against, together
//! with the explicit stability thresholds for the round configuration.
//!
//! Modules:
//! - [`numerics`]: periodic spectral primitives and small dense linear algebra;
//! - [`geometry`]: radial profiles, curvature, measures, volume-preserving paths;
//! - [`elasticity`]: the Lamé solver on the mapped annulus and energy evaluation;
//! - [`variation`]: first/second variation, adjoint fields, constrained spectrum;
//! - [`disk`]: closed forms and stability thresholds for the round cavity;
//! - [`evolve`]: volume-constrained penalized descent and a minimality probe.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the default `std`
//! feature only switches the float math providers.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod disk;
pub mod elasticity;
pub mod error;
pub mod evolve;
pub mod geometry;
pub mod numerics;
pub mod variation;

pub use error::{Error, Result};
