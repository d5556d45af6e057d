//! Numerical harmonic analysis on H-type groups: group structure and
//! axiom validation, the biradial convolution algebra, spherical functions
//! and the Gelfand transform, Poisson kernels on the associated Siegel
//! domains with closed-form transforms, harmonic extension of boundary
//! data, and the consistency suite tying them together.

pub mod biradial;
pub mod error;
pub mod gelfand;
pub mod group;
pub mod harmonic;
pub mod poisson;
pub mod quad;
pub mod special;
pub mod verify;

pub use biradial::{BiradialProfile, Decay};
pub use error::{Error, Result};
pub use gelfand::{gelfand_transform, spherical_fn, spherical_fn_radial, SpectrumPoint};
pub use group::{DomainPoint, GroupDescriptor, GroupElement, HTypeGroup, ValidationReport};
pub use harmonic::{lb_residual, tangential_demo, BoundaryDatum, Extension};
pub use poisson::{normalization_constant, LaguerreVariant, PoissonKernel};
pub use quad::Quadrature;
pub use verify::{verify_suite, VerifyOptions, VerifyReport};
