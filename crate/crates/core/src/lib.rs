//! Exact sum-product statistics for finite sets of Gaussian rationals, and a
//! verified construction injecting collinear point pairs of `A × A` into the
//! sumset `(A × A) + (A × A)`.
//!
//! The crate is organized bottom-up:
//!
//! - [`exactnum`]: ℚ and ℚ(i) arithmetic, small determinants.
//! - [`setcore`]: sets, sumsets, product sets, direction tallies, energy.
//! - [`dyadic`]: dyadic classes of direction counts.
//! - [`geom4`]: the `ℝ⁴` embedding, planes, generic hyperplanes, rays.
//! - [`sphereplanar`]: hemisphere, gnomonic chart, triangulation, partners.
//! - [`certify`]: the injection, its verification, certificates.
//! - [`setfile`], [`generate`], [`sweep`], [`cli`]: I/O and the `spcert` tool.
//!
//! Pair-enumeration kernels and sweeps run on rayon when the `parallel`
//! feature is enabled (the default); see [`exec::Exec`].

pub mod certify;
pub mod cli;
pub mod dyadic;
pub mod error;
pub mod exactnum;
pub mod exec;
pub mod generate;
pub mod geom4;
pub mod setcore;
pub mod setfile;
pub mod sphereplanar;
pub mod sweep;

pub use certify::{certify, InjectionCertificate};
pub use error::{Error, Result};
pub use exactnum::{GaussianRational, Rational, Vec2Q, Vec3Q, Vec4Q};
pub use exec::Exec;
pub use setcore::{ComplexSet, DirectionTally};
