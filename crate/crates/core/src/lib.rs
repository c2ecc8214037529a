//! Cramér-Rao bounds for simultaneous indoor/outdoor 3D localization through
//! a STAR-RIS (simultaneously transmitting and reflecting reconfigurable
//! intelligent surface) in a mmWave uplink.
//!
//! An outdoor MS reaches the BS directly and through the surface's
//! reflection; an indoor MS reaches it only through refraction. The crate
//! builds the line-of-sight channels, the stacked received mean over `K`
//! pilot slots, its closed-form derivatives, the Fisher information for the
//! nine channel parameters and, through the geometry Jacobian, the position
//! bounds of both MSs.
//!
//! Everything is generic over the scalar type ([`Real`]); the `f64`
//! aliases at the crate root are what the experiments use.

// `!(x > 0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod fim;
pub mod geometry;
pub mod linalg;
pub mod scalar;
pub mod starris;

pub use error::{Error, Result};
pub use scalar::{Cplx, Real};
pub use starris::DesignKind;

pub type Position = geometry::Position3<f64>;
pub type Scene = geometry::SceneGeometry<f64>;
pub type Spherical = geometry::SphericalTriple<f64>;
pub type Params = geometry::ChannelParams<f64>;
pub type Jacobian = geometry::JacobianT<f64>;
pub type Upa = channel::UpaConfig<f64>;
pub type Carrier = channel::CarrierConfig<f64>;
pub type Profiles = starris::PhaseProfilePair<f64>;
pub type Split = starris::EnergySplit<f64>;
pub type Allocation = starris::PowerAllocation<f64>;
pub type Model = fim::SystemModel<f64>;
pub type Fisher = fim::FisherMatrix<f64>;
pub type PositionFisher = fim::PositionFim<f64>;
pub type Report = fim::CrlbReport<f64>;

/// Single-precision aliases.
pub mod f32 {
    pub type Scene = crate::geometry::SceneGeometry<f32>;
    pub type Model = crate::fim::SystemModel<f32>;
    pub type Report = crate::fim::CrlbReport<f32>;
}
