//! Node positions, the spherical (azimuth, elevation, distance) description
//! of each link and the Jacobian from MS coordinates to channel parameters.
//!
//! Directions follow `p_target = p_ref + d·ξ(θ, φ)` with
//! `ξ = [cosθ·cosφ, sinθ·cosφ, sinφ]`. Link 1 is BS→outdoor MS, links 2 and 3
//! start at the RIS and end at the outdoor and indoor MS respectively.

use nalgebra::{Matrix3, Point3, SMatrix, Vector3};

use crate::error::{Error, Result};
use crate::scalar::Real;

pub type Position3<T> = Point3<T>;

/// Azimuth/elevation/distance of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalTriple<T> {
    /// Azimuth in radians, `(-π, π]`.
    pub theta: T,
    /// Elevation in radians, `[-π/2, π/2]`.
    pub phi: T,
    /// Distance in meters.
    pub d: T,
}

impl<T: Real> SphericalTriple<T> {
    pub fn new(theta: T, phi: T, d: T) -> Result<Self> {
        let s = Self { theta, phi, d };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.phi.is_finite() && self.d.is_finite()) {
            return Err(Error::NonFinite("spherical triple"));
        }
        if self.d <= T::zero() {
            return Err(Error::NonpositiveDistance(self.d.to_f64_lossy()));
        }
        Ok(())
    }

    /// Unit direction vector `ξ(θ, φ)`.
    pub fn direction(&self) -> Vector3<T> {
        direction(self.theta, self.phi)
    }
}

pub fn direction<T: Real>(theta: T, phi: T) -> Vector3<T> {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Vector3::new(ct * cp, st * cp, sp)
}

/// Positions of every node in the deployment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SceneGeometry<T: Real> {
    pub bs: Position3<T>,
    pub ris: Position3<T>,
    pub ms_outdoor: Position3<T>,
    pub ms_indoor: Position3<T>,
}

impl<T: Real> SceneGeometry<T> {
    pub fn new(
        bs: Position3<T>,
        ris: Position3<T>,
        ms_outdoor: Position3<T>,
        ms_indoor: Position3<T>,
    ) -> Result<Self> {
        let scene = Self {
            bs,
            ris,
            ms_outdoor,
            ms_indoor,
        };
        scene.validate()?;
        Ok(scene)
    }

    /// The deployment used throughout the numerical study: BS at (0,0,8),
    /// RIS at (2,2,5), outdoor MS at (5,1,2), indoor MS at (1,5,2).
    pub fn reference() -> Self {
        let p = |x: f64, y: f64, z: f64| Point3::new(T::lit(x), T::lit(y), T::lit(z));
        Self {
            bs: p(0.0, 0.0, 8.0),
            ris: p(2.0, 2.0, 5.0),
            ms_outdoor: p(5.0, 1.0, 2.0),
            ms_indoor: p(1.0, 5.0, 2.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("bs", &self.bs),
            ("ris", &self.ris),
            ("ms_outdoor", &self.ms_outdoor),
            ("ms_indoor", &self.ms_indoor),
        ] {
            if !p.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite(name));
            }
        }
        if self.bs == self.ris {
            return Err(Error::ZeroDistance("bs and ris"));
        }
        if self.ms_outdoor == self.bs {
            return Err(Error::ZeroDistance("bs and outdoor ms"));
        }
        if self.ms_outdoor == self.ris {
            return Err(Error::ZeroDistance("ris and outdoor ms"));
        }
        if self.ms_indoor == self.ris {
            return Err(Error::ZeroDistance("ris and indoor ms"));
        }
        Ok(())
    }

    /// Spherical description of the BS→RIS link, which fixes `H4`.
    pub fn bs_ris_link(&self) -> Result<SphericalTriple<T>> {
        spherical_from_positions(&self.bs, &self.ris)
    }
}

/// The nine channel parameters `(θ1, φ1, d1, θ2, φ2, d2, θ3, φ3, d3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams<T> {
    pub links: [SphericalTriple<T>; 3],
}

impl<T: Real> ChannelParams<T> {
    pub fn to_array(&self) -> [T; 9] {
        let mut out = [T::zero(); 9];
        for (i, l) in self.links.iter().enumerate() {
            out[3 * i] = l.theta;
            out[3 * i + 1] = l.phi;
            out[3 * i + 2] = l.d;
        }
        out
    }

    pub fn from_array(v: [T; 9]) -> Result<Self> {
        let link = |i: usize| SphericalTriple::new(v[3 * i], v[3 * i + 1], v[3 * i + 2]);
        Ok(Self {
            links: [link(0)?, link(1)?, link(2)?],
        })
    }
}

/// Jacobian `[T]_ij = ∂ν_j / ∂κ_i` split into its two non-zero blocks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianT<T: Real> {
    /// Outdoor MS coordinates (rows) against `ν1..ν6` (columns).
    pub t1: SMatrix<T, 3, 6>,
    /// Indoor MS coordinates (rows) against `ν7..ν9` (columns).
    pub t2: Matrix3<T>,
}

impl<T: Real> JacobianT<T> {
    pub fn assembled(&self) -> SMatrix<T, 6, 9> {
        let mut t = SMatrix::<T, 6, 9>::zeros();
        t.fixed_view_mut::<3, 6>(0, 0).copy_from(&self.t1);
        t.fixed_view_mut::<3, 3>(3, 6).copy_from(&self.t2);
        t
    }
}

/// Inverts `target = reference + d·ξ(θ, φ)`.
///
/// When the target lies straight above or below the reference the azimuth
/// is set to zero; [`jacobian`] reports that configuration as singular.
pub fn spherical_from_positions<T: Real>(
    reference: &Position3<T>,
    target: &Position3<T>,
) -> Result<SphericalTriple<T>> {
    let delta = target - reference;
    let d = delta.norm();
    if d == T::zero() {
        return Err(Error::ZeroDistance("reference and target"));
    }
    if !d.is_finite() {
        return Err(Error::NonFinite("link offset"));
    }
    let theta = if delta.x == T::zero() && delta.y == T::zero() {
        T::zero()
    } else {
        delta.y.atan2(delta.x)
    };
    // clamp guards |Δz/d| creeping past 1 by an ulp
    let ratio = (delta.z / d).max(-T::one()).min(T::one());
    Ok(SphericalTriple {
        theta,
        phi: ratio.asin(),
        d,
    })
}

pub fn position_from_spherical<T: Real>(
    reference: &Position3<T>,
    s: &SphericalTriple<T>,
) -> Position3<T> {
    reference + s.direction() * s.d
}

pub fn channel_params_from_scene<T: Real>(scene: &SceneGeometry<T>) -> Result<ChannelParams<T>> {
    Ok(ChannelParams {
        links: [
            spherical_from_positions(&scene.bs, &scene.ms_outdoor)?,
            spherical_from_positions(&scene.ris, &scene.ms_outdoor)?,
            spherical_from_positions(&scene.ris, &scene.ms_indoor)?,
        ],
    })
}

/// Derivatives of `(θ, φ, d)` of one link with respect to the target's
/// `(x, y, z)`. Rows are coordinates, columns parameters.
fn link_block<T: Real>(s: &SphericalTriple<T>, link: usize) -> Result<Matrix3<T>> {
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    // cos(asin(±1)) is not exactly zero in floating point
    if cp.abs() <= T::default_epsilon() * T::lit(16.0) {
        return Err(Error::ElevationSingularity { link });
    }
    let d = s.d;
    #[rustfmt::skip]
    let block = Matrix3::new(
        -st / (d * cp), -ct * sp / d, ct * cp,
         ct / (d * cp), -st * sp / d, st * cp,
         T::zero(),      cp / d,      sp,
    );
    Ok(block)
}

pub fn jacobian<T: Real>(scene: &SceneGeometry<T>) -> Result<JacobianT<T>> {
    scene.validate()?;
    let params = channel_params_from_scene(scene)?;
    let mut t1 = SMatrix::<T, 3, 6>::zeros();
    t1.fixed_view_mut::<3, 3>(0, 0)
        .copy_from(&link_block(&params.links[0], 1)?);
    t1.fixed_view_mut::<3, 3>(0, 3)
        .copy_from(&link_block(&params.links[1], 2)?);
    let t2 = link_block(&params.links[2], 3)?;
    Ok(JacobianT { t1, t2 })
}
