//! Uniform planar array responses, line-of-sight channels and path loss.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::SphericalTriple;
use crate::scalar::{cis, Cplx, Real};

pub const SPEED_OF_LIGHT: f64 = 3.0e8;

/// Uniform planar array lying parallel to the x-z plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpaConfig<T> {
    pub nx: usize,
    pub nz: usize,
    /// Element spacing along x, in wavelengths.
    pub spacing_x: T,
    /// Element spacing along z, in wavelengths.
    pub spacing_z: T,
}

impl<T: Real> UpaConfig<T> {
    /// Half-wavelength spaced `nx × nz` array.
    pub fn half_wavelength(nx: usize, nz: usize) -> Self {
        Self {
            nx,
            nz,
            spacing_x: T::lit(0.5),
            spacing_z: T::lit(0.5),
        }
    }

    pub fn len(&self) -> usize {
        self.nx * self.nz
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.nz == 0 {
            return Err(Error::InvalidParameter(format!(
                "array needs at least one element per axis, got {}x{}",
                self.nx, self.nz
            )));
        }
        if !(self.spacing_x > T::zero() && self.spacing_z > T::zero()) {
            return Err(Error::InvalidParameter(
                "element spacing must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierConfig<T> {
    /// Meters.
    pub wavelength: T,
}

impl<T: Real> CarrierConfig<T> {
    pub fn from_wavelength(wavelength: T) -> Result<Self> {
        if !(wavelength > T::zero()) || !wavelength.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "wavelength {wavelength} must be positive"
            )));
        }
        Ok(Self { wavelength })
    }

    pub fn from_frequency(hz: T) -> Result<Self> {
        Self::from_wavelength(T::lit(SPEED_OF_LIGHT) / hz)
    }

    /// Carrier frequency in Hz.
    pub fn frequency(&self) -> T {
        T::lit(SPEED_OF_LIGHT) / self.wavelength
    }
}

impl<T: Real> Default for CarrierConfig<T> {
    /// 28 GHz.
    fn default() -> Self {
        Self {
            wavelength: T::lit(SPEED_OF_LIGHT / 28.0e9),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathLossModel {
    /// `ρ = d²`.
    #[default]
    SquaredDistance,
    /// `ρ = d²·f²/10^8.755`, `f` in kHz.
    FreeSpace,
    /// 3GPP UMi: `ρ = 10^2.27·d^3.67·f^2.6`, `f` in GHz.
    Umi3gpp,
}

impl PathLossModel {
    /// Exponent `p` in `ρ ∝ d^p`.
    pub fn distance_exponent<T: Real>(self) -> T {
        match self {
            Self::SquaredDistance | Self::FreeSpace => T::lit(2.0),
            Self::Umi3gpp => T::lit(3.67),
        }
    }
}

pub fn path_loss<T: Real>(model: PathLossModel, d: T, carrier: &CarrierConfig<T>) -> Result<T> {
    if !(d > T::zero()) {
        return Err(Error::NonpositiveDistance(d.to_f64_lossy()));
    }
    let ten = T::lit(10.0);
    Ok(match model {
        PathLossModel::SquaredDistance => d * d,
        PathLossModel::FreeSpace => {
            let f_khz = carrier.frequency() / T::lit(1e3);
            d * d * f_khz * f_khz / ten.powf(T::lit(8.755))
        }
        PathLossModel::Umi3gpp => {
            let f_ghz = carrier.frequency() / T::lit(1e9);
            ten.powf(T::lit(2.27)) * d.powf(T::lit(3.67)) * f_ghz.powf(T::lit(2.6))
        }
    })
}

/// Offsets `m - (n-1)/2` of the symmetric element grid.
pub(crate) fn centered_indices<T: Real>(n: usize) -> impl Iterator<Item = T> {
    let center = T::lit((n as f64 - 1.0) / 2.0);
    (0..n).map(move |m| T::lit(m as f64) - center)
}

fn linear_response<T: Real>(n: usize, spacing: T, direction_cosine: T) -> DVector<Cplx<T>> {
    let k = T::two_pi() * spacing * direction_cosine;
    DVector::from_iterator(n, centered_indices::<T>(n).map(|m| cis(k * m)))
}

/// Horizontal factor; phase gradient `cosθ·sinφ` per element.
pub fn steering_x<T: Real>(theta: T, phi: T, n: usize, spacing: T) -> DVector<Cplx<T>> {
    linear_response(n, spacing, theta.cos() * phi.sin())
}

/// Vertical factor; phase gradient `cosφ` per element.
pub fn steering_z<T: Real>(phi: T, n: usize, spacing: T) -> DVector<Cplx<T>> {
    linear_response(n, spacing, phi.cos())
}

/// `a_x(θ, φ) ⊗ a_z(φ)`; element `ix·nz + iz`.
pub fn upa_response<T: Real>(theta: T, phi: T, cfg: &UpaConfig<T>) -> DVector<Cplx<T>> {
    let ax = steering_x(theta, phi, cfg.nx, cfg.spacing_x);
    let az = steering_z(phi, cfg.nz, cfg.spacing_z);
    ax.kronecker(&az)
}

/// LoS channel vector of one MS link.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelVector<T: Real> {
    pub entries: DVector<Cplx<T>>,
    /// 1 (BS-outdoor), 2 (RIS-outdoor) or 3 (RIS-indoor).
    pub link_index: usize,
}

/// BS-RIS channel `H4`, `M × N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix<T: Real> {
    pub entries: DMatrix<Cplx<T>>,
}

/// Complex gain `e^{-j2πd/λ}/√ρ` shared by every LoS link.
pub fn link_gain<T: Real>(
    d: T,
    model: PathLossModel,
    carrier: &CarrierConfig<T>,
) -> Result<Cplx<T>> {
    let rho = path_loss(model, d, carrier)?;
    Ok(cis(-T::two_pi() * d / carrier.wavelength) / rho.sqrt())
}

pub fn los_channel<T: Real>(
    s: &SphericalTriple<T>,
    cfg: &UpaConfig<T>,
    model: PathLossModel,
    carrier: &CarrierConfig<T>,
    link_index: usize,
) -> Result<ChannelVector<T>> {
    s.validate()?;
    let gain = link_gain(s.d, model, carrier)?;
    let entries = upa_response(s.theta, s.phi, cfg) * gain;
    Ok(ChannelVector {
        entries,
        link_index,
    })
}

/// `H4 = g·a_BS·a_RISᴴ` with both responses evaluated at the BS→RIS angles.
pub fn bs_ris_channel<T: Real>(
    s4: &SphericalTriple<T>,
    bs_cfg: &UpaConfig<T>,
    ris_cfg: &UpaConfig<T>,
    model: PathLossModel,
    carrier: &CarrierConfig<T>,
) -> Result<ChannelMatrix<T>> {
    s4.validate()?;
    let gain = link_gain(s4.d, model, carrier)?;
    let a_bs = upa_response(s4.theta, s4.phi, bs_cfg) * gain;
    let a_ris = upa_response(s4.theta, s4.phi, ris_cfg);
    Ok(ChannelMatrix {
        entries: a_bs * a_ris.adjoint(),
    })
}
