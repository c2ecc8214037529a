//! Closed-form derivatives of the mean with respect to the nine channel
//! parameters.
//!
//! For a link `h = g(d)·a_x(θ, φ) ⊗ a_z(φ)` the angle derivatives act as
//! diagonal matrices on the two steering factors:
//!
//! * `∂h/∂θ = (D_θ ⊗ I_{nz})·h`
//! * `∂h/∂φ = (D_φx ⊗ I_{nz} + I_{nx} ⊗ D_φz)·h`
//! * `∂h/∂d = ((-j2πd/λ - p/2)/d)·h`, with `ρ ∝ d^p` (`p = 2` for the squared
//!   distance and free-space models).
//!
//! With spacing `s` in wavelengths and offsets `m - (n-1)/2`:
//! `D_θ = diag(-j2πs·m·sinθ·sinφ)`, `D_φx = diag(j2πs·m·cosθ·cosφ)` and
//! `D_φz = diag(-j2πs·m·sinφ)`. At `s = 1/2` the factor `2πs` becomes `π`.

use nalgebra::{DMatrix, DVector};

use super::measurement::Operators;
use super::model::SystemModel;
use crate::channel::{centered_indices, UpaConfig};
use crate::error::Result;
use crate::geometry::{ChannelParams, SphericalTriple};
use crate::scalar::{imag, Cplx, Real};

/// Diagonals of the three derivative matrices of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivativeMatrices<T: Real> {
    /// Azimuth derivative of the horizontal factor, length `nx`.
    pub theta_x: DVector<Cplx<T>>,
    /// Elevation derivative of the horizontal factor, length `nx`.
    pub phi_x: DVector<Cplx<T>>,
    /// Elevation derivative of the vertical factor, length `nz`.
    pub phi_z: DVector<Cplx<T>>,
}

impl<T: Real> DerivativeMatrices<T> {
    pub fn new(theta: T, phi: T, cfg: &UpaConfig<T>) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        let kx = T::two_pi() * cfg.spacing_x;
        let kz = T::two_pi() * cfg.spacing_z;
        let diag = |n: usize, c: T| {
            DVector::from_iterator(n, centered_indices::<T>(n).map(|m| imag(c * m)))
        };
        Self {
            theta_x: diag(cfg.nx, -kx * st * sp),
            phi_x: diag(cfg.nx, kx * ct * cp),
            phi_z: diag(cfg.nz, -kz * sp),
        }
    }

    /// `(D_θ ⊗ I)·h`.
    pub fn d_theta(&self, h: &DVector<Cplx<T>>) -> DVector<Cplx<T>> {
        let nz = self.phi_z.len();
        DVector::from_fn(h.len(), |i, _| self.theta_x[i / nz] * h[i])
    }

    /// `(D_φx ⊗ I + I ⊗ D_φz)·h`.
    pub fn d_phi(&self, h: &DVector<Cplx<T>>) -> DVector<Cplx<T>> {
        let nz = self.phi_z.len();
        DVector::from_fn(h.len(), |i, _| {
            (self.phi_x[i / nz] + self.phi_z[i % nz]) * h[i]
        })
    }
}

/// `(-j2πd/λ - p/2)/d`, the distance derivative factor of a link.
pub fn distance_factor<T: Real>(d: T, wavelength: T, loss_exponent: T) -> Cplx<T> {
    Cplx::new(
        -loss_exponent / (T::lit(2.0) * d),
        -T::two_pi() / wavelength,
    )
}

/// Derivative stack `[∂h/∂θ, ∂h/∂φ, ∂h/∂d]` of one link in channel space.
pub fn link_derivatives<T: Real>(
    s: &SphericalTriple<T>,
    h: &DVector<Cplx<T>>,
    cfg: &UpaConfig<T>,
    wavelength: T,
    loss_exponent: T,
) -> [DVector<Cplx<T>>; 3] {
    let dm = DerivativeMatrices::new(s.theta, s.phi, cfg);
    [
        dm.d_theta(h),
        dm.d_phi(h),
        h * distance_factor(s.d, wavelength, loss_exponent),
    ]
}

/// Mean and its Jacobian, columns ordered `(θ1, φ1, d1, θ2, φ2, d2, θ3, φ3, d3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanJacobian<T: Real> {
    /// `MK × 9`.
    pub g: DMatrix<Cplx<T>>,
    /// `MK`.
    pub mu: DVector<Cplx<T>>,
}

pub fn analytic_mean_jacobian<T: Real>(model: &SystemModel<T>) -> Result<MeanJacobian<T>> {
    analytic_mean_jacobian_at(model, &model.channel_params()?)
}

pub fn analytic_mean_jacobian_at<T: Real>(
    model: &SystemModel<T>,
    params: &ChannelParams<T>,
) -> Result<MeanJacobian<T>> {
    let ops = Operators::new(model)?;
    let h = model.link_channels(params)?;
    let rows = model.bs_antennas() * model.k_slots;
    let exponent = model.loss.distance_exponent::<T>();
    let mut g = DMatrix::zeros(rows, 9);
    let mut mu = DVector::zeros(rows);
    for (link, (s, hi)) in params.links.iter().zip(h.iter()).enumerate() {
        let cfg = if link == 0 {
            &model.bs_upa
        } else {
            &model.ris_upa
        };
        mu += ops.apply(model, link, hi);
        let stack = link_derivatives(s, hi, cfg, model.carrier.wavelength, exponent);
        for (j, dh) in stack.iter().enumerate() {
            g.set_column(3 * link + j, &ops.apply(model, link, dh));
        }
    }
    Ok(MeanJacobian { g, mu })
}
