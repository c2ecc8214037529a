//! The stacked measurement operators and the noiseless mean `μ(ν)`.
//!
//! Over `K` slots the received samples are stacked slot by slot into a
//! vector of length `MK`. The three links enter through
//!
//! * `A1 = 1_K ⊗ I_M` (direct path),
//! * `A2 = (Ω2ᵀ ⊗ I_M)(I_N ◇ H4)` (reflection),
//! * `A3 = (Ω1ᵀ ⊗ I_M)(I_N ◇ H4)` (refraction).
//!
//! The operators are applied without forming them: block `k` of `A2·v` is
//! `H4·diag(v)·ω_{2,k}`.

use nalgebra::{DMatrix, DVector};

use super::model::SystemModel;
use crate::error::Result;
use crate::geometry::ChannelParams;
use crate::linalg::vectorize;
use crate::scalar::{real, Cplx, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementMatrices<T: Real> {
    /// `MK × M`.
    pub a1: DMatrix<Cplx<T>>,
    /// `MK × N`.
    pub a2: DMatrix<Cplx<T>>,
    /// `MK × N`.
    pub a3: DMatrix<Cplx<T>>,
}

/// Dense `A1, A2, A3`. Column `n` of `A2` stacks `[Ω2]_{n,k}·h4_n` over `k`.
pub fn measurement_matrices<T: Real>(model: &SystemModel<T>) -> Result<MeasurementMatrices<T>> {
    model.validate()?;
    let h4 = model.bs_ris_channel()?.entries;
    let m = model.bs_antennas();
    let k = model.k_slots;
    let ones = DVector::from_element(k, real(T::one()));
    let a1 = ones.kronecker(&DMatrix::<Cplx<T>>::identity(m, m));
    let cascade = |omega: &DMatrix<Cplx<T>>| {
        DMatrix::from_fn(m * k, omega.nrows(), |row, n| {
            let (slot, antenna) = (row / m, row % m);
            omega[(n, slot)] * h4[(antenna, n)]
        })
    };
    Ok(MeasurementMatrices {
        a1,
        a2: cascade(&model.profiles.omega2),
        a3: cascade(&model.profiles.omega1),
    })
}

/// `A1·v`.
pub(crate) fn apply_direct<T: Real>(v: &DVector<Cplx<T>>, k: usize) -> DVector<Cplx<T>> {
    let m = v.len();
    DVector::from_fn(m * k, |i, _| v[i % m])
}

/// `vec(H4·diag(v)·Ω)`, i.e. `A·v` for the surface operator built from `Ω`.
pub(crate) fn apply_surface<T: Real>(
    h4: &DMatrix<Cplx<T>>,
    omega: &DMatrix<Cplx<T>>,
    v: &DVector<Cplx<T>>,
) -> DVector<Cplx<T>> {
    let mut weighted = omega.clone();
    for (mut row, &g) in weighted.row_iter_mut().zip(v.iter()) {
        row *= g;
    }
    vectorize(h4 * weighted)
}

/// Precomputed pieces shared by the mean and its derivatives.
pub(crate) struct Operators<T: Real> {
    pub h4: DMatrix<Cplx<T>>,
    pub k: usize,
    pub weights: [T; 3],
}

impl<T: Real> Operators<T> {
    pub fn new(model: &SystemModel<T>) -> Result<Self> {
        model.validate()?;
        Ok(Self {
            h4: model.bs_ris_channel()?.entries,
            k: model.k_slots,
            weights: model.link_weights(),
        })
    }

    /// Weighted contribution of link `link` (0-based) for channel-space
    /// vector `v`.
    pub fn apply(
        &self,
        model: &SystemModel<T>,
        link: usize,
        v: &DVector<Cplx<T>>,
    ) -> DVector<Cplx<T>> {
        let w = real(self.weights[link]);
        let out = match link {
            0 => apply_direct(v, self.k),
            1 => apply_surface(&self.h4, &model.profiles.omega2, v),
            _ => apply_surface(&self.h4, &model.profiles.omega1, v),
        };
        out * w
    }
}

/// `μ(ν) = η1·A1·h1 + η1·ε2·A2·h2 + η2·ε1·A3·h3` at the scene's parameters.
/// The `√P` factor is left to the Fisher prefactor `P/σ²`.
pub fn mean_vector<T: Real>(model: &SystemModel<T>) -> Result<DVector<Cplx<T>>> {
    mean_vector_at(model, &model.channel_params()?)
}

/// `μ(ν)` at arbitrary channel parameters; `H4` and the profiles stay fixed.
pub fn mean_vector_at<T: Real>(
    model: &SystemModel<T>,
    params: &ChannelParams<T>,
) -> Result<DVector<Cplx<T>>> {
    let ops = Operators::new(model)?;
    let h = model.link_channels(params)?;
    let mut mu = DVector::zeros(model.bs_antennas() * model.k_slots);
    for (link, hi) in h.iter().enumerate() {
        mu += ops.apply(model, link, hi);
    }
    Ok(mu)
}
