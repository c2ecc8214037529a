//! Fisher information matrices and the Cramér-Rao bounds derived from them.

use nalgebra::{DMatrix, Matrix3, Matrix6, SMatrix, SVector};

use super::derivatives::analytic_mean_jacobian;
use super::model::SystemModel;
use crate::error::Result;
use crate::geometry::{jacobian, JacobianT};
use crate::linalg::{real_orthonormal_basis, realify, spd_inverse};
use crate::scalar::Real;

/// `J(ν)`, 9×9.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherMatrix<T: Real> {
    pub j: SMatrix<T, 9, 9>,
}

/// `J(κ)` over the outdoor then indoor MS coordinates, 6×6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionFim<T: Real> {
    pub jk: Matrix6<T>,
}

/// Position bounds from `J(κ)⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionCrlb<T: Real> {
    pub covariance: Matrix6<T>,
    /// `√tr` of the outdoor 3×3 block, meters.
    pub rmse_outdoor: T,
    /// `√tr` of the indoor 3×3 block, meters.
    pub rmse_indoor: T,
    pub condition_number: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrlbReport<T: Real> {
    /// Diagonal of `J(ν)⁻¹` (rad² for angles, m² for distances).
    pub channel_crlb: SVector<T, 9>,
    pub position_crlb: Matrix6<T>,
    pub rmse_outdoor: T,
    pub rmse_indoor: T,
    /// Condition number of `J(ν)`.
    pub condition_number: T,
}

/// `J = (P/σ²)·Re(GᴴG)`.
pub fn fim_channel<T: Real>(model: &SystemModel<T>) -> Result<FisherMatrix<T>> {
    Ok(FisherMatrix {
        j: unit_snr_fim(model)? * model.snr(),
    })
}

/// `Re(GᴴG)`, exactly symmetric.
fn unit_snr_fim<T: Real>(model: &SystemModel<T>) -> Result<SMatrix<T, 9, 9>> {
    let g = analytic_mean_jacobian(model)?.g;
    let gram = g.adjoint() * &g;
    Ok(SMatrix::from_fn(|r, c| {
        (gram[(r, c)].re + gram[(c, r)].re) * T::lit(0.5)
    }))
}

/// Variances on the diagonal of `J(ν)⁻¹`.
pub fn crlb_channel<T: Real>(fimm: &FisherMatrix<T>) -> Result<SVector<T, 9>> {
    let (inv, _) = spd_inverse(&fimm.j)?;
    Ok(inv.diagonal())
}

/// `J(κ) = T·J(ν)·Tᵀ`.
pub fn fim_position<T: Real>(fimm: &FisherMatrix<T>, t: &JacobianT<T>) -> PositionFim<T> {
    let ta = t.assembled();
    let jk = ta * fimm.j * ta.transpose();
    PositionFim {
        jk: (jk + jk.transpose()) * T::lit(0.5),
    }
}

pub fn crlb_position<T: Real>(pf: &PositionFim<T>) -> Result<PositionCrlb<T>> {
    let (covariance, condition_number) = spd_inverse(&pf.jk)?;
    let trace = |o: usize| {
        (0..3)
            .map(|i| covariance[(o + i, o + i)])
            .fold(T::zero(), |a, b| a + b)
    };
    Ok(PositionCrlb {
        covariance,
        rmse_outdoor: trace(0).max(T::zero()).sqrt(),
        rmse_indoor: trace(3).max(T::zero()).sqrt(),
        condition_number,
    })
}

/// Channel and position bounds for one configuration.
///
/// The unit-SNR information is inverted and `σ²/P` applied afterwards, so
/// every variance is exactly proportional to `σ²/P`.
pub fn evaluate<T: Real>(model: &SystemModel<T>) -> Result<CrlbReport<T>> {
    let unit = FisherMatrix {
        j: unit_snr_fim(model)?,
    };
    let (inv, condition_number) = spd_inverse(&unit.j)?;
    let t = jacobian(&model.scene)?;
    let pos = crlb_position(&fim_position(&unit, &t))?;
    let scale = T::one() / model.snr();
    Ok(CrlbReport {
        channel_crlb: inv.diagonal() * scale,
        position_crlb: pos.covariance * scale,
        rmse_outdoor: pos.rmse_outdoor * scale.sqrt(),
        rmse_indoor: pos.rmse_indoor * scale.sqrt(),
        condition_number,
    })
}

/// Diagonal blocks of `J(κ)⁻¹` through orthogonal projections:
/// `(σ²/P)·(Ĝ1ᴴ(I − P_Ĝ2)Ĝ1)⁻¹` and `(σ²/P)·(Ĝ2ᴴ(I − P_Ĝ1)Ĝ2)⁻¹`, where
/// `Ĝ1 = G1·T1ᵀ` and `Ĝ2 = G2·T2ᵀ`.
///
/// The Fisher information only sees `Re(ĜᴴĜ)`, so the projections act on the
/// real composite `[Re Ĝ; Im Ĝ]`; that is the space in which the identity
/// with the direct inverse is exact. The projected Gram `Ĝiᵀ(I − P)Ĝi` is
/// taken as `R22ᵀR22` from a Householder QR of `[Ĝother, Ĝi]` rather than by
/// subtracting the projection explicitly.
pub fn block_inverse_via_projections<T: Real>(
    model: &SystemModel<T>,
    t: &JacobianT<T>,
) -> Result<(Matrix3<T>, Matrix3<T>)> {
    let g = analytic_mean_jacobian(model)?.g;
    let t1 = DMatrix::from_column_slice(3, 6, t.t1.as_slice()).map(crate::scalar::real);
    let t2 = DMatrix::from_column_slice(3, 3, t.t2.as_slice()).map(crate::scalar::real);
    let g1_hat = realify(&(g.columns(0, 6) * t1.transpose()));
    let g2_hat = realify(&(g.columns(6, 3) * t2.transpose()));
    let scale = T::one() / model.snr();
    let block = |target: &DMatrix<T>, other: &DMatrix<T>| -> Result<Matrix3<T>> {
        real_orthonormal_basis(target)?;
        real_orthonormal_basis(other)?;
        let mut stacked = DMatrix::zeros(target.nrows(), 6);
        stacked.columns_mut(0, 3).copy_from(other);
        stacked.columns_mut(3, 3).copy_from(target);
        let r = stacked.qr().r();
        let r22 = Matrix3::from_fn(|i, j| r[(3 + i, 3 + j)]);
        let (inv, _) = spd_inverse(&(r22.transpose() * r22))?;
        Ok(inv * scale)
    };
    Ok((block(&g1_hat, &g2_hat)?, block(&g2_hat, &g1_hat)?))
}
