//! Small dense helpers on top of nalgebra.

use nalgebra::{allocator::Allocator, DMatrix, DVector, DefaultAllocator, Dim, OMatrix, SMatrix};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Condition number above which a Fisher matrix is treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Inverse of a symmetric positive definite matrix through its
/// eigendecomposition, returned with the 2-norm condition number.
///
/// Fails with [`Error::SingularFim`] when the smallest eigenvalue is not
/// positive or the condition number exceeds [`MAX_CONDITION`].
pub fn spd_inverse<T: Real, const N: usize>(m: &SMatrix<T, N, N>) -> Result<(SMatrix<T, N, N>, T)> {
    let (inv, cond) = spd_inverse_dyn(&DMatrix::from_column_slice(N, N, m.as_slice()))?;
    Ok((SMatrix::from_column_slice(inv.as_slice()), cond))
}

pub fn spd_inverse_dyn<T: Real>(m: &DMatrix<T>) -> Result<(DMatrix<T>, T)> {
    if !m.iter().all(|x| x.is_finite()) {
        return Err(Error::SingularFim {
            condition: f64::INFINITY,
        });
    }
    let sym = (m + m.transpose()) * T::lit(0.5);
    let condition = spd_condition(&sym)?;
    if condition.to_f64_lossy() > MAX_CONDITION {
        return Err(Error::SingularFim {
            condition: condition.to_f64_lossy(),
        });
    }
    // Jacobi scaling: entries mix rad and m units, the unit-diagonal form is
    // far better conditioned than the raw matrix.
    let scale = sym.diagonal().map(|x| T::one() / x.sqrt());
    let unit = DMatrix::from_fn(sym.nrows(), sym.ncols(), |i, j| {
        sym[(i, j)] * scale[i] * scale[j]
    });
    let eig = unit.symmetric_eigen();
    if !eig.eigenvalues.iter().all(|&l| l > T::zero()) {
        return Err(Error::SingularFim {
            condition: f64::INFINITY,
        });
    }
    let v = &eig.eigenvectors;
    let scaled = DMatrix::from_fn(v.nrows(), v.ncols(), |i, j| v[(i, j)] / eig.eigenvalues[j]);
    let inv = scaled * v.transpose();
    Ok((
        DMatrix::from_fn(inv.nrows(), inv.ncols(), |i, j| {
            inv[(i, j)] * scale[i] * scale[j]
        }),
        condition,
    ))
}

/// 2-norm condition number of a symmetric matrix; infinite unless it is
/// positive definite.
fn spd_condition<T: Real>(sym: &DMatrix<T>) -> Result<T> {
    let eig = sym.clone().symmetric_eigen();
    let max = eig
        .eigenvalues
        .iter()
        .copied()
        .fold(T::zero(), |a, b| a.max(b));
    let min = eig.eigenvalues.iter().copied().fold(max, |a, b| a.min(b));
    if !(min > T::zero()) {
        return Err(Error::SingularFim {
            condition: f64::INFINITY,
        });
    }
    Ok(max / min)
}

/// Symmetric part-aware check: largest `|m - mᵀ|` relative to `max |m|`.
pub fn asymmetry<T: Real, D: Dim>(m: &OMatrix<T, D, D>) -> T
where
    DefaultAllocator: Allocator<D, D>,
{
    let scale = m.amax();
    if scale == T::zero() {
        return T::zero();
    }
    (m - m.transpose()).amax() / scale
}

/// Real composite `[Re a; Im a]`, so that `Re(aᴴb) = r(a)ᵀ r(b)`.
pub fn realify<T: Real>(a: &DMatrix<Cplx<T>>) -> DMatrix<T> {
    let (rows, cols) = a.shape();
    DMatrix::from_fn(2 * rows, cols, |i, j| {
        if i < rows {
            a[(i, j)].re
        } else {
            a[(i - rows, j)].im
        }
    })
}

/// Orthonormal basis of a real full-column-rank matrix.
pub fn real_orthonormal_basis<T: Real>(a: &DMatrix<T>) -> Result<DMatrix<T>> {
    let cols = a.ncols();
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("left singular vectors requested");
    let sigma_max = svd
        .singular_values
        .iter()
        .copied()
        .fold(T::zero(), |x, y| x.max(y));
    let tol = T::lit(a.nrows().max(cols) as f64) * T::default_epsilon() * sigma_max;
    let keep: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| sigma_max > T::zero() && s > tol)
        .map(|(i, _)| i)
        .collect();
    if keep.len() < cols {
        return Err(Error::RankDeficient {
            rank: keep.len(),
            cols,
        });
    }
    Ok(u.select_columns(keep.iter()))
}

/// `vec(m)` in column-major order.
pub fn vectorize<T: nalgebra::Scalar>(m: DMatrix<T>) -> DVector<T> {
    let len = m.len();
    m.reshape_generic(nalgebra::Dyn(len), nalgebra::Const::<1>)
}
