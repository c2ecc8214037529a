//! STAR-RIS phase profiles, energy splitting and power allocation, plus the
//! principal-angle machinery used to check design optimality.
//!
//! Profiles are stored as `N × K` matrices whose column `k` holds the phase
//! vector applied during slot `k`. The refraction profile `omega1` serves
//! the indoor MS, the reflection profile `omega2` the outdoor MS.

use nalgebra::{ComplexField, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalar::{cis, real, Cplx, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DesignKind {
    Dft,
    Hadamard,
    Random,
}

impl DesignKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Dft => "dft",
            Self::Hadamard => "hadamard",
            Self::Random => "random",
        }
    }

    pub fn is_structured(self) -> bool {
        !matches!(self, Self::Random)
    }

    /// Checks that an `n`-element surface can use this kind over `k` slots.
    pub fn check_dimensions(self, n: usize, k: usize) -> Result<()> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidParameter(format!("empty design {n}x{k}")));
        }
        if self.is_structured() && k < 2 * n {
            return Err(Error::InsufficientSlots { n, k });
        }
        if self == Self::Hadamard && !k.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(k));
        }
        Ok(())
    }
}

impl std::str::FromStr for DesignKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dft" => Ok(Self::Dft),
            "hadamard" => Ok(Self::Hadamard),
            "random" => Ok(Self::Random),
            other => Err(Error::InvalidParameter(format!(
                "unknown design kind {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for DesignKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfilePair<T: Real> {
    /// Refraction profile, `N × K`.
    pub omega1: DMatrix<Cplx<T>>,
    /// Reflection profile, `N × K`.
    pub omega2: DMatrix<Cplx<T>>,
    pub kind: DesignKind,
    /// Only set for [`DesignKind::Random`].
    pub seed: Option<u64>,
}

impl<T: Real> PhaseProfilePair<T> {
    pub fn elements(&self) -> usize {
        self.omega1.nrows()
    }

    pub fn slots(&self) -> usize {
        self.omega1.ncols()
    }

    /// Largest deviation of any entry from unit modulus.
    pub fn modulus_error(&self) -> T {
        self.omega1
            .iter()
            .chain(self.omega2.iter())
            .map(|w| (w.modulus() - T::one()).abs())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

/// Refraction/reflection amplitude split, `ε1² + ε2² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySplit<T> {
    pub eps1: T,
    pub eps2: T,
}

impl<T: Real> EnergySplit<T> {
    pub fn new(eps1: T, eps2: T) -> Result<Self> {
        let s = Self { eps1, eps2 };
        s.validate()?;
        Ok(s)
    }

    /// Builds the split from the refraction amplitude alone.
    pub fn from_refraction(eps1: T) -> Result<Self> {
        unit_interval("eps1", eps1)?;
        Self::new(eps1, (T::one() - eps1 * eps1).max(T::zero()).sqrt())
    }

    pub fn validate(&self) -> Result<()> {
        unit_interval("eps1", self.eps1)?;
        unit_interval("eps2", self.eps2)?;
        unit_circle("eps1² + eps2²", self.eps1, self.eps2)
    }
}

/// Pilot power shared by the two MSs, `η1² + η2² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAllocation<T> {
    pub eta1: T,
    pub eta2: T,
    /// Watts.
    pub total_power: T,
}

impl<T: Real> PowerAllocation<T> {
    pub fn new(eta1: T, eta2: T, total_power: T) -> Result<Self> {
        let a = Self {
            eta1,
            eta2,
            total_power,
        };
        a.validate()?;
        Ok(a)
    }

    pub fn from_outdoor(eta1: T, total_power: T) -> Result<Self> {
        unit_interval("eta1", eta1)?;
        Self::new(
            eta1,
            (T::one() - eta1 * eta1).max(T::zero()).sqrt(),
            total_power,
        )
    }

    pub fn validate(&self) -> Result<()> {
        unit_interval("eta1", self.eta1)?;
        unit_interval("eta2", self.eta2)?;
        unit_circle("eta1² + eta2²", self.eta1, self.eta2)?;
        if !(self.total_power > T::zero()) || !self.total_power.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "total power {} must be positive",
                self.total_power
            )));
        }
        Ok(())
    }
}

fn unit_interval<T: Real>(name: &str, x: T) -> Result<()> {
    if x >= T::zero() && x <= T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {x} outside [0, 1]"
        )))
    }
}

fn unit_circle<T: Real>(name: &str, a: T, b: T) -> Result<()> {
    let tol = T::lit(1e-12).max(T::default_epsilon() * T::lit(8.0));
    if (a * a + b * b - T::one()).abs() <= tol {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} = {} != 1",
            a * a + b * b
        )))
    }
}

/// `e^{-j2π·row·col/k}` without a normalization factor.
fn dft_entry<T: Real>(row: usize, col: usize, k: usize) -> Cplx<T> {
    // reduce the exponent first so large k keeps full phase precision
    let r = (row * col) % k;
    cis(-T::two_pi() * T::lit(r as f64) / T::lit(k as f64))
}

/// Entry of the Sylvester Hadamard matrix of order `k`.
fn hadamard_entry<T: Real>(row: usize, col: usize, _k: usize) -> Cplx<T> {
    if (row & col).count_ones().is_multiple_of(2) {
        real(T::one())
    } else {
        real(-T::one())
    }
}

/// `(rows n..2n, rows 0..n)` of a `k × k` structured matrix.
fn structured_pair<T: Real>(
    n: usize,
    k: usize,
    entry: fn(usize, usize, usize) -> Cplx<T>,
) -> (DMatrix<Cplx<T>>, DMatrix<Cplx<T>>) {
    let block = |offset: usize| DMatrix::from_fn(n, k, |r, c| entry(offset + r, c, k));
    (block(n), block(0))
}

/// Builds a refraction/reflection profile pair for an `n`-element surface
/// over `k` slots.
///
/// Structured kinds take rows `0..n` of the `k × k` DFT or Sylvester
/// Hadamard matrix for the reflection profile (row 0 is the all-ones row)
/// and rows `n..2n` for the refraction profile. `seed` is only used by the
/// random kind.
pub fn make_design<T: Real>(
    kind: DesignKind,
    n: usize,
    k: usize,
    seed: u64,
) -> Result<PhaseProfilePair<T>> {
    kind.check_dimensions(n, k)?;
    let (omega1, omega2, seed) = match kind {
        DesignKind::Dft => {
            let (o1, o2) = structured_pair(n, k, dft_entry::<T>);
            (o1, o2, None)
        }
        DesignKind::Hadamard => {
            let (o1, o2) = structured_pair(n, k, hadamard_entry::<T>);
            (o1, o2, None)
        }
        DesignKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut draw = || {
                DMatrix::from_fn(n, k, |_, _| {
                    cis(T::lit(rng.random_range(0.0..std::f64::consts::TAU)))
                })
            };
            let o2 = draw();
            let o1 = draw();
            (o1, o2, Some(seed))
        }
    };
    Ok(PhaseProfilePair {
        omega1,
        omega2,
        kind,
        seed,
    })
}

/// Largest `|⟨u, v⟩|/K` over columns `u` of `[1, Ω2ᵀ]` and `v` of `Ω1ᵀ`.
/// Zero means every refraction slot pattern is orthogonal to the
/// reflection patterns and to the constant pattern.
pub fn orthogonality_defect<T: Real>(pair: &PhaseProfilePair<T>) -> T {
    let k = pair.slots();
    let ones = DVector::from_element(k, real(T::one()));
    let mut worst = T::zero();
    for v in pair.omega1.row_iter() {
        let v = v.transpose();
        worst = worst.max(ones.dotc(&v).modulus());
        for u in pair.omega2.row_iter() {
            worst = worst.max(u.transpose().dotc(&v).modulus());
        }
    }
    worst / T::lit(k as f64)
}

/// Orthonormal basis of the column space of `a` from its SVD.
///
/// Singular values below `max(rows, cols)·ε·σ_max` count as zero. With
/// `require_full_rank` a rank deficient `a` is an error; otherwise only an
/// all-zero `a` is.
pub fn orthonormal_basis<T: Real>(
    a: &DMatrix<Cplx<T>>,
    require_full_rank: bool,
) -> Result<DMatrix<Cplx<T>>> {
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
    let rank = keep.len();
    if rank == 0 || (require_full_rank && rank < cols) {
        return Err(Error::RankDeficient { rank, cols });
    }
    Ok(u.select_columns(keep.iter()))
}

fn angles_between_bases<T: Real>(qa: &DMatrix<Cplx<T>>, qb: &DMatrix<Cplx<T>>) -> Vec<T> {
    let cross = qa.adjoint() * qb;
    let mut angles: Vec<T> = cross
        .singular_values()
        .iter()
        .map(|&s| s.max(T::zero()).min(T::one()).acos())
        .collect();
    angles.sort_by(|x, y| x.partial_cmp(y).expect("finite principal angles"));
    angles
}

/// Principal angles between the column spaces of two full-column-rank
/// matrices, ascending in `[0, π/2]`.
pub fn principal_angles<T: Real>(a: &DMatrix<Cplx<T>>, b: &DMatrix<Cplx<T>>) -> Result<Vec<T>> {
    check_rows(a, b)?;
    let qa = orthonormal_basis(a, true)?;
    let qb = orthonormal_basis(b, true)?;
    Ok(angles_between_bases(&qa, &qb))
}

/// Like [`principal_angles`] but over the column spaces themselves, so
/// redundant columns are allowed.
pub fn column_space_angles<T: Real>(a: &DMatrix<Cplx<T>>, b: &DMatrix<Cplx<T>>) -> Result<Vec<T>> {
    check_rows(a, b)?;
    let qa = orthonormal_basis(a, false)?;
    let qb = orthonormal_basis(b, false)?;
    Ok(angles_between_bases(&qa, &qb))
}

fn check_rows<T: Real>(a: &DMatrix<Cplx<T>>, b: &DMatrix<Cplx<T>>) -> Result<()> {
    if a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "subspaces live in C^{} and C^{}",
            a.nrows(),
            b.nrows()
        )));
    }
    Ok(())
}

/// Principal angles between `span[1, Ω2ᵀ]` and `span Ω1ᵀ`. The all-ones
/// column is redundant for structured designs, hence the column-space form.
pub fn design_principal_angles<T: Real>(pair: &PhaseProfilePair<T>) -> Result<Vec<T>> {
    let k = pair.slots();
    let n = pair.elements();
    let mut a = DMatrix::from_element(k, n + 1, real(T::one()));
    a.columns_mut(1, n).copy_from(&pair.omega2.transpose());
    column_space_angles(&a, &pair.omega1.transpose())
}
