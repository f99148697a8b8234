//! Finite-section matrices of Toeplitz, Hankel, dual Toeplitz, truncated
//! Toeplitz and dual truncated Toeplitz operators.
//!
//! Windows: `Hplus(N)` holds frequencies `0..=N`; `Hminus(N)` holds
//! `-1, -2, .., -N` in that order (so `V` maps slot `k` to slot `k`);
//! `Full(N)` holds `-N..=N` in increasing order. `KuPerpBlock(N)` is
//! `Hplus(N)` followed by `Hminus(N)`, the coordinates of `U^*h` for
//! `U = diag(M_u, I)`. `Ku(N)` is the `Hplus(N)` window carrying a model
//! space compression.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::fourier::{convolve, project_minus, project_plus, FourierVector, FrequencyBand};
use crate::C64;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Default cluster tolerance for extremal spaces, relative to `σ_max`.
pub const CLUSTER_TOL: f64 = 1e-8;
/// Default truncation tolerance for the coefficients of `u`.
pub const U_EPS: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisTag {
    Hplus(usize),
    Hminus(usize),
    Ku(usize),
    KuPerpBlock(usize),
    Full(usize),
}

impl BasisTag {
    pub fn dim(&self) -> usize {
        match *self {
            BasisTag::Hplus(n) | BasisTag::Ku(n) => n + 1,
            BasisTag::Hminus(n) => n,
            BasisTag::KuPerpBlock(n) | BasisTag::Full(n) => 2 * n + 1,
        }
    }

    /// Frequency carried by slot `i`. Analytic block slots report `k`,
    /// coanalytic block slots `-j`.
    pub fn frequency(&self, i: usize) -> i64 {
        let i = i as i64;
        match *self {
            BasisTag::Hplus(_) | BasisTag::Ku(_) => i,
            BasisTag::Hminus(_) => -(i + 1),
            BasisTag::Full(n) => i - n as i64,
            BasisTag::KuPerpBlock(n) => {
                if i <= n as i64 {
                    i
                } else {
                    -(i - n as i64)
                }
            }
        }
    }

    /// Slot holding frequency `n`, if the window has one.
    pub fn slot(&self, n: i64) -> Option<usize> {
        (0..self.dim()).find(|&i| self.frequency(i) == n)
    }

    /// Coordinates of `f` in this window (frequencies outside are dropped).
    pub fn coords(&self, f: &FourierVector) -> DVector<C64> {
        DVector::from_fn(self.dim(), |i, _| f.coeff(self.frequency(i)))
    }

    /// The Laurent vector with these coordinates. For `KuPerpBlock` this is
    /// `x + y` with `x` analytic and `y` coanalytic, before applying `U`.
    pub fn vector(&self, coords: &DVector<C64>) -> FourierVector {
        assert_eq!(coords.len(), self.dim(), "coordinate length does not match {self:?}");
        let lo = (0..self.dim()).map(|i| self.frequency(i)).min().unwrap_or(0);
        let hi = (0..self.dim()).map(|i| self.frequency(i)).max().unwrap_or(0);
        let mut v = vec![ZERO; (hi - lo + 1) as usize];
        for (i, c) in coords.iter().enumerate() {
            v[(self.frequency(i) - lo) as usize] = *c;
        }
        FourierVector::new(lo, v)
    }
}

/// A dense matrix between two windows.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    rows: BasisTag,
    cols: BasisTag,
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(rows: BasisTag, cols: BasisTag, entries: DMatrix<C64>) -> Self {
        assert_eq!(
            (entries.nrows(), entries.ncols()),
            (rows.dim(), cols.dim()),
            "matrix shape does not match its windows"
        );
        Self { rows, cols, entries }
    }

    pub fn from_fn(rows: BasisTag, cols: BasisTag, f: impl Fn(i64, i64) -> C64) -> Self {
        let entries = DMatrix::from_fn(rows.dim(), cols.dim(), |i, j| f(rows.frequency(i), cols.frequency(j)));
        Self { rows, cols, entries }
    }

    pub fn identity(tag: BasisTag) -> Self {
        Self::new(tag, tag, DMatrix::identity(tag.dim(), tag.dim()))
    }

    pub fn rows(&self) -> BasisTag {
        self.rows
    }

    pub fn cols(&self) -> BasisTag {
        self.cols
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn entry(&self, row_freq: i64, col_freq: i64) -> C64 {
        match (self.rows.slot(row_freq), self.cols.slot(col_freq)) {
            (Some(i), Some(j)) => self.entries[(i, j)],
            _ => ZERO,
        }
    }

    pub fn apply(&self, f: &FourierVector) -> FourierVector {
        self.rows.vector(&(&self.entries * self.cols.coords(f)))
    }

    pub fn adjoint(&self) -> Self {
        Self { rows: self.cols, cols: self.rows, entries: self.entries.adjoint() }
    }

    /// `self · other`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.cols.dim(), other.rows.dim(), "incompatible windows");
        Self { rows: self.rows, cols: other.cols, entries: &self.entries * &other.entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.entries.shape(), other.entries.shape(), "incompatible windows");
        Self { rows: self.rows, cols: self.cols, entries: &self.entries - &other.entries }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.entries.shape(), other.entries.shape(), "incompatible windows");
        Self { rows: self.rows, cols: self.cols, entries: &self.entries + &other.entries }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: &self.entries * c }
    }

    /// Same entries under different window labels.
    pub fn retag(self, rows: BasisTag, cols: BasisTag) -> Self {
        Self::new(rows, cols, self.entries)
    }

    /// Submatrix of rows and columns whose frequencies lie in `band`.
    pub fn restrict(&self, band: FrequencyBand) -> DMatrix<C64> {
        let ri: Vec<usize> = (0..self.rows.dim()).filter(|&i| band.contains(self.rows.frequency(i))).collect();
        let ci: Vec<usize> = (0..self.cols.dim()).filter(|&j| band.contains(self.cols.frequency(j))).collect();
        DMatrix::from_fn(ri.len(), ci.len(), |a, b| self.entries[(ri[a], ci[b])])
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        if self.entries.is_empty() {
            return Vec::new();
        }
        self.entries.clone().svd(false, false).singular_values.iter().copied().collect()
    }
}

/// Frobenius norm of `a - b` on `band × band`.
pub fn band_residual(a: &OperatorMatrix, b: &OperatorMatrix, band: FrequencyBand) -> f64 {
    (a.restrict(band) - b.restrict(band)).norm()
}

/// `T_φ` on `Hplus(N)`: entry `(j, k) = φ̂(j - k)`.
pub fn toeplitz(phi: &FourierVector, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(BasisTag::Hplus(n), BasisTag::Hplus(n), |j, k| phi.coeff(j - k))
}

/// `P_{[0, rows]} T_φ` restricted to `[0, cols]`.
pub fn toeplitz_rect(phi: &FourierVector, rows: usize, cols: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(BasisTag::Hplus(rows), BasisTag::Hplus(cols), |j, k| phi.coeff(j - k))
}

/// `H_φ: Hplus(N) → Hminus(N)`: entry `(-j, k) = φ̂(-j - k)`.
pub fn hankel(phi: &FourierVector, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(BasisTag::Hminus(n), BasisTag::Hplus(n), |m, k| phi.coeff(m - k))
}

/// `S_φ` on `Hminus(N)`: entry `(-j, -k) = φ̂(k - j)`.
pub fn dual_toeplitz(phi: &FourierVector, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(BasisTag::Hminus(n), BasisTag::Hminus(n), |m, l| phi.coeff(m - l))
}

/// `M_φ` on `Full(N)`.
pub fn multiplication(phi: &FourierVector, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(BasisTag::Full(n), BasisTag::Full(n), |m, l| phi.coeff(m - l))
}

/// `P_{K_u} = I - T_u T_u^*` on the `H²` window, tagged `Ku(N)`.
///
/// `T_u` is lower triangular, so this equals the compression of the true
/// projection to the window (up to the truncation of `u`).
pub fn model_projection(u: &FourierVector, n: usize) -> OperatorMatrix {
    let t = toeplitz(u, n);
    let p = DMatrix::identity(n + 1, n + 1) - t.entries() * t.entries().adjoint();
    OperatorMatrix::new(BasisTag::Ku(n), BasisTag::Ku(n), p)
}

/// `A_φ = P_{K_u} T_φ P_{K_u}` on `Ku(N)`.
pub fn tto(phi: &FourierVector, u: &FourierVector, n: usize) -> OperatorMatrix {
    let p = model_projection(u, n);
    let t = toeplitz(phi, n).retag(BasisTag::Ku(n), BasisTag::Ku(n));
    p.compose(&t).compose(&p)
}

/// `P_{K_u}` placed inside `Full(N)`.
fn model_projection_full(u: &FourierVector, n: usize) -> DMatrix<C64> {
    let p = model_projection(u, n);
    let mut full = DMatrix::zeros(2 * n + 1, 2 * n + 1);
    full.view_mut((n, n), (n + 1, n + 1)).copy_from(p.entries());
    full
}

/// `I - P_{K_u}` on `Full(N)`.
pub fn kperp_projection(u: &FourierVector, n: usize) -> OperatorMatrix {
    let q = DMatrix::identity(2 * n + 1, 2 * n + 1) - model_projection_full(u, n);
    OperatorMatrix::new(BasisTag::Full(n), BasisTag::Full(n), q)
}

/// `D_φ = Q M_φ Q` on `Full(N)` with `Q = I - P_{K_u}`.
pub fn dtto_full(phi: &FourierVector, u: &FourierVector, n: usize) -> OperatorMatrix {
    let q = kperp_projection(u, n);
    q.compose(&multiplication(phi, n)).compose(&q)
}

/// `B_φ = (I - P_{K_u}) M_φ P_{K_u}` from `Ku(N)` into `Full(N)`.
pub fn truncated_hankel_b(phi: &FourierVector, u: &FourierVector, n: usize) -> OperatorMatrix {
    let q = kperp_projection(u, n);
    let p = model_projection(u, n);
    let mut embed = DMatrix::zeros(2 * n + 1, n + 1);
    embed.view_mut((n, 0), (n + 1, n + 1)).copy_from(p.entries());
    let entries = q.entries() * multiplication(phi, n).entries() * embed;
    OperatorMatrix::new(BasisTag::Full(n), BasisTag::Ku(n), entries)
}

/// `U^* D_φ U = [T_φ, H^*_{uφ̄}; H_{uφ}, S_φ]` on `KuPerpBlock(N)`.
pub fn dtto_block(phi: &FourierVector, u: &FourierVector, n: usize) -> OperatorMatrix {
    let t = toeplitz(phi, n);
    let s = dual_toeplitz(phi, n);
    let h = hankel(&convolve(u, phi), n);
    let h_star = hankel(&convolve(u, &phi.conj()), n).adjoint();
    let mut m = DMatrix::zeros(2 * n + 1, 2 * n + 1);
    m.view_mut((0, 0), (n + 1, n + 1)).copy_from(t.entries());
    m.view_mut((0, n + 1), (n + 1, n)).copy_from(h_star.entries());
    m.view_mut((n + 1, 0), (n, n + 1)).copy_from(h.entries());
    m.view_mut((n + 1, n + 1), (n, n)).copy_from(s.entries());
    OperatorMatrix::new(BasisTag::KuPerpBlock(n), BasisTag::KuPerpBlock(n), m)
}

/// `U (x ⊕ y) = u·x + y` for block coordinates.
pub fn block_to_laurent(coords: &DVector<C64>, u: &FourierVector, n: usize) -> FourierVector {
    let tag = BasisTag::KuPerpBlock(n);
    let v = tag.vector(coords);
    &convolve(u, &project_plus(&v)) + &project_minus(&v)
}

/// `D_φ h = (I - P₊)(φh) + u P₊(ū φ h)` by convolutions. `h` is assumed in `K_u^⊥`.
pub fn dtto_direct(phi: &FourierVector, u: &FourierVector, h: &FourierVector) -> FourierVector {
    let ph = convolve(phi, h);
    let analytic = convolve(u, &project_plus(&convolve(&u.conj(), &ph)));
    &project_minus(&ph) + &analytic
}

/// `P_{K_u} f = P₊f - u P₊(ū f)`.
pub fn project_model(u: &FourierVector, f: &FourierVector) -> FourierVector {
    let pf = project_plus(f);
    &pf - &convolve(u, &project_plus(&convolve(&u.conj(), &pf)))
}

/// `(I - P_{K_u}) f`.
pub fn project_kperp(u: &FourierVector, f: &FourierVector) -> FourierVector {
    f - &project_model(u, f)
}

/// Largest singular value.
pub fn operator_norm(m: &OperatorMatrix) -> f64 {
    m.singular_values().first().copied().unwrap_or(0.0)
}

/// Top singular-vector cluster.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalSubspace {
    pub sigma_max: f64,
    /// Orthonormal right singular vectors in the column window's coordinates.
    pub basis: Vec<Vec<C64>>,
    /// `σ_max` minus the largest singular value outside the cluster (or `σ_max` itself).
    pub gap: f64,
    pub window: BasisTag,
}

impl ExtremalSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn vector(&self, i: usize) -> DVector<C64> {
        DVector::from_column_slice(&self.basis[i])
    }

    pub fn fourier(&self, i: usize) -> FourierVector {
        self.window.vector(&self.vector(i))
    }
}

/// Right singular vectors with `σ ≥ σ_max - tol`.
pub fn extremal_space(m: &OperatorMatrix, tol: f64) -> ExtremalSubspace {
    let svd = m.entries.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested right singular vectors");
    let sv = &svd.singular_values;
    let sigma_max = sv.iter().copied().fold(0.0, f64::max);
    let mut basis = Vec::new();
    let mut next = None;
    for (i, &s) in sv.iter().enumerate() {
        if s >= sigma_max - tol {
            basis.push(v_t.row(i).iter().map(|c| c.conj()).collect());
        } else {
            next = Some(next.map_or(s, |x: f64| x.max(s)));
        }
    }
    // zero columns beyond the SVD's thin dimension still count as σ = 0
    if next.is_none() && sv.len() < m.cols.dim() {
        next = Some(0.0);
    }
    ExtremalSubspace { sigma_max, basis, gap: sigma_max - next.unwrap_or(0.0), window: m.cols }
}
