//! Laurent coefficient arithmetic on the unit circle.
//!
//! A [`FourierVector`] is a finite window of Fourier coefficients
//! `f(e^{it}) = Σ c_n e^{int}`. Multiplication by a symbol is convolution,
//! the Riesz projection `P₊` keeps `n ≥ 0`, and the antilinear maps `V` and
//! `C_u` are plain vector-to-vector functions.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Coefficients with modulus at or below this are dropped by canonical trimming.
pub const TRIM_TOL: f64 = 1e-15;

/// A finite window of Laurent coefficients. Position `k` of `coeffs` holds the
/// coefficient of frequency `lo + k`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FourierVector {
    lo: i64,
    coeffs: Vec<C64>,
}

impl FourierVector {
    pub fn new(lo: i64, coeffs: Vec<C64>) -> Self {
        if coeffs.is_empty() {
            return Self::zero();
        }
        Self { lo, coeffs }
    }

    pub fn zero() -> Self {
        Self { lo: 0, coeffs: vec![C64::new(0.0, 0.0)] }
    }

    /// `e_n = z^n`.
    pub fn basis(n: i64) -> Self {
        Self::monomial(n, C64::new(1.0, 0.0))
    }

    pub fn monomial(n: i64, c: C64) -> Self {
        Self { lo: n, coeffs: vec![c] }
    }

    /// Window `[lo, hi]` filled from `f(n)`.
    pub fn from_fn(lo: i64, hi: i64, f: impl Fn(i64) -> C64) -> Self {
        assert!(lo <= hi, "empty window [{lo}, {hi}]");
        Self { lo, coeffs: (lo..=hi).map(f).collect() }
    }

    /// Real coefficients starting at frequency `lo`.
    pub fn from_real(lo: i64, values: &[f64]) -> Self {
        Self::new(lo, values.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of frequency `n` (zero outside the window).
    pub fn coeff(&self, n: i64) -> C64 {
        if n < self.lo || n > self.hi() {
            C64::new(0.0, 0.0)
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, C64)> + '_ {
        self.coeffs.iter().enumerate().map(move |(k, &c)| (self.lo + k as i64, c))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `⟨self, other⟩ = Σ a_n conj(b_n)`, linear in the first slot.
    pub fn dot(&self, other: &Self) -> C64 {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        (lo..=hi).map(|n| self.coeff(n) * other.coeff(n).conj()).sum()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { lo: self.lo, coeffs: self.coeffs.iter().map(|&v| v * c).collect() }
    }

    /// Pointwise conjugate on the circle: `(f̄)ˆ(n) = conj(f̂(-n))`.
    pub fn conj(&self) -> Self {
        Self { lo: -self.hi(), coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect() }
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    /// Restriction to a band, zero-filled where the band exceeds the window.
    pub fn restrict(&self, band: FrequencyBand) -> Self {
        Self::from_fn(band.n_min, band.n_max, |n| self.coeff(n))
    }

    /// Norm of the restriction to a band.
    pub fn norm_on(&self, band: FrequencyBand) -> f64 {
        self.iter()
            .filter(|(n, _)| band.contains(*n))
            .map(|(_, c)| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Drops leading and trailing coefficients with modulus `<= tol`.
    pub fn trimmed(&self, tol: f64) -> Self {
        let first = self.coeffs.iter().position(|c| c.norm() > tol);
        match first {
            None => Self::zero(),
            Some(first) => {
                let last = self.coeffs.iter().rposition(|c| c.norm() > tol).unwrap();
                Self { lo: self.lo + first as i64, coeffs: self.coeffs[first..=last].to_vec() }
            }
        }
    }

    /// Canonical form used for equality.
    pub fn canonical(&self) -> Self {
        self.trimmed(TRIM_TOL)
    }

    /// Evaluates the trigonometric polynomial at `e^{it}`.
    pub fn eval(&self, t: f64) -> C64 {
        self.iter().map(|(n, c)| c * C64::from_polar(1.0, n as f64 * t)).sum()
    }

    /// Values on the uniform grid `t_j = 2πj/m`, via one FFT.
    pub fn grid_values(&self, m: usize) -> Vec<C64> {
        let mut buf = vec![C64::new(0.0, 0.0); m];
        for (n, c) in self.iter() {
            buf[(n.rem_euclid(m as i64)) as usize] += c;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf
    }

    /// Largest distance between coefficients over the union of both windows.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        (lo..=hi).map(|n| (self.coeff(n) - other.coeff(n)).norm()).fold(0.0, f64::max)
    }
}

impl PartialEq for FourierVector {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.lo == b.lo && a.coeffs == b.coeffs
    }
}

fn combine(a: &FourierVector, b: &FourierVector, op: impl Fn(C64, C64) -> C64) -> FourierVector {
    let lo = a.lo.min(b.lo);
    let hi = a.hi().max(b.hi());
    FourierVector::from_fn(lo, hi, |n| op(a.coeff(n), b.coeff(n)))
}

impl Add for &FourierVector {
    type Output = FourierVector;
    fn add(self, rhs: Self) -> FourierVector {
        combine(self, rhs, |x, y| x + y)
    }
}

impl Sub for &FourierVector {
    type Output = FourierVector;
    fn sub(self, rhs: Self) -> FourierVector {
        combine(self, rhs, |x, y| x - y)
    }
}

impl Neg for &FourierVector {
    type Output = FourierVector;
    fn neg(self) -> FourierVector {
        self.scale(C64::new(-1.0, 0.0))
    }
}

impl Mul<C64> for &FourierVector {
    type Output = FourierVector;
    fn mul(self, rhs: C64) -> FourierVector {
        self.scale(rhs)
    }
}

impl Mul for &FourierVector {
    type Output = FourierVector;
    fn mul(self, rhs: Self) -> FourierVector {
        convolve(self, rhs)
    }
}

impl fmt::Display for FourierVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = self.canonical();
        write!(f, "[")?;
        for (i, (n, v)) in c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n}: {:.6}{:+.6}i", v.re, v.im)?;
        }
        write!(f, "]")
    }
}

/// Inclusive frequency window `[n_min, n_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyBand {
    pub n_min: i64,
    pub n_max: i64,
}

impl FrequencyBand {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::InvalidBand(n_min, n_max));
        }
        Ok(Self { n_min, n_max })
    }

    /// The full window `[-n, n]`.
    pub fn symmetric(n: usize) -> Self {
        Self { n_min: -(n as i64), n_max: n as i64 }
    }

    /// Interior band `[-n + b·k, n - b·k]` for a window of half-width `n`,
    /// symbol bandwidth `b` and `k` symbol multiplications. `None` when the
    /// truncation budget leaves nothing.
    pub fn interior(n: usize, bandwidth: usize, multiplications: usize) -> Option<Self> {
        let margin = (bandwidth * multiplications) as i64;
        let n = n as i64;
        Self::new(-n + margin, n - margin).ok()
    }

    pub fn contains(&self, n: i64) -> bool {
        self.n_min <= n && n <= self.n_max
    }

    pub fn width(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        Self::new(self.n_min.max(other.n_min), self.n_max.min(other.n_max)).ok()
    }
}

/// A finite union of disjoint closed arcs `[t_start, t_end] ⊂ [0, 2π]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSet {
    arcs: Vec<(f64, f64)>,
}

impl ArcSet {
    pub fn new(arcs: Vec<(f64, f64)>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidArcs("no arcs".into()));
        }
        for &(s, e) in &arcs {
            if !(s.is_finite() && e.is_finite()) || s < 0.0 || e > 2.0 * PI || s >= e {
                return Err(Error::InvalidArcs(format!("arc [{s}, {e}] not inside [0, 2π] with start < end")));
            }
        }
        let mut sorted = arcs;
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in sorted.windows(2) {
            if w[1].0 < w[0].1 {
                return Err(Error::InvalidArcs(format!(
                    "arcs [{}, {}] and [{}, {}] overlap",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )));
            }
        }
        Ok(Self { arcs: sorted })
    }

    pub fn arcs(&self) -> &[(f64, f64)] {
        &self.arcs
    }

    /// Normalized measure `Σ (t_end - t_start) / 2π`.
    pub fn measure(&self) -> f64 {
        self.arcs.iter().map(|(s, e)| e - s).sum::<f64>() / (2.0 * PI)
    }

    pub fn is_full_circle(&self) -> bool {
        (self.measure() - 1.0).abs() < 1e-15
    }

    pub fn contains(&self, t: f64) -> bool {
        let t = t.rem_euclid(2.0 * PI);
        self.arcs.iter().any(|&(s, e)| s <= t && t <= e)
    }

    /// Fourier coefficient of the indicator at frequency `n`.
    pub fn coefficient(&self, n: i64) -> C64 {
        if n == 0 {
            return C64::new(self.measure(), 0.0);
        }
        let nf = n as f64;
        let denom = C64::new(0.0, 2.0 * PI * nf);
        self.arcs
            .iter()
            .map(|&(s, e)| (C64::from_polar(1.0, -nf * s) - C64::from_polar(1.0, -nf * e)) / denom)
            .sum()
    }
}

/// Full (untruncated) convolution: the coefficient sequence of the product.
pub fn convolve(f: &FourierVector, g: &FourierVector) -> FourierVector {
    let mut out = vec![C64::new(0.0, 0.0); f.len() + g.len() - 1];
    for (i, a) in f.coeffs.iter().enumerate() {
        if *a == C64::new(0.0, 0.0) {
            continue;
        }
        for (j, b) in g.coeffs.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    FourierVector::new(f.lo + g.lo, out)
}

/// `P₊`: keeps frequencies `n ≥ 0`.
pub fn project_plus(f: &FourierVector) -> FourierVector {
    if f.hi() < 0 {
        return FourierVector::zero();
    }
    FourierVector::from_fn(f.lo.max(0), f.hi(), |n| f.coeff(n))
}

/// `I - P₊`: keeps frequencies `n ≤ -1`.
pub fn project_minus(f: &FourierVector) -> FourierVector {
    if f.lo >= 0 {
        return FourierVector::zero();
    }
    FourierVector::from_fn(f.lo, f.hi().min(-1), |n| f.coeff(n))
}

/// `Vf = z̄ · conj(f)`, i.e. `(Vf)ˆ(n) = conj(f̂(-n-1))`.
pub fn flip_v(f: &FourierVector) -> FourierVector {
    f.conj().shift(-1)
}

/// `C_u f = u · z̄ · conj(f)`. Antilinear; `u_coeffs` is assumed inner.
pub fn conjugate_cu(f: &FourierVector, u_coeffs: &FourierVector) -> FourierVector {
    convolve(u_coeffs, &flip_v(f))
}

/// Coefficients of `χ_E` on `[-n, n]`.
pub fn arc_indicator_coeffs(arcs: &ArcSet, n: usize) -> FourierVector {
    let n = n as i64;
    FourierVector::from_fn(-n, n, |k| arcs.coefficient(k))
}

/// Fourier coefficients `ĉ_k = (1/m) Σ_j s_j e^{-2πijk/m}` of uniform grid samples.
pub fn coefficients_from_samples(samples: &[C64]) -> Vec<C64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    buf.iter_mut().for_each(|c| *c *= scale);
    buf
}

/// `∫_A |f|² dm` over a union of arcs, exact for trigonometric polynomials.
pub fn norm_sqr_on_arcs(f: &FourierVector, arcs: &ArcSet) -> f64 {
    // Σ_{j,k} f_j conj(f_k) χ̂_A(k - j); only the difference matters, so
    // tabulate χ̂_A once per lag.
    let len = f.len() as i64;
    let lags: Vec<C64> = (-(len - 1)..len).map(|d| arcs.coefficient(d)).collect();
    let c = f.coeffs();
    let mut total = C64::new(0.0, 0.0);
    for (j, a) in c.iter().enumerate() {
        for (k, b) in c.iter().enumerate() {
            total += a * b.conj() * lags[(k as i64 - j as i64 + len - 1) as usize];
        }
    }
    total.re
}
