use serde::{Deserialize, Serialize};

use super::blaschke::{BlaschkeProduct, BOUNDARY_MARGIN, TAU_ZERO};
use super::poly::{Poly, Root};
use crate::error::{Error, Result};
use crate::fourier::FourierVector;
use crate::C64;

/// Grid used by `is_inner_rational`.
pub const INNER_GRID: usize = 4096;
/// Grid used for sup norms.
pub const SUP_GRID: usize = 8192;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

fn circle(m: usize, j: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64)
}

/// `p / q` with complex polynomial numerator and denominator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    /// Builds and reduces `num / den`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidRational("zero denominator".into()));
        }
        let all_finite = num.coeffs().iter().chain(den.coeffs()).all(|c| c.re.is_finite() && c.im.is_finite());
        if !all_finite {
            return Err(Error::InvalidRational("non-finite coefficient".into()));
        }
        Ok(Self { num, den }.reduced())
    }

    /// No reduction; the caller guarantees coprime parts and a nonzero denominator.
    pub fn from_parts_unchecked(num: Poly, den: Poly) -> Self {
        Self { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        Self { num: p, den: Poly::one() }
    }

    pub fn constant(c: C64) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.num.eval(z) / self.den.eval(z)
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }.reduced()
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Cancels numerator and denominator roots that match within `TAU_ZERO`.
    /// Coefficients are rebuilt from roots only when something cancels.
    fn reduced(self) -> Self {
        if self.num.is_zero() {
            return Self { num: Poly::constant(C64::new(0.0, 0.0)), den: Poly::one() };
        }
        if self.den.degree() == 0 || self.num.degree() == 0 {
            return self;
        }
        let mut nr = self.num.roots();
        let mut dr = self.den.roots();
        let mut cancelled = false;
        for n in nr.iter_mut() {
            for d in dr.iter_mut() {
                if n.multiplicity > 0 && d.multiplicity > 0 && (n.point - d.point).norm() <= TAU_ZERO {
                    let k = n.multiplicity.min(d.multiplicity);
                    n.multiplicity -= k;
                    d.multiplicity -= k;
                    cancelled = true;
                }
            }
        }
        if !cancelled {
            return self;
        }
        nr.retain(|r| r.multiplicity > 0);
        dr.retain(|r| r.multiplicity > 0);
        Self {
            num: Poly::from_roots(self.num.leading(), &nr),
            den: Poly::from_roots(self.den.leading(), &dr),
        }
    }

    /// Error unless every pole lies outside the closed disk.
    pub fn check_analytic(&self) -> Result<()> {
        for r in self.den.roots() {
            if r.point.norm() <= 1.0 + BOUNDARY_MARGIN {
                return Err(Error::PoleInDisk(format!("pole at {}", r.point)));
            }
        }
        Ok(())
    }

    /// Taylor coefficients `f_0..f_N` with `Σ_{n>N} |f_n| < eps`.
    ///
    /// Length comes from a Cauchy estimate on `|z| = ρ` inside the pole-free
    /// disk (grid max times a safety factor of 2); values come from the
    /// recurrence `q_0 f_n = p_n − Σ_{k≥1} q_k f_{n−k}`.
    pub fn taylor_coeffs(&self, eps: f64) -> Result<FourierVector> {
        self.check_analytic()?;
        if self.den.degree() == 0 {
            let q0 = self.den.coeffs()[0];
            return Ok(FourierVector::new(0, self.num.coeffs().iter().map(|c| c / q0).collect()));
        }
        let r_pole = self.den.roots().iter().map(|r| r.point.norm()).fold(f64::INFINITY, f64::min);
        let mut len = usize::MAX;
        for k in 1..=9 {
            let rho = 1.0 + (r_pole - 1.0) * k as f64 / 10.0;
            let m = (0..512)
                .map(|j| self.eval(circle(512, j) * rho).norm())
                .fold(0.0, f64::max)
                * 2.0;
            let need = ((m / (eps * (1.0 - 1.0 / rho))).ln() / rho.ln()).ceil().max(0.0) as usize;
            len = len.min(need);
        }
        let len = len.max(self.num.degree()).min(1 << 16);
        let p = self.num.coeffs();
        let q = self.den.coeffs();
        let mut f = Vec::with_capacity(len + 1);
        for n in 0..=len {
            let mut acc = p.get(n).copied().unwrap_or_default();
            for k in 1..q.len().min(n + 1) {
                acc -= q[k] * f[n - k];
            }
            f.push(acc / q[0]);
        }
        Ok(FourierVector::new(0, f))
    }

    /// `max |f|` on the circle: grid max, then golden-section polish around
    /// the best grid point.
    pub fn sup_norm(&self) -> f64 {
        let m = SUP_GRID;
        let vals: Vec<f64> = (0..m).map(|j| self.eval(circle(m, j)).norm()).collect();
        let (j, &v) = vals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("grid is non-empty");
        let h = 2.0 * std::f64::consts::PI / m as f64;
        let t0 = j as f64 * h;
        let g = |t: f64| self.eval(C64::from_polar(1.0, t)).norm();
        v.max(golden_max(g, t0 - h, t0 + h, 60))
    }

    /// `(min, max)` of `|f|` on an `m`-point grid.
    pub fn modulus_range(&self, m: usize) -> (f64, f64) {
        (0..m)
            .map(|j| self.eval(circle(m, j)).norm())
            .fold((f64::INFINITY, 0.0), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }
}

fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..iters {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// `f = inner · outer`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerOuterPair {
    pub inner: BlaschkeProduct,
    pub outer: RationalFunction,
}

/// Inner–outer factorization of a rational `H^∞` function.
///
/// Numerator roots inside the disk become the Blaschke part. Roots on the
/// circle (within `TAU_ZERO`) stay in the outer factor, which is still outer
/// in the `H²` sense.
pub fn inner_outer(f: &RationalFunction) -> Result<InnerOuterPair> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    f.check_analytic()?;
    let roots = f.num.roots();
    let mut inside = Vec::new();
    let mut outside = Vec::new();
    for r in roots {
        if r.point.norm() < 1.0 - TAU_ZERO {
            inside.push(r);
        } else {
            outside.push(r);
        }
    }
    if inside.is_empty() {
        return Ok(InnerOuterPair { inner: BlaschkeProduct::unit(), outer: f.clone() });
    }
    let inner = BlaschkeProduct::new(ONE, 0, inside.iter().map(|r| (r.point, r.multiplicity)))?;
    // f / inner: every (z - a) becomes (1 - āz), every z drops out
    let mut num = Poly::from_roots(f.num.leading(), &outside);
    for r in &inside {
        if r.point.norm() > TAU_ZERO {
            let factor = Poly::new(vec![ONE, -r.point.conj()]);
            for _ in 0..r.multiplicity {
                num = num.mul(&factor);
            }
        }
    }
    let outer = RationalFunction::new(num, f.den.clone())?;
    Ok(InnerOuterPair { inner, outer })
}

/// Whether `f` is a finite Blaschke product, with the equivalent product when it is.
///
/// Requires `| |f| − 1 | ≤ tol` on a 4096-point grid, numerator roots in the
/// open disk, and denominator roots equal to their reflections `1/ā`.
pub fn is_inner_rational(f: &RationalFunction, tol: f64) -> (bool, Option<BlaschkeProduct>) {
    if f.is_zero() {
        return (false, None);
    }
    let (lo, hi) = f.modulus_range(INNER_GRID);
    if (lo - 1.0).abs() > tol || (hi - 1.0).abs() > tol {
        return (false, None);
    }
    let nr = f.num.roots();
    if nr.iter().any(|r| r.point.norm() >= 1.0 - BOUNDARY_MARGIN) {
        return (false, None);
    }
    let mut pending: Vec<Root> = f.den.roots();
    for r in nr.iter().filter(|r| r.point.norm() > TAU_ZERO) {
        let reflected = ONE / r.point.conj();
        let tol_r = TAU_ZERO * reflected.norm().max(1.0);
        match pending
            .iter_mut()
            .find(|d| d.multiplicity >= r.multiplicity && (d.point - reflected).norm() <= tol_r)
        {
            Some(d) => d.multiplicity -= r.multiplicity,
            None => return (false, None),
        }
    }
    if pending.iter().any(|d| d.multiplicity > 0) {
        return (false, None);
    }
    let Ok(shape) = BlaschkeProduct::new(ONE, 0, nr.iter().map(|r| (r.point, r.multiplicity))) else {
        return (false, None);
    };
    // constant from one evaluation on the circle
    let c = f.eval(ONE) / shape.eval(ONE);
    let c = c / c.norm();
    (true, Some(shape.with_constant(c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn rat(n: &[f64], d: &[f64]) -> RationalFunction {
        RationalFunction::new(Poly::from_real(n), Poly::from_real(d)).unwrap()
    }

    #[test]
    fn reduction_cancels_common_roots() {
        // (z - 1/2)(z + 3) / ((z - 1/2)(z - 4))
        let n = Poly::from_real(&[-0.5, 1.0]).mul(&Poly::from_real(&[3.0, 1.0]));
        let d = Poly::from_real(&[-0.5, 1.0]).mul(&Poly::from_real(&[-4.0, 1.0]));
        let f = RationalFunction::new(n, d).unwrap();
        assert_eq!(f.numerator().degree(), 1);
        assert_eq!(f.denominator().degree(), 1);
        assert!((f.eval(c(0.3, 0.2)) - c(3.3, 0.2) / c(-3.7, 0.2)).norm() < 1e-14);
        assert!(RationalFunction::new(Poly::one(), Poly::from_real(&[0.0])).is_err());
    }

    #[test]
    fn inner_outer_examples() {
        let p = inner_outer(&rat(&[0.0, 1.0], &[1.0])).unwrap();
        assert!(p.inner.eq_with_phase(&BlaschkeProduct::z()));
        assert!((p.outer.eval(c(0.2, 0.1)) - ONE).norm() < 1e-15);

        let p = inner_outer(&rat(&[-0.5, 1.0], &[1.0])).unwrap();
        assert!(p.inner.eq_with_phase(&BlaschkeProduct::factor(c(0.5, 0.0)).unwrap()));
        for t in [0.0, 0.7, 2.0, 4.0] {
            let z = C64::from_polar(0.8, t);
            assert!((p.outer.eval(z) - (ONE - z / 2.0)).norm() < 1e-14);
        }

        let f = rat(&[2.0, 1.0], &[1.0]);
        let p = inner_outer(&f).unwrap();
        assert!(p.inner.eq_with_phase(&BlaschkeProduct::unit()));
        assert_eq!(p.outer, f);

        assert_eq!(inner_outer(&rat(&[0.0], &[1.0])), Err(Error::ZeroFunction));
        assert!(matches!(inner_outer(&rat(&[1.0], &[-0.5, 1.0])), Err(Error::PoleInDisk(_))));
        assert!(matches!(inner_outer(&rat(&[1.0], &[-1.0, 1.0])), Err(Error::PoleInDisk(_))));
    }

    #[test]
    fn boundary_roots_stay_outer() {
        let p = inner_outer(&rat(&[0.5, 0.5], &[1.0])).unwrap();
        assert_eq!(p.inner.degree(), 0);
    }

    #[test]
    fn inner_detection() {
        let (ok, b) = is_inner_rational(&rat(&[-0.5, 1.0], &[1.0, -0.5]), 1e-10);
        assert!(ok);
        assert!(b.unwrap().eq_with_phase(&BlaschkeProduct::factor(c(0.5, 0.0)).unwrap()));

        assert_eq!(is_inner_rational(&rat(&[0.5, 0.5], &[1.0]), 1e-10), (false, None));

        let (ok, b) = is_inner_rational(&rat(&[0.0, 0.0, 1.0], &[1.0]), 1e-10);
        assert!(ok);
        assert_eq!(b.unwrap().power(), 2);

        let (ok, b) = is_inner_rational(&rat(&[0.0, 0.0, -1.0], &[1.0]), 1e-10);
        assert!(ok);
        assert!((b.unwrap().constant() + ONE).norm() < 1e-15);

        // |f| = 1 fails for 2·B_{1/2}
        assert!(!is_inner_rational(&rat(&[-1.0, 2.0], &[1.0, -0.5]), 1e-10).0);
    }

    #[test]
    fn taylor_coefficients_of_geometric_series() {
        // 1 / (1 - z/2) = Σ 2^{-n} z^n
        let f = rat(&[1.0], &[1.0, -0.5]);
        let t = f.taylor_coeffs(1e-14).unwrap();
        for n in 0..30 {
            assert!((t.coeff(n) - c(0.5f64.powi(n as i32), 0.0)).norm() < 1e-15);
        }
        let tail: f64 = (t.hi() + 1..t.hi() + 200).map(|n| 0.5f64.powi(n as i32)).sum();
        assert!(tail < 1e-14);
        assert!(rat(&[1.0], &[-0.5, 1.0]).taylor_coeffs(1e-14).is_err());
    }

    #[test]
    fn sup_norm_is_polished() {
        assert!((rat(&[0.5, 0.5], &[1.0]).sup_norm() - 1.0).abs() < 1e-15);
        // |1 + z/3| peaks at z = 1 with value 4/3
        assert!((rat(&[1.0, 1.0 / 3.0], &[1.0]).sup_norm() - 4.0 / 3.0).abs() < 1e-14);
        // peak placed between grid points
        let w = C64::from_polar(1.0, 0.3e-3);
        let f = RationalFunction::new(Poly::new(vec![ONE, w.conj() * 0.9]), Poly::one()).unwrap();
        assert!((f.sup_norm() - 1.9).abs() < 1e-12);
    }
}
