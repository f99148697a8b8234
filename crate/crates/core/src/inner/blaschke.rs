use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly::{Poly, Root};
use super::rational::RationalFunction;
use crate::error::{Error, Result};
use crate::fourier::{coefficients_from_samples, FourierVector};
use crate::C64;

/// Zero-matching tolerance for gcd / divide / multiply.
pub const TAU_ZERO: f64 = 1e-9;
/// Zeros this close to the circle are rejected.
pub const BOUNDARY_MARGIN: f64 = 1e-12;
/// Allowed deviation of `|constant|` from 1.
pub const UNIMODULAR_TOL: f64 = 1e-12;

const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A zero `a` of a Blaschke product, `0 < |a| < 1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub point: C64,
    pub multiplicity: u32,
}

/// Finite Blaschke product `c · z^p · Π ((z - a)/(1 - āz))^m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    constant: C64,
    power: u32,
    zeros: Vec<Zero>,
}

fn matches(a: C64, b: C64) -> bool {
    (a - b).norm() <= TAU_ZERO
}

impl BlaschkeProduct {
    /// Validates and canonicalizes: zeros at (or within `TAU_ZERO` of) the
    /// origin fold into the monomial power, coincident zeros merge.
    pub fn new(constant: C64, power: u32, zeros: impl IntoIterator<Item = (C64, u32)>) -> Result<Self> {
        if !constant.re.is_finite() || !constant.im.is_finite() || (constant.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::InvalidBlaschke(format!("constant {constant} is not unimodular")));
        }
        let mut out = Self { constant, power, zeros: Vec::new() };
        for (a, m) in zeros {
            if m == 0 {
                continue;
            }
            if !a.re.is_finite() || !a.im.is_finite() || a.norm() >= 1.0 - BOUNDARY_MARGIN {
                return Err(Error::InvalidBlaschke(format!("zero {a} is not inside the disk")));
            }
            out.push_zero(a, m);
        }
        Ok(out)
    }

    fn push_zero(&mut self, a: C64, m: u32) {
        if a.norm() <= TAU_ZERO {
            self.power += m;
        } else if let Some(z) = self.zeros.iter_mut().find(|z| matches(z.point, a)) {
            z.multiplicity += m;
        } else {
            self.zeros.push(Zero { point: a, multiplicity: m });
        }
    }

    pub fn unit() -> Self {
        Self { constant: ONE, power: 0, zeros: Vec::new() }
    }

    pub fn z() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(power: u32) -> Self {
        Self { constant: ONE, power, zeros: Vec::new() }
    }

    /// Single Möbius factor `B_a(z) = (z - a)/(1 - āz)`.
    pub fn factor(a: C64) -> Result<Self> {
        Self::new(ONE, 0, [(a, 1)])
    }

    pub fn constant(&self) -> C64 {
        self.constant
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn zeros(&self) -> &[Zero] {
        &self.zeros
    }

    pub fn degree(&self) -> u32 {
        self.power + self.zeros.iter().map(|z| z.multiplicity).sum::<u32>()
    }

    pub fn is_unit_up_to_phase(&self) -> bool {
        self.degree() == 0
    }

    /// Same zeros and power with a different unimodular constant.
    pub fn with_constant(&self, constant: C64) -> Self {
        Self { constant, ..self.clone() }
    }

    /// Constant reset to 1.
    pub fn normalized(&self) -> Self {
        self.with_constant(ONE)
    }

    /// Largest zero modulus (0 for a monomial).
    pub fn max_zero_modulus(&self) -> f64 {
        self.zeros.iter().map(|z| z.point.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, z: C64) -> C64 {
        let mut v = self.constant * z.powu(self.power);
        for zero in &self.zeros {
            let f = (z - zero.point) / (ONE - zero.point.conj() * z);
            v *= f.powu(zero.multiplicity);
        }
        v
    }

    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self {
            constant: self.constant * other.constant,
            power: self.power + other.power,
            zeros: self.zeros.clone(),
        };
        for z in &other.zeros {
            out.push_zero(z.point, z.multiplicity);
        }
        out
    }

    /// Greatest common inner divisor, constant 1.
    pub fn gcd(&self, other: &Self) -> Self {
        let zeros = self
            .zeros
            .iter()
            .filter_map(|a| {
                other
                    .zeros
                    .iter()
                    .find(|b| matches(a.point, b.point))
                    .map(|b| Zero { point: a.point, multiplicity: a.multiplicity.min(b.multiplicity) })
            })
            .collect();
        Self { constant: ONE, power: self.power.min(other.power), zeros }
    }

    /// `self / divisor` with constant 1. Fails unless every zero of the
    /// divisor occurs in `self` with at least its multiplicity.
    pub fn divide(&self, divisor: &Self) -> Result<Self> {
        if divisor.power > self.power {
            return Err(Error::NotDivisible);
        }
        let mut zeros = self.zeros.clone();
        for d in &divisor.zeros {
            let z = zeros
                .iter_mut()
                .find(|z| matches(z.point, d.point))
                .ok_or(Error::NotDivisible)?;
            if z.multiplicity < d.multiplicity {
                return Err(Error::NotDivisible);
            }
            z.multiplicity -= d.multiplicity;
        }
        zeros.retain(|z| z.multiplicity > 0);
        Ok(Self { constant: ONE, power: self.power - divisor.power, zeros })
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.divide(self).is_ok()
    }

    /// Equality of zero multisets and powers, ignoring the constant.
    pub fn eq_up_to_phase(&self, other: &Self) -> bool {
        self.power == other.power
            && self.zeros.len() == other.zeros.len()
            && self.zeros.iter().all(|a| {
                other
                    .zeros
                    .iter()
                    .any(|b| matches(a.point, b.point) && a.multiplicity == b.multiplicity)
            })
    }

    /// Phase-sensitive equality.
    pub fn eq_with_phase(&self, other: &Self) -> bool {
        self.eq_up_to_phase(other) && (self.constant - other.constant).norm() <= UNIMODULAR_TOL
    }

    /// `c z^p Π (z - a)^m`.
    pub fn numerator_poly(&self) -> Poly {
        let mut roots = vec![Root { point: C64::new(0.0, 0.0), multiplicity: self.power }];
        roots.extend(self.zeros.iter().map(|z| Root { point: z.point, multiplicity: z.multiplicity }));
        roots.retain(|r| r.multiplicity > 0);
        Poly::from_roots(self.constant, &roots)
    }

    /// `Π (1 - āz)^m`.
    pub fn denominator_poly(&self) -> Poly {
        let mut p = Poly::one();
        for z in &self.zeros {
            let f = Poly::new(vec![ONE, -z.point.conj()]);
            for _ in 0..z.multiplicity {
                p = p.mul(&f);
            }
        }
        p
    }

    pub fn to_rational(&self) -> RationalFunction {
        RationalFunction::from_parts_unchecked(self.numerator_poly(), self.denominator_poly())
    }

    /// Length `N_ε` such that `Σ_{n > N_ε} |ĉ_n| < ε`.
    ///
    /// Cauchy estimate on a circle `|z| = ρ` with `1 < ρ < 1/r`, where
    /// `r = max |a|`: each factor is bounded by `(ρ + |a|)/(1 - |a|ρ)`, so
    /// `|ĉ_n| ≤ M(ρ) ρ^{-n}` and the tail is geometric. The best of a few
    /// radii is kept.
    pub fn coefficient_length(&self, eps: f64) -> usize {
        let r = self.max_zero_modulus();
        if self.zeros.is_empty() {
            return self.power as usize;
        }
        let mut best = usize::MAX;
        for k in 1..=19 {
            let rho = 1.0 + (1.0 / r - 1.0) * k as f64 / 20.0;
            let mut log_m = self.power as f64 * rho.ln();
            for z in &self.zeros {
                let a = z.point.norm();
                log_m += z.multiplicity as f64 * ((rho + a) / (1.0 - a * rho)).ln();
            }
            // M ρ^{-(N+1)} / (1 - 1/ρ) < ε
            let need = (log_m - (eps * (1.0 - 1.0 / rho)).ln()) / rho.ln();
            let n = need.ceil().max(0.0) as usize;
            best = best.min(n);
        }
        best.max(self.degree() as usize).min(1 << 16)
    }

    /// Taylor coefficients on `[0, N_ε]`, from oversampled grid values and one FFT.
    pub fn coeffs(&self, eps: f64) -> FourierVector {
        if self.zeros.is_empty() {
            return FourierVector::monomial(self.power as i64, self.constant);
        }
        let n = self.coefficient_length(eps);
        let m = (4 * (n + 1)).next_power_of_two().max(64);
        let samples: Vec<C64> = (0..m)
            .map(|j| self.eval(C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / m as f64)))
            .collect();
        let c = coefficients_from_samples(&samples);
        FourierVector::new(0, c[..=n].to_vec())
    }
}

impl fmt::Display for BlaschkeProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{{c={}{:+}i, pow={}, zeros=[", self.constant.re, self.constant.im, self.power)?;
        for (i, z) in self.zeros.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", z.point.re, z.point.im)?;
            if z.multiplicity > 1 {
                write!(f, "^{}", z.multiplicity)?;
            }
        }
        write!(f, "]}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn b(a: f64) -> BlaschkeProduct {
        BlaschkeProduct::factor(c(a, 0.0)).unwrap()
    }

    #[test]
    fn construction_rejects_bad_data() {
        assert!(BlaschkeProduct::new(c(2.0, 0.0), 0, []).is_err());
        assert!(BlaschkeProduct::new(ONE, 0, [(c(1.0, 0.0), 1)]).is_err());
        assert!(BlaschkeProduct::new(ONE, 0, [(c(0.0, 1.0 - 1e-13), 1)]).is_err());
        let folded = BlaschkeProduct::new(ONE, 1, [(c(0.0, 0.0), 2), (c(0.5, 0.0), 1), (c(0.5, 0.0), 1)]).unwrap();
        assert_eq!(folded.power(), 3);
        assert_eq!(folded.zeros(), &[Zero { point: c(0.5, 0.0), multiplicity: 2 }]);
        assert_eq!(folded.degree(), 5);
    }

    #[test]
    fn multiply_examples() {
        let chi = BlaschkeProduct::z().multiply(&b(-0.3));
        assert_eq!(chi.power(), 1);
        assert_eq!(chi.zeros().len(), 1);
        assert!(b(0.4).multiply(&BlaschkeProduct::unit()).eq_with_phase(&b(0.4)));
        let sq = b(0.5).multiply(&b(0.5));
        assert_eq!(sq.zeros(), &[Zero { point: c(0.5, 0.0), multiplicity: 2 }]);
    }

    #[test]
    fn gcd_examples() {
        let z = BlaschkeProduct::z();
        let zb = z.multiply(&b(-0.3));
        assert!(z.gcd(&zb).eq_with_phase(&z));
        assert!(z.gcd(&BlaschkeProduct::unit()).eq_with_phase(&BlaschkeProduct::unit()));
        assert!(b(0.5).gcd(&b(-0.3)).eq_with_phase(&BlaschkeProduct::unit()));
        let g = b(0.5).with_constant(c(0.0, 1.0)).gcd(&b(0.5));
        assert_eq!(g.constant(), ONE);
    }

    #[test]
    fn divide_examples() {
        let z = BlaschkeProduct::z();
        let zb = z.multiply(&b(-0.3));
        assert!(zb.divide(&z).unwrap().eq_with_phase(&b(-0.3)));
        assert!(zb.divide(&zb).unwrap().eq_with_phase(&BlaschkeProduct::unit()));
        assert!(BlaschkeProduct::monomial(2).divide(&z).unwrap().eq_with_phase(&z));
        assert_eq!(z.divide(&b(0.5)), Err(Error::NotDivisible));
        assert_eq!(z.divide(&BlaschkeProduct::monomial(2)), Err(Error::NotDivisible));
        assert_eq!(b(0.5).divide(&b(0.5).multiply(&b(0.5))), Err(Error::NotDivisible));
    }

    #[test]
    fn coefficients_of_single_factor() {
        assert_eq!(BlaschkeProduct::z().coeffs(1e-14), FourierVector::basis(1));
        let f = b(0.5).coeffs(1e-14);
        assert!((f.coeff(0) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((f.coeff(1) - c(0.75, 0.0)).norm() < 1e-15);
        // series oracle: c_n = (1 - |a|²) ā^{n-1}
        for n in 2..20 {
            let expect = 0.75 * 0.5f64.powi(n as i32 - 1);
            assert!((f.coeff(n) - c(expect, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn rational_form_matches_eval() {
        let p = BlaschkeProduct::new(c(0.6, 0.8), 2, [(c(0.3, -0.4), 1), (c(-0.5, 0.1), 2)]).unwrap();
        let r = p.to_rational();
        for t in [0.1, 1.3, 2.9, 4.4] {
            let z = C64::from_polar(0.9, t);
            assert!((r.eval(z) - p.eval(z)).norm() < 1e-13);
            assert!((p.eval(C64::from_polar(1.0, t)).norm() - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn display_is_readable() {
        let s = b(0.5).to_string();
        assert!(s.starts_with("B{c=1+0i, pow=0, zeros=[0.5+0i"));
    }
}
