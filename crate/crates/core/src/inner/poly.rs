use nalgebra::{DMatrix, Schur};
use serde::{Deserialize, Serialize};

use crate::C64;

/// Complex polynomial with ascending coefficients `c_0 + c_1 z + ...`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<C64>,
}

/// A root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub point: C64,
    pub multiplicity: u32,
}

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

impl Poly {
    /// Exact zero leading coefficients are dropped.
    pub fn new(mut coeffs: Vec<C64>) -> Self {
        while coeffs.len() > 1 && *coeffs.last().unwrap() == ZERO {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ZERO);
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn constant(c: C64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// `c z^k`.
    pub fn monomial(k: usize, c: C64) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `lead · Π (z - r)^m`.
    pub fn from_roots(lead: C64, roots: &[Root]) -> Self {
        let mut p = Self::constant(lead);
        for r in roots {
            let factor = Self { coeffs: vec![-r.point, ONE] };
            for _ in 0..r.multiplicity {
                p = p.mul(&factor);
            }
        }
        p
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn leading(&self) -> C64 {
        *self.coeffs.last().unwrap()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(ZERO);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&v| v * c).collect())
    }

    /// Number of exactly vanishing low-order coefficients, i.e. the order of the zero at 0.
    pub fn zero_order_at_origin(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// Roots with multiplicity.
    ///
    /// Exact zeros at the origin are factored out first; the rest come from
    /// the eigenvalues of the companion matrix, one Newton polish step each,
    /// then clustering of nearly coincident values (multiple roots split into
    /// a small circle of radius ~ε^{1/m} under eigenvalue perturbation).
    pub fn roots(&self) -> Vec<Root> {
        let mut out = Vec::new();
        if self.is_zero() {
            return out;
        }
        let k = self.zero_order_at_origin();
        if k > 0 {
            out.push(Root { point: ZERO, multiplicity: k as u32 });
        }
        let reduced = Self::new(self.coeffs[k..].to_vec());
        let deg = reduced.degree();
        if deg == 0 {
            return out;
        }
        let lead = reduced.leading();
        let mut companion = DMatrix::<C64>::zeros(deg, deg);
        for i in 1..deg {
            companion[(i, i - 1)] = ONE;
        }
        for i in 0..deg {
            companion[(i, deg - 1)] = -reduced.coeffs[i] / lead;
        }
        let (_, t) = Schur::new(companion).unpack();
        let dp = reduced.derivative();
        let raw: Vec<C64> = (0..deg)
            .map(|i| {
                let z = t[(i, i)];
                let d = dp.eval(z);
                let p = reduced.eval(z);
                if d.norm() > 0.0 {
                    let polished = z - p / d;
                    if reduced.eval(polished).norm() <= p.norm() {
                        return polished;
                    }
                }
                z
            })
            .collect();
        out.extend(cluster(&raw));
        out
    }
}

/// Groups values closer than `1e-6 · max(1, |z|)` and replaces each group by its mean.
fn cluster(values: &[C64]) -> Vec<Root> {
    let mut used = vec![false; values.len()];
    let mut out = Vec::new();
    for i in 0..values.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let mut members = vec![values[i]];
        // grow transitively so a split multiple root is caught whole
        let mut grew = true;
        while grew {
            grew = false;
            for j in 0..values.len() {
                if used[j] {
                    continue;
                }
                let near = members.iter().any(|m| (values[j] - m).norm() < 1e-6 * m.norm().max(1.0));
                if near {
                    used[j] = true;
                    members.push(values[j]);
                    grew = true;
                }
            }
        }
        let mean = members.iter().sum::<C64>() / members.len() as f64;
        out.push(Root { point: mean, multiplicity: members.len() as u32 });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn has_root(roots: &[Root], z: C64, m: u32, tol: f64) -> bool {
        roots.iter().any(|r| (r.point - z).norm() <= tol && r.multiplicity == m)
    }

    #[test]
    fn roots_of_simple_polynomials() {
        let p = Poly::from_real(&[1.0, 0.0, 1.0]);
        let r = p.roots();
        assert_eq!(r.len(), 2);
        assert!(has_root(&r, c(0.0, 1.0), 1, 1e-14));
        assert!(has_root(&r, c(0.0, -1.0), 1, 1e-14));

        let q = Poly::from_roots(c(2.0, -1.0), &[
            Root { point: c(0.5, 0.0), multiplicity: 1 },
            Root { point: c(-0.3, 0.4), multiplicity: 1 },
            Root { point: c(3.0, 1.0), multiplicity: 1 },
        ]);
        let r = q.roots();
        assert!(has_root(&r, c(0.5, 0.0), 1, 1e-13));
        assert!(has_root(&r, c(-0.3, 0.4), 1, 1e-13));
        assert!(has_root(&r, c(3.0, 1.0), 1, 1e-12));
    }

    #[test]
    fn origin_and_multiple_roots() {
        let p = Poly::from_roots(c(1.0, 0.0), &[
            Root { point: ZERO, multiplicity: 2 },
            Root { point: c(0.5, 0.0), multiplicity: 2 },
        ]);
        let r = p.roots();
        assert!(has_root(&r, ZERO, 2, 0.0));
        assert!(has_root(&r, c(0.5, 0.0), 2, 1e-9));
        assert!(Poly::constant(c(3.0, 0.0)).roots().is_empty());
    }

    #[test]
    fn arithmetic() {
        let p = Poly::from_real(&[1.0, 1.0]);
        let q = p.mul(&p);
        assert_eq!(q, Poly::from_real(&[1.0, 2.0, 1.0]));
        assert_eq!(q.derivative(), Poly::from_real(&[2.0, 2.0]));
        assert_eq!(Poly::from_real(&[1.0, 0.0, 0.0]).degree(), 0);
        assert_eq!(q.eval(c(2.0, 0.0)), c(9.0, 0.0));
        assert_eq!(Poly::monomial(2, ONE).zero_order_at_origin(), 2);
    }
}
