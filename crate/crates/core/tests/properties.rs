use proptest::prelude::*;

use hardy_na::fourier::{coefficients_from_samples, conjugate_cu, flip_v};
use hardy_na::inner::{inner_outer, Poly, RationalFunction, Root};
use hardy_na::{BlaschkeProduct, FourierVector, C64};

fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| C64::new(a, b))
}

fn laurent() -> impl Strategy<Value = FourierVector> {
    (-6i64..3, prop::collection::vec(complex(1.0), 1..10)).prop_map(|(lo, c)| FourierVector::new(lo, c))
}

fn disk_point(radius: f64) -> impl Strategy<Value = C64> {
    (0.05..radius, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

/// Zeros pairwise farther apart than the clustering tolerance.
fn separated(pts: Vec<C64>) -> bool {
    pts.iter().enumerate().all(|(i, a)| pts[..i].iter().all(|b| (a - b).norm() > 1e-4))
}

fn blaschke(max: usize) -> impl Strategy<Value = BlaschkeProduct> {
    (prop::collection::vec(disk_point(0.9), 0..=max), 0u32..2, 0.0..std::f64::consts::TAU)
        .prop_filter("separated zeros", |(z, _, _)| separated(z.clone()))
        .prop_map(|(zeros, p, t)| BlaschkeProduct::new(C64::from_polar(1.0, t), p, zeros.into_iter().map(|a| (a, 1))).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval(f in laurent()) {
        let mean: f64 = f.grid_values(64).iter().map(|v| v.norm_sqr()).sum::<f64>() / 64.0;
        prop_assert!((mean - f.norm_sqr()).abs() < 1e-12 * (1.0 + f.norm_sqr()));
        let back = coefficients_from_samples(&f.grid_values(64));
        for (k, c) in f.iter() {
            prop_assert!((back[k.rem_euclid(64) as usize] - c).norm() < 1e-12);
        }
    }

    #[test]
    fn v_is_an_involution(f in laurent()) {
        prop_assert_eq!(flip_v(&flip_v(&f)).canonical(), f.canonical());
        prop_assert!((flip_v(&f).norm() - f.norm()).abs() < 1e-14);
    }

    #[test]
    fn cu_is_an_involution(f in laurent(), u in blaschke(3)) {
        let uc = u.coeffs(1e-15);
        let back = conjugate_cu(&conjugate_cu(&f, &uc), &uc);
        prop_assert!((&back - &f).norm() < 1e-10 * (1.0 + f.norm()));
    }

    #[test]
    fn gcd_distributes(a in blaschke(3), b in blaschke(3), c in blaschke(3)) {
        let all: Vec<C64> = [&a, &b, &c].iter().flat_map(|x| x.zeros().iter().map(|z| z.point)).collect();
        // coincidences across factors must be exact or well separated
        prop_assume!(all.iter().enumerate().all(|(i, p)| all[..i].iter().all(|q| *p == *q || (p - q).norm() > 1e-4)));
        let lhs = a.multiply(&b).gcd(&a.multiply(&c));
        let rhs = a.multiply(&b.gcd(&c));
        prop_assert!(lhs.eq_up_to_phase(&rhs), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn divide_undoes_multiply(a in blaschke(4), b in blaschke(4)) {
        let q = a.multiply(&b).divide(&b).unwrap();
        prop_assert!(q.eq_up_to_phase(&a));
        prop_assert!(b.divides(&a.multiply(&b)));
    }

    #[test]
    fn coefficients_resum_to_the_function(b in blaschke(4), t in 0.0..std::f64::consts::TAU) {
        let eps = 1e-12;
        let co = b.coeffs(eps);
        prop_assert!((co.eval(t) - b.eval(C64::from_polar(1.0, t))).norm() < 2.0 * eps);
    }

    #[test]
    fn inner_outer_multiplies_back(
        inside in prop::collection::vec(disk_point(0.9), 0..4),
        outside in prop::collection::vec((1.1f64..3.0, 0.0..std::f64::consts::TAU), 0..4),
        poles in prop::collection::vec((1.2f64..3.0, 0.0..std::f64::consts::TAU), 0..3),
        lead in complex(2.0),
    ) {
        prop_assume!(lead.norm() > 1e-3);
        let mut roots: Vec<C64> = inside;
        roots.extend(outside.iter().map(|&(r, t)| C64::from_polar(r, t)));
        prop_assume!(!roots.is_empty() && separated(roots.clone()));
        let as_roots = |pts: &[C64]| pts.iter().map(|&p| Root { point: p, multiplicity: 1 }).collect::<Vec<_>>();
        let poles: Vec<C64> = poles.iter().map(|&(r, t)| C64::from_polar(r, t)).collect();
        let f = RationalFunction::new(Poly::from_roots(lead, &as_roots(&roots)), Poly::from_roots(C64::new(1.0, 0.0), &as_roots(&poles))).unwrap();
        let p = inner_outer(&f).unwrap();
        for j in 0..64 {
            let z = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / 64.0);
            prop_assert!((p.inner.eval(z) * p.outer.eval(z) - f.eval(z)).norm() < 1e-9 * (1.0 + f.eval(z).norm()));
        }
        prop_assert!(p.outer.numerator().roots().iter().all(|r| r.point.norm() > 1.0 - 1e-9));
    }
}
