//! Property tests for the Novikov-field arithmetic: field axioms up to the
//! working cutoff, valuation laws, and n-th roots.

use floermod_core::novikov::{Exp, NovikovNum};
use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;

const REL: f64 = 1e-8;

/// A random element with exponents in [−10, 20), denominators ≤ 4,
/// coefficient magnitudes in [0.1, 4] and cutoff 20.
fn element() -> impl Strategy<Value = NovikovNum> {
    // Exponents on the grid ℤ/4 so that terms of independent elements often
    // collide and exercise merging.
    let term = (-40i128..80, 0.1f64..4.0, 0.0f64..(2.0 * std::f64::consts::PI))
        .prop_map(|(num, mag, phase)| (Ratio::new(num, 4), Complex64::from_polar(mag, phase)));
    proptest::collection::vec(term, 1..6)
        .prop_map(|terms| NovikovNum::from_terms(terms, Some(Exp::from_integer(20))))
}

/// A conditioning-bounded element for the inverse and root identities:
/// integer exponents, coefficient ratio ≤ 4, and 8 retained orders. The
/// inverse of a series is a geometric expansion whose coefficients compound
/// the term ratio once per order, so the float error in `x·x⁻¹ − 1` grows
/// like ratioᵒʳᵈᵉʳˢ; this class keeps that below 1e−6 in the worst case.
fn tame_element() -> impl Strategy<Value = NovikovNum> {
    let term = (-10i128..10, 0.5f64..2.0, 0.0f64..(2.0 * std::f64::consts::PI))
        .prop_map(|(e, mag, phase)| (Ratio::from_integer(e), Complex64::from_polar(mag, phase)));
    proptest::collection::vec(term, 1..5).prop_map(|terms| {
        let x = NovikovNum::from_terms(terms, None);
        let cut = x.val().map(|v| v + Exp::from_integer(8));
        x.with_cutoff(cut)
    })
}

proptest! {
    #[test]
    fn addition_is_associative(x in element(), y in element(), z in element()) {
        let a = x.add(&y).add(&z);
        let b = x.add(&y.add(&z));
        prop_assert!(a.approx_eq(&b, REL));
    }

    #[test]
    fn inverse_multiplies_to_one(x in tame_element()) {
        prop_assume!(!x.is_zero());
        let inv = x.invert().unwrap();
        prop_assert!(x.mul(&inv).approx_eq(&NovikovNum::one(), 1e-5));
    }

    #[test]
    fn multiplication_distributes(x in element(), y in element(), z in element()) {
        let a = x.mul(&y.add(&z));
        let b = x.mul(&y).add(&x.mul(&z));
        prop_assert!(a.approx_eq(&b, REL));
    }

    #[test]
    fn valuation_of_product_adds(x in element(), y in element()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let p = x.mul(&y);
        // The product's leading term survives whenever it lies below the
        // product cutoff.
        if let Some(v) = p.val() {
            prop_assert_eq!(v, x.val().unwrap() + y.val().unwrap());
        }
    }

    #[test]
    fn valuation_of_sum(x in element(), y in element()) {
        prop_assume!(!x.is_zero() && !y.is_zero());
        let (vx, vy) = (x.val().unwrap(), y.val().unwrap());
        let s = x.add(&y);
        if let Some(v) = s.val() {
            prop_assert!(v >= vx.min(vy));
        }
        if vx != vy {
            prop_assert_eq!(s.val(), Some(vx.min(vy)));
        }
    }

    #[test]
    fn nth_roots_are_roots(x in tame_element(), n in 1u32..5) {
        prop_assume!(!x.is_zero());
        let roots = x.nth_roots(n).unwrap();
        prop_assert_eq!(roots.len(), n as usize);
        for r in &roots {
            prop_assert!(r.powi(n as i32).unwrap().approx_eq(&x, 1e-5));
        }
        // Pairwise distinct leading terms.
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let (ei, ci) = roots[i].leading().unwrap();
                let (ej, cj) = roots[j].leading().unwrap();
                prop_assert!(ei != ej || (ci - cj).norm() > 1e-6 * ci.norm());
            }
        }
    }
}
