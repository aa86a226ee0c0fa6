//! Randomized property suites over the exact linear algebra, the text
//! grammar and the ideal arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use avcup::arith::big;
use avcup::cohomology::kappa;
use avcup::matz::{self, Mat};
use avcup::nf::NumberField;
use avcup::parse::{format_element, format_int_poly, parse_element, parse_int_poly};
use avcup::poly::IntPoly;

fn qm5() -> NumberField {
    NumberField::make(IntPoly::from_i64(&[5, 0, 1])).unwrap()
}

fn small_mat() -> impl Strategy<Value = Mat> {
    (2usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(proptest::collection::vec(-9i64..=9, n), n)
            .prop_map(|rows| Mat::from_rows(rows.into_iter().map(|r| r.into_iter().map(big).collect()).collect()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hnf_is_idempotent(m in small_mat()) {
        let h = matz::hnf(&m);
        let h2 = matz::hnf(&h);
        prop_assert_eq!(h, h2);
    }

    #[test]
    fn snf_transforms_are_consistent(m in small_mat()) {
        let (d, u, v, v_inv) = matz::snf(&m);
        prop_assert_eq!(u.mul(&m).mul(&v), d.clone());
        let n = m.rows;
        prop_assert_eq!(v.mul(&v_inv), Mat::identity(n));
        // Divisibility chain along the diagonal.
        for i in 1..n {
            let a = d[(i - 1, i - 1)].clone();
            let b = d[(i, i)].clone();
            if !a.is_zero() && !b.is_zero() {
                prop_assert!((&b % &a).is_zero());
            }
        }
    }

    #[test]
    fn poly_text_round_trip(coeffs in proptest::collection::vec(-99i64..=99, 1..=5)) {
        let mut c = coeffs;
        c.push(1); // monic
        let p = IntPoly::from_i64(&c);
        let q = parse_int_poly(&format_int_poly(&p)).unwrap();
        prop_assert_eq!(p.coeffs, q.coeffs);
    }

    #[test]
    fn element_text_round_trip(a in -50i64..=50, b in -50i64..=50, den in 1i64..=6) {
        let k = qm5();
        let x = k.elt(vec![big(a), big(b)], big(den));
        let y = parse_element(&k, &format_element(&k, &x)).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn norm_is_multiplicative(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, d in -9i64..=9) {
        let k = qm5();
        let x = k.elt(vec![big(a), big(b)], BigInt::one());
        let y = k.elt(vec![big(c), big(d)], BigInt::one());
        let lhs = k.norm(&k.mul(&x, &y));
        let rhs = k.norm(&x) * k.norm(&y);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn principal_ideals_multiply(a in -9i64..=9, b in -9i64..=9, c in -9i64..=9, d in -9i64..=9) {
        let k = qm5();
        let x = k.elt(vec![big(a), big(b)], BigInt::one());
        let y = k.elt(vec![big(c), big(d)], BigInt::one());
        prop_assume!(!x.is_zero() && !y.is_zero());
        let lhs = k.principal_ideal(&k.mul(&x, &y)).unwrap();
        let rhs = k.ideal_mul(&k.principal_ideal(&x).unwrap(), &k.principal_ideal(&y).unwrap());
        prop_assert_eq!(lhs, rhs);
        // And the ideal norm matches the element norm.
        let n = k.ideal_norm(&k.principal_ideal(&x).unwrap());
        prop_assert_eq!(n, k.norm(&x).abs());
    }

    #[test]
    fn kappa_is_the_integral_half(n in 1u64..=12, k in 0usize..6) {
        // d runs over divisors of n.
        let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let d = divs[k % divs.len()];
        // 2 kappa = n(d+1)(n/d) mod 2n, the doubled form of n^2/(2d) + n(n/d)/2 rounding.
        let lhs = (2 * kappa(n, d)) % (2 * n);
        let rhs = (n * (d + 1) % (2 * n)) * (n / d) % (2 * n);
        prop_assert_eq!(lhs, rhs % (2 * n));
    }
}
