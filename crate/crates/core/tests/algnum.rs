use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use seshadri_core::rational::{frac, q, Q};
use seshadri_core::{AlgNum, MultiQuadratic};

const DIGITS: u32 = 200;

fn field() -> Arc<MultiQuadratic> {
    MultiQuadratic::with_roots(&[q(2), q(3), q(5)]).unwrap().0
}

/// Fixed-point value of an element scaled by `10^DIGITS`, with the
/// accumulated truncation error bound.
fn fixed_point(f: &MultiQuadratic, coords: &[Q]) -> (BigInt, BigInt) {
    let scale = BigInt::from(10u32).pow(DIGITS);
    let mut sum = BigInt::zero();
    let mut err = BigInt::zero();
    for (mask, c) in coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let root = (f.basis_radicand(mask) * &scale * &scale).sqrt();
        // c * root / 1 has error below |numer| / denom + 1 after flooring.
        let v = c.numer() * &root / c.denom();
        sum += v;
        err += c.numer().abs() / c.denom() + BigInt::from(2);
    }
    (sum, err)
}

fn oracle_sign(f: &MultiQuadratic, coords: &[Q]) -> Option<Ordering> {
    if coords.iter().all(|c| c.is_zero()) {
        return Some(Ordering::Equal);
    }
    let (v, err) = fixed_point(f, coords);
    if v.abs() > err {
        Some(v.sign().cmp_zero())
    } else {
        None
    }
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

fn random_coords(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Q> {
    (0..dim)
        .map(|_| {
            if rng.random_bool(0.3) {
                q(0)
            } else {
                frac(
                    rng.random_range(-10_000..=10_000),
                    rng.random_range(1..=500),
                )
            }
        })
        .collect()
}

#[test]
fn signs_agree_with_fixed_point_oracle() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut decided = 0;
    for _ in 0..1000 {
        let coords = random_coords(&mut rng, f.dim());
        let x = f.element(coords.clone()).unwrap();
        if let Some(expected) = oracle_sign(&f, &coords) {
            assert_eq!(x.sign(), expected, "{x}");
            decided += 1;
        }
    }
    assert_eq!(decided, 1000);
}

#[test]
fn near_cancellation_signs() {
    // Close rational approximations of sqrt(2): the difference is tiny but
    // non-zero with a known sign.
    let f = field();
    let (mut p, mut r) = (BigInt::one(), BigInt::one());
    for _ in 0..40 {
        let (np, nr) = (&p + BigInt::from(2) * &r, &p + &r);
        p = np;
        r = nr;
        let approx = Q::new(p.clone(), r.clone());
        let mut coords = vec![q(0); f.dim()];
        coords[0] = -approx.clone();
        coords[1] = q(1);
        let x = f.element(coords.clone()).unwrap();
        let expected = if &approx * &approx > q(2) {
            Ordering::Less
        } else {
            Ordering::Greater
        };
        assert_eq!(x.sign(), expected);
        if let Some(o) = oracle_sign(&f, &coords) {
            assert_eq!(o, expected);
        }
    }
}

fn element() -> impl Strategy<Value = AlgNum> {
    prop::collection::vec((-50i64..=50, 1i64..=20), 8).prop_map(|v| {
        field()
            .element(v.into_iter().map(|(n, d)| frac(n, d)).collect())
            .unwrap()
    })
}

proptest! {
    #[test]
    fn field_axioms(a in element(), b in element(), c in element()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert_eq!((&a * &inv).as_rational(), Some(q(1)));
        }
    }

    #[test]
    fn order_is_compatible_with_addition(a in element(), b in element(), c in element()) {
        prop_assert_eq!((&a + &c).sign_of_difference(&(&b + &c)), a.sign_of_difference(&b));
        prop_assert!(!a.square().is_negative());
    }

    #[test]
    fn floor_dyadic_brackets_the_value(a in element()) {
        let lo = a.floor_dyadic(64);
        let step = frac(1, 1) / Q::from_integer(BigInt::one() << 64u32);
        prop_assert_ne!(a.cmp_rational(&lo), Ordering::Less);
        prop_assert_eq!(a.cmp_rational(&(lo + step)), Ordering::Less);
    }
}
