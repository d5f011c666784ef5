//! Exact arithmetic in multi-quadratic extensions `Q(sqrt g_1, ..., sqrt g_k)`.
//!
//! The generators are positive integers chosen so that no product of a
//! non-empty subset of them is a perfect square. Under that condition the
//! products `sqrt(prod_{i in S} g_i)` over subsets `S` form a basis of the
//! field over the rationals, so an element is zero exactly when all of its
//! coordinates vanish. Non-zero signs are decided by evaluating the element
//! on dyadic intervals of shrinking width, which terminates because the
//! element is a fixed non-zero real number.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{format_q, to_f64, Q};

/// Multi-quadratic number field described by independent integer radicands.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiQuadratic {
    gens: Vec<BigInt>,
}

/// Hard limit on the number of independent radicands; the basis has `2^k`
/// elements.
const MAX_GENERATORS: usize = 8;

fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Writes `n = k^2 m` removing square factors of primes below a small bound.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut k = BigInt::one();
    let mut m = n.clone();
    let mut p = 2u32;
    while p < 1000 {
        let pp = BigInt::from(p * p);
        while (&m % &pp).is_zero() {
            m /= &pp;
            k *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    (k, m)
}

impl MultiQuadratic {
    /// Builds the field generated by `sqrt(r)` for every radicand and returns
    /// the square roots as field elements, in input order.
    pub fn with_roots(radicands: &[Q]) -> Result<(Arc<Self>, Vec<AlgNum>)> {
        // Each root is recorded as coefficient * basis[mask] before the field
        // is frozen.
        let mut gens: Vec<BigInt> = Vec::new();
        let mut roots: Vec<(Q, usize)> = Vec::with_capacity(radicands.len());
        for r in radicands {
            if r.is_negative() {
                return Err(Error::Invalid(format!(
                    "square root of negative rational {}",
                    format_q(r)
                )));
            }
            if r.is_zero() {
                roots.push((Q::zero(), 0));
                continue;
            }
            // sqrt(p/q) = sqrt(p q) / q, with small square factors pulled out.
            let (outer, n) = split_square(&(r.numer() * r.denom()));
            let scale = Q::new(outer, r.denom().clone());
            match Self::express(&gens, &n) {
                Some((c, mask)) => roots.push((c * scale, mask)),
                None => {
                    if gens.len() == MAX_GENERATORS {
                        return Err(Error::Invalid("too many independent radicals".into()));
                    }
                    gens.push(n);
                    roots.push((scale, 1 << (gens.len() - 1)));
                }
            }
        }
        let field = Arc::new(Self { gens });
        let elems = roots
            .into_iter()
            .map(|(c, mask)| {
                let mut coords = vec![Q::zero(); field.dim()];
                coords[mask] = c;
                AlgNum {
                    field: field.clone(),
                    coords,
                }
            })
            .collect();
        Ok((field, elems))
    }

    /// Writes `sqrt(n)` as `c * basis[mask]` over the given generators, if
    /// possible.
    fn express(gens: &[BigInt], n: &BigInt) -> Option<(Q, usize)> {
        for mask in 0..(1usize << gens.len()) {
            let prod = Self::product(gens, mask);
            if let Some(w) = exact_sqrt(&(n * &prod)) {
                // sqrt(n) = w / sqrt(prod) = w * sqrt(prod) / prod
                return Some((Q::new(w, prod), mask));
            }
        }
        None
    }

    fn product(gens: &[BigInt], mask: usize) -> BigInt {
        gens.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .fold(BigInt::one(), |acc, (_, g)| acc * g)
    }

    pub fn rationals() -> Arc<Self> {
        Arc::new(Self { gens: Vec::new() })
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.gens
    }

    pub fn dim(&self) -> usize {
        1 << self.gens.len()
    }

    /// Radicand of the basis element indexed by a subset bit mask.
    pub fn basis_radicand(&self, mask: usize) -> BigInt {
        Self::product(&self.gens, mask)
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Q>) -> Result<AlgNum> {
        if coords.len() != self.dim() {
            return Err(Error::Invalid(format!(
                "expected {} coordinates",
                self.dim()
            )));
        }
        Ok(AlgNum {
            field: self.clone(),
            coords,
        })
    }

    pub fn from_rational(self: &Arc<Self>, x: Q) -> AlgNum {
        let mut coords = vec![Q::zero(); self.dim()];
        coords[0] = x;
        AlgNum {
            field: self.clone(),
            coords,
        }
    }
}

/// Element of a [`MultiQuadratic`] field.
#[derive(Clone)]
pub struct AlgNum {
    field: Arc<MultiQuadratic>,
    coords: Vec<Q>,
}

impl fmt::Debug for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgNum({self})")
    }
}

impl PartialEq for AlgNum {
    fn eq(&self, other: &Self) -> bool {
        self.sign_of_difference(other) == Ordering::Equal
    }
}

impl AlgNum {
    pub fn rational(x: Q) -> Self {
        MultiQuadratic::rationals().from_rational(x)
    }

    pub fn field(&self) -> &Arc<MultiQuadratic> {
        &self.field
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in the base field.
    pub fn as_rational(&self) -> Option<Q> {
        self.coords[1..]
            .iter()
            .all(Zero::is_zero)
            .then(|| self.coords[0].clone())
    }

    /// Lift of a rational into this element's field.
    pub fn lift(&self, x: Q) -> AlgNum {
        self.field.from_rational(x)
    }

    fn check_field(&self, other: &AlgNum) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "arithmetic between different multi-quadratic fields"
        );
    }

    /// Brings two elements into a common field. Elements of the rationals can
    /// be mixed with anything.
    fn align(&self, other: &AlgNum) -> (AlgNum, AlgNum) {
        if self.field.gens.is_empty() && !other.field.gens.is_empty() {
            return (other.lift(self.coords[0].clone()), other.clone());
        }
        if other.field.gens.is_empty() && !self.field.gens.is_empty() {
            return (self.clone(), self.lift(other.coords[0].clone()));
        }
        self.check_field(other);
        (self.clone(), other.clone())
    }

    fn conjugate(&self, gen: usize) -> AlgNum {
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(mask, c)| if mask >> gen & 1 == 1 { -c } else { c.clone() })
            .collect();
        AlgNum {
            field: self.field.clone(),
            coords,
        }
    }

    pub fn inverse(&self) -> Result<AlgNum> {
        if self.is_zero() {
            return Err(Error::Invalid("inverse of zero".into()));
        }
        // Multiplying by the conjugate along each generator removes that
        // generator; what remains is a non-zero rational norm.
        let mut acc = self.lift(Q::one());
        let mut y = self.clone();
        for g in 0..self.field.gens.len() {
            let conj = y.conjugate(g);
            acc = &acc * &conj;
            y = &y * &conj;
        }
        let norm = y.coords[0].clone();
        debug_assert!(y.coords[1..].iter().all(Zero::is_zero));
        Ok(acc.scale(&(Q::one() / norm)))
    }

    pub fn scale(&self, c: &Q) -> AlgNum {
        AlgNum {
            field: self.field.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn div(&self, other: &AlgNum) -> Result<AlgNum> {
        let (a, b) = self.align(other);
        Ok(&a * &b.inverse()?)
    }

    pub fn square(&self) -> AlgNum {
        self * self
    }

    /// Exact sign: `Less` for negative, `Equal` for zero, `Greater` for positive.
    pub fn sign(&self) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(r) = self.as_rational() {
            return r.cmp(&Q::zero());
        }
        let mut bits: u32 = 64;
        loop {
            let (lo, hi) = self.enclosure(bits);
            if lo.is_positive() {
                return Ordering::Greater;
            }
            if hi.is_negative() {
                return Ordering::Less;
            }
            bits *= 2;
        }
    }

    /// Rational interval containing the value, from square roots truncated
    /// to `bits` binary digits.
    fn enclosure(&self, bits: u32) -> (Q, Q) {
        // Clear denominators: x * D = sum N_S sqrt(P_S) with integer N_S.
        let lcm = self
            .coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        // sqrt(P) in [floor(sqrt(P 4^b)), floor(...) + 1] / 2^b
        let shift = BigInt::one() << (2 * bits as usize);
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (mask, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let n = c.numer() * (&lcm / c.denom());
            let p = self.field.basis_radicand(mask);
            let floor = (&p * &shift).sqrt();
            let exact = &floor * &floor == &p * &shift;
            let ceil = if exact { floor.clone() } else { &floor + 1 };
            if n.sign() == Sign::Minus {
                lo += &n * &ceil;
                hi += &n * &floor;
            } else {
                lo += &n * &floor;
                hi += &n * &ceil;
            }
        }
        let denom = lcm << bits as usize;
        (Q::new(lo, denom.clone()), Q::new(hi, denom))
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn sign_of_difference(&self, other: &AlgNum) -> Ordering {
        (self - other).sign()
    }

    pub fn cmp_rational(&self, x: &Q) -> Ordering {
        (self - &self.lift(x.clone())).sign()
    }

    /// Greatest dyadic rational with denominator `2^bits` not exceeding the
    /// value.
    pub fn floor_dyadic(&self, bits: u32) -> Q {
        let scale = Q::from_integer(BigInt::one() << bits as usize);
        let scaled = self.scale(&scale);
        let mut prec: u32 = 64;
        loop {
            let (lo, hi) = scaled.enclosure(prec);
            let (kl, kh) = (lo.floor().to_integer(), hi.floor().to_integer());
            if kl == kh {
                return Q::new(kl, BigInt::one() << bits as usize);
            }
            if &kl + 1 == kh {
                let k = if scaled.cmp_rational(&Q::from_integer(kh.clone())) == Ordering::Less {
                    kl
                } else {
                    kh
                };
                return Q::new(k, BigInt::one() << bits as usize);
            }
            prec *= 2;
        }
    }

    /// Floating point estimate (not used for any decision).
    pub fn to_f64(&self) -> f64 {
        to_f64_est(self)
    }
}

fn to_f64_est(x: &AlgNum) -> f64 {
    x.coords
        .iter()
        .enumerate()
        .map(|(mask, c)| {
            let p = x.field.basis_radicand(mask);
            let pf: f64 = p.to_string().parse().unwrap_or(f64::NAN);
            to_f64(c) * pf.sqrt()
        })
        .sum()
}

impl Add for &AlgNum {
    type Output = AlgNum;
    fn add(self, rhs: &AlgNum) -> AlgNum {
        let (a, b) = self.align(rhs);
        AlgNum {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
            field: a.field,
        }
    }
}

impl Sub for &AlgNum {
    type Output = AlgNum;
    fn sub(self, rhs: &AlgNum) -> AlgNum {
        let (a, b) = self.align(rhs);
        AlgNum {
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
            field: a.field,
        }
    }
}

impl Mul for &AlgNum {
    type Output = AlgNum;
    fn mul(self, rhs: &AlgNum) -> AlgNum {
        let (a, b) = self.align(rhs);
        let n = a.field.dim();
        let mut coords = vec![Q::zero(); n];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let common = a.field.basis_radicand(i & j);
                coords[i ^ j] += x * y * Q::from_integer(common);
            }
        }
        AlgNum {
            field: a.field,
            coords,
        }
    }
}

impl Neg for &AlgNum {
    type Output = AlgNum;
    fn neg(self) -> AlgNum {
        self.scale(&-Q::one())
    }
}

impl fmt::Display for AlgNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (mask, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if mask == 0 {
                write!(f, "{}", format_q(c))?;
            } else if c.is_one() {
                write!(f, "sqrt({})", self.field.basis_radicand(mask))?;
            } else {
                write!(
                    f,
                    "{}*sqrt({})",
                    format_q(c),
                    self.field.basis_radicand(mask)
                )?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct AlgNumWire {
    terms: Vec<(String, String)>,
    approx: f64,
}

impl Serialize for AlgNum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(mask, c)| (format_q(c), self.field.basis_radicand(mask).to_string()))
            .collect();
        AlgNumWire {
            terms,
            approx: self.to_f64(),
        }
        .serialize(s)
    }
}

/// Square root of a non-negative rational as a field element.
pub fn sqrt_q(x: &Q) -> Result<AlgNum> {
    let (_, mut roots) = MultiQuadratic::with_roots(std::slice::from_ref(x))?;
    Ok(roots.remove(0))
}

/// Real roots of `c0 + c1 t + c2 t^2`, sorted increasingly. Returns `None`
/// for the zero polynomial.
pub fn quadratic_roots(c0: &Q, c1: &Q, c2: &Q) -> Option<Vec<AlgNum>> {
    if c2.is_zero() {
        if c1.is_zero() {
            return if c0.is_zero() { None } else { Some(Vec::new()) };
        }
        return Some(vec![AlgNum::rational(-c0 / c1)]);
    }
    let four = Q::from_integer(BigInt::from(4));
    let disc = c1 * c1 - four * c0 * c2;
    if disc.is_negative() {
        return Some(Vec::new());
    }
    let two_a = c2 * Q::from_integer(BigInt::from(2));
    let root = sqrt_q(&disc).expect("non-negative discriminant");
    let base = root.lift(-c1 / &two_a);
    let delta = root.scale(&(Q::one() / &two_a));
    if disc.is_zero() {
        return Some(vec![base]);
    }
    let mut r = vec![&base - &delta, &base + &delta];
    if r[0].sign_of_difference(&r[1]) == Ordering::Greater {
        r.swap(0, 1);
    }
    Some(r)
}
