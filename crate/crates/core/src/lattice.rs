//! Picard lattice of the blow-up of the projective plane at `s` very general
//! points.
//!
//! A class is stored as `(d; m_1, ..., m_s)` and stands for `dH - sum m_i E_i`,
//! so the exceptional curve `E_i` is `(0; 0, ..., -1, ..., 0)`. The pairing has
//! signature `(1, s)`: `H^2 = 1`, `E_i^2 = -1`, all other products vanish.
//!
//! On the wire a class is the coefficient vector in the basis
//! `(H, E_1, ..., E_s)`, i.e. `[d, -m_1, ..., -m_s]` as rational strings.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{format_q, parse_q, q, Q};

/// Blow-up of the plane at `points` very general points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub points: usize,
}

impl SurfaceModel {
    pub fn new(points: usize) -> Self {
        Self { points }
    }

    /// The model with one more blown-up point appended at the end.
    pub fn with_extra_point(self) -> Self {
        Self::new(self.points + 1)
    }

    pub fn hyperplane(&self) -> DivClass {
        DivClass::new(q(1), vec![Q::zero(); self.points])
    }

    /// `E_i`, zero based.
    pub fn exceptional(&self, i: usize) -> DivClass {
        assert!(i < self.points, "exceptional index out of range");
        let mut mults = vec![Q::zero(); self.points];
        mults[i] = q(-1);
        DivClass::new(Q::zero(), mults)
    }

    /// `E_1 + ... + E_s`.
    pub fn exceptional_sum(&self) -> DivClass {
        DivClass::new(Q::zero(), vec![q(-1); self.points])
    }

    /// `K = -3H + E_1 + ... + E_s`.
    pub fn canonical_class(&self) -> DivClass {
        DivClass::new(q(-3), vec![q(-1); self.points])
    }

    pub fn anticanonical_class(&self) -> DivClass {
        -self.canonical_class()
    }
}

pub fn canonical_class(model: SurfaceModel) -> DivClass {
    model.canonical_class()
}

/// Rational divisor class `dH - sum m_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivClass {
    degree: Q,
    mults: Vec<Q>,
}

impl DivClass {
    pub fn new(degree: Q, mults: Vec<Q>) -> Self {
        Self { degree, mults }
    }

    pub fn from_ints(degree: i64, mults: &[i64]) -> Self {
        Self::new(q(degree), mults.iter().map(|&m| q(m)).collect())
    }

    /// `dH - m(E_1 + ... + E_s)`.
    pub fn homogeneous(points: usize, degree: Q, mult: Q) -> Self {
        Self::new(degree, vec![mult; points])
    }

    /// Builds a class from its coefficients in the basis `(H, E_1, ..., E_s)`.
    pub fn from_coefficients(coeffs: &[Q]) -> Result<Self> {
        let (d, rest) = coeffs
            .split_first()
            .ok_or_else(|| Error::Invalid("empty coefficient vector".into()))?;
        Ok(Self::new(d.clone(), rest.iter().map(|c| -c).collect()))
    }

    pub fn coefficients(&self) -> Vec<Q> {
        std::iter::once(self.degree.clone())
            .chain(self.mults.iter().map(|m| -m))
            .collect()
    }

    pub fn degree(&self) -> &Q {
        &self.degree
    }

    pub fn mults(&self) -> &[Q] {
        &self.mults
    }

    pub fn mult(&self, i: usize) -> &Q {
        &self.mults[i]
    }

    pub fn points(&self) -> usize {
        self.mults.len()
    }

    pub fn model(&self) -> SurfaceModel {
        SurfaceModel::new(self.points())
    }

    pub fn intersect(&self, other: &DivClass) -> Result<Q> {
        if self.points() != other.points() {
            return Err(Error::DimensionMismatch {
                left: self.points(),
                right: other.points(),
            });
        }
        Ok(self.dot_unchecked(other))
    }

    pub(crate) fn dot_unchecked(&self, other: &DivClass) -> Q {
        let mut acc = &self.degree * &other.degree;
        for (a, b) in self.mults.iter().zip(&other.mults) {
            acc -= a * b;
        }
        acc
    }

    pub fn self_intersection(&self) -> Q {
        self.dot_unchecked(self)
    }

    /// Sum of the class over the cyclic orbit of the points: `(s d; M, ..., M)`
    /// with `M = m_1 + ... + m_s`.
    pub fn symmetrize(&self) -> DivClass {
        self.symmetrize_first(self.points())
    }

    /// Sums the class over the cyclic orbit of the first `k` points. The
    /// remaining points are fixed by the cycle, so their multiplicities (and the
    /// degree) are multiplied by `k`.
    pub fn symmetrize_first(&self, k: usize) -> DivClass {
        assert!(k <= self.points());
        if k == 0 {
            return self.clone();
        }
        let kq = q(k as i64);
        let total: Q = self.mults[..k].iter().sum();
        let mut mults = vec![total; k];
        mults.extend(self.mults[k..].iter().map(|m| m * &kq));
        DivClass::new(&self.degree * &kq, mults)
    }

    /// Pull-back to a model with more points (new multiplicities are zero).
    pub fn extend(&self, points: usize) -> DivClass {
        assert!(points >= self.points());
        let mut mults = self.mults.clone();
        mults.resize(points, Q::zero());
        DivClass::new(self.degree.clone(), mults)
    }

    pub fn scale(&self, c: &Q) -> DivClass {
        DivClass::new(&self.degree * c, self.mults.iter().map(|m| m * c).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.degree.is_zero() && self.mults.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.degree.is_integer() && self.mults.iter().all(|m| m.is_integer())
    }

    /// True when `self` is a non-negative rational multiple of `other`.
    pub fn same_ray(&self, other: &DivClass) -> bool {
        if self.points() != other.points() {
            return false;
        }
        let a = self.coefficients();
        let b = other.coefficients();
        let Some(pivot) = b.iter().position(|x| !x.is_zero()) else {
            return self.is_zero();
        };
        let ratio = &a[pivot] / &b[pivot];
        if ratio.is_negative() {
            return false;
        }
        a.iter().zip(&b).all(|(x, y)| *x == &ratio * y)
    }
}

impl Add for &DivClass {
    type Output = DivClass;
    fn add(self, rhs: &DivClass) -> DivClass {
        assert_eq!(
            self.points(),
            rhs.points(),
            "adding classes on different models"
        );
        DivClass::new(
            &self.degree + &rhs.degree,
            self.mults
                .iter()
                .zip(&rhs.mults)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &DivClass {
    type Output = DivClass;
    fn sub(self, rhs: &DivClass) -> DivClass {
        assert_eq!(
            self.points(),
            rhs.points(),
            "subtracting classes on different models"
        );
        DivClass::new(
            &self.degree - &rhs.degree,
            self.mults
                .iter()
                .zip(&rhs.mults)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for DivClass {
    type Output = DivClass;
    fn neg(self) -> DivClass {
        DivClass::new(-self.degree, self.mults.into_iter().map(|m| -m).collect())
    }
}

impl fmt::Display for DivClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", format_q(&self.degree))?;
        for (i, m) in self.mults.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{}", format_q(m))?;
        }
        write!(f, ")")
    }
}

impl Serialize for DivClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        crate::rational::serialize_q_vec(&self.coefficients(), s)
    }
}

impl<'de> Deserialize<'de> for DivClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coeffs = crate::rational::deserialize_q_vec(d)?;
        DivClass::from_coefficients(&coeffs).map_err(serde::de::Error::custom)
    }
}

/// Parses a comma separated coefficient vector `d,c_1,...,c_s` in the basis
/// `(H, E_1, ..., E_s)`.
pub fn parse_class(input: &str) -> Result<DivClass> {
    let coeffs: Vec<Q> = input
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_q)
        .collect::<Result<_>>()?;
    DivClass::from_coefficients(&coeffs)
}

/// Like [`parse_class`], with an optional trailing `...` that repeats the
/// last coefficient up to `points` exceptional classes. When `points` is
/// given the class must live on exactly that many points.
pub fn parse_class_on(input: &str, points: Option<usize>) -> Result<DivClass> {
    let tokens: Vec<&str> = input
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    let (body, repeat) = match tokens.split_last() {
        Some((&"...", rest)) => (rest, true),
        _ => (&tokens[..], false),
    };
    let mut coeffs: Vec<Q> = body.iter().copied().map(parse_q).collect::<Result<_>>()?;
    if repeat {
        let n = points.ok_or_else(|| Error::Invalid("`...` needs the number of points".into()))?;
        let last = match coeffs.last() {
            Some(c) if coeffs.len() > 1 => c.clone(),
            _ => {
                return Err(Error::Parse {
                    what: "class",
                    input: input.to_string(),
                })
            }
        };
        while coeffs.len() < n + 1 {
            coeffs.push(last.clone());
        }
    }
    let d = DivClass::from_coefficients(&coeffs)?;
    match points {
        Some(n) if n != d.points() => Err(Error::DimensionMismatch {
            left: d.points(),
            right: n,
        }),
        _ => Ok(d),
    }
}

pub fn intersect(a: &DivClass, b: &DivClass) -> Result<Q> {
    a.intersect(b)
}

pub fn symmetrize(d: &DivClass) -> DivClass {
    d.symmetrize()
}
