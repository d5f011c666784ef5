//! Zariski decompositions against a curve catalog, nef and pseudoeffective
//! thresholds, and chamber walks along rays `A - tB`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::Serialize;

use crate::algnum::{quadratic_roots, AlgNum};
use crate::curves::{Blocks, CurveClass, NegCurveCatalog, Orbit};
use crate::error::{Error, Result};
use crate::lattice::DivClass;
use crate::rational::{format_q, q, to_f64, Q};

/// Exact value of a threshold: rational, a real quadratic irrationality, or
/// `+infinity`.
#[derive(Debug, Clone, PartialEq)]
pub enum Threshold {
    Rational(Q),
    Quadratic(AlgNum),
    Infinite,
}

impl Threshold {
    fn from_alg(x: AlgNum) -> Self {
        match x.as_rational() {
            Some(r) => Threshold::Rational(r),
            None => Threshold::Quadratic(x),
        }
    }

    pub fn as_rational(&self) -> Option<&Q> {
        match self {
            Threshold::Rational(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, Threshold::Infinite)
    }

    pub fn to_algnum(&self) -> Option<AlgNum> {
        match self {
            Threshold::Rational(r) => Some(AlgNum::rational(r.clone())),
            Threshold::Quadratic(x) => Some(x.clone()),
            Threshold::Infinite => None,
        }
    }

    /// Compares the threshold with a rational.
    pub fn cmp_q(&self, x: &Q) -> Ordering {
        match self {
            Threshold::Rational(r) => r.cmp(x),
            Threshold::Quadratic(a) => a.cmp_rational(x),
            Threshold::Infinite => Ordering::Greater,
        }
    }

    pub fn cmp_threshold(&self, other: &Threshold) -> Ordering {
        match (self, other) {
            (Threshold::Infinite, Threshold::Infinite) => Ordering::Equal,
            (Threshold::Infinite, _) => Ordering::Greater,
            (_, Threshold::Infinite) => Ordering::Less,
            (Threshold::Rational(a), b) => b.cmp_q(a).reverse(),
            (a, Threshold::Rational(b)) => a.cmp_q(b),
            (Threshold::Quadratic(a), Threshold::Quadratic(b)) => a.sign_of_difference(b),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Threshold::Rational(r) => to_f64(r),
            Threshold::Quadratic(a) => a.to_f64(),
            Threshold::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Rational(r) => write!(f, "{}", format_q(r)),
            Threshold::Quadratic(a) => write!(f, "{a}"),
            Threshold::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Threshold", 2)?;
        match self {
            Threshold::Rational(r) => {
                st.serialize_field("kind", "rational")?;
                st.serialize_field("value", &format_q(r))?;
            }
            Threshold::Quadratic(a) => {
                st.serialize_field("kind", "quadratic")?;
                st.serialize_field("value", a)?;
            }
            Threshold::Infinite => {
                st.serialize_field("kind", "infinite")?;
                st.serialize_field("value", &Option::<String>::None)?;
            }
        }
        st.end()
    }
}

/// `D = P + sum a_i C_i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZariskiDecomposition {
    pub input: DivClass,
    pub positive: DivClass,
    pub negative: Vec<NegativeTerm>,
    pub certified_dmax: i64,
    pub catalog_complete: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeTerm {
    pub curve: CurveClass,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub coefficient: Q,
}

impl ZariskiDecomposition {
    pub fn volume(&self) -> Q {
        self.positive.self_intersection()
    }

    pub fn support(&self) -> Vec<CurveClass> {
        self.negative.iter().map(|t| t.curve.clone()).collect()
    }

    pub fn coefficient_of(&self, c: &CurveClass) -> Q {
        self.negative
            .iter()
            .find(|t| &t.curve == c)
            .map(|t| t.coefficient.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn negative_class(&self) -> DivClass {
        let mut acc = zero_class(self.input.points());
        for t in &self.negative {
            acc = &acc + &t.curve.to_div().scale(&t.coefficient);
        }
        acc
    }
}

/// Integer multiple of a rational class, for fast pairings with integral
/// curves.
struct IntForm {
    coeffs: Vec<BigInt>,
    small: Option<Vec<i128>>,
    den: BigInt,
}

impl IntForm {
    fn new(d: &DivClass) -> Self {
        let den = std::iter::once(d.degree())
            .chain(d.mults())
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let coeffs: Vec<BigInt> = std::iter::once(d.degree())
            .chain(d.mults())
            .map(|x| x.numer() * (&den / x.denom()))
            .collect();
        let small = coeffs
            .iter()
            .map(|c| i64::try_from(c).ok().map(i128::from))
            .collect();
        Self { coeffs, small, den }
    }

    /// `den * (D . C)`.
    fn dot_int(&self, c: &CurveClass) -> BigInt {
        if let Some(v) = &self.small {
            let mut acc = v[0] * i128::from(c.degree);
            for (x, m) in v[1..].iter().zip(&c.mults) {
                acc -= x * i128::from(*m);
            }
            return BigInt::from(acc);
        }
        let mut acc = &self.coeffs[0] * c.degree;
        for (x, m) in self.coeffs[1..].iter().zip(&c.mults) {
            if *m != 0 {
                acc -= x * *m;
            }
        }
        acc
    }

    fn dot(&self, c: &CurveClass) -> Q {
        Q::new(self.dot_int(c), self.den.clone())
    }
}

fn zero_class(points: usize) -> DivClass {
    DivClass::homogeneous(points, Q::zero(), Q::zero())
}

fn combination(points: usize, curves: &[CurveClass], coeffs: &[Q]) -> DivClass {
    let mut degree = Q::zero();
    let mut mults = vec![Q::zero(); points];
    for (c, a) in curves.iter().zip(coeffs) {
        if a.is_zero() {
            continue;
        }
        degree += a * q(c.degree);
        for (m, cm) in mults.iter_mut().zip(&c.mults) {
            if *cm != 0 {
                *m += a * q(*cm);
            }
        }
    }
    DivClass::new(degree, mults)
}

pub fn gram_matrix(curves: &[CurveClass]) -> Vec<Vec<i64>> {
    curves
        .iter()
        .map(|a| curves.iter().map(|b| a.dot(b)).collect())
        .collect()
}

/// Pivots of the symmetric elimination `G = L D L^T` in the given order, or
/// `None` when a leading principal minor vanishes.
fn ldl_pivots(g: &[Vec<i64>]) -> Option<Vec<Q>> {
    let n = g.len();
    let mut a: Vec<Vec<Q>> = g
        .iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect();
    let mut pivots = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        if p.is_zero() {
            return None;
        }
        for i in k + 1..n {
            let f = &a[i][k] / &p;
            if f.is_zero() {
                continue;
            }
            for j in k..n {
                let v = &f * &a[k][j];
                a[i][j] -= v;
            }
        }
        pivots.push(p);
    }
    Some(pivots)
}

/// Negative definiteness via leading principal minors `(-1)^k det_k > 0`,
/// equivalently all elimination pivots negative.
pub fn is_negative_definite(curves: &[CurveClass]) -> bool {
    match ldl_pivots(&gram_matrix(curves)) {
        Some(p) => p.iter().all(Signed::is_negative),
        None => false,
    }
}

/// Solves `G x = rhs` for a non-singular integer matrix.
fn solve(g: &[Vec<i64>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = g.len();
    let mut a: Vec<Vec<Q>> = g
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().map(|&x| q(x)).chain([b.clone()]).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col].clone();
        for j in col..=n {
            a[col][j] = &a[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..=n {
                let v = &f * &a[col][j];
                a[r][j] -= v;
            }
        }
    }
    Some(a.into_iter().map(|r| r[n].clone()).collect())
}

fn check_points(d: &DivClass, cat: &NegCurveCatalog) -> Result<()> {
    if d.points() != cat.points {
        return Err(Error::DimensionMismatch {
            left: d.points(),
            right: cat.points,
        });
    }
    Ok(())
}

/// Orbits with `D . C < 0` whose curves are not yet in `skip`.
fn negative_orbits<'a>(
    form: &IntForm,
    orbits: &'a [Orbit],
    skip: &BTreeSet<CurveClass>,
) -> Vec<&'a Orbit> {
    let scan =
        |o: &'a Orbit| (!skip.contains(&o.rep) && form.dot_int(&o.rep).is_negative()).then_some(o);
    if orbits.len() > 4096 {
        orbits.par_iter().filter_map(scan).collect()
    } else {
        orbits.iter().filter_map(scan).collect()
    }
}

/// Adds whole orbits to a support. A negative definite set of `(-1)`-curves
/// is pairwise disjoint, hence linearly independent, so more curves than
/// points can never be definite; `None` signals that.
fn extend_support(
    support: &mut Vec<CurveClass>,
    in_support: &mut BTreeSet<CurveClass>,
    fresh: &[&Orbit],
    blocks: &Blocks,
) -> Option<()> {
    let total: u128 = support.len() as u128 + fresh.iter().map(|o| o.size).sum::<u128>();
    if total > blocks.points() as u128 {
        return None;
    }
    for o in fresh {
        for c in o.members(blocks) {
            in_support.insert(c.clone());
            support.push(c);
        }
    }
    Some(())
}

fn support_insufficient(cat: &NegCurveCatalog, support: &[CurveClass]) -> Option<Error> {
    if cat.complete {
        return None;
    }
    support
        .iter()
        .find(|c| c.degree >= cat.d_max)
        .map(|c| Error::CatalogInsufficient {
            d_max: cat.d_max,
            reason: format!("support curve {c} sits at the degree bound"),
        })
}

/// Zariski decomposition by iterated support enlargement.
pub fn decompose(d: &DivClass, cat: &NegCurveCatalog) -> Result<ZariskiDecomposition> {
    check_points(d, cat)?;
    let h = d.model().hyperplane();
    if d.dot_unchecked(&h).is_negative() {
        return Err(Error::NotPseudoEffective(format!(
            "{d} has negative degree"
        )));
    }
    let blocks = Blocks::of_classes(d.points(), &[d]);
    let orbits = cat.orbits(&blocks)?;
    let mut support: Vec<CurveClass> = Vec::new();
    let mut in_support = BTreeSet::new();
    let (coeffs, positive) = loop {
        let g = gram_matrix(&support);
        if !support.is_empty() && !ldl_pivots(&g).is_some_and(|p| p.iter().all(Signed::is_negative))
        {
            return Err(Error::NotPseudoEffective(format!(
                "{d}: accumulated support is not negative definite"
            )));
        }
        let rhs: Vec<Q> = support.iter().map(|c| c.dot_div(d)).collect();
        let a = solve(&g, &rhs).expect("negative definite systems are solvable");
        if a.iter().any(Signed::is_negative) {
            return Err(Error::NotPseudoEffective(format!(
                "{d}: negative coefficient in the fixed part"
            )));
        }
        let p = d - &combination(d.points(), &support, &a);
        let fresh = negative_orbits(&IntForm::new(&p), &orbits, &in_support);
        if fresh.is_empty() {
            break (a, p);
        }
        if extend_support(&mut support, &mut in_support, &fresh, &blocks).is_none() {
            return Err(Error::NotPseudoEffective(format!(
                "{d}: negative curves cannot form a negative definite support"
            )));
        }
    };
    if positive.dot_unchecked(&h).is_negative() {
        return Err(Error::NotPseudoEffective(format!(
            "{d}: positive part has negative degree"
        )));
    }
    if positive.self_intersection().is_negative() {
        if !cat.complete {
            return Err(Error::CatalogInsufficient {
                d_max: cat.d_max,
                reason: format!("positive part of {d} has negative square"),
            });
        }
        return Err(Error::NotPseudoEffective(format!(
            "{d}: positive part has negative square"
        )));
    }
    if let Some(e) = support_insufficient(cat, &support) {
        return Err(e);
    }
    let negative = support
        .into_iter()
        .zip(coeffs)
        .filter(|(_, a)| !a.is_zero())
        .map(|(curve, coefficient)| NegativeTerm { curve, coefficient })
        .collect();
    Ok(ZariskiDecomposition {
        input: d.clone(),
        positive,
        negative,
        certified_dmax: cat.d_max,
        catalog_complete: cat.complete,
    })
}

pub fn volume(d: &DivClass, cat: &NegCurveCatalog) -> Result<Q> {
    Ok(decompose(d, cat)?.volume())
}

/// Nef threshold together with the catalog curve that attains it, when one
/// does.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NefThreshold {
    pub value: Threshold,
    pub curve: Option<CurveClass>,
    pub certified_dmax: i64,
}

/// Sign of `q` just to the right of a root or start point `t`.
fn right_sign(c0: &Q, c1: &Q, c2: &Q, t: &AlgNum) -> Ordering {
    let val = &(&t.lift(c0.clone()) + &t.scale(c1)) + &t.square().scale(c2);
    let s = val.sign();
    if s != Ordering::Equal {
        return s;
    }
    let deriv = &t.lift(c1.clone()) + &t.scale(&(c2 * q(2)));
    match deriv.sign() {
        Ordering::Equal => c2.cmp(&Q::zero()),
        o => o,
    }
}

/// First `t >= 0` after which `(A - tB)^2` turns negative.
pub fn positive_cone_exit(a: &DivClass, b: &DivClass) -> Threshold {
    let c0 = a.self_intersection();
    let c1 = -(a.dot_unchecked(b) * q(2));
    let c2 = b.self_intersection();
    let mut candidates = vec![AlgNum::rational(Q::zero())];
    if let Some(roots) = quadratic_roots(&c0, &c1, &c2) {
        candidates.extend(
            roots
                .into_iter()
                .filter(|r| r.cmp_rational(&Q::zero()) == Ordering::Greater),
        );
    }
    if c0.is_negative() {
        return Threshold::Rational(Q::zero());
    }
    for t in candidates {
        if right_sign(&c0, &c1, &c2, &t) == Ordering::Less {
            return Threshold::from_alg(t);
        }
    }
    Threshold::Infinite
}

/// `sup { t : A - tB nef }`: the smaller of the catalog bound
/// `min (A.C)/(B.C)` over `B.C > 0` and the exit from the positive cone.
pub fn nef_threshold(a: &DivClass, b: &DivClass, cat: &NegCurveCatalog) -> Result<NefThreshold> {
    check_points(a, cat)?;
    check_points(b, cat)?;
    let exit = positive_cone_exit(a, b);
    let fa = IntForm::new(a);
    let fb = IntForm::new(b);
    let orbits = cat.orbits(&Blocks::of_classes(a.points(), &[a, b]))?;
    let mut best: Option<(Q, &CurveClass)> = None;
    for c in orbits.iter().map(|o| &o.rep) {
        let bc = fb.dot_int(c);
        if !bc.is_positive() {
            continue;
        }
        let ratio = Q::new(fa.dot_int(c) * &fb.den, bc * &fa.den);
        if best.as_ref().is_none_or(|(r, _)| ratio < *r) {
            best = Some((ratio, c));
        }
    }
    let (value, curve) = match best {
        Some((r, c)) if exit.cmp_q(&r) != Ordering::Less => {
            (Threshold::Rational(r), Some(c.clone()))
        }
        _ => (exit, None),
    };
    Ok(NefThreshold {
        value,
        curve,
        certified_dmax: cat.d_max,
    })
}

/// `sup { t : A - tB pseudoeffective }`, the end of the chamber walk.
pub fn pseff_threshold(a: &DivClass, b: &DivClass, cat: &NegCurveCatalog) -> Result<Threshold> {
    Ok(walk_ray(a, b, cat)?.end)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EndReason {
    VolumeZero,
    BoundaryWitness,
    Unbounded,
}

/// One Zariski chamber crossed by the ray. On `[start, end]` the negative
/// part has coefficients `coeff_const + t * coeff_slope` and the positive
/// part is `positive_const + t * positive_slope`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Chamber {
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub start: Q,
    pub end: Threshold,
    pub support: Vec<CurveClass>,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub coeff_const: Vec<Q>,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub coeff_slope: Vec<Q>,
    pub positive_const: DivClass,
    pub positive_slope: DivClass,
}

impl Chamber {
    pub fn positive_at(&self, t: &Q) -> DivClass {
        &self.positive_const + &self.positive_slope.scale(t)
    }

    pub fn coefficients_at(&self, t: &Q) -> Vec<Q> {
        self.coeff_const
            .iter()
            .zip(&self.coeff_slope)
            .map(|(c, s)| c + s * t)
            .collect()
    }

    /// Volume `P_t^2` as `(c0, c1, c2)` with `vol = c0 + c1 t + c2 t^2`.
    pub fn volume_poly(&self) -> (Q, Q, Q) {
        (
            self.positive_const.self_intersection(),
            self.positive_const.dot_unchecked(&self.positive_slope) * q(2),
            self.positive_slope.self_intersection(),
        )
    }

    fn contains(&self, t: &Q) -> bool {
        &self.start <= t && self.end.cmp_q(t) != Ordering::Less
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChamberWalk {
    pub origin: DivClass,
    pub direction: DivClass,
    pub chambers: Vec<Chamber>,
    pub end: Threshold,
    pub end_reason: EndReason,
    pub certified_dmax: i64,
    pub catalog_complete: bool,
}

impl ChamberWalk {
    pub fn chamber_count(&self) -> usize {
        self.chambers.len()
    }

    /// Chamber starts followed by the end point when it is rational.
    pub fn breakpoints(&self) -> Vec<Q> {
        let mut out: Vec<Q> = self.chambers.iter().map(|c| c.start.clone()).collect();
        if let Threshold::Rational(r) = &self.end {
            out.push(r.clone());
        }
        out
    }

    /// The chamber governing `t`; at a breakpoint the later chamber wins.
    pub fn chamber_at(&self, t: &Q) -> Option<&Chamber> {
        self.chambers.iter().rev().find(|c| c.contains(t))
    }

    pub fn decomposition_at(&self, t: &Q) -> Option<ZariskiDecomposition> {
        let ch = self.chamber_at(t)?;
        let input = &self.origin - &self.direction.scale(t);
        let negative = ch
            .support
            .iter()
            .zip(ch.coefficients_at(t))
            .filter(|(_, a)| !a.is_zero())
            .map(|(c, a)| NegativeTerm {
                curve: c.clone(),
                coefficient: a,
            })
            .collect();
        Some(ZariskiDecomposition {
            input,
            positive: ch.positive_at(t),
            negative,
            certified_dmax: self.certified_dmax,
            catalog_complete: self.catalog_complete,
        })
    }

    pub fn volume_at(&self, t: &Q) -> Option<Q> {
        self.chamber_at(t)
            .map(|c| c.positive_at(t).self_intersection())
    }
}

/// Affine solution `a(t) = a0 + t a1`, `P_t = P0 + t P1` for a fixed support.
struct Affine {
    a0: Vec<Q>,
    a1: Vec<Q>,
    p0: DivClass,
    p1: DivClass,
}

fn affine(a: &DivClass, b: &DivClass, support: &[CurveClass]) -> Result<Affine> {
    let g = gram_matrix(support);
    if !support.is_empty() && !ldl_pivots(&g).is_some_and(|p| p.iter().all(Signed::is_negative)) {
        let names: Vec<String> = support.iter().map(|c| c.to_string()).collect();
        return Err(Error::GramNotNegativeDefinite(names.join(", ")));
    }
    let ra: Vec<Q> = support.iter().map(|c| c.dot_div(a)).collect();
    let rb: Vec<Q> = support.iter().map(|c| -c.dot_div(b)).collect();
    let a0 = solve(&g, &ra).expect("definite");
    let a1 = solve(&g, &rb).expect("definite");
    let n = a.points();
    let p0 = a - &combination(n, support, &a0);
    let p1 = &(-b.clone()) - &combination(n, support, &a1);
    Ok(Affine { a0, a1, p0, p1 })
}

/// Walks `D_t = A - tB` for `t >= 0` until the class leaves the big cone.
pub fn walk_ray(a: &DivClass, b: &DivClass, cat: &NegCurveCatalog) -> Result<ChamberWalk> {
    check_points(a, cat)?;
    check_points(b, cat)?;
    let start = decompose(a, cat)?;
    if !start.volume().is_positive() {
        return Err(Error::NotBig(a.to_string()));
    }
    let witness = cat.boundary_witness.as_ref();
    let blocks = Blocks::of_classes(a.points(), &[a, b]);
    let orbits = cat.orbits(&blocks)?;
    let mut support: Vec<CurveClass> = start.support();
    let mut in_support: BTreeSet<CurveClass> = support.iter().cloned().collect();
    let mut t = Q::zero();
    let mut chambers = Vec::new();
    let limit = orbits.len() + 8;
    loop {
        // Settle the support valid just to the right of `t`.
        let mut aff = affine(a, b, &support)?;
        for _ in 0..limit {
            let f0 = IntForm::new(&aff.p0);
            let f1 = IntForm::new(&aff.p1);
            let adds: Vec<&Orbit> = orbits
                .par_iter()
                .filter(|o| !in_support.contains(&o.rep))
                .filter(|o| {
                    let v = f0.dot(&o.rep) + f1.dot(&o.rep) * &t;
                    v.is_negative() || (v.is_zero() && f1.dot_int(&o.rep).is_negative())
                })
                .collect();
            if !adds.is_empty() {
                if extend_support(&mut support, &mut in_support, &adds, &blocks).is_none() {
                    return Err(Error::GramNotNegativeDefinite(format!(
                        "more than {} curves would enter the support at t = {}",
                        blocks.points(),
                        format_q(&t)
                    )));
                }
                aff = affine(a, b, &support)?;
                continue;
            }
            let keep: Vec<bool> = aff
                .a0
                .iter()
                .zip(&aff.a1)
                .map(|(c0, c1)| {
                    let v = c0 + c1 * &t;
                    !(v.is_negative() || (v.is_zero() && c1.is_negative()))
                })
                .collect();
            if keep.iter().all(|k| *k) {
                break;
            }
            support = support
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(c, _)| c)
                .collect();
            in_support = support.iter().cloned().collect();
            aff = affine(a, b, &support)?;
        }
        if let Some(e) = support_insufficient(cat, &support) {
            return Err(e);
        }
        let f0 = IntForm::new(&aff.p0);
        let f1 = IntForm::new(&aff.p1);
        // Next curve to become negative.
        let curve_hit = orbits
            .par_iter()
            .filter(|o| !in_support.contains(&o.rep))
            .filter_map(|o| {
                let s1 = f1.dot(&o.rep);
                s1.is_negative().then(|| -f0.dot(&o.rep) / s1)
            })
            .min();
        // Next negative-part coefficient to vanish.
        let coeff_hit = aff
            .a0
            .iter()
            .zip(&aff.a1)
            .filter(|(_, c1)| c1.is_negative())
            .map(|(c0, c1)| -c0 / c1)
            .min();
        let next = match (curve_hit, coeff_hit) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        let witness_hit = witness.and_then(|w| {
            let s1 = w.dot_div(&aff.p1);
            s1.is_negative().then(|| -w.dot_div(&aff.p0) / s1)
        });
        let ch = Chamber {
            start: t.clone(),
            end: Threshold::Infinite,
            support: support.clone(),
            coeff_const: aff.a0.clone(),
            coeff_slope: aff.a1.clone(),
            positive_const: aff.p0.clone(),
            positive_slope: aff.p1.clone(),
        };
        let (c0, c1, c2) = ch.volume_poly();
        let vol_root = quadratic_roots(&c0, &c1, &c2)
            .unwrap_or_default()
            .into_iter()
            .find(|r| r.cmp_rational(&t) == Ordering::Greater)
            .map(Threshold::from_alg);
        let mut stop: Option<(Threshold, EndReason)> = vol_root.map(|r| (r, EndReason::VolumeZero));
        if let Some(w) = witness_hit {
            if stop
                .as_ref()
                .is_none_or(|(r, _)| r.cmp_q(&w) == Ordering::Greater)
            {
                stop = Some((Threshold::Rational(w), EndReason::BoundaryWitness));
            }
        }
        let finish = match (&stop, &next) {
            (Some((r, _)), Some(x)) => r.cmp_q(x) != Ordering::Greater,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if finish || next.is_none() {
            let (end, reason) = stop.unwrap_or((Threshold::Infinite, EndReason::Unbounded));
            chambers.push(Chamber {
                end: end.clone(),
                ..ch
            });
            return Ok(ChamberWalk {
                origin: a.clone(),
                direction: b.clone(),
                chambers,
                end,
                end_reason: reason,
                certified_dmax: cat.d_max,
                catalog_complete: cat.complete,
            });
        }
        let next = next.expect("checked");
        chambers.push(Chamber {
            end: Threshold::Rational(next.clone()),
            ..ch
        });
        t = next;
    }
}
