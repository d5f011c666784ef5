//! Newton-Okounkov bodies of big classes with respect to line-point flags,
//! and Okounkov functions of the order-of-vanishing filtration at a point.
//!
//! Bodies follow the slicing description for surfaces: walking `D - tC`
//! along the flag curve `C`, the body is bounded below by the multiplicity
//! `alpha(t)` of the flag point in the negative part restricted to `C` and
//! above by `beta(t) = alpha(t) + P_t . C`.
//!
//! The Okounkov function of `ord_P` is represented by its superlevel sets,
//! the bodies of `pi^* D - lambda F` on the blow-up at `P`.

pub mod polygon;

use std::cmp::Ordering;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::algnum::quadratic_roots;
use crate::curves::{CurveClass, NegCurveCatalog};
use crate::error::{Error, Result};
use crate::lattice::{DivClass, SurfaceModel};
use crate::rational::{format_q, q, Q};
use crate::zariski::{walk_ray, Threshold};

pub use polygon::{HalfPlane, Point, Polygon};

/// A flag `X > C > {x}` with `C` a smooth rational curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// A general line and a general point on it.
    GeneralLine,
    /// The proper transform of a line through the `i`-th blown-up point,
    /// with flag point on the exceptional curve `E_i`.
    ThroughExceptional(usize),
}

impl Flag {
    pub fn curve(&self, model: SurfaceModel) -> DivClass {
        match *self {
            Flag::GeneralLine => model.hyperplane(),
            Flag::ThroughExceptional(i) => &model.hyperplane() - &model.exceptional(i),
        }
    }

    /// Catalog curves passing through the flag point, each meeting the flag
    /// curve transversally there.
    pub fn through(&self, points: usize) -> Vec<CurveClass> {
        match *self {
            Flag::GeneralLine => Vec::new(),
            Flag::ThroughExceptional(i) => vec![CurveClass::exceptional(points, i)],
        }
    }
}

/// Lower and upper boundary of the body, piecewise linear with values given
/// at the breakpoints.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodyProfile {
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub breakpoints: Vec<Q>,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub alpha: Vec<Q>,
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub beta: Vec<Q>,
}

impl BodyProfile {
    fn interpolate(&self, values: &[Q], t: &Q) -> Option<Q> {
        let b = &self.breakpoints;
        if t < b.first()? || t > b.last()? {
            return None;
        }
        let i = b.iter().rposition(|x| x <= t)?;
        if &b[i] == t || i + 1 == b.len() {
            return Some(values[i].clone());
        }
        let s = (t - &b[i]) / (&b[i + 1] - &b[i]);
        Some(&values[i] + s * (&values[i + 1] - &values[i]))
    }

    pub fn alpha_at(&self, t: &Q) -> Option<Q> {
        self.interpolate(&self.alpha, t)
    }

    pub fn beta_at(&self, t: &Q) -> Option<Q> {
        self.interpolate(&self.beta, t)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OkounkovBody {
    pub class: DivClass,
    pub flag: Flag,
    pub polygon: Polygon,
    pub profile: BodyProfile,
    pub certified_dmax: i64,
}

pub fn okounkov_body(d: &DivClass, flag: Flag, cat: &NegCurveCatalog) -> Result<OkounkovBody> {
    let model = d.model();
    if let Flag::ThroughExceptional(i) = flag {
        if i >= model.points {
            return Err(Error::Invalid(format!("flag point index {i} out of range")));
        }
    }
    let c = flag.curve(model);
    let through = flag.through(model.points);
    let walk = walk_ray(d, &c, cat)?;
    match &walk.end {
        Threshold::Rational(_) => {}
        Threshold::Quadratic(x) => {
            return Err(Error::Irrational(format!("body of {d} ends at {x}")));
        }
        Threshold::Infinite => {
            return Err(Error::Invalid(format!("{d} - t C stays big for all t")));
        }
    }
    let breakpoints = walk.breakpoints();
    let mut alpha = Vec::with_capacity(breakpoints.len());
    let mut beta = Vec::with_capacity(breakpoints.len());
    for t in &breakpoints {
        let ch = walk.chamber_at(t).expect("breakpoint lies in the walk");
        let coeffs = ch.coefficients_at(t);
        let a: Q = ch
            .support
            .iter()
            .zip(&coeffs)
            .filter(|(curve, _)| through.contains(curve))
            .map(|(_, x)| x.clone())
            .sum();
        let b = &a + ch.positive_at(t).dot_unchecked(&c);
        alpha.push(a);
        beta.push(b);
    }
    let polygon = Polygon::hull(
        breakpoints
            .iter()
            .zip(alpha.iter().zip(&beta))
            .flat_map(|(t, (a, b))| [(t.clone(), a.clone()), (t.clone(), b.clone())]),
    );
    Ok(OkounkovBody {
        class: d.clone(),
        flag,
        polygon,
        profile: BodyProfile {
            breakpoints,
            alpha,
            beta,
        },
        certified_dmax: cat.d_max,
    })
}

/// Where the valuation `ord_P` is centred.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValuationPoint {
    /// The flag point of a general line-point flag.
    FlagPoint,
    /// A general point off the flag line.
    General,
}

/// Superlevel set `{phi >= lambda}` of the Okounkov function.
pub fn superlevel_body(
    d_ext: &DivClass,
    lambda: &Q,
    point: ValuationPoint,
    cat_ext: &NegCurveCatalog,
) -> Result<Polygon> {
    let model = d_ext.model();
    let f = model.exceptional(model.points - 1);
    let dl = d_ext - &f.scale(lambda);
    match point {
        ValuationPoint::General => Ok(okounkov_body(&dl, Flag::GeneralLine, cat_ext)?.polygon),
        ValuationPoint::FlagPoint => {
            // Valuation vectors on the blow-up at the flag point relate to
            // those downstairs by (a, b) -> (a, b - a + lambda).
            let body = okounkov_body(&dl, Flag::ThroughExceptional(model.points - 1), cat_ext)?;
            Ok(body.polygon.map(|(a, b)| (a.clone(), b - a + lambda)))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Slice {
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub lambda: Q,
    pub polygon: Polygon,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OkounkovSlices {
    pub class: DivClass,
    pub point: ValuationPoint,
    #[serde(serialize_with = "crate::rational::serialize_q")]
    pub tol: Q,
    pub e_max: Threshold,
    /// Starts of the Zariski chambers of `pi^* D - lambda F`.
    #[serde(serialize_with = "crate::rational::serialize_q_vec")]
    pub lambda_breakpoints: Vec<Q>,
    pub slices: Vec<Slice>,
    pub certified_dmax: i64,
}

/// Maximal jumping number of the `ord_P` filtration, the pseudoeffective
/// threshold of `pi^* D - t F`.
pub fn e_max(d: &DivClass, cat: &NegCurveCatalog) -> Result<Threshold> {
    let ext = extended_catalog(d, cat)?;
    let (d_ext, f) = extend(d);
    Ok(walk_ray(&d_ext, &f, &ext)?.end)
}

pub(crate) fn extended_catalog(d: &DivClass, cat: &NegCurveCatalog) -> Result<NegCurveCatalog> {
    if cat.points == d.points() + 1 {
        return Ok(cat.clone());
    }
    if cat.points != d.points() {
        return Err(Error::DimensionMismatch {
            left: d.points(),
            right: cat.points,
        });
    }
    cat.regenerate(d.points() + 1)
}

pub(crate) fn extend(d: &DivClass) -> (DivClass, DivClass) {
    let n = d.points() + 1;
    (d.extend(n), SurfaceModel::new(n).exceptional(n - 1))
}

/// How many times a parameter interval with changing slice combinatorics is
/// halved beyond the grid step.
const REFINE_DEPTH: u32 = 4;

/// Slices of the Okounkov function of `ord_P` on a grid of step `tol`, the
/// chamber breakpoints in `lambda`, bisection points where the polygon
/// combinatorics change, and three samples inside the last chamber.
///
/// `cat` may be given on the surface of `d` or on the blow-up at one more
/// point.
pub fn okounkov_function(
    d: &DivClass,
    point: ValuationPoint,
    cat: &NegCurveCatalog,
    tol: &Q,
) -> Result<OkounkovSlices> {
    if !tol.is_positive() {
        return Err(Error::Invalid("tolerance must be positive".into()));
    }
    let cat_ext = extended_catalog(d, cat)?;
    let (d_ext, f) = extend(d);
    let walk = walk_ray(&d_ext, &f, &cat_ext)?;
    let e = walk.end.clone();
    if !e.is_finite() {
        return Err(Error::Invalid("filtration has no maximal jump".into()));
    }
    let below = |x: &Q| e.cmp_q(x) == Ordering::Greater;
    let lambda_breakpoints: Vec<Q> = walk.chambers.iter().map(|c| c.start.clone()).collect();

    let mut params: Vec<Q> = Vec::new();
    let mut k = 0i64;
    loop {
        let x = tol * q(k);
        if !below(&x) {
            break;
        }
        params.push(x);
        k += 1;
    }
    params.extend(lambda_breakpoints.iter().filter(|x| below(x)).cloned());
    if let (Threshold::Rational(end), Some(last)) = (&e, lambda_breakpoints.last()) {
        for j in 1..4 {
            params.push(last + (end - last) * Q::new(j.into(), 4.into()));
        }
    }
    params.sort();
    params.dedup();

    let compute = |x: &Q| {
        superlevel_body(&d_ext, x, point, &cat_ext).map(|p| Slice {
            lambda: x.clone(),
            polygon: p,
        })
    };
    let mut slices: Vec<Slice> = params.par_iter().map(compute).collect::<Result<_>>()?;

    // Refine where the combinatorics change between neighbours.
    let mut frontier: Vec<(usize, usize, u32)> = (0..slices.len().saturating_sub(1))
        .map(|i| (i, i + 1, 0))
        .collect();
    while !frontier.is_empty() {
        let todo: Vec<(Q, u32)> = frontier
            .iter()
            .filter(|(i, j, depth)| {
                *depth < REFINE_DEPTH
                    && slices[*i].polygon.signature() != slices[*j].polygon.signature()
            })
            .map(|(i, j, depth)| ((&slices[*i].lambda + &slices[*j].lambda) / q(2), depth + 1))
            .collect();
        if todo.is_empty() {
            break;
        }
        let fresh: Vec<(Slice, u32)> = todo
            .par_iter()
            .map(|(x, depth)| compute(x).map(|s| (s, *depth)))
            .collect::<Result<_>>()?;
        let depth_of: Vec<(Q, u32)> = fresh.iter().map(|(s, d)| (s.lambda.clone(), *d)).collect();
        slices.extend(fresh.into_iter().map(|(s, _)| s));
        slices.sort_by(|a, b| a.lambda.cmp(&b.lambda));
        frontier = Vec::new();
        for (x, depth) in depth_of {
            let i = slices.iter().position(|s| s.lambda == x).expect("inserted");
            if i > 0 {
                frontier.push((i - 1, i, depth));
            }
            if i + 1 < slices.len() {
                frontier.push((i, i + 1, depth));
            }
        }
    }

    // The superlevel set at a rational e_max is degenerate but non-empty;
    // keeping it makes phi exact where the maximum is attained.
    if let Threshold::Rational(end) = &e {
        if let Some(top) = terminal_slice(&slices, end) {
            slices.push(top);
        }
    }

    Ok(OkounkovSlices {
        class: d.clone(),
        point,
        tol: tol.clone(),
        e_max: e,
        lambda_breakpoints,
        slices,
        certified_dmax: cat_ext.d_max,
    })
}

/// The superlevel set at `end` as the affine extrapolation of the last three
/// slices. Inside one chamber the vertices move affinely in `lambda`; the
/// extrapolation is used only when the three slices confirm this.
fn terminal_slice(slices: &[Slice], end: &Q) -> Option<Slice> {
    let n = slices.len();
    if n < 3 {
        return None;
    }
    let [s0, s1, s2] = [&slices[n - 3], &slices[n - 2], &slices[n - 1]];
    let (v0, v1, v2) = (
        s0.polygon.vertices(),
        s1.polygon.vertices(),
        s2.polygon.vertices(),
    );
    if v0.len() != v1.len() || v1.len() != v2.len() || v0.is_empty() {
        return None;
    }
    let at = |p: &Point, r: &Point, from: &Q, to: &Q, x: &Q| -> Point {
        let w = (x - from) / (to - from);
        (&p.0 + (&r.0 - &p.0) * &w, &p.1 + (&r.1 - &p.1) * &w)
    };
    for i in 0..v0.len() {
        if at(&v0[i], &v2[i], &s0.lambda, &s2.lambda, &s1.lambda) != v1[i] {
            return None;
        }
    }
    let pts = (0..v0.len()).map(|i| at(&v0[i], &v2[i], &s0.lambda, &s2.lambda, end));
    Some(Slice {
        lambda: end.clone(),
        polygon: Polygon::hull(pts),
    })
}

/// Bracket for `phi(x)`: the largest sampled `lambda` whose superlevel set
/// contains `x` and the smallest one that does not (or `e_max`).
#[derive(Debug, Clone, PartialEq)]
pub enum PhiValue {
    Outside,
    Bracket { lo: Q, hi: Threshold },
}

impl PhiValue {
    pub fn lo(&self) -> Option<&Q> {
        match self {
            PhiValue::Bracket { lo, .. } => Some(lo),
            PhiValue::Outside => None,
        }
    }

    pub fn hi(&self) -> Option<&Threshold> {
        match self {
            PhiValue::Bracket { hi, .. } => Some(hi),
            PhiValue::Outside => None,
        }
    }
}

impl Serialize for PhiValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match self {
            PhiValue::Outside => {
                let mut st = s.serialize_struct("PhiValue", 1)?;
                st.serialize_field("status", "outside")?;
                st.end()
            }
            PhiValue::Bracket { lo, hi } => {
                let mut st = s.serialize_struct("PhiValue", 3)?;
                st.serialize_field("status", "bracket")?;
                st.serialize_field("lo", &format_q(lo))?;
                st.serialize_field("hi", hi)?;
                st.end()
            }
        }
    }
}

pub fn query_phi(slices: &OkounkovSlices, x: &Point) -> PhiValue {
    let Some(first) = slices.slices.first() else {
        return PhiValue::Outside;
    };
    if !first.polygon.contains(x) {
        return PhiValue::Outside;
    }
    // Superlevel sets are nested, so membership is monotone in lambda.
    let split = slices.slices.partition_point(|s| s.polygon.contains(x));
    let lo = slices.slices[split - 1].lambda.clone();
    let hi = match slices.slices.get(split) {
        Some(s) => Threshold::Rational(s.lambda.clone()),
        None => slices.e_max.clone(),
    };
    PhiValue::Bracket { lo, hi }
}

/// Parameter at which the superlevel sets become empty, found independently
/// of the chamber walk end: the areas of three slices inside the last
/// chamber determine the quadratic volume there, whose next root is
/// returned.
pub fn nonempty_threshold(slices: &OkounkovSlices) -> Result<Threshold> {
    let last = slices
        .lambda_breakpoints
        .last()
        .cloned()
        .unwrap_or_else(Q::zero);
    let tail: Vec<&Slice> = slices
        .slices
        .iter()
        .filter(|s| s.lambda > last && s.polygon.area().is_positive())
        .collect();
    if tail.len() < 3 {
        return Err(Error::Invalid(
            "fewer than three slices in the last chamber".into(),
        ));
    }
    let pts: Vec<(Q, Q)> = tail[tail.len() - 3..]
        .iter()
        .map(|s| (s.lambda.clone(), s.polygon.area()))
        .collect();
    let (c0, c1, c2) = interpolate_quadratic(&pts);
    let after = &pts[2].0;
    let root = quadratic_roots(&c0, &c1, &c2)
        .ok_or_else(|| Error::Invalid("slice areas vanish identically".into()))?
        .into_iter()
        .find(|r| r.cmp_rational(after) == Ordering::Greater)
        .ok_or_else(|| Error::Invalid("slice areas never vanish".into()))?;
    Ok(match root.as_rational() {
        Some(r) => Threshold::Rational(r),
        None => Threshold::Quadratic(root),
    })
}

/// Coefficients `(c0, c1, c2)` of the quadratic through three points.
fn interpolate_quadratic(pts: &[(Q, Q)]) -> (Q, Q, Q) {
    let mut c = [Q::zero(), Q::zero(), Q::zero()];
    for (i, (xi, yi)) in pts.iter().enumerate() {
        // Lagrange basis (x - xj)(x - xk) / ((xi - xj)(xi - xk))
        let others: Vec<&Q> = pts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| &p.0)
            .collect();
        let denom = (xi - others[0]) * (xi - others[1]);
        let w = yi / denom;
        c[0] += &w * others[0] * others[1];
        c[1] -= &w * (others[0] + others[1]);
        c[2] += w;
    }
    let [c0, c1, c2] = c;
    (c0, c1, c2)
}

impl OkounkovSlices {
    /// Largest `phi_hi` over all vertices of all slices.
    pub fn max_vertex_phi(&self) -> Option<Threshold> {
        let mut best: Option<Threshold> = None;
        for s in &self.slices {
            for v in s.polygon.vertices() {
                if let PhiValue::Bracket { hi, .. } = query_phi(self, v) {
                    if best
                        .as_ref()
                        .is_none_or(|b| hi.cmp_threshold(b) == Ordering::Greater)
                    {
                        best = Some(hi);
                    }
                }
            }
        }
        best
    }

    /// Largest sampled `lambda` whose slice is non-empty.
    pub fn deepest_lambda(&self) -> Option<&Q> {
        self.slices
            .iter()
            .rev()
            .find(|s| !s.polygon.is_empty())
            .map(|s| &s.lambda)
    }

    pub fn slice_at(&self, lambda: &Q) -> Option<&Polygon> {
        self.slices
            .iter()
            .find(|s| &s.lambda == lambda)
            .map(|s| &s.polygon)
    }
}
