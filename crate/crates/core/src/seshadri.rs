//! Seshadri constants `epsilon` and pseudo-effective thresholds `mu` of a
//! class at one point, at all blown-up points together, or at an adjoined very
//! general point.

use std::cmp::Ordering;

use serde::Serialize;

use crate::algnum::AlgNum;
use crate::curves::{CurveClass, NegCurveCatalog};
use crate::error::{Error, Result};
use crate::lattice::{DivClass, SurfaceModel};
use crate::okounkov::{extend, extended_catalog};
use crate::rational::{serialize_q, Q};
use crate::zariski::{decompose, nef_threshold, positive_cone_exit, walk_ray, Threshold};

/// Where the threshold is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSet {
    /// The point blown up to `E_i` (zero based).
    Index(usize),
    /// All blown-up points with equal weight, direction `E_1 + ... + E_s`.
    AllBlownUp,
    /// A fresh point with no special position, modelled by one more blow-up.
    VeryGeneral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdKind {
    Epsilon,
    Mu,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ThresholdValue {
    Exact {
        #[serde(serialize_with = "serialize_q")]
        value: Q,
    },
    /// The true value lies in `[best_lower, upper]`.
    Interval {
        #[serde(serialize_with = "serialize_q")]
        best_lower: Q,
        upper: AlgNum,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub kind: ThresholdKind,
    pub point: PointSet,
    #[serde(flatten)]
    pub value: ThresholdValue,
    pub achieved_by: Option<CurveClass>,
    /// Where `(L - tB)^2` turns negative; `None` if it never does.
    pub sqrt_bound: Option<AlgNum>,
    pub certified_dmax: i64,
    pub catalog_complete: bool,
}

impl ThresholdResult {
    pub fn exact(&self) -> Option<&Q> {
        match &self.value {
            ThresholdValue::Exact { value } => Some(value),
            ThresholdValue::Interval { .. } => None,
        }
    }

    pub fn lower(&self) -> Q {
        match &self.value {
            ThresholdValue::Exact { value } => value.clone(),
            ThresholdValue::Interval { best_lower, .. } => best_lower.clone(),
        }
    }

    pub fn upper(&self) -> AlgNum {
        match &self.value {
            ThresholdValue::Exact { value } => AlgNum::rational(value.clone()),
            ThresholdValue::Interval { upper, .. } => upper.clone(),
        }
    }
}

/// Bits of the dyadic lower bound reported for irrational endpoints.
const LOWER_BITS: u32 = 64;

struct Setup {
    class: DivClass,
    direction: DivClass,
    cat: NegCurveCatalog,
}

fn setup(l: &DivClass, at: PointSet, cat: &NegCurveCatalog) -> Result<Setup> {
    let s = l.points();
    match at {
        PointSet::VeryGeneral => {
            let (class, direction) = extend(l);
            Ok(Setup {
                class,
                direction,
                cat: extended_catalog(l, cat)?,
            })
        }
        _ if cat.points != s => Err(Error::DimensionMismatch {
            left: s,
            right: cat.points,
        }),
        PointSet::Index(i) if i >= s => Err(Error::Invalid(format!(
            "point index {i} on a surface with {s} points"
        ))),
        PointSet::Index(i) => Ok(Setup {
            class: l.clone(),
            direction: SurfaceModel::new(s).exceptional(i),
            cat: cat.clone(),
        }),
        PointSet::AllBlownUp if s == 0 => Err(Error::Invalid("no blown-up points".into())),
        PointSet::AllBlownUp => Ok(Setup {
            class: l.clone(),
            direction: SurfaceModel::new(s).exceptional_sum(),
            cat: cat.clone(),
        }),
    }
}

fn interval(x: AlgNum) -> ThresholdValue {
    match x.as_rational() {
        Some(r) => ThresholdValue::Interval {
            best_lower: r,
            upper: x,
        },
        None => ThresholdValue::Interval {
            best_lower: x.floor_dyadic(LOWER_BITS),
            upper: x,
        },
    }
}

/// `epsilon(L; at)`: the nef threshold of `L - tB` on the blow-up model.
///
/// A catalog curve attaining the minimum gives an exact value. Otherwise the
/// value is exact only when the square-root bound is rational and the catalog
/// is complete; in every other case the interval up to the bound is reported.
pub fn seshadri(l: &DivClass, at: PointSet, cat: &NegCurveCatalog) -> Result<ThresholdResult> {
    let st = setup(l, at, cat)?;
    let dec = decompose(&st.class, &st.cat)?;
    if !dec.negative.is_empty() {
        return Err(Error::Invalid(format!(
            "{l} is not nef: it meets {} negatively",
            dec.negative[0].curve
        )));
    }
    let exit = positive_cone_exit(&st.class, &st.direction).to_algnum();
    let nt = nef_threshold(&st.class, &st.direction, &st.cat)?;
    let value = match (&nt.value, &nt.curve) {
        (Threshold::Rational(r), Some(_)) => ThresholdValue::Exact { value: r.clone() },
        (Threshold::Rational(r), None) if st.cat.complete => {
            ThresholdValue::Exact { value: r.clone() }
        }
        (Threshold::Infinite, _) => {
            return Err(Error::Invalid(format!("{l} stays nef along the whole ray")))
        }
        (t, _) => interval(t.to_algnum().expect("finite")),
    };
    Ok(ThresholdResult {
        kind: ThresholdKind::Epsilon,
        point: at,
        value,
        achieved_by: nt.curve,
        sqrt_bound: exit,
        certified_dmax: st.cat.d_max,
        catalog_complete: st.cat.complete,
    })
}

/// `mu(L; at)`: the pseudo-effective threshold, the end of the chamber walk.
/// The achieving curve is reported when the class at the threshold is a
/// multiple of a single catalog curve.
pub fn mu(l: &DivClass, at: PointSet, cat: &NegCurveCatalog) -> Result<ThresholdResult> {
    let st = setup(l, at, cat)?;
    let walk = walk_ray(&st.class, &st.direction, &st.cat)?;
    let exit = positive_cone_exit(&st.class, &st.direction).to_algnum();
    let (value, achieved_by) = match &walk.end {
        Threshold::Rational(r) => {
            let curve = walk.decomposition_at(r).and_then(|d| {
                (d.positive.is_zero() && d.negative.len() == 1).then(|| d.negative[0].curve.clone())
            });
            (ThresholdValue::Exact { value: r.clone() }, curve)
        }
        Threshold::Quadratic(x) => (interval(x.clone()), None),
        Threshold::Infinite => {
            return Err(Error::Invalid(format!("{l} stays big along the whole ray")))
        }
    };
    Ok(ThresholdResult {
        kind: ThresholdKind::Mu,
        point: at,
        value,
        achieved_by,
        sqrt_bound: exit,
        certified_dmax: walk.certified_dmax,
        catalog_complete: walk.catalog_complete,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    EpsilonBelowMu,
    /// `epsilon` is only known up to an interval.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EpsilonMuReport {
    pub epsilon: ThresholdResult,
    pub mu: ThresholdResult,
    /// Upper end of `epsilon` against the lower end of `mu`.
    pub epsilon_le_mu: bool,
    pub relation: Relation,
    /// Both values exact and attained by catalog curves.
    pub curves_attached: bool,
}

pub fn epsilon_mu_relation(
    l: &DivClass,
    at: PointSet,
    cat: &NegCurveCatalog,
) -> Result<EpsilonMuReport> {
    let epsilon = seshadri(l, at, cat)?;
    let mu = mu(l, at, cat)?;
    let epsilon_le_mu = match (&epsilon.value, &mu.value) {
        (_, ThresholdValue::Exact { value }) => {
            epsilon.upper().cmp_rational(value) != Ordering::Greater
        }
        (_, ThresholdValue::Interval { upper, .. }) => {
            epsilon.upper().sign_of_difference(upper) != Ordering::Greater
        }
    };
    let relation = match (epsilon.exact(), mu.exact()) {
        (Some(e), Some(m)) if e == m => Relation::Equal,
        (Some(e), Some(m)) if e < m => Relation::EpsilonBelowMu,
        (Some(_), None) => Relation::EpsilonBelowMu,
        _ => Relation::Undetermined,
    };
    let curves_attached = epsilon.exact().is_some()
        && mu.exact().is_some()
        && epsilon.achieved_by.is_some()
        && mu.achieved_by.is_some();
    Ok(EpsilonMuReport {
        epsilon,
        mu,
        epsilon_le_mu,
        relation,
        curves_attached,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::generate_catalog;
    use crate::rational::{frac, q};

    fn cat(s: usize, d: i64) -> NegCurveCatalog {
        generate_catalog(SurfaceModel::new(s), d).unwrap()
    }

    #[test]
    fn one_point() {
        let c = cat(1, 6);
        let h = SurfaceModel::new(1).hyperplane();
        let e = seshadri(&h, PointSet::Index(0), &c).unwrap();
        assert_eq!(e.exact(), Some(&q(1)));
        let m = mu(&h, PointSet::Index(0), &c).unwrap();
        assert_eq!(m.exact(), Some(&q(1)));
        let r = epsilon_mu_relation(&h, PointSet::Index(0), &c).unwrap();
        assert_eq!(r.relation, Relation::Equal);
        assert!(r.epsilon_le_mu);
    }

    #[test]
    fn seven_points() {
        let c = cat(7, 6);
        let h = SurfaceModel::new(7).hyperplane();
        let e = seshadri(&h, PointSet::AllBlownUp, &c).unwrap();
        assert_eq!(e.exact(), Some(&frac(3, 8)));
        let curve = e.achieved_by.clone().unwrap();
        assert_eq!(curve.degree, 3);
        let mut m = curve.mults.clone();
        m.sort();
        assert_eq!(m, vec![1, 1, 1, 1, 1, 1, 2]);
        assert_eq!(
            e.sqrt_bound.unwrap().cmp_rational(&frac(3, 8)),
            Ordering::Greater
        );
    }

    #[test]
    fn five_points() {
        let c = cat(5, 6);
        let h = SurfaceModel::new(5).hyperplane();
        let r = epsilon_mu_relation(&h, PointSet::AllBlownUp, &c).unwrap();
        assert_eq!(r.epsilon.exact(), Some(&frac(2, 5)));
        assert_eq!(r.mu.exact(), Some(&frac(1, 2)));
        assert_eq!(r.relation, Relation::EpsilonBelowMu);
        assert!(r.curves_attached);
        let conic = r.mu.achieved_by.unwrap();
        assert_eq!((conic.degree, conic.mults), (2, vec![1; 5]));
    }

    #[test]
    fn nine_points_interval() {
        let c = cat(9, 6);
        let h = SurfaceModel::new(9).hyperplane();
        let e = seshadri(&h, PointSet::AllBlownUp, &c).unwrap();
        assert!(e.exact().is_none());
        assert!(e.achieved_by.is_none());
        match &e.value {
            ThresholdValue::Interval { best_lower, upper } => {
                assert_eq!(upper.as_rational(), Some(frac(1, 3)));
                assert!(upper.cmp_rational(best_lower) != Ordering::Less);
            }
            other => panic!("{other:?}"),
        }
        let r = epsilon_mu_relation(&h, PointSet::AllBlownUp, &c).unwrap();
        assert_eq!(r.relation, Relation::Undetermined);
    }

    #[test]
    fn ten_points_irrational_bound() {
        let c = cat(10, 6);
        let h = SurfaceModel::new(10).hyperplane();
        let e = seshadri(&h, PointSet::AllBlownUp, &c).unwrap();
        let ThresholdValue::Interval { best_lower, upper } = &e.value else {
            panic!("expected interval")
        };
        assert!(upper.as_rational().is_none());
        assert_eq!(upper.square().as_rational(), Some(frac(1, 10)));
        assert_eq!(upper.cmp_rational(best_lower), Ordering::Greater);
    }

    #[test]
    fn very_general_point_matches_jumping_number() {
        let c = cat(6, 5);
        let l = DivClass::homogeneous(6, q(1), frac(2, 5));
        let m = mu(&l, PointSet::VeryGeneral, &c).unwrap();
        assert_eq!(m.exact(), Some(&frac(1, 5)));
        let e = crate::okounkov::e_max(&l, &c).unwrap();
        assert_eq!(e, Threshold::Rational(frac(1, 5)));
    }

    #[test]
    fn rejects_non_nef() {
        let c = cat(2, 4);
        let l = DivClass::from_ints(1, &[1, 1]);
        assert!(matches!(
            seshadri(&l, PointSet::Index(0), &c),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn symmetrization_keeps_the_quotient() {
        let s = 6;
        let c = cat(s, 5);
        let e = SurfaceModel::new(s).exceptional_sum();
        for alpha in [frac(1, 7), frac(1, 3), frac(2, 5)] {
            let l = DivClass::homogeneous(s, q(1), alpha.clone());
            for curve in c.entries().unwrap() {
                let g = curve.to_div();
                let be = g.intersect(&e).unwrap();
                if be <= q(0) {
                    continue;
                }
                let sym = g.symmetrize();
                let lhs = l.intersect(&g).unwrap() / be;
                let rhs = l.intersect(&sym).unwrap() / sym.intersect(&e).unwrap();
                assert_eq!(lhs, rhs);
                let m = Q::from(num_bigint::BigInt::from(curve.mults.iter().sum::<i64>()));
                assert_eq!(lhs, (q(curve.degree) - alpha.clone() * &m) / &m);
            }
        }
    }

    #[test]
    fn epsilon_shrinks_with_alpha() {
        let c = cat(6, 5);
        let mut prev: Option<AlgNum> = None;
        for k in 0..=8 {
            let alpha = frac(k, 20);
            let l = DivClass::homogeneous(6, q(1), alpha);
            let e = seshadri(&l, PointSet::VeryGeneral, &c).unwrap();
            let up = e.upper();
            if let Some(p) = &prev {
                assert_ne!(up.sign_of_difference(p), Ordering::Greater);
            }
            prev = Some(up);
        }
    }
}
