//! Named example computations with known answers, runnable as a table.

use std::time::Instant;

use serde::Serialize;

use crate::certificate::{auxiliary_f, auxiliary_f_at_boundary, quadratic_form_semidefinite};
use crate::curves::{generate_catalog, NegCurveCatalog};
use crate::error::Result;
use crate::lattice::{DivClass, SurfaceModel};
use crate::okounkov::{e_max, okounkov_body, Flag, Polygon};
use crate::rational::{frac, q, Q};
use crate::seshadri::{mu, seshadri, PointSet, ThresholdValue};
use crate::shgh::{classify, oracle_dim, LinearSystem, DEFAULT_CHARACTERISTIC};
use crate::zariski::{walk_ray, Threshold};

pub struct Fixture {
    pub name: &'static str,
    pub run: fn() -> Result<(bool, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

fn cat(s: usize, d: i64) -> Result<NegCurveCatalog> {
    generate_catalog(SurfaceModel::new(s), d)
}

fn body_matches(
    d: &DivClass,
    flag: Flag,
    c: &NegCurveCatalog,
    expected: Polygon,
) -> Result<(bool, String)> {
    let body = okounkov_body(d, flag, c)?;
    let ok = body.polygon == expected;
    Ok((ok, format!("{} vertices", body.polygon.vertices().len())))
}

fn plane_simplex() -> Result<(bool, String)> {
    let c = cat(0, 4)?;
    body_matches(
        &SurfaceModel::new(0).hyperplane(),
        Flag::GeneralLine,
        &c,
        Polygon::from_ints(&[(0, 0), (1, 0), (0, 1)]),
    )
}

fn one_point_cut() -> Result<(bool, String)> {
    let c = cat(1, 4)?;
    let mut ok = true;
    for l in [frac(1, 4), frac(1, 2), frac(3, 4)] {
        let d = DivClass::new(q(1), vec![l.clone()]);
        let one = q(1) - &l;
        let expected = Polygon::hull([(q(0), q(0)), (q(0), q(1)), (one.clone(), l), (one, q(0))]);
        ok &= body_matches(&d, Flag::GeneralLine, &c, expected)?.0;
    }
    Ok((ok, "three cut simplices".into()))
}

fn six_point_triangle() -> Result<(bool, String)> {
    let c = cat(6, 5)?;
    let d = DivClass::homogeneous(6, q(1), frac(2, 5));
    let body = okounkov_body(&d, Flag::GeneralLine, &c)?;
    let expected = Polygon::hull([(q(0), q(0)), (frac(1, 25), q(0)), (q(0), q(1))]);
    let area_ok = body.polygon.area() * q(2) == d.self_intersection();
    Ok((
        body.polygon == expected && area_ok,
        format!("area {}", body.polygon.area()),
    ))
}

fn exact_epsilon(s: usize, expected: Q) -> Result<(bool, String)> {
    let c = cat(s, 6)?;
    let r = seshadri(&SurfaceModel::new(s).hyperplane(), PointSet::AllBlownUp, &c)?;
    let curve = r
        .achieved_by
        .as_ref()
        .map(|c| c.to_string())
        .unwrap_or_default();
    Ok((r.exact() == Some(&expected), curve))
}

fn five_point_epsilon() -> Result<(bool, String)> {
    exact_epsilon(5, frac(2, 5))
}

fn seven_point_epsilon() -> Result<(bool, String)> {
    exact_epsilon(7, frac(3, 8))
}

fn five_point_mu() -> Result<(bool, String)> {
    let c = cat(5, 6)?;
    let r = mu(&SurfaceModel::new(5).hyperplane(), PointSet::AllBlownUp, &c)?;
    let curve = r
        .achieved_by
        .as_ref()
        .map(|c| c.to_string())
        .unwrap_or_default();
    Ok((r.exact() == Some(&frac(1, 2)), curve))
}

fn nine_point_interval() -> Result<(bool, String)> {
    let c = cat(9, 6)?;
    let r = seshadri(&SurfaceModel::new(9).hyperplane(), PointSet::AllBlownUp, &c)?;
    let ok = matches!(&r.value, ThresholdValue::Interval { upper, .. } if upper.as_rational() == Some(frac(1, 3)));
    Ok((ok, format!("lower {}", r.lower())))
}

fn six_point_jumping_number() -> Result<(bool, String)> {
    let c = cat(6, 5)?;
    let d = DivClass::homogeneous(6, q(1), frac(2, 5));
    let e = e_max(&d, &c)?;
    let m = mu(&d, PointSet::VeryGeneral, &c)?;
    let ok = e == Threshold::Rational(frac(1, 5)) && m.exact() == Some(&frac(1, 5));
    Ok((ok, format!("e_max {e}")))
}

fn homogeneous_walks() -> Result<(bool, String)> {
    let mut counts = Vec::new();
    for s in 5..=8 {
        let c = cat(s, 8)?;
        let m = SurfaceModel::new(s);
        counts.push(walk_ray(&m.hyperplane(), &m.exceptional_sum(), &c)?.chamber_count());
    }
    Ok((counts.iter().all(|&n| n == 2), format!("{counts:?}")))
}

fn three_point_ray() -> Result<(bool, String)> {
    let c = cat(3, 6)?;
    let a = DivClass::from_ints(7, &[1, 2, 3]);
    let w = walk_ray(&a, &-SurfaceModel::new(3).exceptional_sum(), &c)?;
    Ok((
        w.chamber_count() == 4,
        format!("{} chambers", w.chamber_count()),
    ))
}

fn shgh_cases() -> Result<(bool, String)> {
    let cases: [(i64, Vec<i64>, i64, bool); 4] = [
        (2, vec![2, 2], 0, true),
        (2, vec![1; 5], 0, false),
        (3, vec![2, 1, 1, 1, 1, 1, 1], 0, false),
        (1, vec![1, 1, 1], -1, false),
    ];
    let mut ok = true;
    for (d, m, dim, special) in cases {
        let l = LinearSystem::new(d, m)?;
        let r = classify(&l);
        ok &= r.predicted_dim == dim && r.special == special;
        ok &= oracle_dim(&l, DEFAULT_CHARACTERISTIC, 1)? == dim;
    }
    Ok((ok, "4 systems".into()))
}

fn challenge_oracle() -> Result<(bool, String)> {
    let l = LinearSystem::new(22, vec![7; 9])?;
    let dim = oracle_dim(&l, DEFAULT_CHARACTERISTIC, 1)?;
    Ok((
        dim == 23 && classify(&l).predicted_dim == 23,
        format!("dim {dim}"),
    ))
}

fn certificate_identities() -> Result<(bool, String)> {
    let zeros = (9..=20).all(|s| auxiliary_f_at_boundary(s).is_zero());
    let positive = auxiliary_f(9, &frac(8, 25))?.is_positive();
    let form = quadratic_form_semidefinite(9, &frac(8, 25))?.semidefinite;
    Ok((
        zeros && positive && form,
        format!("zeros {zeros}, f(8/25) > 0 {positive}, form {form}"),
    ))
}

pub fn all() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "plane-simplex",
            run: plane_simplex,
        },
        Fixture {
            name: "one-point-cut-simplex",
            run: one_point_cut,
        },
        Fixture {
            name: "six-point-triangle",
            run: six_point_triangle,
        },
        Fixture {
            name: "five-point-epsilon",
            run: five_point_epsilon,
        },
        Fixture {
            name: "seven-point-epsilon",
            run: seven_point_epsilon,
        },
        Fixture {
            name: "five-point-mu",
            run: five_point_mu,
        },
        Fixture {
            name: "nine-point-interval",
            run: nine_point_interval,
        },
        Fixture {
            name: "six-point-jumping-number",
            run: six_point_jumping_number,
        },
        Fixture {
            name: "homogeneous-walks",
            run: homogeneous_walks,
        },
        Fixture {
            name: "three-point-ray",
            run: three_point_ray,
        },
        Fixture {
            name: "shgh-small",
            run: shgh_cases,
        },
        Fixture {
            name: "shgh-challenge-oracle",
            run: challenge_oracle,
        },
        Fixture {
            name: "certificate-identities",
            run: certificate_identities,
        },
    ]
}

pub fn run(f: &Fixture) -> FixtureOutcome {
    let start = Instant::now();
    let (passed, detail) = match (f.run)() {
        Ok(r) => r,
        Err(e) => (false, e.to_string()),
    };
    FixtureOutcome {
        name: f.name,
        passed,
        detail,
        millis: start.elapsed().as_millis(),
    }
}

pub fn run_all() -> Vec<FixtureOutcome> {
    all().iter().map(run).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn names_are_unique() {
        let mut names: Vec<&str> = super::all().iter().map(|f| f.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), super::all().len());
    }
}
