use std::sync::OnceLock;

use num_traits::Signed;
use proptest::prelude::*;

use seshadri_core::okounkov::Point;
use seshadri_core::rational::{frac, q, Q};
use seshadri_core::*;

const MAX_POINTS: usize = 6;

fn catalog(s: usize) -> &'static NegCurveCatalog {
    static CATS: OnceLock<Vec<NegCurveCatalog>> = OnceLock::new();
    &CATS.get_or_init(|| {
        (0..=MAX_POINTS)
            .map(|s| generate_catalog(SurfaceModel::new(s), 6).unwrap())
            .collect()
    })[s]
}

/// Classes `dH - sum m_i E_i` with quarter-integer multiplicities.
fn class() -> impl Strategy<Value = DivClass> {
    (1..=MAX_POINTS, 1..=6i64).prop_flat_map(|(s, d)| {
        prop::collection::vec(0..=2 * d, s)
            .prop_map(move |m| DivClass::new(q(d), m.into_iter().map(|x| frac(x, 4)).collect()))
    })
}

fn big(d: &DivClass) -> Option<ZariskiDecomposition> {
    decompose(d, catalog(d.points()))
        .ok()
        .filter(|z| z.volume().is_positive())
}

fn permuted(d: &DivClass, perm: &[usize]) -> DivClass {
    DivClass::new(
        d.degree().clone(),
        perm.iter().map(|&i| d.mult(i).clone()).collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decomposition_is_permutation_invariant(d in class(), seed in any::<u64>()) {
        let s = d.points();
        let mut perm: Vec<usize> = (0..s).collect();
        let mut x = seed;
        for i in (1..s).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let cat = catalog(s);
        match (decompose(&d, cat), decompose(&permuted(&d, &perm), cat)) {
            (Ok(a), Ok(b)) => {
                prop_assert_eq!(a.volume(), b.volume());
                prop_assert_eq!(permuted(&a.positive, &perm), b.positive);
            }
            (Err(_), Err(_)) => {}
            (a, b) => prop_assert!(false, "{:?} vs {:?}", a.is_ok(), b.is_ok()),
        }
    }

    #[test]
    fn positive_part_is_nef_and_orthogonal(d in class()) {
        if let Ok(z) = decompose(&d, catalog(d.points())) {
            for c in catalog(d.points()).entries().unwrap() {
                prop_assert!(!c.dot_div(&z.positive).is_negative(), "P.C < 0 for {}", c);
            }
            for t in &z.negative {
                prop_assert!(t.coefficient.is_positive());
                prop_assert_eq!(t.curve.dot_div(&z.positive), q(0));
            }
            prop_assert_eq!(&z.positive + &z.negative_class(), d);
        }
    }

    #[test]
    fn nef_classes_have_volume_self_intersection(d in class()) {
        let cat = catalog(d.points());
        let nef = cat.entries().unwrap().iter().all(|c| !c.dot_div(&d).is_negative())
            && !d.self_intersection().is_negative();
        if nef {
            let z = decompose(&d, cat).unwrap();
            prop_assert!(z.negative.is_empty());
            prop_assert_eq!(z.volume(), d.self_intersection());
        }
    }

    #[test]
    fn volume_grows_along_the_hyperplane(d in class()) {
        let cat = catalog(d.points());
        let h = d.model().hyperplane();
        if let (Ok(a), Ok(b)) = (decompose(&d, cat), decompose(&(&d + &h), cat)) {
            prop_assert!(b.volume() >= a.volume());
        }
    }

    #[test]
    fn bodies_nest_and_have_half_the_volume(d in class()) {
        if let Some(z) = big(&d) {
            let cat = catalog(d.points());
            let b = okounkov_body(&d, Flag::GeneralLine, cat).unwrap().polygon;
            let bigger = okounkov_body(&(&d + &d.model().hyperplane()), Flag::GeneralLine, cat).unwrap().polygon;
            prop_assert!(bigger.contains_polygon(&b));
            prop_assert_eq!(b.area() * q(2), z.volume());
            // Every point of a body has b >= 0 and lies left of the nef threshold along H.
            for (x, y) in b.vertices() {
                prop_assert!(!x.is_negative() && !y.is_negative());
            }
        }
    }

    #[test]
    fn exceptional_flag_body_has_the_same_area(d in class()) {
        if let Some(z) = big(&d) {
            let cat = catalog(d.points());
            let b = okounkov_body(&d, Flag::ThroughExceptional(0), cat).unwrap().polygon;
            prop_assert_eq!(b.area() * q(2), z.volume());
        }
    }
}

fn six_point_slices() -> &'static OkounkovSlices {
    static SL: OnceLock<OkounkovSlices> = OnceLock::new();
    SL.get_or_init(|| {
        let d = DivClass::homogeneous(6, q(1), frac(2, 5));
        okounkov_function(&d, ValuationPoint::FlagPoint, catalog(6), &frac(1, 256)).unwrap()
    })
}

fn body_point() -> impl Strategy<Value = Point> {
    // The six-point body is the triangle (0,0), (1/25,0), (0,1).
    (0..=1000i64, 0..=1000i64).prop_filter_map("inside", |(i, j)| {
        let (a, b) = (frac(i, 25_000), frac(j, 1000));
        (&a * q(25) + &b <= q(1)).then_some((a, b))
    })
}

fn lo(sl: &OkounkovSlices, p: &Point) -> Q {
    query_phi(sl, p).lo().cloned().expect("inside the body")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn okounkov_function_is_concave(x in body_point(), y in body_point()) {
        let sl = six_point_slices();
        let mid = ((&x.0 + &y.0) / q(2), (&x.1 + &y.1) / q(2));
        let hi = query_phi(sl, &mid).hi().cloned().unwrap();
        let avg = (lo(sl, &x) + lo(sl, &y)) / q(2);
        prop_assert!(hi.cmp_q(&avg) != std::cmp::Ordering::Less);
    }

    #[test]
    fn okounkov_function_is_nonnegative_and_bounded(x in body_point()) {
        let sl = six_point_slices();
        let v = query_phi(sl, &x);
        prop_assert!(!v.lo().unwrap().is_negative());
        prop_assert!(v.hi().unwrap().cmp_threshold(&sl.e_max) != std::cmp::Ordering::Greater);
    }
}

#[test]
fn superlevel_sets_are_nested() {
    let sl = six_point_slices();
    for w in sl.slices.windows(2) {
        assert!(w[0].lambda < w[1].lambda);
        assert!(
            w[0].polygon.contains_polygon(&w[1].polygon),
            "slice {} not inside {}",
            w[1].lambda,
            w[0].lambda
        );
    }
}

#[test]
fn slice_edges_are_supporting_half_planes() {
    for s in &six_point_slices().slices {
        for h in s.polygon.edges() {
            for v in s.polygon.vertices() {
                assert!(h.contains(v));
            }
        }
    }
}
