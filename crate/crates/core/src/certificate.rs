//! Exact verification of the inequality chain that rules out submaximal
//! homogeneous curves at `s + 1` points, in the field
//! `Q(sqrt(s+1), sqrt(1 - s delta^2))`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use crate::algnum::AlgNum;
use crate::algnum::{sqrt_q, MultiQuadratic};
use crate::error::{Error, Result};
use crate::rational::{q, serialize_q, Q};

fn qu(n: u64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Checks `s >= 9` and `1/sqrt(s+1) < delta < 1/sqrt(s)` through rational
/// squares.
pub fn check_window(s: u64, delta: &Q) -> Result<()> {
    if s < 9 {
        return Err(Error::OutsideWindow(format!("s = {s} must be at least 9")));
    }
    let d2 = delta * delta;
    if !delta.is_positive() || &d2 * qu(s + 1) <= Q::one() || &d2 * qu(s) >= Q::one() {
        return Err(Error::OutsideWindow(format!(
            "delta = {delta} is not strictly between 1/sqrt({}) and 1/sqrt({s})",
            s + 1
        )));
    }
    Ok(())
}

/// Which of `sqrt(s+1)`, `sqrt(1 - s delta^2)` and their product are
/// rational for this `delta`. The checks stay exact either way; a coincidence
/// only means the field is smaller than generic.
pub fn radical_coincidences(s: u64, delta: &Q) -> Result<Vec<&'static str>> {
    check_window(s, delta)?;
    let r2 = qu(s + 1);
    let w2 = Q::one() - qu(s) * delta * delta;
    let named = [
        ("sqrt(s+1)", r2.clone()),
        ("sqrt(1-s*delta^2)", w2.clone()),
        ("sqrt((s+1)(1-s*delta^2))", r2 * w2),
    ];
    let mut out = Vec::new();
    for (name, x) in named {
        if sqrt_q(&x)?.as_rational().is_some() {
            out.push(name);
        }
    }
    Ok(out)
}

/// `sqrt(s+1)`, `sqrt(1 - s delta^2)` and `delta` in one field.
struct Radicals {
    r: AlgNum,
    w: AlgNum,
    delta: AlgNum,
}

fn radicals(s: u64, delta: &Q) -> Result<Radicals> {
    let w2 = Q::one() - qu(s) * delta * delta;
    let (_, roots) = MultiQuadratic::with_roots(&[qu(s + 1), w2])?;
    let delta = roots[0].lift(delta.clone());
    Ok(Radicals {
        r: roots[0].clone(),
        w: roots[1].clone(),
        delta,
    })
}

/// `delta = 1/sqrt(s+1)`, where `sqrt(1 - s delta^2) = 1/sqrt(s+1)` as well.
fn boundary_radicals(s: u64) -> Radicals {
    let r = sqrt_q(&qu(s + 1)).expect("positive");
    let inv = r.scale(&Q::new(BigInt::one(), BigInt::from(s + 1)));
    Radicals {
        r,
        w: inv.clone(),
        delta: inv,
    }
}

fn f_expr(s: u64, x: &Radicals) -> AlgNum {
    let s_q = qu(s);
    let lead = &x.r.scale(&q(2)) - &x.r.lift(s_q.clone());
    let mid = (&x.r.lift(Q::one()) - &x.r).scale(&s_q);
    let t = &(&lead * &x.w) + &(&mid * &x.delta);
    &t + &t.lift(s_q - q(2))
}

/// `f(delta) = (2 sqrt(s+1) - s) sqrt(1 - s delta^2) + s (1 - sqrt(s+1)) delta + s - 2`.
pub fn auxiliary_f(s: u64, delta: &Q) -> Result<AlgNum> {
    check_window(s, delta)?;
    Ok(f_expr(s, &radicals(s, delta)?))
}

/// `f` evaluated at the lower window end `1/sqrt(s+1)` by substitution.
pub fn auxiliary_f_at_boundary(s: u64) -> AlgNum {
    f_expr(s, &boundary_radicals(s))
}

fn h_expr(x: &Radicals) -> Result<AlgNum> {
    x.delta.div(&x.w)
}

/// `h(delta) = delta / sqrt(1 - s delta^2)` at the lower window end.
pub fn h_at_boundary(s: u64) -> AlgNum {
    h_expr(&boundary_radicals(s)).expect("non-zero")
}

/// `f'(delta) = s (1 + h(delta) (s - 2 sqrt(s+1)) - sqrt(s+1))`.
pub fn auxiliary_derivative(s: u64, delta: &Q) -> Result<AlgNum> {
    check_window(s, delta)?;
    let x = radicals(s, delta)?;
    Ok(derivative_expr(s, &x, &h_expr(&x)?))
}

fn derivative_expr(s: u64, x: &Radicals, h: &AlgNum) -> AlgNum {
    let coeff = &x.r.lift(qu(s)) - &x.r.scale(&q(2));
    let inner = &(&h.lift(Q::one()) + &(h * &coeff)) - &x.r;
    inner.scale(&qu(s))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DerivativeReport {
    pub s: u64,
    #[serde(serialize_with = "serialize_q")]
    pub delta: Q,
    /// `h(delta) >= 1`.
    pub h_at_least_one: bool,
    /// `s - 2 sqrt(s+1) > 0`.
    pub coefficient_positive: bool,
    /// `1 + s - 3 sqrt(s+1) > 0`.
    pub closing_bound_positive: bool,
    pub derivative: AlgNum,
    pub derivative_positive: bool,
    pub holds: bool,
}

pub fn auxiliary_derivative_positive(s: u64, delta: &Q) -> Result<DerivativeReport> {
    check_window(s, delta)?;
    let x = radicals(s, delta)?;
    let h = h_expr(&x)?;
    let h_at_least_one = h.cmp_rational(&Q::one()) != Ordering::Less;
    let coefficient_positive = (&x.r.lift(qu(s)) - &x.r.scale(&q(2))).is_positive();
    let closing_bound_positive = (&x.r.lift(qu(s + 1)) - &x.r.scale(&q(3))).is_positive();
    let derivative = derivative_expr(s, &x, &h);
    let derivative_positive = derivative.is_positive();
    Ok(DerivativeReport {
        s,
        delta: delta.clone(),
        h_at_least_one,
        coefficient_positive,
        closing_bound_positive,
        holds: h_at_least_one
            && coefficient_positive
            && closing_bound_positive
            && derivative_positive,
        derivative,
        derivative_positive,
    })
}

/// Candidate curve data: degree `gamma`, multiplicity `big_m` at each of the
/// `s` points and `m` at the extra point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DichotomyCertificate {
    pub s: u64,
    #[serde(serialize_with = "serialize_q")]
    pub delta: Q,
    pub gamma: u64,
    pub big_m: u64,
    pub m: u64,
}

impl DichotomyCertificate {
    pub fn new(s: u64, delta: Q, gamma: u64, big_m: u64, m: u64) -> Result<Self> {
        check_window(s, &delta)?;
        if gamma == 0 || big_m == 0 || m == 0 {
            return Err(Error::Invalid("gamma, M and m must be positive".into()));
        }
        Ok(Self {
            s,
            delta,
            gamma,
            big_m,
            m,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub certificate: DichotomyCertificate,
    /// `gamma < m sqrt(1 - s delta^2) + delta s M`.
    pub upper_bound: bool,
    /// `gamma / (sM + m) >= 1/sqrt(s+1)`.
    pub lower_bound: bool,
    /// `gamma >= 2M + m`.
    pub cremona: bool,
    pub a_positive: bool,
    pub b_positive: bool,
    /// `1 < b + a sqrt(1 - s delta^2)`; false whenever `f(delta) >= 0`.
    pub combined: bool,
    /// `0 <= gamma (gamma + 3) - sM(M+1) - m(m+1)`.
    pub dimension_count: bool,
    /// The dimension count with `gamma` replaced by its upper bound.
    pub dimension_bound: bool,
    pub dimension_bound_value: AlgNum,
    pub all_hold: bool,
    pub failed: Vec<&'static str>,
}

/// `a = (2 sqrt(s+1) - s)/(2 - delta s)` and `b = (s - delta s sqrt(s+1))/(2 - delta s)`.
fn proof_constants(s: u64, x: &Radicals) -> Result<(AlgNum, AlgNum)> {
    let s_q = qu(s);
    let den = &x.r.lift(q(2)) - &x.delta.scale(&s_q);
    let a = (&x.r.scale(&q(2)) - &x.r.lift(s_q.clone())).div(&den)?;
    let b = (&x.r.lift(s_q.clone()) - &(&x.delta * &x.r).scale(&s_q)).div(&den)?;
    Ok((a, b))
}

fn dimension_bound_expr(s: u64, x: &Radicals, big_m: &Q, m: &Q) -> AlgNum {
    let t = &x.delta.scale(&(qu(s) * big_m)) + &x.w.scale(m);
    let rest = m * m + m + qu(s) * big_m + qu(s) * big_m * big_m;
    let prod = &t * &(&t + &t.lift(q(3)));
    &prod - &prod.lift(rest)
}

pub fn check_dichotomy(c: &DichotomyCertificate) -> Result<DichotomyReport> {
    check_window(c.s, &c.delta)?;
    let x = radicals(c.s, &c.delta)?;
    let (s, gamma, big_m, m) = (qu(c.s), qu(c.gamma), qu(c.big_m), qu(c.m));
    let bound = &x.w.scale(&m) + &x.delta.scale(&(&s * &big_m));
    let upper_bound = bound.cmp_rational(&gamma) == Ordering::Greater;
    let lhs = &s * &big_m + &m;
    let lower_bound = &gamma * &gamma * qu(c.s + 1) >= &lhs * &lhs;
    let cremona = c.gamma >= 2 * c.big_m + c.m;
    let (a, b) = proof_constants(c.s, &x)?;
    let combined = (&b + &(&a * &x.w)).cmp_rational(&Q::one()) == Ordering::Greater;
    let g = c.gamma as i128;
    let (bm, sm) = (c.big_m as i128, c.m as i128);
    let dimension_count = g * (g + 3) - c.s as i128 * bm * (bm + 1) - sm * (sm + 1) >= 0;
    let dimension_bound_value = dimension_bound_expr(c.s, &x, &big_m, &m);
    let dimension_bound = !dimension_bound_value.is_negative();
    let checks = [
        ("upper_bound", upper_bound),
        ("lower_bound", lower_bound),
        ("cremona", cremona),
        ("dimension_bound", dimension_bound),
    ];
    let failed: Vec<&'static str> = checks
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(n, _)| *n)
        .collect();
    Ok(DichotomyReport {
        certificate: c.clone(),
        upper_bound,
        lower_bound,
        cremona,
        a_positive: a.is_positive(),
        b_positive: b.is_positive(),
        combined,
        dimension_count,
        dimension_bound,
        dimension_bound_value,
        all_hold: failed.is_empty(),
        failed,
    })
}

/// Quadratic part `(s^2 delta^2 - s) M^2 + 2 s delta w M m - s delta^2 m^2`
/// of the dimension bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadraticFormReport {
    #[serde(serialize_with = "serialize_q")]
    pub leading: Q,
    pub leading_negative: bool,
    pub determinant: AlgNum,
    pub determinant_zero: bool,
    pub semidefinite: bool,
}

pub fn quadratic_form_semidefinite(s: u64, delta: &Q) -> Result<QuadraticFormReport> {
    check_window(s, delta)?;
    Ok(quadratic_form(s, delta))
}

/// Same as [`quadratic_form_semidefinite`] without the window check.
pub fn quadratic_form(s: u64, delta: &Q) -> QuadraticFormReport {
    let s_q = qu(s);
    let d2 = delta * delta;
    let w2 = Q::one() - &s_q * &d2;
    let w = sqrt_q(&w2).expect("delta^2 s <= 1 required");
    let leading = &s_q * &s_q * &d2 - &s_q;
    let off = w.scale(&(&s_q * delta));
    let determinant = &w.lift(&leading * -(&s_q * &d2)) - &off.square();
    let leading_negative = leading.is_negative();
    let determinant_zero = determinant.is_zero();
    QuadraticFormReport {
        leading,
        leading_negative,
        determinant,
        determinant_zero,
        semidefinite: leading_negative && determinant_zero,
    }
}

/// Linear part `(3 s delta - s) M + (3 sqrt(1 - s delta^2) - 1) m`.
pub fn linear_part(s: u64, delta: &Q, big_m: u64, m: u64) -> Result<AlgNum> {
    check_window(s, delta)?;
    let x = radicals(s, delta)?;
    let cm = (qu(3) * qu(s) * delta - qu(s)) * qu(big_m);
    let t = &x.w.scale(&q(3)) - &x.w.lift(Q::one());
    Ok(&t.scale(&qu(m)) + &t.lift(cm))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanReport {
    pub s: u64,
    #[serde(serialize_with = "serialize_q")]
    pub delta: Q,
    pub gamma_max: u64,
    pub triples: u64,
    /// Triples meeting the upper, lower and Cremona bounds.
    pub prefiltered: u64,
    pub passing_all: Vec<[u64; 3]>,
}

/// Every `(gamma, M, m)` with `1 <= M, m <= gamma <= gamma_max`. Triples
/// with `gamma < 2M + m` fail the Cremona bound and are only counted.
pub fn scan_box(s: u64, delta: &Q, gamma_max: u64) -> Result<ScanReport> {
    check_window(s, delta)?;
    let x = radicals(s, delta)?;
    let s_q = qu(s);
    let w2 = Q::one() - &s_q * delta * delta;
    let per_gamma: Vec<(u64, u64, Vec<[u64; 3]>)> = (1..=gamma_max)
        .into_par_iter()
        .map(|gamma| {
            let mut pre = 0;
            let mut pass = Vec::new();
            let g = qu(gamma);
            for big_m in 1..=gamma / 2 {
                let bm = qu(big_m);
                let slack = &g - delta * &s_q * &bm;
                for m in 1..=gamma - 2 * big_m {
                    let mq = qu(m);
                    let upper = slack.is_negative() || &slack * &slack < &mq * &mq * &w2;
                    if !upper {
                        continue;
                    }
                    let lhs = &s_q * &bm + &mq;
                    if &g * &g * qu(s + 1) < &lhs * &lhs {
                        continue;
                    }
                    pre += 1;
                    if !dimension_bound_expr(s, &x, &bm, &mq).is_negative() {
                        pass.push([gamma, big_m, m]);
                    }
                }
            }
            (gamma * gamma, pre, pass)
        })
        .collect();
    let mut report = ScanReport {
        s,
        delta: delta.clone(),
        gamma_max,
        triples: 0,
        prefiltered: 0,
        passing_all: Vec::new(),
    };
    for (t, p, v) in per_gamma {
        report.triples += t;
        report.prefiltered += p;
        report.passing_all.extend(v);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridReport {
    pub s: u64,
    pub points: usize,
    #[serde(serialize_with = "serialize_q")]
    pub lower: Q,
    #[serde(serialize_with = "serialize_q")]
    pub upper: Q,
    pub positive: usize,
    pub all_positive: bool,
}

const GRID_BITS: usize = 48;

/// Evenly spaced rational points strictly inside the window.
pub fn window_grid(s: u64, n: usize) -> Vec<Q> {
    let step = Q::new(BigInt::one(), BigInt::one() << GRID_BITS);
    let lo_root = sqrt_q(&Q::new(BigInt::one(), BigInt::from(s + 1))).expect("positive");
    let hi_root = sqrt_q(&Q::new(BigInt::one(), BigInt::from(s))).expect("positive");
    let lo = lo_root.floor_dyadic(GRID_BITS as u32) + &step;
    let mut hi = hi_root.floor_dyadic(GRID_BITS as u32);
    if &hi * &hi * qu(s) >= Q::one() {
        hi -= &step;
    }
    if n == 1 {
        return vec![lo];
    }
    let width = &hi - &lo;
    (0..n)
        .map(|k| &lo + &width * Q::new(BigInt::from(k), BigInt::from(n - 1)))
        .collect()
}

/// Exact sign of `f` on `n` window points.
pub fn auxiliary_grid(s: u64, n: usize) -> Result<GridReport> {
    let pts = window_grid(s, n);
    let signs: Vec<Ordering> = pts
        .par_iter()
        .map(|d| auxiliary_f(s, d).map(|f| f.sign()))
        .collect::<Result<_>>()?;
    let positive = signs.iter().filter(|o| **o == Ordering::Greater).count();
    Ok(GridReport {
        s,
        points: n,
        lower: pts.first().cloned().unwrap_or_else(Q::zero),
        upper: pts.last().cloned().unwrap_or_else(Q::zero),
        positive,
        all_positive: positive == n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn window() {
        assert!(check_window(9, &frac(8, 25)).is_ok());
        assert!(check_window(9, &frac(1, 3)).is_err());
        assert!(check_window(9, &frac(3, 10)).is_err());
        assert!(check_window(8, &frac(8, 25)).is_err());
        assert!(check_window(100, &(frac(1, 10) - frac(1, 10000))).is_ok());
    }

    #[test]
    fn f_vanishes_at_the_boundary() {
        for s in 9..=20 {
            assert!(auxiliary_f_at_boundary(s).is_zero(), "s = {s}");
            assert_eq!(h_at_boundary(s).as_rational(), Some(Q::one()));
        }
    }

    #[test]
    fn f_positive_inside() {
        assert!(auxiliary_f(9, &frac(8, 25)).unwrap().is_positive());
        assert!(auxiliary_f(100, &(frac(1, 10) - frac(1, 10000)))
            .unwrap()
            .is_positive());
    }

    #[test]
    fn derivative() {
        let r = auxiliary_derivative_positive(9, &frac(8, 25)).unwrap();
        assert!(r.holds);
        assert!(r.h_at_least_one && r.coefficient_positive && r.closing_bound_positive);
        assert_eq!(auxiliary_derivative(9, &frac(8, 25)).unwrap(), r.derivative);
    }

    #[test]
    fn form_is_semidefinite() {
        let r = quadratic_form_semidefinite(9, &frac(8, 25)).unwrap();
        assert_eq!(r.leading, frac(81 * 64, 625) - q(9));
        assert!(r.semidefinite);
        let edge = quadratic_form(9, &frac(1, 3));
        assert!(edge.leading.is_zero());
        assert!(!edge.semidefinite);
    }

    #[test]
    fn linear_part_negative() {
        assert!(linear_part(9, &frac(8, 25), 1, 1).unwrap().is_negative());
    }

    #[test]
    fn sample_triple() {
        let c = DichotomyCertificate::new(9, frac(8, 25), 1000, 312, 50).unwrap();
        let r = check_dichotomy(&c).unwrap();
        assert!(!r.all_hold);
        assert!(r.a_positive && r.b_positive);
        assert!(!r.combined);
        assert!(!r.failed.is_empty());
    }

    #[test]
    fn small_box() {
        let r = scan_box(9, &frac(8, 25), 40).unwrap();
        assert!(r.passing_all.is_empty());
        let brute = (1..=40u64)
            .flat_map(|g| (1..=g).flat_map(move |bm| (1..=g).map(move |m| (g, bm, m))))
            .filter(|&(g, bm, m)| {
                let c = DichotomyCertificate::new(9, frac(8, 25), g, bm, m).unwrap();
                let r = check_dichotomy(&c).unwrap();
                r.upper_bound && r.lower_bound && r.cremona
            })
            .count() as u64;
        assert_eq!(r.prefiltered, brute);
    }

    #[test]
    fn grid_points_in_window() {
        for s in [9, 10, 25, 100] {
            let pts = window_grid(s, 50);
            assert_eq!(pts.len(), 50);
            for p in &pts {
                check_window(s, p).unwrap();
            }
            assert!(auxiliary_grid(s, 50).unwrap().all_positive);
        }
    }

    #[test]
    fn coincidences() {
        assert_eq!(
            radical_coincidences(9, &frac(8, 25)).unwrap(),
            vec!["sqrt(1-s*delta^2)"]
        );
        assert_eq!(
            radical_coincidences(15, &frac(32, 125)).unwrap(),
            vec!["sqrt(s+1)"]
        );
        assert!(radical_coincidences(10, &frac(31, 100)).unwrap().is_empty());
    }
}
