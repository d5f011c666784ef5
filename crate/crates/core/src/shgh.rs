//! Plane fat-point linear systems `|dH - sum m_i E_i|`: expected dimension,
//! Cremona reduction to standard form, and a finite-field rank oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_CHARACTERISTIC: u64 = 1_000_003;

/// `d H - sum m_i E_i` with `m_1 >= ... >= m_s >= -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearSystem {
    pub d: i64,
    pub mults: Vec<i64>,
}

impl LinearSystem {
    /// Sorts the multiplicities; rejects entries below `-1`.
    pub fn new(d: i64, mut mults: Vec<i64>) -> Result<Self> {
        if let Some(m) = mults.iter().find(|&&m| m < -1) {
            return Err(Error::Invalid(format!("multiplicity {m} below -1")));
        }
        mults.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Self { d, mults })
    }

    pub fn points(&self) -> usize {
        self.mults.len()
    }
}

impl std::fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let ms: Vec<String> = self.mults.iter().map(|m| m.to_string()).collect();
        write!(f, "({}; {})", self.d, ms.join(", "))
    }
}

/// `d(d+3)/2 - sum m_i(m_i+1)/2`.
pub fn vdim_raw(d: i64, mults: &[i64]) -> i64 {
    d * (d + 3) / 2 - mults.iter().map(|m| m * (m + 1) / 2).sum::<i64>()
}

pub fn vdim(l: &LinearSystem) -> i64 {
    vdim_raw(l.d, &l.mults)
}

/// One quadratic transformation at the three largest multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CremonaStep {
    pub d: i64,
    pub mults: Vec<i64>,
}

/// The quadratic transformation based at the first three entries.
pub fn cremona_step(d: i64, mults: &[i64]) -> (i64, Vec<i64>) {
    let mut m = mults.to_vec();
    while m.len() < 3 {
        m.push(0);
    }
    let k = d - m[0] - m[1] - m[2];
    let mut out = m.clone();
    for i in 0..3 {
        out[i] = m[i] + k;
    }
    (d + k, out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reduction {
    /// `d >= m_1 + m_2 + m_3` with non-negative multiplicities.
    Standard,
    NegativeDegree,
    MultiplicityAboveDegree,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduced {
    pub system: LinearSystem,
    pub outcome: Reduction,
    pub trace: Vec<CremonaStep>,
}

/// Removes negative entries (fixed exceptional components) and zeros, and
/// sorts.
fn clean(mults: &[i64]) -> Vec<i64> {
    let mut m: Vec<i64> = mults.iter().copied().filter(|&m| m > 0).collect();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Applies quadratic transformations while `d < m_1 + m_2 + m_3`.
pub fn cremona_reduce(l: &LinearSystem) -> Reduced {
    let mut d = l.d;
    let mut m = clean(&l.mults);
    let mut trace = Vec::new();
    let outcome = loop {
        if d < 0 {
            break Reduction::NegativeDegree;
        }
        if m.first().is_some_and(|&m1| m1 > d) {
            break Reduction::MultiplicityAboveDegree;
        }
        if d >= m.iter().take(3).sum::<i64>() {
            break Reduction::Standard;
        }
        let (nd, nm) = cremona_step(d, &m);
        trace.push(CremonaStep {
            d: nd,
            mults: nm.clone(),
        });
        d = nd;
        m = clean(&nm);
    };
    Reduced {
        system: LinearSystem { d, mults: m },
        outcome,
        trace,
    }
}

/// Dimension predicted by the standard form: `max(vdim, -1)` there, `-1`
/// for empty outcomes.
pub fn predicted_dim(l: &LinearSystem) -> i64 {
    let r = cremona_reduce(l);
    match r.outcome {
        Reduction::Standard => vdim(&r.system).max(-1),
        _ => -1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OracleDim {
    pub dim: i64,
    pub characteristic: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShghReport {
    pub system: LinearSystem,
    pub vdim: i64,
    pub predicted_dim: i64,
    pub special: bool,
    pub reduced: Reduced,
    pub oracle: Option<OracleDim>,
}

pub fn classify(l: &LinearSystem) -> ShghReport {
    let reduced = cremona_reduce(l);
    let v = vdim(l);
    let predicted = match reduced.outcome {
        Reduction::Standard => vdim(&reduced.system).max(-1),
        _ => -1,
    };
    ShghReport {
        system: l.clone(),
        vdim: v,
        predicted_dim: predicted,
        special: predicted != v.max(-1),
        reduced,
        oracle: None,
    }
}

pub fn classify_with_oracle(
    l: &LinearSystem,
    characteristic: u64,
    seed: u64,
) -> Result<ShghReport> {
    let mut r = classify(l);
    r.oracle = Some(OracleDim {
        dim: oracle_dim(l, characteristic, seed)?,
        characteristic,
        seed,
    });
    Ok(r)
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2u64;
    while k.saturating_mul(k) <= p {
        if p.is_multiple_of(k) {
            return false;
        }
        k += 1;
    }
    true
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Rank of a dense matrix over `GF(p)`.
pub fn rank_mod(mut rows: Vec<Vec<u64>>, p: u64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = pow_mod(rows[rank][c], p - 2, p);
        for x in rows[rank].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&pivot).skip(c) {
                *x = (*x + p - mul_mod(f, *y, p)) % p;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

/// Projective dimension of the system at pseudo-random points of the affine
/// plane over `GF(p)`: monomials of degree at most `d` minus the rank of the
/// Taylor conditions of order below `m_i` at each point, minus one.
pub fn oracle_dim(l: &LinearSystem, characteristic: u64, seed: u64) -> Result<i64> {
    let p = characteristic;
    if !is_prime(p) {
        return Err(Error::Invalid(format!("{p} is not prime")));
    }
    if l.d < 0 {
        return Ok(-1);
    }
    if p <= l.d as u64 {
        return Err(Error::CharacteristicTooSmall {
            characteristic: p,
            degree: l.d,
        });
    }
    let d = l.d as usize;
    let monomials: Vec<(usize, usize)> = (0..=d)
        .flat_map(|a| (0..=d - a).map(move |b| (a, b)))
        .collect();
    let mut binom = vec![vec![0u64; d + 1]; d + 1];
    for n in 0..=d {
        binom[n][0] = 1;
        for k in 1..=n {
            binom[n][k] = (binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0 }) % p;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for &m in &l.mults {
        let u: u64 = rng.random_range(1..p);
        let v: u64 = rng.random_range(1..p);
        if m <= 0 {
            continue;
        }
        let mut upow = vec![1u64; d + 1];
        let mut vpow = vec![1u64; d + 1];
        for k in 1..=d {
            upow[k] = mul_mod(upow[k - 1], u, p);
            vpow[k] = mul_mod(vpow[k - 1], v, p);
        }
        let m = m as usize;
        for i in 0..m {
            for j in 0..m - i {
                let row = monomials
                    .iter()
                    .map(|&(a, b)| {
                        if a < i || b < j {
                            return 0;
                        }
                        let c = mul_mod(binom[a][i], binom[b][j], p);
                        mul_mod(c, mul_mod(upow[a - i], vpow[b - j], p), p)
                    })
                    .collect();
                rows.push(row);
            }
        }
    }
    let rank = if rows.is_empty() {
        0
    } else {
        rank_mod(rows, p)
    };
    Ok(monomials.len() as i64 - rank as i64 - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sys(d: i64, m: &[i64]) -> LinearSystem {
        LinearSystem::new(d, m.to_vec()).unwrap()
    }

    fn oracle(l: &LinearSystem) -> i64 {
        oracle_dim(l, DEFAULT_CHARACTERISTIC, 7).unwrap()
    }

    #[test]
    fn virtual_dimensions() {
        assert_eq!(vdim(&sys(2, &[1; 5])), 0);
        assert_eq!(vdim(&sys(22, &[7; 9])), 23);
        assert_eq!(vdim(&sys(2, &[2, 2])), -1);
        assert_eq!(vdim(&sys(3, &[-1, 1])), 8);
    }

    #[test]
    fn rejects_low_multiplicity() {
        assert!(LinearSystem::new(3, vec![1, -2]).is_err());
        assert_eq!(sys(3, &[1, 2, -1]).mults, vec![2, 1, -1]);
    }

    #[test]
    fn double_line_is_special() {
        let l = sys(2, &[2, 2]);
        let r = classify(&l);
        assert_eq!(
            r.reduced.trace[0],
            CremonaStep {
                d: 0,
                mults: vec![0, 0, -2]
            }
        );
        assert_eq!(
            r.reduced.system,
            LinearSystem {
                d: 0,
                mults: vec![]
            }
        );
        assert_eq!(r.predicted_dim, 0);
        assert!(r.special);
        assert_eq!(oracle(&l), 0);
    }

    #[test]
    fn conic_through_five_points() {
        let l = sys(2, &[1; 5]);
        let r = classify(&l);
        assert_eq!(
            r.reduced.trace[0],
            CremonaStep {
                d: 1,
                mults: vec![0, 0, 0, 1, 1]
            }
        );
        assert_eq!(r.predicted_dim, 0);
        assert!(!r.special);
        assert_eq!(oracle(&l), 0);
    }

    #[test]
    fn small_systems() {
        assert_eq!(oracle(&sys(1, &[1, 1])), 0);
        let three = classify(&sys(1, &[1, 1, 1]));
        assert_eq!(
            (three.vdim, three.predicted_dim, three.special),
            (-1, -1, false)
        );
        assert_eq!(oracle(&sys(1, &[1, 1, 1])), -1);
        let cubic = sys(3, &[2, 1, 1, 1, 1, 1, 1]);
        let r = classify(&cubic);
        assert_eq!((r.predicted_dim, r.special), (0, false));
        assert_eq!(oracle(&cubic), 0);
        assert_eq!(
            classify(&sys(1, &[2])).reduced.outcome,
            Reduction::MultiplicityAboveDegree
        );
    }

    #[test]
    fn standard_form_is_kept() {
        let r = classify(&sys(22, &[7; 9]));
        assert!(r.reduced.trace.is_empty());
        assert_eq!((r.predicted_dim, r.special), (23, false));
    }

    #[test]
    fn small_characteristic() {
        assert_eq!(
            oracle_dim(&sys(12, &[3]), 11, 0),
            Err(Error::CharacteristicTooSmall {
                characteristic: 11,
                degree: 12
            })
        );
        assert!(oracle_dim(&sys(2, &[1]), 10, 0).is_err());
    }

    #[test]
    fn rank_over_small_field() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]];
        assert_eq!(rank_mod(rows, 7), 2);
        assert_eq!(rank_mod(vec![vec![1, 1], vec![1, 6]], 7), 2);
        assert_eq!(rank_mod(vec![vec![1, 1], vec![6, 6]], 7), 1);
    }

    proptest! {
        #[test]
        fn cremona_keeps_vdim(d in 0i64..20, m in proptest::collection::vec(-1i64..8, 3..9)) {
            let (nd, nm) = cremona_step(d, &m);
            prop_assert_eq!(vdim_raw(nd, &nm), vdim_raw(d, &m));
            let (bd, bm) = cremona_step(nd, &nm);
            prop_assert_eq!((bd, bm), (d, m));
        }

        #[test]
        fn prediction_matches_oracle(d in 0i64..=10, m in proptest::collection::vec(0i64..=4, 1..=8)) {
            let l = LinearSystem::new(d, m).unwrap();
            prop_assert_eq!(classify(&l).predicted_dim, oracle(&l));
        }

        #[test]
        fn oracle_seed_independent(d in 0i64..=8, m in proptest::collection::vec(0i64..=3, 1..=6), a in 0u64..1000, b in 0u64..1000) {
            let l = LinearSystem::new(d, m).unwrap();
            prop_assert_eq!(
                oracle_dim(&l, DEFAULT_CHARACTERISTIC, a).unwrap(),
                oracle_dim(&l, DEFAULT_CHARACTERISTIC, b).unwrap()
            );
        }
    }
}
