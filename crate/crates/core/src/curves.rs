//! Catalog of `(-1)`-classes on the blow-up at `s` very general points.
//!
//! The catalog is the orbit of the exceptional classes under permutations of
//! the points and the quadratic Cremona reflection, truncated at a degree
//! bound. Orbit representatives are kept with non-increasing multiplicities;
//! every representative is expanded into all of its distinct permutations at
//! the end.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivClass, SurfaceModel};
use crate::rational::{as_i64, q, Q};

/// Integral class `dH - sum m_i E_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    pub degree: i64,
    pub mults: Vec<i64>,
}

impl CurveClass {
    pub fn new(degree: i64, mults: Vec<i64>) -> Self {
        Self { degree, mults }
    }

    pub fn exceptional(points: usize, i: usize) -> Self {
        let mut mults = vec![0; points];
        mults[i] = -1;
        Self::new(0, mults)
    }

    pub fn points(&self) -> usize {
        self.mults.len()
    }

    pub fn to_div(&self) -> DivClass {
        DivClass::from_ints(self.degree, &self.mults)
    }

    /// Coefficients in the basis `(H, E_1, ..., E_s)`.
    pub fn coefficients(&self) -> Vec<i64> {
        std::iter::once(self.degree)
            .chain(self.mults.iter().map(|m| -m))
            .collect()
    }

    pub fn from_coefficients(coeffs: &[i64]) -> Result<Self> {
        let (d, rest) = coeffs
            .split_first()
            .ok_or_else(|| Error::Invalid("empty coefficient vector".into()))?;
        Ok(Self::new(*d, rest.iter().map(|c| -c).collect()))
    }

    pub fn dot(&self, other: &CurveClass) -> i64 {
        self.degree * other.degree
            - self
                .mults
                .iter()
                .zip(&other.mults)
                .map(|(a, b)| a * b)
                .sum::<i64>()
    }

    pub fn dot_div(&self, d: &DivClass) -> Q {
        let mut acc = d.degree() * q(self.degree);
        for (m, x) in self.mults.iter().zip(d.mults()) {
            if *m != 0 {
                acc -= x * q(*m);
            }
        }
        acc
    }

    pub fn self_intersection(&self) -> i64 {
        self.dot(self)
    }

    /// `C . K` with `K = -3H + sum E_i`.
    pub fn canonical_degree(&self) -> i64 {
        -3 * self.degree + self.mults.iter().sum::<i64>()
    }

    /// Index of the exceptional curve this class equals, if any.
    pub fn exceptional_index(&self) -> Option<usize> {
        if self.degree != 0 {
            return None;
        }
        let mut found = None;
        for (i, &m) in self.mults.iter().enumerate() {
            match m {
                0 => {}
                -1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    /// Whether the class passes through the `i`-th blown-up point, i.e. meets
    /// `E_i` positively.
    pub fn passes_through(&self, i: usize) -> bool {
        self.mults[i] > 0
    }
}

impl std::fmt::Display for CurveClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({};", self.degree)?;
        for (i, m) in self.mults.iter().enumerate() {
            let sep = if i == 0 { " " } else { ", " };
            write!(f, "{sep}{m}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for CurveClass {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coefficients().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveClass {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        CurveClass::from_coefficients(&v).map_err(serde::de::Error::custom)
    }
}

/// `C^2 = -1` and `C . K = -1`. Errors on non-integral input.
pub fn is_neg_class(c: &DivClass) -> Result<bool> {
    let curve = to_curve(c)?;
    Ok(curve.self_intersection() == -1 && curve.canonical_degree() == -1)
}

pub fn to_curve(c: &DivClass) -> Result<CurveClass> {
    let degree = as_i64(c.degree()).ok_or_else(|| Error::NonIntegral(c.to_string()))?;
    let mults = c
        .mults()
        .iter()
        .map(|m| as_i64(m).ok_or_else(|| Error::NonIntegral(c.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(CurveClass::new(degree, mults))
}

/// Quadratic Cremona reflection centred at points `i`, `j`, `k`.
pub fn cremona(c: &CurveClass, i: usize, j: usize, k: usize) -> CurveClass {
    let d = c.degree;
    let (a, b, e) = (c.mults[i], c.mults[j], c.mults[k]);
    let mut mults = c.mults.clone();
    mults[i] = d - b - e;
    mults[j] = d - a - e;
    mults[k] = d - a - b;
    CurveClass::new(2 * d - a - b - e, mults)
}

#[derive(Debug, Clone, Copy)]
pub struct CatalogOptions {
    pub d_max: i64,
    /// Upper bound on the number of curves (or orbits) materialized at once.
    pub max_entries: usize,
}

impl CatalogOptions {
    pub fn new(d_max: i64) -> Self {
        Self {
            d_max,
            max_entries: 2_000_000,
        }
    }
}

/// Partition of the point indices. A class with constant multiplicity on
/// every block is invariant under permutations of points within blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Blocks {
    blocks: Vec<Vec<usize>>,
}

impl Blocks {
    pub fn trivial(points: usize) -> Self {
        Self {
            blocks: (0..points).map(|i| vec![i]).collect(),
        }
    }

    /// Coarsest partition on which every given class has constant
    /// multiplicity.
    pub fn of_classes(points: usize, classes: &[&DivClass]) -> Self {
        let mut groups: BTreeMap<Vec<Q>, Vec<usize>> = BTreeMap::new();
        for i in 0..points {
            let key = classes.iter().map(|c| c.mult(i).clone()).collect();
            groups.entry(key).or_default().push(i);
        }
        let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
        blocks.sort();
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn points(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }
}

/// Orbit of a catalog curve under the permutations preserving a [`Blocks`]
/// partition. The representative carries, on each block, its multiplicities
/// in non-increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub rep: CurveClass,
    pub size: u128,
}

impl Orbit {
    pub fn members(&self, blocks: &Blocks) -> Vec<CurveClass> {
        let mut out = vec![self.rep.clone()];
        for block in blocks.blocks() {
            let vals: Vec<i64> = block.iter().map(|&i| self.rep.mults[i]).collect();
            let perms = distinct_permutations(&vals);
            out = out
                .into_iter()
                .flat_map(|c| {
                    perms.iter().map(move |p| {
                        let mut c = c.clone();
                        for (&i, &v) in block.iter().zip(p) {
                            c.mults[i] = v;
                        }
                        c
                    })
                })
                .collect();
        }
        out
    }
}

fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// Distinct values of `m` (non-increasing) with their counts.
fn value_counts(m: &[i64]) -> Vec<(i64, usize)> {
    let mut sorted = m.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut out: Vec<(i64, usize)> = Vec::new();
    for v in sorted {
        match out.last_mut() {
            Some((w, c)) if *w == v => *c += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

fn orbit_size(m: &[i64]) -> u128 {
    value_counts(m)
        .iter()
        .fold(factorial(m.len()), |acc, (_, c)| acc / factorial(*c))
}

/// Ways of drawing `k` items from the multiset with the given counts.
fn draws(remaining: &[usize], k: usize) -> Vec<Vec<usize>> {
    fn go(rem: &[usize], k: usize, v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if v == rem.len() {
            if k == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let left: usize = rem[v + 1..].iter().sum();
        for take in (0..=rem[v].min(k)).rev() {
            if k - take > left {
                break;
            }
            cur.push(take);
            go(rem, k - take, v + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(remaining, k, 0, &mut Vec::new(), &mut out);
    out
}

fn push_block_orbits(
    rep: &CurveClass,
    blocks: &Blocks,
    out: &mut Vec<Orbit>,
    cap: usize,
) -> Result<()> {
    let counts = value_counts(&rep.mults);
    let mut remaining: Vec<usize> = counts.iter().map(|(_, c)| *c).collect();
    let mut assign = vec![0i64; rep.mults.len()];
    #[allow(clippy::too_many_arguments)]
    fn go(
        j: usize,
        degree: i64,
        blocks: &[Vec<usize>],
        counts: &[(i64, usize)],
        remaining: &mut Vec<usize>,
        assign: &mut Vec<i64>,
        size: u128,
        out: &mut Vec<Orbit>,
        cap: usize,
    ) -> Result<()> {
        if j == blocks.len() {
            out.push(Orbit {
                rep: CurveClass::new(degree, assign.clone()),
                size,
            });
            if out.len() > cap {
                return Err(Error::CatalogTooLarge(cap));
            }
            return Ok(());
        }
        let block = &blocks[j];
        for draw in draws(remaining, block.len()) {
            let mut idx = block.iter();
            let mut ways = factorial(block.len());
            for (v, &take) in draw.iter().enumerate() {
                ways /= factorial(take);
                for _ in 0..take {
                    assign[*idx.next().expect("draw fills the block")] = counts[v].0;
                }
                remaining[v] -= take;
            }
            go(
                j + 1,
                degree,
                blocks,
                counts,
                remaining,
                assign,
                size * ways,
                out,
                cap,
            )?;
            for (v, &take) in draw.iter().enumerate() {
                remaining[v] += take;
            }
        }
        Ok(())
    }
    go(
        0,
        rep.degree,
        blocks.blocks(),
        &counts,
        &mut remaining,
        &mut assign,
        1,
        out,
        cap,
    )
}

fn catalog_order(a: &CurveClass, b: &CurveClass) -> Ordering {
    a.degree.cmp(&b.degree).then_with(|| b.mults.cmp(&a.mults))
}

/// All `(-1)`-classes of degree at most `d_max`. Stored as Cremona orbit
/// representatives (multiplicities non-increasing); individual curves are
/// materialized on demand, either all of them or one per orbit of a
/// symmetry partition of the points.
#[derive(Debug, Clone)]
pub struct NegCurveCatalog {
    pub points: usize,
    pub d_max: i64,
    /// True when the Cremona orbit never left the degree bound, i.e. the
    /// catalog contains every `(-1)`-class (only possible for `s <= 8`).
    pub complete: bool,
    /// `-K` when `s = 9`: square zero, tracked outside the entries.
    pub boundary_witness: Option<CurveClass>,
    reps: Vec<CurveClass>,
    max_entries: usize,
    cache: Arc<Mutex<HashMap<Blocks, Arc<Vec<Orbit>>>>>,
}

impl NegCurveCatalog {
    pub fn model(&self) -> SurfaceModel {
        SurfaceModel::new(self.points)
    }

    /// One class per permutation orbit, multiplicities non-increasing.
    pub fn representatives(&self) -> &[CurveClass] {
        &self.reps
    }

    /// Number of curves in the catalog.
    pub fn len(&self) -> u128 {
        self.reps.iter().map(|r| orbit_size(&r.mults)).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Orbits of catalog curves under permutations within `blocks`.
    pub fn orbits(&self, blocks: &Blocks) -> Result<Arc<Vec<Orbit>>> {
        if blocks.points() != self.points {
            return Err(Error::DimensionMismatch {
                left: blocks.points(),
                right: self.points,
            });
        }
        if let Some(hit) = self.cache.lock().expect("catalog cache").get(blocks) {
            return Ok(hit.clone());
        }
        let mut out = Vec::new();
        for rep in &self.reps {
            push_block_orbits(rep, blocks, &mut out, self.max_entries)?;
        }
        out.sort_by(|a, b| catalog_order(&a.rep, &b.rep));
        let out = Arc::new(out);
        self.cache
            .lock()
            .expect("catalog cache")
            .insert(blocks.clone(), out.clone());
        Ok(out)
    }

    /// Every curve of the catalog, ordered by degree.
    pub fn entries(&self) -> Result<Vec<CurveClass>> {
        Ok(self
            .orbits(&Blocks::trivial(self.points))?
            .iter()
            .map(|o| o.rep.clone())
            .collect())
    }

    pub fn contains(&self, c: &CurveClass) -> bool {
        if c.points() != self.points {
            return false;
        }
        let mut sorted = c.clone();
        sorted.mults.sort_unstable_by(|a, b| b.cmp(a));
        self.reps.contains(&sorted)
    }

    /// A catalog on `points` generated with the same bound. Convenience for
    /// callers that adjoin an extra point.
    pub fn regenerate(&self, points: usize) -> Result<NegCurveCatalog> {
        generate_catalog_with(
            SurfaceModel::new(points),
            CatalogOptions {
                d_max: self.d_max,
                max_entries: self.max_entries,
            },
        )
    }

    /// Rebuilds a catalog from an exported entry list, checking that it is
    /// exactly the catalog generated for the same bound.
    pub fn import(points: usize, d_max: i64, entries: &[CurveClass]) -> Result<NegCurveCatalog> {
        let fresh = generate_catalog(SurfaceModel::new(points), d_max)?;
        let mut seen = BTreeSet::new();
        for c in entries {
            if c.points() != points {
                return Err(Error::DimensionMismatch {
                    left: c.points(),
                    right: points,
                });
            }
            if c.self_intersection() != -1 || c.canonical_degree() != -1 {
                return Err(Error::Invalid(format!("{c} is not a (-1)-class")));
            }
            if !seen.insert(c.clone()) {
                return Err(Error::Invalid(format!("{c} listed twice")));
            }
        }
        let expected: BTreeSet<CurveClass> = fresh.entries()?.into_iter().collect();
        if seen != expected {
            return Err(Error::Invalid(
                "entries differ from the generated catalog".into(),
            ));
        }
        Ok(fresh)
    }
}

#[derive(Serialize)]
struct CatalogWire<'a> {
    points: usize,
    d_max: i64,
    complete: bool,
    entries: &'a [CurveClass],
}

impl Serialize for NegCurveCatalog {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries().map_err(serde::ser::Error::custom)?;
        CatalogWire {
            points: self.points,
            d_max: self.d_max,
            complete: self.complete,
            entries: &entries,
        }
        .serialize(s)
    }
}

pub fn generate_catalog(model: SurfaceModel, d_max: i64) -> Result<NegCurveCatalog> {
    generate_catalog_with(model, CatalogOptions::new(d_max))
}

pub fn generate_catalog_with(model: SurfaceModel, opts: CatalogOptions) -> Result<NegCurveCatalog> {
    let s = model.points;
    if opts.d_max < 0 {
        return Err(Error::Invalid("d_max must be non-negative".into()));
    }
    let mut reps = Vec::new();
    let mut pruned = false;
    if s > 0 {
        // Cremona needs three points; classes on fewer points are those on
        // three points with zero multiplicity at the extra ones.
        let n = s.max(3);
        let (all, cut) = orbit_representatives(n, opts.d_max);
        pruned = cut;
        for rep in all {
            let nonzero = rep.mults.iter().filter(|&&m| m != 0).count();
            if nonzero > s {
                continue;
            }
            let mut mults: Vec<i64> = rep.mults.iter().copied().filter(|&m| m != 0).collect();
            mults.resize(s, 0);
            mults.sort_unstable_by(|a, b| b.cmp(a));
            reps.push(CurveClass::new(rep.degree, mults));
        }
        reps.sort_by(catalog_order);
        reps.dedup();
    }
    Ok(NegCurveCatalog {
        points: s,
        d_max: opts.d_max,
        complete: !pruned,
        boundary_witness: (s == 9).then(|| CurveClass::new(3, vec![1; 9])),
        reps,
        max_entries: opts.max_entries,
        cache: Arc::default(),
    })
}

/// Breadth-first search over sorted representatives. Returns the
/// representatives and whether any neighbour was cut off by the degree bound.
fn orbit_representatives(n: usize, d_max: i64) -> (Vec<CurveClass>, bool) {
    let mut start = vec![0; n];
    start[n - 1] = -1;
    let start = CurveClass::new(0, start);
    let mut seen: HashSet<CurveClass> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    let mut order = vec![start];
    let mut pruned = false;
    while let Some(c) = queue.pop_front() {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    let mut next = cremona(&c, i, j, k);
                    if next.degree > d_max {
                        pruned = true;
                        continue;
                    }
                    next.mults.sort_unstable_by(|a, b| b.cmp(a));
                    if seen.insert(next.clone()) {
                        order.push(next.clone());
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    (order, pruned)
}

/// Distinct permutations of `items` in lexicographic order.
fn distinct_permutations(items: &[i64]) -> Vec<Vec<i64>> {
    let mut cur: Vec<i64> = items.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // Narayana's next-permutation.
    loop {
        let n = cur.len();
        if n < 2 {
            return out;
        }
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

/// Applies Cremona reductions at the three largest multiplicities until the
/// degree stops dropping. Used to check that a class lies in the orbit of an
/// exceptional curve.
pub fn reduce_to_exceptional(c: &CurveClass) -> CurveClass {
    let n = c.points().max(3);
    let mut cur = c.clone();
    cur.mults.resize(n, 0);
    loop {
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| cur.mults[b].cmp(&cur.mults[a]));
        let (i, j, k) = (idx[0], idx[1], idx[2]);
        if cur.degree >= cur.mults[i] + cur.mults[j] + cur.mults[k] {
            return cur;
        }
        cur = cremona(&cur, i, j, k);
    }
}

/// Set of catalog entries, for order-free comparisons.
pub fn entry_set(cat: &NegCurveCatalog) -> Result<BTreeSet<CurveClass>> {
    Ok(cat.entries()?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent enumeration of integral solutions of `d^2 - sum m^2 = -1`,
    /// `3d - sum m = 1`, `0 <= m_i <= d`, `1 <= d <= d_max`, plus the
    /// exceptional classes.
    pub(crate) fn brute_force(s: usize, d_max: i64) -> BTreeSet<CurveClass> {
        let mut out = BTreeSet::new();
        for i in 0..s {
            out.insert(CurveClass::exceptional(s, i));
        }
        for d in 1..=d_max {
            let mut m = vec![0i64; s];
            loop {
                let sum: i64 = m.iter().sum();
                let sq: i64 = m.iter().map(|x| x * x).sum();
                if 3 * d - sum == 1 && d * d - sq == -1 {
                    out.insert(CurveClass::new(d, m.clone()));
                }
                // odometer over [0, d]^s
                let mut pos = 0;
                loop {
                    if pos == s {
                        break;
                    }
                    if m[pos] < d {
                        m[pos] += 1;
                        break;
                    }
                    m[pos] = 0;
                    pos += 1;
                }
                if pos == s {
                    break;
                }
            }
        }
        out
    }

    #[test]
    fn one_point_only_exceptional() {
        let cat = generate_catalog(SurfaceModel::new(1), 5).unwrap();
        assert_eq!(cat.entries().unwrap(), vec![CurveClass::exceptional(1, 0)]);
    }

    #[test]
    fn two_points() {
        let cat = generate_catalog(SurfaceModel::new(2), 5).unwrap();
        let set = entry_set(&cat).unwrap();
        assert_eq!(set.len(), 3);
        assert!(set.contains(&CurveClass::new(1, vec![1, 1])));
    }

    #[test]
    fn cubic_surface_lines() {
        let cat = generate_catalog(SurfaceModel::new(6), 5).unwrap();
        assert_eq!(cat.len(), 27);
        let entries = cat.entries().unwrap();
        let by_degree = |d| entries.iter().filter(|c| c.degree == d).count();
        assert_eq!((by_degree(0), by_degree(1), by_degree(2)), (6, 15, 6));
        assert_eq!(entry_set(&cat).unwrap(), brute_force(6, 5));
        assert!(cat.complete);
    }

    #[test]
    fn classical_counts() {
        for (s, n) in [(6, 27u128), (7, 56), (8, 240)] {
            let cat = generate_catalog(SurfaceModel::new(s), 20).unwrap();
            assert!(cat.complete);
            assert_eq!(cat.len(), n);
        }
    }

    #[test]
    fn nine_points_contain_cubic() {
        let cat = generate_catalog(SurfaceModel::new(9), 3).unwrap();
        let cubic = CurveClass::new(3, vec![2, 1, 1, 1, 1, 1, 1, 0, 0]);
        assert!(cat.contains(&cubic));
        assert!(cat.contains(&CurveClass::new(3, vec![0, 1, 1, 1, 2, 1, 1, 0, 1])));
        assert_eq!(cubic.self_intersection(), -1);
        assert_eq!(entry_set(&cat).unwrap(), brute_force(9, 3));
        assert!(!cat.complete);
        assert_eq!(cat.boundary_witness, Some(CurveClass::new(3, vec![1; 9])));
    }

    #[test]
    fn block_orbits_partition_the_catalog() {
        let cat = generate_catalog(SurfaceModel::new(7), 6).unwrap();
        let all = entry_set(&cat).unwrap();
        let blocks = Blocks {
            blocks: vec![vec![0, 1, 2], vec![3], vec![4, 5, 6]],
        };
        let orbits = cat.orbits(&blocks).unwrap();
        let mut seen = BTreeSet::new();
        for o in orbits.iter() {
            let members = o.members(&blocks);
            assert_eq!(members.len() as u128, o.size);
            for m in members {
                assert!(all.contains(&m));
                assert!(seen.insert(m));
            }
        }
        assert_eq!(seen, all);
    }

    #[test]
    fn blocks_from_classes() {
        let d = DivClass::new(q(1), vec![q(1), q(2), q(1), q(3), q(2)]);
        let b = Blocks::of_classes(5, &[&d]);
        assert_eq!(b.blocks(), &[vec![0, 2], vec![1, 4], vec![3]]);
    }

    #[test]
    fn neg_class_predicate() {
        let m = SurfaceModel::new(6);
        assert!(is_neg_class(&m.exceptional(0)).unwrap());
        assert!(!is_neg_class(&m.hyperplane()).unwrap());
        assert!(is_neg_class(&DivClass::from_ints(2, &[1, 1, 1, 1, 1, 0])).unwrap());
        let half = DivClass::new(
            Q::new(1.into(), 2.into()),
            vec![Q::from_integer(0.into()); 6],
        );
        assert!(matches!(is_neg_class(&half), Err(Error::NonIntegral(_))));
    }

    #[test]
    fn reduction_reaches_an_exceptional_class() {
        let cat = generate_catalog(SurfaceModel::new(8), 17).unwrap();
        for c in cat.entries().unwrap() {
            let r = reduce_to_exceptional(&c);
            assert_eq!(r.degree, 0, "{c}");
            assert!(r.exceptional_index().is_some(), "{c} -> {r}");
        }
    }

    #[test]
    fn permutations_are_distinct() {
        let p = distinct_permutations(&[2, 1, 1, 0]);
        assert_eq!(p.len(), 12);
        let set: HashSet<_> = p.into_iter().collect();
        assert_eq!(set.len(), 12);
    }

    #[test]
    fn json_round_trip() {
        let cat = generate_catalog(SurfaceModel::new(3), 2).unwrap();
        let text = serde_json::to_string(&cat).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let entries: Vec<CurveClass> = serde_json::from_value(v["entries"].clone()).unwrap();
        assert_eq!(entries, cat.entries().unwrap());
        let back = NegCurveCatalog::import(3, 2, &entries).unwrap();
        assert_eq!(back.representatives(), cat.representatives());
        assert!(NegCurveCatalog::import(3, 2, &entries[1..]).is_err());
    }
}
