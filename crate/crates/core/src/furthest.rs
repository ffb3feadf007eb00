//! Dynamic furthest-site index over additively weighted points.
//!
//! The distance functional is `δ(q, s) = w_s + |q − s|`. The index answers
//! `argmax_s δ(q, s)` and extracts every live site above a threshold. Two
//! backends share one contract: a linear scan, and a uniform grid that
//! prunes buckets by an upper bound on `δ`. Ties always go to the smallest
//! `site_id`, so the two backends agree bit for bit.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::hash::{BuildHasherDefault, Hasher};

use crate::geometry::{dist, Point};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightedSite {
    pub site_id: usize,
    pub location: Point,
    pub weight: f64,
}

impl WeightedSite {
    pub fn new(site_id: usize, location: Point, weight: f64) -> Self {
        Self { site_id, location, weight }
    }

    #[inline]
    pub fn delta(&self, q: Point) -> f64 {
        self.weight + dist(q, self.location)
    }
}

/// `Less` when `(da, a)` ranks before `(db, b)`: larger δ, then smaller id.
#[inline]
fn rank(da: f64, a: usize, db: f64, b: usize) -> Ordering {
    db.partial_cmp(&da).unwrap_or(Ordering::Equal).then(a.cmp(&b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Linear scan over the live sites.
    #[default]
    BruteForce,
    /// Uniform grid with per-bucket upper bounds.
    Bucketed,
}

#[derive(Debug, Clone)]
pub struct FurthestIndex {
    inner: Inner,
    ops: u64,
}

#[derive(Debug, Clone)]
enum Inner {
    Brute(BruteForce),
    Bucketed(Bucketed),
}

impl FurthestIndex {
    pub fn new(backend: Backend) -> Self {
        Self::build(backend, std::iter::empty()).expect("empty build cannot collide")
    }

    /// Builds an index over `sites`. The bucketed backend sizes its grid
    /// from this initial set.
    pub fn build(backend: Backend, sites: impl IntoIterator<Item = WeightedSite>) -> Result<Self> {
        let sites: Vec<WeightedSite> = sites.into_iter().collect();
        let inner = match backend {
            Backend::BruteForce => Inner::Brute(BruteForce::default()),
            Backend::Bucketed => Inner::Bucketed(Bucketed::sized_for(&sites)),
        };
        let mut idx = Self { inner, ops: 0 };
        for s in sites {
            idx.insert(s)?;
        }
        Ok(idx)
    }

    pub fn backend(&self) -> Backend {
        match self.inner {
            Inner::Brute(_) => Backend::BruteForce,
            Inner::Bucketed(_) => Backend::Bucketed,
        }
    }

    pub fn len(&self) -> usize {
        match &self.inner {
            Inner::Brute(b) => b.sites.len(),
            Inner::Bucketed(b) => b.home.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, site_id: usize) -> bool {
        match &self.inner {
            Inner::Brute(b) => b.pos.contains_key(&site_id),
            Inner::Bucketed(b) => b.home.contains_key(&site_id),
        }
    }

    /// Number of primitive operations issued so far. An extraction of `k`
    /// sites counts as `k + 1` furthest queries.
    pub fn op_count(&self) -> u64 {
        self.ops
    }

    pub fn insert(&mut self, s: WeightedSite) -> Result<()> {
        self.ops += 1;
        if self.contains(s.site_id) {
            return Err(Error::DuplicateSite(s.site_id));
        }
        match &mut self.inner {
            Inner::Brute(b) => b.insert(s),
            Inner::Bucketed(b) => b.insert(s),
        }
        Ok(())
    }

    pub fn delete(&mut self, site_id: usize) -> Result<WeightedSite> {
        self.ops += 1;
        let removed = match &mut self.inner {
            Inner::Brute(b) => b.delete(site_id),
            Inner::Bucketed(b) => b.delete(site_id),
        };
        removed.ok_or(Error::UnknownSite(site_id))
    }

    /// The live site maximizing `δ(q, ·)`, with its δ value.
    pub fn furthest(&mut self, q: Point) -> Option<(WeightedSite, f64)> {
        self.ops += 1;
        self.peek(q)
    }

    fn peek(&self, q: Point) -> Option<(WeightedSite, f64)> {
        match &self.inner {
            Inner::Brute(b) => b.furthest(q),
            Inner::Bucketed(b) => b.furthest(q),
        }
    }

    /// Removes and returns the furthest site if its δ exceeds `threshold`.
    pub fn pop_above(&mut self, q: Point, threshold: f64) -> Option<WeightedSite> {
        self.ops += 1;
        let (site, d) = self.peek(q)?;
        if d > threshold {
            self.ops += 1;
            match &mut self.inner {
                Inner::Brute(b) => b.delete(site.site_id),
                Inner::Bucketed(b) => b.delete(site.site_id),
            }
        } else {
            None
        }
    }

    /// Removes and returns every live site with `δ(q, s) > threshold`,
    /// ordered by decreasing δ, ties by id.
    pub fn extract_above(&mut self, q: Point, threshold: f64) -> Vec<WeightedSite> {
        let mut out = match &mut self.inner {
            Inner::Brute(b) => b.extract_above(q, threshold),
            Inner::Bucketed(b) => b.extract_above(q, threshold),
        };
        self.ops += 1 + out.len() as u64;
        out.sort_by(|(da, a), (db, b)| rank(*da, a.site_id, *db, b.site_id));
        out.into_iter().map(|(_, s)| s).collect()
    }

    /// Live sites in ascending id order.
    pub fn live_sites(&self) -> Vec<WeightedSite> {
        let mut v: Vec<WeightedSite> = match &self.inner {
            Inner::Brute(b) => b.sites.clone(),
            Inner::Bucketed(b) => b.buckets.values().flat_map(|bk| bk.sites.iter().copied()).collect(),
        };
        v.sort_by_key(|s| s.site_id);
        v
    }
}

fn scan_best<'a>(q: Point, sites: impl Iterator<Item = &'a WeightedSite>, best: &mut Option<(WeightedSite, f64)>) {
    for s in sites {
        let d = s.delta(q);
        let better = match best {
            None => true,
            Some((b, bd)) => rank(d, s.site_id, *bd, b.site_id) == Ordering::Less,
        };
        if better {
            *best = Some((*s, d));
        }
    }
}

/// Multiplicative hash for integer site ids.
#[derive(Debug, Default, Clone, Copy)]
struct IdHasher(u64);

impl Hasher for IdHasher {
    fn finish(&self) -> u64 {
        self.0
    }

    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0.rotate_left(8) ^ b as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        }
    }

    fn write_usize(&mut self, v: usize) {
        self.0 = (v as u64 ^ self.0).wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(29);
    }
}

type IdMap<V> = HashMap<usize, V, BuildHasherDefault<IdHasher>>;

#[derive(Debug, Clone, Default)]
struct BruteForce {
    sites: Vec<WeightedSite>,
    pos: IdMap<usize>,
}

impl BruteForce {
    fn insert(&mut self, s: WeightedSite) {
        self.pos.insert(s.site_id, self.sites.len());
        self.sites.push(s);
    }

    fn delete(&mut self, site_id: usize) -> Option<WeightedSite> {
        let p = self.pos.remove(&site_id)?;
        let removed = self.sites.swap_remove(p);
        if let Some(moved) = self.sites.get(p) {
            self.pos.insert(moved.site_id, p);
        }
        Some(removed)
    }

    fn furthest(&self, q: Point) -> Option<(WeightedSite, f64)> {
        let mut best = None;
        scan_best(q, self.sites.iter(), &mut best);
        best
    }

    fn extract_above(&mut self, q: Point, threshold: f64) -> Vec<(f64, WeightedSite)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < self.sites.len() {
            let d = self.sites[i].delta(q);
            if d > threshold {
                let s = self.sites[i];
                self.delete(s.site_id);
                out.push((d, s));
            } else {
                i += 1;
            }
        }
        out
    }
}

type Key = (i64, i64);

#[derive(Debug, Clone)]
struct Bucket {
    sites: Vec<WeightedSite>,
    max_weight: f64,
}

#[derive(Debug, Clone)]
struct Bucketed {
    origin: Point,
    side: f64,
    buckets: HashMap<Key, Bucket>,
    home: IdMap<Key>,
}

impl Bucketed {
    /// Side = bounding-box diagonal / ⌈√n⌉, falling back to 1 when the
    /// box is degenerate.
    fn sized_for(sites: &[WeightedSite]) -> Self {
        let mut origin = Point::new(0.0, 0.0);
        let mut side = 1.0;
        if let Some(first) = sites.first() {
            let (mut lo, mut hi) = (first.location, first.location);
            for s in sites {
                lo.x = lo.x.min(s.location.x);
                lo.y = lo.y.min(s.location.y);
                hi.x = hi.x.max(s.location.x);
                hi.y = hi.y.max(s.location.y);
            }
            origin = lo;
            let diag = dist(lo, hi);
            let cand = diag / (sites.len() as f64).sqrt().ceil();
            if cand.is_finite() && cand > 0.0 {
                side = cand;
            }
        }
        Self { origin, side, buckets: HashMap::new(), home: IdMap::default() }
    }

    fn key(&self, p: Point) -> Key {
        (((p.x - self.origin.x) / self.side).floor() as i64, ((p.y - self.origin.y) / self.side).floor() as i64)
    }

    /// Upper bound on δ(q, s) for every site in the bucket, padded to absorb
    /// rounding in the key computation.
    fn bound(&self, q: Point, key: Key, bucket: &Bucket) -> f64 {
        let x0 = self.origin.x + key.0 as f64 * self.side;
        let y0 = self.origin.y + key.1 as f64 * self.side;
        let dx = (q.x - x0).abs().max((q.x - (x0 + self.side)).abs());
        let dy = (q.y - y0).abs().max((q.y - (y0 + self.side)).abs());
        let far = (dx * dx + dy * dy).sqrt() + self.side * 1e-6;
        let slack = 1e-9 * (1.0 + far + bucket.max_weight.abs() + x0.abs() + y0.abs() + q.x.abs() + q.y.abs());
        bucket.max_weight + far + slack
    }

    fn insert(&mut self, s: WeightedSite) {
        let key = self.key(s.location);
        let b = self.buckets.entry(key).or_insert(Bucket { sites: Vec::new(), max_weight: f64::NEG_INFINITY });
        b.max_weight = b.max_weight.max(s.weight);
        b.sites.push(s);
        self.home.insert(s.site_id, key);
    }

    fn delete(&mut self, site_id: usize) -> Option<WeightedSite> {
        let key = self.home.remove(&site_id)?;
        let b = self.buckets.get_mut(&key).expect("home bucket exists");
        let p = b.sites.iter().position(|s| s.site_id == site_id).expect("site in home bucket");
        let removed = b.sites.swap_remove(p);
        if b.sites.is_empty() {
            self.buckets.remove(&key);
        } else if removed.weight >= b.max_weight {
            b.max_weight = b.sites.iter().map(|s| s.weight).fold(f64::NEG_INFINITY, f64::max);
        }
        Some(removed)
    }

    fn furthest(&self, q: Point) -> Option<(WeightedSite, f64)> {
        let mut order: Vec<(f64, &Bucket)> =
            self.buckets.iter().map(|(&k, b)| (self.bound(q, k, b), b)).collect();
        order.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(Ordering::Equal));
        let mut best: Option<(WeightedSite, f64)> = None;
        for (bound, bucket) in order {
            if let Some((_, bd)) = best {
                if bound < bd {
                    break;
                }
            }
            scan_best(q, bucket.sites.iter(), &mut best);
        }
        best
    }

    fn extract_above(&mut self, q: Point, threshold: f64) -> Vec<(f64, WeightedSite)> {
        let mut hits = Vec::new();
        for (&k, b) in &self.buckets {
            if self.bound(q, k, b) > threshold {
                for s in &b.sites {
                    let d = s.delta(q);
                    if d > threshold {
                        hits.push((d, *s));
                    }
                }
            }
        }
        for (_, s) in &hits {
            self.delete(s.site_id);
        }
        hits
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn site(id: usize, x: f64, y: f64, w: f64) -> WeightedSite {
        WeightedSite::new(id, Point::new(x, y), w)
    }

    fn both() -> [Backend; 2] {
        [Backend::BruteForce, Backend::Bucketed]
    }

    #[test]
    fn insert_and_duplicate() {
        for b in both() {
            let mut idx = FurthestIndex::new(b);
            idx.insert(site(0, 0.0, 0.0, 0.0)).unwrap();
            assert_eq!(idx.len(), 1);
            assert_eq!(idx.insert(site(0, 1.0, 0.0, 0.0)), Err(Error::DuplicateSite(0)));
        }
    }

    #[test]
    fn delete_cases() {
        for b in both() {
            let mut idx = FurthestIndex::new(b);
            assert_eq!(idx.delete(3), Err(Error::UnknownSite(3)));
            idx.insert(site(3, 1.0, 1.0, 0.0)).unwrap();
            idx.delete(3).unwrap();
            assert!(idx.is_empty());
            assert!(idx.furthest(Point::new(0.0, 0.0)).is_none());
        }
    }

    #[test]
    fn furthest_examples() {
        for b in both() {
            let mut idx = FurthestIndex::build(b, [site(0, 0.0, 0.0, 0.0), site(1, 5.0, 0.0, 0.0)]).unwrap();
            let (s, d) = idx.furthest(Point::new(1.0, 0.0)).unwrap();
            assert_eq!((s.site_id, d), (1, 4.0));

            let mut idx = FurthestIndex::build(b, [site(1, 5.0, 0.0, 0.0), site(0, 0.0, 0.0, 3.0)]).unwrap();
            let (s, d) = idx.furthest(Point::new(1.0, 0.0)).unwrap();
            assert_eq!((s.site_id, d), (0, 4.0));
        }
    }

    #[test]
    fn extract_example() {
        for b in both() {
            let mut idx =
                FurthestIndex::build(b, [site(0, 3.0, 0.0, 0.0), site(1, 5.0, 0.0, 0.0), site(2, 4.5, 0.0, 0.0)])
                    .unwrap();
            let got: Vec<usize> = idx.extract_above(Point::new(0.0, 0.0), 4.0).iter().map(|s| s.site_id).collect();
            assert_eq!(got, vec![1, 2]);
            assert!(idx.contains(0));
            assert_eq!(idx.len(), 1);
            assert!(idx.extract_above(Point::new(0.0, 0.0), 4.0).is_empty());
            let mut empty = FurthestIndex::new(b);
            assert!(empty.extract_above(Point::new(0.0, 0.0), -1e9).is_empty());
        }
    }

    #[test]
    fn threshold_is_strict() {
        for b in both() {
            let mut idx = FurthestIndex::build(b, [site(0, 2.0, 0.0, -1.0)]).unwrap();
            // δ = −1 + 2 = 1, not strictly above 1
            assert!(idx.pop_above(Point::new(0.0, 0.0), 1.0).is_none());
            assert_eq!(idx.pop_above(Point::new(0.0, 0.0), 0.999).unwrap().site_id, 0);
        }
    }

    fn random_site(rng: &mut ChaCha8Rng, id: usize) -> WeightedSite {
        site(id, rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0), -rng.random_range(0.1..3.0))
    }

    #[test]
    fn thousand_inserts_match_linear_scan() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sites: Vec<WeightedSite> = (0..1000).map(|i| random_site(&mut rng, i)).collect();
        for b in both() {
            let mut idx = FurthestIndex::new(b);
            for s in &sites {
                idx.insert(*s).unwrap();
            }
            assert_eq!(idx.len(), 1000);
            for _ in 0..50 {
                let q = Point::new(rng.random_range(-30.0..30.0), rng.random_range(-30.0..30.0));
                let oracle = sites
                    .iter()
                    .map(|s| (s.delta(q), s.site_id))
                    .min_by(|a, b| rank(a.0, a.1, b.0, b.1))
                    .unwrap();
                let (s, d) = idx.furthest(q).unwrap();
                assert_eq!((d, s.site_id), oracle);
            }
        }
    }

    #[test]
    fn interleaved_replay_matches_plain_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for b in both() {
            let mut idx = FurthestIndex::new(b);
            let mut live = std::collections::BTreeSet::new();
            for op in 0..500usize {
                if live.is_empty() || rng.random_bool(0.6) {
                    let s = random_site(&mut rng, op);
                    idx.insert(s).unwrap();
                    live.insert(op);
                } else {
                    let victim = *live.iter().nth(rng.random_range(0..live.len())).unwrap();
                    idx.delete(victim).unwrap();
                    live.remove(&victim);
                }
            }
            let got: Vec<usize> = idx.live_sites().iter().map(|s| s.site_id).collect();
            assert_eq!(got, live.into_iter().collect::<Vec<_>>());
        }
    }

    #[test]
    fn extract_matches_filter_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for round in 0..20 {
            let sites: Vec<WeightedSite> = (0..200).map(|i| random_site(&mut rng, i)).collect();
            let q = Point::new(rng.random_range(-25.0..25.0), rng.random_range(-25.0..25.0));
            let thr = rng.random_range(0.0..30.0);
            let mut expect: Vec<(f64, usize)> =
                sites.iter().map(|s| (s.delta(q), s.site_id)).filter(|(d, _)| *d > thr).collect();
            expect.sort_by(|a, b| rank(a.0, a.1, b.0, b.1));
            let expect: Vec<usize> = expect.into_iter().map(|(_, id)| id).collect();
            for b in both() {
                let mut idx = FurthestIndex::build(b, sites.iter().copied()).unwrap();
                let got: Vec<usize> = idx.extract_above(q, thr).iter().map(|s| s.site_id).collect();
                assert_eq!(got, expect, "round {round} backend {b:?}");
                assert_eq!(idx.len(), 200 - expect.len());
            }
        }
    }
}
