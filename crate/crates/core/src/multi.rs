//! Randomized approximation scheme for disk graphs with `t` distinct radii.
//!
//! For every nonempty subset of radius classes the solver repeatedly picks
//! an anchor disk of the smallest active radius, collects the active disks
//! intersecting it, and runs inner trials. Each inner trial samples two
//! disks `a_i`, `b_i` per class from that neighborhood, keeps the disks
//! intersecting every sample, splits each class by the vertical slab of
//! `a_i b_i` into the part above and below the segment, and solves the
//! resulting co-bipartite instance approximately.
//!
//! A cone argument around the best anchor gives a clique of size at least
//! `k*/6`, which sizes the sampling loops and always competes as a fallback.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::Rng;
use rayon::prelude::*;

use crate::cobip::{self, CobipInstance};
use crate::geometry::{cone_index, disks_intersect, in_slab_and_side, Disk, Point, SlabSide};
use crate::rng::TrialStream;
use crate::{check_eps, is_clique, Clique, Error, Result};

/// Radius subsets are enumerated exhaustively, so `t` stays small.
pub const MAX_RADIUS_CLASSES: usize = 16;

#[derive(Debug, Clone)]
pub struct MultiInstance {
    disks: Vec<Disk>,
    radius_classes: Vec<f64>,
    class_of: Vec<usize>,
    members: Vec<Vec<usize>>,
}

impl MultiInstance {
    /// Disk ids must equal their positions.
    pub fn new(disks: Vec<Disk>) -> Result<Self> {
        for (i, d) in disks.iter().enumerate() {
            if d.id != i {
                return Err(Error::UnknownId(d.id));
            }
            Disk::new(d.id, d.center, d.radius)?;
        }
        let mut radius_classes: Vec<f64> = disks.iter().map(|d| d.radius).collect();
        radius_classes.sort_by(f64::total_cmp);
        radius_classes.dedup();
        let class_of: Vec<usize> = disks
            .iter()
            .map(|d| radius_classes.binary_search_by(|r| r.total_cmp(&d.radius)).expect("radius is a class"))
            .collect();
        let mut members = vec![Vec::new(); radius_classes.len()];
        for (i, &c) in class_of.iter().enumerate() {
            members[c].push(i);
        }
        Ok(Self { disks, radius_classes, class_of, members })
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    pub fn disks(&self) -> &[Disk] {
        &self.disks
    }

    /// Number of distinct radii.
    pub fn t(&self) -> usize {
        self.radius_classes.len()
    }

    /// Distinct radii, ascending.
    pub fn radius_classes(&self) -> &[f64] {
        &self.radius_classes
    }

    pub fn class_of(&self, id: usize) -> usize {
        self.class_of[id]
    }

    /// Ids of class `c`, ascending.
    pub fn class_members(&self, c: usize) -> &[usize] {
        &self.members[c]
    }

    /// Copy restricted to `classes`, with ids renumbered densely. Returns the
    /// restricted instance and the original id of every new id.
    pub fn restricted_to(&self, classes: &[usize]) -> (MultiInstance, Vec<usize>) {
        let keep: BTreeSet<usize> = classes.iter().copied().collect();
        let original: Vec<usize> = (0..self.len()).filter(|&i| keep.contains(&self.class_of[i])).collect();
        let disks = original
            .iter()
            .enumerate()
            .map(|(new, &old)| Disk { id: new, ..self.disks[old] })
            .collect();
        (MultiInstance::new(disks).expect("subset of a valid instance"), original)
    }
}

#[derive(Debug, Clone)]
struct ClassGrid {
    radius: f64,
    side: f64,
    cells: HashMap<(i64, i64), Vec<(usize, Point)>>,
}

impl ClassGrid {
    fn key(&self, p: Point) -> (i64, i64) {
        ((p.x / self.side).floor() as i64, (p.y / self.side).floor() as i64)
    }
}

/// Per-class uniform grids over disk centers for circular range reporting.
#[derive(Debug, Clone)]
pub struct RangeIndex {
    anchor_radius: f64,
    classes: Vec<ClassGrid>,
}

impl RangeIndex {
    /// Grids for every class with bucket side `anchor_radius + r_i`.
    pub fn new(inst: &MultiInstance, anchor_radius: f64) -> Self {
        let classes = inst
            .radius_classes
            .iter()
            .enumerate()
            .map(|(c, &radius)| {
                let mut grid = ClassGrid { radius, side: anchor_radius + radius, cells: HashMap::new() };
                for &id in &inst.members[c] {
                    let p = inst.disks[id].center;
                    grid.cells.entry(grid.key(p)).or_default().push((id, p));
                }
                grid
            })
            .collect();
        Self { anchor_radius, classes }
    }

    /// Index anchored at the globally smallest radius.
    pub fn build(inst: &MultiInstance) -> Self {
        Self::new(inst, inst.radius_classes.first().copied().unwrap_or(1.0))
    }

    pub fn anchor_radius(&self) -> f64 {
        self.anchor_radius
    }

    /// Ids of class `class` with `|o − c| ≤ anchor_radius + r_class`,
    /// ascending.
    pub fn circular_range_report(&self, o: Point, class: usize) -> Result<Vec<usize>> {
        let grid = self.classes.get(class).ok_or(Error::UnknownClass(class))?;
        Ok(self.report_within(o, class, self.anchor_radius + grid.radius))
    }

    /// Ids of class `class` within closed distance `radius` of `o`.
    pub fn report_within(&self, o: Point, class: usize, radius: f64) -> Vec<usize> {
        let grid = &self.classes[class];
        let (x0, y0) = grid.key(Point::new(o.x - radius, o.y - radius));
        let (x1, y1) = grid.key(Point::new(o.x + radius, o.y + radius));
        let r2 = radius * radius;
        let mut out = Vec::new();
        for cx in x0..=x1 {
            for cy in y0..=y1 {
                if let Some(bucket) = grid.cells.get(&(cx, cy)) {
                    out.extend(
                        bucket.iter().filter(|(_, p)| crate::geometry::dist2(o, *p) <= r2).map(|&(id, _)| id),
                    );
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Lower estimate `k` of the clique number with `k*/6 ≤ k ≤ k*`, and a
/// clique of that size.
///
/// For each disk `o`, the disks of radius at least `r_o` meeting `o` whose
/// centers fall in one of the six π/3 cones at `o` pairwise intersect;
/// together with `o` they form a clique. The largest such set over all `o`
/// is returned.
pub fn constant_approx_size(inst: &MultiInstance) -> Result<(usize, Clique)> {
    if inst.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let idx = RangeIndex::build(inst);
    let mut best = Clique::empty();
    for o in &inst.disks {
        let c = inst.class_of[o.id];
        let mut cones: [Vec<usize>; 6] = Default::default();
        for class in c..inst.t() {
            for id in idx.report_within(o.center, class, o.radius + inst.radius_classes[class]) {
                cones[cone_index(o.center, inst.disks[id].center) as usize].push(id);
            }
        }
        for mut cone in cones {
            if cone.len() + 1 < best.len() {
                continue;
            }
            cone.push(o.id);
            let cand = Clique::new(cone);
            let members: Vec<&Disk> = cand.ids().iter().map(|&i| &inst.disks[i]).collect();
            if is_clique(&members) {
                best.keep_best(cand);
            }
        }
        best.keep_best(Clique::singleton(o.id));
    }
    Ok((best.len(), best))
}

/// Active disks meeting an anchor, by active class.
#[derive(Debug, Clone)]
pub struct Neighborhood {
    pub anchor: usize,
    /// Active class indices, ascending radius.
    pub classes: Vec<usize>,
    /// `D′_i` per entry of `classes`, ascending ids.
    pub by_class: Vec<Vec<usize>>,
}

impl Neighborhood {
    pub fn collect(inst: &MultiInstance, idx: &RangeIndex, anchor: usize, classes: &[usize]) -> Self {
        let center = inst.disks[anchor].center;
        let by_class = classes
            .iter()
            .map(|&c| idx.circular_range_report(center, c).expect("active class exists"))
            .collect();
        Self { anchor, classes: classes.to_vec(), by_class }
    }

    pub fn len(&self) -> usize {
        self.by_class.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> + '_ {
        self.by_class.iter().flatten().copied()
    }
}

/// Sampled pair per active class, `a` left of `b` (ties by id). `None` when
/// the class had no disk near the anchor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TrialSample {
    pub anchor: usize,
    pub pairs: Vec<Option<(usize, usize)>>,
}

impl TrialSample {
    /// Orders each pair so that `a` is left of `b`.
    pub fn new(inst: &MultiInstance, anchor: usize, pairs: Vec<Option<(usize, usize)>>) -> Self {
        let pairs = pairs.into_iter().map(|p| p.map(|(a, b)| left_first(inst, a, b))).collect();
        Self { anchor, pairs }
    }

    pub fn sampled(&self) -> impl Iterator<Item = usize> + '_ {
        self.pairs.iter().flatten().flat_map(|&(a, b)| [a, b])
    }
}

/// Orders two disks by center `x`, then by id.
fn left_first(inst: &MultiInstance, a: usize, b: usize) -> (usize, usize) {
    let (xa, xb) = (inst.disks[a].center.x, inst.disks[b].center.x);
    if xa < xb || (xa == xb && a <= b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Upper/lower slab split restricted to disks meeting every sample.
pub fn split_by_slabs(inst: &MultiInstance, hood: &Neighborhood, sample: &TrialSample) -> CobipInstance {
    let chosen: Vec<&Disk> = sample.sampled().map(|id| &inst.disks[id]).collect();
    let mut split = CobipInstance::default();
    for (slot, ids) in hood.by_class.iter().enumerate() {
        let Some((a, b)) = sample.pairs.get(slot).copied().flatten() else {
            continue;
        };
        let (ca, cb) = (inst.disks[a].center, inst.disks[b].center);
        for &id in ids {
            let d = &inst.disks[id];
            if !chosen.iter().all(|x| disks_intersect(d, x)) {
                continue;
            }
            match in_slab_and_side(d.center, ca, cb) {
                SlabSide::Above => split.left.push(*d),
                SlabSide::Below => split.right.push(*d),
                SlabSide::Outside => {}
            }
        }
    }
    split
}

/// One inner trial: slab split, then a `(1 − ε/2)`-approximate co-bipartite
/// clique. A result that is not a clique is discarded as empty.
pub fn run_trial(inst: &MultiInstance, hood: &Neighborhood, sample: &TrialSample, eps: f64) -> Result<Clique> {
    let split = split_by_slabs(inst, hood, sample);
    if split.is_empty() {
        return Ok(Clique::empty());
    }
    let clique = cobip::approx_clique(&split, eps / 2.0)?;
    let members: Vec<&Disk> = clique.ids().iter().map(|&i| &inst.disks[i]).collect();
    Ok(if is_clique(&members) { clique } else { Clique::empty() })
}

#[derive(Debug, Clone)]
pub struct MultiConfig {
    pub eps: f64,
    pub master_seed: u64,
    pub m1_override: Option<u64>,
    pub m2_override: Option<u64>,
    /// Independent repetitions of the whole scheme.
    pub rounds: u64,
    pub verify_output: bool,
}

impl Default for MultiConfig {
    fn default() -> Self {
        Self { eps: 0.3, master_seed: 0, m1_override: None, m2_override: None, rounds: 1, verify_output: true }
    }
}

fn saturating_ceil(v: f64) -> u64 {
    if v.is_nan() || v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v.ceil().max(1.0) as u64
    }
}

/// `⌈2·ln 2·n/(k·ε)⌉` anchor draws, where `k` is the per-class size
/// parameter (the global estimate divided by `t`).
pub fn default_m1(n: usize, k_param: f64, eps: f64) -> u64 {
    saturating_ceil(2.0 * std::f64::consts::LN_2 * n as f64 / (k_param * eps))
}

/// `⌈3·(144/ε²)^{2t}⌉` inner trials, saturating.
pub fn default_m2(eps: f64, t: usize) -> u64 {
    saturating_ceil(3.0 * (144.0 / (eps * eps)).powf(2.0 * t as f64))
}

#[derive(Debug, Clone, Default)]
pub struct FixedOutcome {
    pub clique: Clique,
    pub trials: u64,
    pub distinct: u64,
}

impl FixedOutcome {
    fn merge(mut self, other: FixedOutcome) -> Self {
        self.clique = Clique::best_of(self.clique, other.clique);
        self.trials = self.trials.saturating_add(other.trials);
        self.distinct = self.distinct.saturating_add(other.distinct);
        self
    }
}

/// Bitset view of one anchor's neighborhood `D′`, in class-major order.
/// A trial reduces to a few word operations; splits already solved for this
/// anchor are skipped, since the trial result depends on the split alone.
struct AnchorState {
    flat: Vec<usize>,
    slots: Vec<std::ops::Range<usize>>,
    words: usize,
    /// Row `p`: positions whose disk meets the disk at position `p`.
    near: Vec<u64>,
    solved: HashSet<Box<[u64]>>,
    common: Vec<u64>,
    key: Vec<u64>,
    pairs: Vec<(usize, usize, usize)>,
}

impl AnchorState {
    fn new(inst: &MultiInstance, hood: &Neighborhood) -> Self {
        let flat: Vec<usize> = hood.ids().collect();
        let mut slots = Vec::with_capacity(hood.by_class.len());
        let mut start = 0;
        for ids in &hood.by_class {
            slots.push(start..start + ids.len());
            start += ids.len();
        }
        let words = flat.len().div_ceil(64).max(1);
        let mut near = vec![0u64; flat.len() * words];
        for (p, &a) in flat.iter().enumerate() {
            for (q, &b) in flat.iter().enumerate() {
                if disks_intersect(&inst.disks[a], &inst.disks[b]) {
                    near[p * words + q / 64] |= 1 << (q % 64);
                }
            }
        }
        Self {
            flat,
            slots,
            words,
            near,
            solved: HashSet::new(),
            common: vec![0; words],
            key: vec![0; 2 * words],
            pairs: Vec::new(),
        }
    }

    /// Trial on sampled positions (per slot, relative to the slot start).
    /// Returns the split as left and right disks when it is new.
    fn split(&mut self, inst: &MultiInstance, local: &[Option<(usize, usize)>]) -> Option<CobipInstance> {
        let w = self.words;
        let (common, key) = (&mut self.common, &mut self.key);
        common.fill(u64::MAX);
        self.pairs.clear();
        for (k, (slot, p)) in self.slots.iter().zip(local).enumerate() {
            let Some((ia, ib)) = *p else { continue };
            let (a, b) = left_first(inst, self.flat[slot.start + ia], self.flat[slot.start + ib]);
            for pos in [slot.start + ia, slot.start + ib] {
                for (c, n) in common.iter_mut().zip(&self.near[pos * w..(pos + 1) * w]) {
                    *c &= n;
                }
            }
            self.pairs.push((k, a, b));
        }
        if self.pairs.is_empty() {
            return None;
        }
        key.fill(0);
        for &(k, a, b) in &self.pairs {
            let (ca, cb) = (inst.disks[a].center, inst.disks[b].center);
            for q in self.slots[k].clone().filter(|&q| common[q / 64] >> (q % 64) & 1 == 1) {
                match in_slab_and_side(inst.disks[self.flat[q]].center, ca, cb) {
                    SlabSide::Above => key[q / 64] |= 1 << (q % 64),
                    SlabSide::Below => key[w + q / 64] |= 1 << (q % 64),
                    SlabSide::Outside => {}
                }
            }
        }
        if key.iter().all(|&k| k == 0) || self.solved.contains(&key[..]) {
            return None;
        }
        self.solved.insert(key.clone().into_boxed_slice());
        let key = &self.key;
        let pick = |half: &[u64]| -> Vec<Disk> {
            (0..self.flat.len()).filter(|&q| half[q / 64] >> (q % 64) & 1 == 1).map(|q| inst.disks[self.flat[q]]).collect()
        };
        Some(CobipInstance::new(pick(&key[..w]), pick(&key[w..])))
    }
}

/// Scheme for one subset of radius classes. The smallest active radius
/// plays the anchor role. Anchor trial `a` reads stream
/// `(round, subset, a, 0)` and its inner trial `j` reads
/// `(round, subset, a, j + 1)`.
pub fn solve_fixed_radii(
    inst: &MultiInstance,
    active: &[usize],
    eps: f64,
    k_param: f64,
    cfg: &MultiConfig,
    round: u64,
    subset_rank: u64,
) -> Result<FixedOutcome> {
    check_eps(eps)?;
    let mut active = active.to_vec();
    active.sort_unstable();
    active.dedup();
    if let Some(&bad) = active.iter().find(|&&c| c >= inst.t()) {
        return Err(Error::UnknownClass(bad));
    }
    let mut out = FixedOutcome::default();
    let Some(&anchor_class) = active.first() else {
        return Ok(out);
    };
    let anchors = inst.class_members(anchor_class);
    let idx = RangeIndex::new(inst, inst.radius_classes[anchor_class]);
    let m1 = cfg.m1_override.unwrap_or_else(|| default_m1(inst.len(), k_param, eps));
    let m2 = cfg.m2_override.unwrap_or_else(|| default_m2(eps, active.len()));

    let mut states: HashMap<usize, AnchorState> = HashMap::new();
    for a in 0..m1 {
        let mut rng = TrialStream::derive(cfg.master_seed, &[round, subset_rank, a, 0]);
        let anchor = anchors[rng.random_range(0..anchors.len())];
        let state = states
            .entry(anchor)
            .or_insert_with(|| AnchorState::new(inst, &Neighborhood::collect(inst, &idx, anchor, &active)));
        out.clique.keep_best(Clique::singleton(anchor));
        let sizes: Vec<usize> = state.slots.iter().map(|s| s.len()).collect();
        let mut local = vec![None; sizes.len()];
        for j in 0..m2 {
            let mut rng = TrialStream::derive(cfg.master_seed, &[round, subset_rank, a, j + 1]);
            for (p, &m) in local.iter_mut().zip(&sizes) {
                *p = (m > 0).then(|| (rng.random_range(0..m), rng.random_range(0..m)));
            }
            out.trials = out.trials.saturating_add(1);
            let Some(split) = state.split(inst, &local) else { continue };
            out.distinct += 1;
            let clique = cobip::approx_clique(&split, eps / 2.0)?;
            let members: Vec<&Disk> = clique.ids().iter().map(|&i| &inst.disks[i]).collect();
            if is_clique(&members) {
                out.clique.keep_best(clique);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct MultiSolution {
    pub clique: Clique,
    pub k: usize,
    pub trials_executed: u64,
    pub distinct_trials: u64,
    pub subsets: usize,
}

/// Approximate maximum clique of a disk graph with few distinct radii.
pub fn solve_multi(inst: &MultiInstance, cfg: &MultiConfig) -> Result<MultiSolution> {
    check_eps(cfg.eps)?;
    if inst.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let t = inst.t();
    if t > MAX_RADIUS_CLASSES {
        return Err(Error::TooManyRadii { t, max: MAX_RADIUS_CLASSES });
    }
    let (k, fallback) = constant_approx_size(inst)?;
    let k_param = k as f64 / t as f64;
    let masks: Vec<(u64, u64)> =
        (0..cfg.rounds.max(1)).flat_map(|r| (1u64..1 << t).map(move |m| (r, m))).collect();

    let mut outcome = masks
        .par_iter()
        .map(|&(round, mask)| {
            let active: Vec<usize> = (0..t).filter(|c| mask >> c & 1 == 1).collect();
            solve_fixed_radii(inst, &active, cfg.eps / 2.0, k_param, cfg, round, mask)
        })
        .try_reduce(FixedOutcome::default, |a, b| Ok(a.merge(b)))?;
    outcome.clique.keep_best(fallback);

    if cfg.verify_output && !crate::is_clique_by_id(inst.disks(), outcome.clique.ids()) {
        return Err(Error::VerificationFailed);
    }
    Ok(MultiSolution {
        clique: outcome.clique,
        k,
        trials_executed: outcome.trials,
        distinct_trials: outcome.distinct,
        subsets: (1usize << t) - 1,
    })
}
