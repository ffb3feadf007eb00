//! Randomized (1−ε)-approximate maximum clique for unit disk graphs.
//!
//! Centers are bucketed into a grid of √2 cells (diameter 2). Every clique
//! lies in the 5×5 block (extension) around the cell of any of its members.
//! Per extension, a trial samples two centers `p₁, p₂`, builds the lens
//! `D(x, 2) ∩ D(p₂, 2)` where `x` is the point at distance 2 from `p₂` in the
//! direction of `p₁`, splits the centers inside the lens by the axis into two
//! cliques and solves the resulting co-bipartite instance with
//! [`cobip::approx_clique`] at `ε/2`. The best clique over all trials,
//! extensions and amplification rounds is returned.

use std::collections::{BTreeMap, HashSet};
use std::sync::Mutex;

use rand::Rng;
use rayon::prelude::*;

use crate::cobip::{self, CobipInstance};
use crate::geometry::{cell_of, in_lens, lens_side, CellCoord, Disk, Lens, Point, Side};
use crate::rng::TrialStream;
use crate::{check_eps, is_clique, Clique, Error, Result};

/// Denominator of the per-trial success bound `ε/1250`.
pub const TRIAL_SUCCESS_DENOMINATOR: f64 = 1250.0;

#[derive(Debug, Clone, Default)]
pub struct UnitInstance {
    pub points: Vec<Point>,
}

impl UnitInstance {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        for (id, p) in points.iter().enumerate() {
            if !p.is_admissible() {
                return Err(Error::InvalidDisk { id, reason: "coordinate not finite or out of range" });
            }
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn disks(&self) -> Vec<Disk> {
        self.points.iter().enumerate().map(|(i, &p)| Disk::unit(i, p)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct UnitConfig {
    pub eps: f64,
    pub delta: f64,
    pub master_seed: u64,
    pub trials_per_cell_override: Option<u64>,
    pub verify_output: bool,
}

impl Default for UnitConfig {
    fn default() -> Self {
        Self { eps: 0.2, delta: 0.05, master_seed: 0, trials_per_cell_override: None, verify_output: true }
    }
}

impl UnitConfig {
    /// `⌈1250·ln 2 / ε⌉` unless overridden: enough trials for a per-cell
    /// success probability of ½ when each trial succeeds with `ε/1250`.
    pub fn trials_per_cell(&self) -> u64 {
        self.trials_per_cell_override
            .unwrap_or_else(|| (TRIAL_SUCCESS_DENOMINATOR * std::f64::consts::LN_2 / self.eps).ceil() as u64)
    }

    /// `⌈log₂(1/δ)⌉`, at least one.
    pub fn rounds(&self) -> u64 {
        ((1.0 / self.delta).log2() - 1e-9).ceil().max(1.0) as u64
    }

    fn validate(&self) -> Result<()> {
        check_eps(self.eps)?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidDelta(self.delta));
        }
        Ok(())
    }
}

/// Nonempty cells of the √2 grid and their point lists.
#[derive(Debug, Clone, Default)]
pub struct CellPartition {
    cells: BTreeMap<CellCoord, Vec<usize>>,
}

impl CellPartition {
    pub fn build(points: &[Point]) -> Self {
        let mut cells: BTreeMap<CellCoord, Vec<usize>> = BTreeMap::new();
        for (i, &p) in points.iter().enumerate() {
            cells.entry(cell_of(p)).or_default().push(i);
        }
        Self { cells }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Nonempty cells in ascending coordinate order.
    pub fn cells(&self) -> impl Iterator<Item = (CellCoord, &[usize])> {
        self.cells.iter().map(|(c, v)| (*c, v.as_slice()))
    }

    pub fn cell(&self, c: CellCoord) -> &[usize] {
        self.cells.get(&c).map_or(&[], Vec::as_slice)
    }

    /// `P_C`: ids in the 5×5 block centered at `c`, ascending.
    pub fn extension(&self, c: CellCoord) -> Vec<usize> {
        let mut ids: Vec<usize> = (-2..=2)
            .flat_map(|dx| (-2..=2).map(move |dy| (dx, dy)))
            .flat_map(|(dx, dy)| self.cell(c.offset(dx, dy)).iter().copied())
            .collect();
        ids.sort_unstable();
        ids
    }
}

pub fn build_partition(inst: &UnitInstance) -> CellPartition {
    CellPartition::build(&inst.points)
}

/// Lens of a trial with samples `p₁`, `p₂`. The axis runs from `p₂` to the
/// point `x` at distance 2 towards `p₁`; coincident samples use direction
/// `(1, 0)`.
pub fn lens_for(p1: Point, p2: Point) -> Lens {
    let d = crate::geometry::dist(p1, p2);
    let x = if d == 0.0 {
        Point::new(p2.x + 2.0, p2.y)
    } else {
        Point::new(p2.x + 2.0 * (p1.x - p2.x) / d, p2.y + 2.0 * (p1.y - p2.y) / d)
    };
    Lens::new(p2, x, 2.0)
}

/// Splits the extension points inside `lens` into its left and right halves.
pub fn split_lens(extension: &[Disk], lens: &Lens) -> CobipInstance {
    let mut inst = CobipInstance::default();
    for d in extension.iter().filter(|d| in_lens(d.center, lens)) {
        match lens_side(d.center, lens) {
            Side::Left => inst.left.push(*d),
            Side::Right => inst.right.push(*d),
        }
    }
    inst
}

/// Deterministic part of a trial: samples `extension[i1]` and
/// `extension[i2]` are `p₁` and `p₂`. An output that fails pairwise
/// verification is discarded as empty.
pub fn lens_outcome(extension: &[Disk], i1: usize, i2: usize, eps: f64) -> Result<Clique> {
    let lens = lens_for(extension[i1].center, extension[i2].center);
    solve_halves(&split_lens(extension, &lens), eps)
}

fn solve_halves(inst: &CobipInstance, eps: f64) -> Result<Clique> {
    debug_assert!(half_is_clique(&inst.left) && half_is_clique(&inst.right));
    let clique = cobip::approx_clique(inst, eps / 2.0)?;
    let members: Vec<&Disk> = inst.disks().filter(|d| clique.ids().binary_search(&d.id).is_ok()).collect();
    Ok(if is_clique(&members) { clique } else { Clique::empty() })
}

/// Half-lens diameter check with room for rounding at the boundary.
fn half_is_clique(half: &[Disk]) -> bool {
    half.iter().enumerate().all(|(k, a)| {
        half[k + 1..].iter().all(|b| crate::geometry::dist2(a.center, b.center) <= 4.0 + 1e-9)
    })
}

/// One random trial on `extension` (unit disks with global ids).
pub fn lens_trial<R: Rng + ?Sized>(extension: &[Disk], eps: f64, rng: &mut R) -> Result<Clique> {
    check_eps(eps)?;
    if extension.is_empty() {
        return Ok(Clique::empty());
    }
    let i1 = rng.random_range(0..extension.len());
    let i2 = rng.random_range(0..extension.len());
    lens_outcome(extension, i1, i2, eps)
}

/// Largest single grid cell among `points`: a clique of size at least
/// `|points|/25` whenever the points span one extension.
pub fn maxcl_lower_bound(points: &[Point]) -> usize {
    CellPartition::build(points).cells().map(|(_, v)| v.len()).max().unwrap_or(0)
}

/// The disks of the most populated cell (ties to the smallest coordinate),
/// or a singleton when rounding breaks the cell's clique property.
pub fn largest_cell_group(extension: &[Disk]) -> Clique {
    let points: Vec<Point> = extension.iter().map(|d| d.center).collect();
    let part = CellPartition::build(&points);
    let Some((_, best)) = part.cells().max_by(|a, b| a.1.len().cmp(&b.1.len()).then(b.0.cmp(&a.0))) else {
        return Clique::empty();
    };
    let members: Vec<&Disk> = best.iter().map(|&i| &extension[i]).collect();
    if is_clique(&members) {
        Clique::new(members.iter().map(|d| d.id).collect())
    } else {
        Clique::singleton(members[0].id)
    }
}

/// Pairs already drawn in one extension. Re-running a pair reproduces the
/// same clique, so repeats are skipped.
enum Seen {
    Dense { m: usize, bits: Vec<u64>, count: usize },
    Sparse(HashSet<(usize, usize)>),
}

impl Seen {
    fn new(m: usize) -> Self {
        if m <= 2048 {
            Seen::Dense { m, bits: vec![0; (m * m).div_ceil(64)], count: 0 }
        } else {
            Seen::Sparse(HashSet::new())
        }
    }

    /// True when the pair is new.
    fn insert(&mut self, i1: usize, i2: usize) -> bool {
        match self {
            Seen::Dense { m, bits, count } => {
                let k = i1 * *m + i2;
                let (w, b) = (k / 64, 1u64 << (k % 64));
                let fresh = bits[w] & b == 0;
                bits[w] |= b;
                *count += fresh as usize;
                fresh
            }
            Seen::Sparse(set) => set.insert((i1, i2)),
        }
    }

    /// Every pair has been drawn; further draws cannot change the result.
    fn exhausted(&self) -> bool {
        match self {
            Seen::Dense { m, count, .. } => *count == *m * *m,
            Seen::Sparse(_) => false,
        }
    }
}

/// Half-lens splits already solved during one run, keyed by their id sets.
/// The trial result depends on the split alone, and different pairs or
/// overlapping extensions often produce the same split.
#[derive(Default)]
pub struct SplitMemo {
    seen: Mutex<HashSet<Box<[usize]>>>,
}

impl SplitMemo {
    /// True the first time a split is offered.
    fn first_visit(&self, inst: &CobipInstance) -> bool {
        let key: Box<[usize]> =
            inst.left.iter().map(|d| d.id).chain([usize::MAX]).chain(inst.right.iter().map(|d| d.id)).collect();
        self.seen.lock().unwrap_or_else(|e| e.into_inner()).insert(key)
    }

    pub fn len(&self) -> usize {
        self.seen.lock().unwrap_or_else(|e| e.into_inner()).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Default)]
pub struct CellOutcome {
    pub clique: Clique,
    pub trials: u64,
    /// Trials whose half-lens split had not been solved before.
    pub distinct: u64,
}

impl CellOutcome {
    fn merge(mut self, other: CellOutcome) -> Self {
        self.clique = Clique::best_of(self.clique, other.clique);
        self.trials += other.trials;
        self.distinct += other.distinct;
        self
    }
}

fn run_trials(
    extension: &[Disk],
    cfg: &UnitConfig,
    cell_index: u64,
    rounds: std::ops::Range<u64>,
    memo: &SplitMemo,
) -> Result<CellOutcome> {
    let mut out = CellOutcome::default();
    if extension.is_empty() {
        return Ok(out);
    }
    let m = extension.len();
    let per_round = cfg.trials_per_cell();
    let mut seen = Seen::new(m);
    for round in rounds {
        // Once every pair is seen the remaining trials are repeats; they are
        // counted without being drawn.
        if seen.exhausted() {
            out.trials += per_round;
            continue;
        }
        for trial in 0..per_round {
            if seen.exhausted() {
                out.trials += per_round - trial;
                break;
            }
            let mut rng = TrialStream::derive(cfg.master_seed, &[cell_index, round, trial]);
            let i1 = rng.random_range(0..m);
            let i2 = rng.random_range(0..m);
            out.trials += 1;
            if !seen.insert(i1, i2) {
                continue;
            }
            let split = split_lens(extension, &lens_for(extension[i1].center, extension[i2].center));
            if memo.first_visit(&split) {
                out.distinct += 1;
                out.clique.keep_best(solve_halves(&split, cfg.eps)?);
            }
        }
    }
    Ok(out)
}

/// Best clique over `trials_per_cell` trials of one amplification round.
/// Trial `j` reads the stream derived from `(cell_index, round, j)`.
pub fn solve_cell(extension: &[Disk], cfg: &UnitConfig, cell_index: u64, round: u64) -> Result<CellOutcome> {
    cfg.validate()?;
    run_trials(extension, cfg, cell_index, round..round + 1, &SplitMemo::default())
}

#[derive(Debug, Clone)]
pub struct UnitSolution {
    pub clique: Clique,
    pub trials_executed: u64,
    pub distinct_trials: u64,
    pub cells: usize,
    pub rounds: u64,
}

/// Approximate maximum clique of the unit disks centered at `inst.points`.
pub fn solve_unit(inst: &UnitInstance, cfg: &UnitConfig) -> Result<UnitSolution> {
    cfg.validate()?;
    if inst.is_empty() {
        return Err(Error::EmptyInstance);
    }
    let disks = inst.disks();
    let part = build_partition(inst);
    let cells: Vec<CellCoord> = part.cells().map(|(c, _)| c).collect();
    let rounds = cfg.rounds();
    let memo = SplitMemo::default();

    let outcome = cells
        .par_iter()
        .enumerate()
        .map(|(ci, &c)| {
            let ext: Vec<Disk> = part.extension(c).into_iter().map(|i| disks[i]).collect();
            let mut out = run_trials(&ext, cfg, ci as u64, 0..rounds, &memo)?;
            out.clique.keep_best(largest_cell_group(&ext));
            Ok(out)
        })
        .try_reduce(CellOutcome::default, |a, b| Ok(a.merge(b)))?;

    if cfg.verify_output && !crate::is_clique_by_id(&disks, outcome.clique.ids()) {
        return Err(Error::VerificationFailed);
    }
    Ok(UnitSolution {
        clique: outcome.clique,
        trials_executed: outcome.trials,
        distinct_trials: outcome.distinct,
        cells: cells.len(),
        rounds,
    })
}
