//! Approximate maximum clique in a co-bipartite disk graph.
//!
//! The instance is two disk lists `left` and `right`, each assumed pairwise
//! intersecting. A clique of the union is an independent set of the
//! complement graph, which is bipartite with an edge `(x, y)` exactly when
//! `|c_x − c_y| > r_x + r_y`. The solver:
//!
//! 1. runs `⌈1/ε⌉` Hopcroft–Karp phases on the complement graph without
//!    materializing its edges. Neighbors of a disk `D(c, r)` are exactly the
//!    sites `s` of a [`FurthestIndex`] with weight `−r_s` and
//!    `δ(c, s) > r`.
//! 2. layers the graph once more by alternating BFS and cuts the layering
//!    at a sparse right layer, which yields a vertex cover of size at most
//!    `(1 + ε)·|M|`.
//! 3. returns the complement of that cover.

use std::collections::BTreeMap;

use crate::furthest::{Backend, FurthestIndex, WeightedSite};
use crate::geometry::{disks_intersect, Disk};
use crate::{check_eps, Clique, Result};

const NONE: usize = usize::MAX;

/// Sites above this count use the bucketed index under [`IndexChoice::Auto`].
pub const AUTO_BUCKET_THRESHOLD: usize = 512;

#[derive(Debug, Clone, Default)]
pub struct CobipInstance {
    pub left: Vec<Disk>,
    pub right: Vec<Disk>,
}

impl CobipInstance {
    pub fn new(left: Vec<Disk>, right: Vec<Disk>) -> Self {
        Self { left, right }
    }

    pub fn len(&self) -> usize {
        self.left.len() + self.right.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All disks, left side first.
    pub fn disks(&self) -> impl Iterator<Item = &Disk> {
        self.left.iter().chain(self.right.iter())
    }

    /// Edge of the bipartite complement graph.
    pub fn is_complement_edge(x: &Disk, y: &Disk) -> bool {
        !disks_intersect(x, y)
    }

    /// Whether both sides are pairwise intersecting. O(n²).
    pub fn sides_are_cliques(&self) -> bool {
        let side_ok = |side: &[Disk]| crate::is_clique(&side.iter().collect::<Vec<_>>());
        side_ok(&self.left) && side_ok(&self.right)
    }
}

/// Matching of the complement graph as `(left id, right id)` pairs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    pairs: Vec<(usize, usize)>,
    left_partner: BTreeMap<usize, usize>,
    right_partner: BTreeMap<usize, usize>,
}

impl Matching {
    pub fn from_pairs(mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        let left_partner = pairs.iter().copied().collect();
        let right_partner = pairs.iter().map(|&(l, r)| (r, l)).collect();
        Self { pairs, left_partner, right_partner }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn partner_of_left(&self, id: usize) -> Option<usize> {
        self.left_partner.get(&id).copied()
    }

    pub fn partner_of_right(&self, id: usize) -> Option<usize> {
        self.right_partner.get(&id).copied()
    }

    /// No id repeats and every pair is a complement edge of `inst`.
    pub fn is_valid_for(&self, inst: &CobipInstance) -> bool {
        if self.left_partner.len() != self.pairs.len() || self.right_partner.len() != self.pairs.len() {
            return false;
        }
        let left: BTreeMap<usize, &Disk> = inst.left.iter().map(|d| (d.id, d)).collect();
        let right: BTreeMap<usize, &Disk> = inst.right.iter().map(|d| (d.id, d)).collect();
        self.pairs.iter().all(|(l, r)| match (left.get(l), right.get(r)) {
            (Some(x), Some(y)) => CobipInstance::is_complement_edge(x, y),
            _ => false,
        })
    }
}

/// Vertex cover of the complement graph, as disk ids from both sides.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VertexCover {
    pub cover_ids: Vec<usize>,
}

impl VertexCover {
    pub fn len(&self) -> usize {
        self.cover_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cover_ids.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.cover_ids.binary_search(&id).is_ok()
    }
}

/// Alternating BFS layering. Entries are side-local positions.
#[derive(Debug, Clone, Default)]
pub struct BfsLayers {
    /// `X₀, X₁, …` — `X₀` holds the unmatched left nodes.
    pub x_layers: Vec<Vec<usize>>,
    /// `Y₀, Y₁, …` — `Y_j` is reached from `X_j` over non-matching edges.
    pub y_layers: Vec<Vec<usize>>,
    pub layer_of_x: Vec<Option<usize>>,
    pub layer_of_y: Vec<Option<usize>>,
    /// Some right layer holds an unmatched node, i.e. an augmenting path
    /// exists.
    pub free_right_reached: bool,
}

impl BfsLayers {
    /// Left nodes in no layer (`X′`).
    pub fn residual_left(&self) -> Vec<usize> {
        (0..self.layer_of_x.len()).filter(|&x| self.layer_of_x[x].is_none()).collect()
    }

    /// Right nodes in no layer (`Y′`).
    pub fn residual_right(&self) -> Vec<usize> {
        (0..self.layer_of_y.len()).filter(|&y| self.layer_of_y[y].is_none()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexChoice {
    /// Brute force for small sides, bucketed above [`AUTO_BUCKET_THRESHOLD`].
    #[default]
    Auto,
    Fixed(Backend),
}

impl IndexChoice {
    fn backend_for(self, n: usize) -> Backend {
        match self {
            IndexChoice::Fixed(b) => b,
            IndexChoice::Auto if n > AUTO_BUCKET_THRESHOLD => Backend::Bucketed,
            IndexChoice::Auto => Backend::BruteForce,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CobipOptions {
    pub index: IndexChoice,
}

#[derive(Debug, Clone)]
pub struct MatchingRun {
    pub matching: Matching,
    /// Phases started, including a final one that found no augmenting path.
    pub phases: usize,
    /// Proven maximum: a phase found no augmenting path.
    pub maximum: bool,
    /// Furthest-index operations per phase.
    pub ops_per_phase: Vec<u64>,
}

#[derive(Debug, Clone)]
pub struct CoverReport {
    pub cover: VertexCover,
    pub matching: Matching,
    pub clique: Clique,
    pub phases: usize,
    pub maximum: bool,
    pub ops_per_phase: Vec<u64>,
    /// The final full layering.
    pub layers: BfsLayers,
    /// Last right layer folded into the cover; `None` when the matching is
    /// maximum and the whole layering is used.
    pub cut: Option<usize>,
    /// Matching edges with both endpoints in the cover.
    pub double_covered: usize,
}

/// `⌈1/ε⌉`.
pub fn phase_count(eps: f64) -> Result<usize> {
    check_eps(eps)?;
    Ok((1.0 / eps - 1e-9).ceil().max(1.0) as usize)
}

struct Engine<'a> {
    inst: &'a CobipInstance,
    index: IndexChoice,
    mate_left: Vec<usize>,
    mate_right: Vec<usize>,
}

impl<'a> Engine<'a> {
    fn new(inst: &'a CobipInstance, opts: &CobipOptions) -> Self {
        Self {
            inst,
            index: opts.index,
            mate_left: vec![NONE; inst.left.len()],
            mate_right: vec![NONE; inst.right.len()],
        }
    }

    fn site(pos: usize, d: &Disk) -> WeightedSite {
        WeightedSite::new(pos, d.center, -d.radius)
    }

    fn build(&self, disks: &[Disk], positions: impl Iterator<Item = usize>, hint: usize) -> FurthestIndex {
        let sites = positions.map(|p| Self::site(p, &disks[p]));
        FurthestIndex::build(self.index.backend_for(hint), sites).expect("positions are distinct")
    }

    /// Alternating BFS from the unmatched left nodes. With `truncate` the
    /// search stops after the first right layer holding an unmatched node.
    fn layer(&self, truncate: bool, ops: &mut u64) -> BfsLayers {
        let (nl, nr) = (self.inst.left.len(), self.inst.right.len());
        let mut layers = BfsLayers {
            layer_of_x: vec![None; nl],
            layer_of_y: vec![None; nr],
            ..Default::default()
        };
        let mut idx = self.build(&self.inst.right, 0..nr, nr);
        let mut frontier: Vec<usize> = (0..nl).filter(|&x| self.mate_left[x] == NONE).collect();
        let mut j = 0;
        while !frontier.is_empty() {
            for &x in &frontier {
                layers.layer_of_x[x] = Some(j);
            }
            let mut ys = Vec::new();
            for &x in &frontier {
                let d = &self.inst.left[x];
                for s in idx.extract_above(d.center, d.radius) {
                    layers.layer_of_y[s.site_id] = Some(j);
                    ys.push(s.site_id);
                }
            }
            layers.x_layers.push(std::mem::take(&mut frontier));
            if ys.is_empty() {
                break;
            }
            ys.sort_unstable();
            let free = ys.iter().any(|&y| self.mate_right[y] == NONE);
            frontier = ys.iter().map(|&y| self.mate_right[y]).filter(|&x| x != NONE).collect();
            frontier.sort_unstable();
            layers.y_layers.push(ys);
            if free {
                layers.free_right_reached = true;
                if truncate {
                    break;
                }
            }
            j += 1;
        }
        *ops += idx.op_count();
        layers
    }

    /// One Hopcroft–Karp phase. Returns false when no augmenting path
    /// exists.
    fn phase(&mut self, ops: &mut u64) -> bool {
        let layers = self.layer(true, ops);
        if !layers.free_right_reached {
            return false;
        }
        let k = layers.y_layers.len() - 1;
        let mut per_layer: Vec<FurthestIndex> = layers
            .x_layers
            .iter()
            .map(|xs| self.build(&self.inst.left, xs.iter().copied(), xs.len()))
            .collect();

        let starts: Vec<usize> =
            layers.y_layers[k].iter().copied().filter(|&y| self.mate_right[y] == NONE).collect();
        let mut ys: Vec<usize> = Vec::with_capacity(k + 1);
        let mut xs: Vec<usize> = Vec::with_capacity(k + 1);
        let mut augmented = 0usize;
        for y0 in starts {
            ys.clear();
            xs.clear();
            ys.push(y0);
            // ys[d] lies in Y_{k−d}; its predecessor must come from X_{k−d}.
            loop {
                let depth = xs.len();
                let layer = k - depth;
                let y = &self.inst.right[ys[depth]];
                match per_layer[layer].pop_above(y.center, y.radius) {
                    Some(s) => {
                        xs.push(s.site_id);
                        if layer == 0 {
                            for (&x, &y) in xs.iter().zip(ys.iter()) {
                                self.mate_left[x] = y;
                                self.mate_right[y] = x;
                            }
                            augmented += 1;
                            break;
                        }
                        ys.push(self.mate_left[s.site_id]);
                    }
                    None => {
                        if depth == 0 {
                            break;
                        }
                        ys.pop();
                        xs.pop();
                    }
                }
            }
        }
        *ops += per_layer.iter().map(FurthestIndex::op_count).sum::<u64>();
        debug_assert!(augmented > 0, "a reachable free right node admits an augmenting path");
        true
    }

    fn matching(&self) -> Matching {
        Matching::from_pairs(
            (0..self.inst.left.len())
                .filter(|&x| self.mate_left[x] != NONE)
                .map(|x| (self.inst.left[x].id, self.inst.right[self.mate_left[x]].id))
                .collect(),
        )
    }

    fn matched(&self) -> usize {
        self.mate_left.iter().filter(|&&m| m != NONE).count()
    }

    fn run_phases(&mut self, eps: f64) -> Result<(usize, bool, Vec<u64>)> {
        let limit = phase_count(eps)?;
        let mut phases = 0;
        let mut maximum = false;
        let mut ops = Vec::new();
        while phases < limit {
            phases += 1;
            let mut count = 0;
            let grew = self.phase(&mut count);
            ops.push(count);
            if !grew {
                maximum = true;
                break;
            }
        }
        Ok((phases, maximum, ops))
    }
}

/// `(1−ε)`-approximate maximum matching of the complement graph.
pub fn approx_matching(inst: &CobipInstance, eps: f64) -> Result<Matching> {
    Ok(approx_matching_run(inst, eps, &CobipOptions::default())?.matching)
}

pub fn approx_matching_run(inst: &CobipInstance, eps: f64, opts: &CobipOptions) -> Result<MatchingRun> {
    let mut engine = Engine::new(inst, opts);
    let (phases, maximum, ops_per_phase) = engine.run_phases(eps)?;
    Ok(MatchingRun { matching: engine.matching(), phases, maximum, ops_per_phase })
}

/// Vertex cover of the complement graph with `|K| ≤ (1+ε)·|M*|`, together
/// with the matching it was built from.
pub fn approx_vertex_cover(inst: &CobipInstance, eps: f64) -> Result<(VertexCover, Matching)> {
    let r = approx_cover_report(inst, eps, &CobipOptions::default())?;
    Ok((r.cover, r.matching))
}

/// `(1−ε)`-approximate maximum clique of `left ∪ right`.
pub fn approx_clique(inst: &CobipInstance, eps: f64) -> Result<Clique> {
    Ok(approx_cover_report(inst, eps, &CobipOptions::default())?.clique)
}

pub fn approx_cover_report(inst: &CobipInstance, eps: f64, opts: &CobipOptions) -> Result<CoverReport> {
    let mut engine = Engine::new(inst, opts);
    let (phases, mut maximum, ops_per_phase) = engine.run_phases(eps)?;
    let ell = phase_count(eps)?;
    let mut scratch = 0;
    let layers = engine.layer(false, &mut scratch);
    maximum |= !layers.free_right_reached;
    let m = engine.matched();

    // Cut after right layer `i`: K = (X \ X₀..X_i) ∪ (Y₀..Y_i).
    let cut = if !layers.free_right_reached {
        None
    } else {
        let size = |i: usize| layers.y_layers.get(i).map_or(0, Vec::len);
        debug_assert!(
            layers.y_layers.iter().take(ell).flatten().all(|&y| engine.mate_right[y] != NONE),
            "after ⌈1/ε⌉ phases the first ⌈1/ε⌉ right layers are fully matched"
        );
        let first_sparse = (0..ell).find(|&i| size(i) * ell <= m);
        Some(first_sparse.unwrap_or_else(|| (0..ell).min_by_key(|&i| size(i)).unwrap_or(0)))
    };
    let within = |layer: Option<usize>| match (layer, cut) {
        (Some(l), Some(i)) => l <= i,
        (Some(_), None) => true,
        (None, _) => false,
    };

    let mut cover_ids = Vec::new();
    let mut clique_ids = Vec::new();
    let mut in_cover_left = vec![false; inst.left.len()];
    for (x, d) in inst.left.iter().enumerate() {
        if within(layers.layer_of_x[x]) {
            clique_ids.push(d.id);
        } else {
            cover_ids.push(d.id);
            in_cover_left[x] = true;
        }
    }
    let mut in_cover_right = vec![false; inst.right.len()];
    for (y, d) in inst.right.iter().enumerate() {
        if within(layers.layer_of_y[y]) {
            cover_ids.push(d.id);
            in_cover_right[y] = true;
        } else {
            clique_ids.push(d.id);
        }
    }
    let double_covered = (0..inst.left.len())
        .filter(|&x| engine.mate_left[x] != NONE && in_cover_left[x] && in_cover_right[engine.mate_left[x]])
        .count();
    cover_ids.sort_unstable();

    Ok(CoverReport {
        cover: VertexCover { cover_ids },
        matching: engine.matching(),
        clique: Clique::new(clique_ids),
        phases,
        maximum,
        ops_per_phase,
        layers,
        cut,
        double_covered,
    })
}
