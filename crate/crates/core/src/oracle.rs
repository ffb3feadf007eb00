//! Exact engines for small instances, used as ground truth.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::cobip::{CobipInstance, Matching, VertexCover};
use crate::geometry::{disks_intersect, Disk};
use crate::{Clique, Error, Result};

/// Largest instance the exact clique oracle accepts.
pub const ORACLE_LIMIT: usize = 64;

/// Explicit intersection matrix as one bitmask row per disk.
#[derive(Debug, Clone)]
pub struct AdjacencyOracle {
    rows: Vec<u64>,
}

impl AdjacencyOracle {
    pub fn new(disks: &[Disk]) -> Result<Self> {
        if disks.len() > ORACLE_LIMIT {
            return Err(Error::TooLarge { n: disks.len(), max: ORACLE_LIMIT });
        }
        let rows = disks
            .iter()
            .map(|a| {
                disks
                    .iter()
                    .enumerate()
                    .filter(|(_, b)| disks_intersect(a, b))
                    .fold(0u64, |acc, (j, _)| acc | (1 << j))
            })
            .collect();
        Ok(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Neighbors excluding `i` itself.
    fn neighbors(&self, i: usize) -> u64 {
        self.rows[i] & !(1 << i)
    }

    /// Size of the largest clique inside `cand`, or any value `>= cap` once
    /// a clique of size `cap` is found.
    fn max_clique_within(&self, cand: u64, cap: usize) -> usize {
        let mut best = 0;
        self.expand(0, cand, 0, cap, &mut best);
        best
    }

    /// Bron–Kerbosch with a max-degree pivot and size pruning.
    fn expand(&self, size: usize, p: u64, x: u64, cap: usize, best: &mut usize) {
        if p == 0 {
            if x == 0 || size > *best {
                *best = (*best).max(size);
            }
            return;
        }
        if size + p.count_ones() as usize <= *best || *best >= cap {
            return;
        }
        let pivot = bits(p | x).max_by_key(|&u| (p & self.neighbors(u)).count_ones()).expect("p | x nonempty");
        let (mut p, mut x) = (p, x);
        for v in bits(p & !self.neighbors(pivot)) {
            let nv = self.neighbors(v);
            self.expand(size + 1, p & nv, x & nv, cap, best);
            if *best >= cap {
                return;
            }
            p &= !(1 << v);
            x |= 1 << v;
        }
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Maximum clique; among maximum cliques the lexicographically smallest id
/// set.
pub fn exact_max_clique(disks: &[Disk]) -> Result<Clique> {
    let mut order: Vec<&Disk> = disks.iter().collect();
    order.sort_by_key(|d| d.id);
    let sorted: Vec<Disk> = order.into_iter().copied().collect();
    let adj = AdjacencyOracle::new(&sorted)?;
    let n = sorted.len();
    if n == 0 {
        return Ok(Clique::empty());
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let omega = adj.max_clique_within(all, usize::MAX);

    // Greedy over ascending ids: keep v when a maximum clique still extends
    // the prefix through v.
    let mut chosen = Vec::with_capacity(omega);
    let mut cand = all;
    for v in 0..n {
        if chosen.len() == omega {
            break;
        }
        if cand >> v & 1 == 0 {
            continue;
        }
        let later = cand & adj.neighbors(v) & !((2u64 << v).wrapping_sub(1));
        let need = omega - chosen.len() - 1;
        if adj.max_clique_within(later, need) >= need {
            chosen.push(v);
            cand = later;
        } else {
            cand &= !(1 << v);
        }
    }
    debug_assert_eq!(chosen.len(), omega);
    Ok(Clique::new(chosen.into_iter().map(|p| sorted[p].id).collect()))
}

/// Size of a maximum clique.
pub fn exact_clique_number(disks: &[Disk]) -> Result<usize> {
    let adj = AdjacencyOracle::new(disks)?;
    let n = disks.len();
    if n == 0 {
        return Ok(0);
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    Ok(adj.max_clique_within(all, usize::MAX))
}

/// Maximum matching of the complement graph by Hopcroft–Karp over explicit
/// adjacency lists, run to completion.
pub fn exact_max_matching(inst: &CobipInstance) -> Matching {
    const NONE: usize = usize::MAX;
    let (nl, nr) = (inst.left.len(), inst.right.len());
    let adj: Vec<Vec<usize>> = inst
        .left
        .iter()
        .map(|x| (0..nr).filter(|&y| CobipInstance::is_complement_edge(x, &inst.right[y])).collect())
        .collect();
    let mut mate_l = vec![NONE; nl];
    let mut mate_r = vec![NONE; nr];
    let mut dist = vec![usize::MAX; nl];

    loop {
        let mut queue = VecDeque::new();
        for x in 0..nl {
            if mate_l[x] == NONE {
                dist[x] = 0;
                queue.push_back(x);
            } else {
                dist[x] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                match mate_r[y] {
                    NONE => found = true,
                    x2 if dist[x2] == usize::MAX => {
                        dist[x2] = dist[x] + 1;
                        queue.push_back(x2);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            break;
        }
        for x in 0..nl {
            if mate_l[x] == NONE {
                augment(x, &adj, &mut mate_l, &mut mate_r, &mut dist);
            }
        }
    }

    fn augment(x: usize, adj: &[Vec<usize>], ml: &mut [usize], mr: &mut [usize], dist: &mut [usize]) -> bool {
        for &y in &adj[x] {
            let next = mr[y];
            if next == NONE || (dist[next] == dist[x] + 1 && augment(next, adj, ml, mr, dist)) {
                ml[x] = y;
                mr[y] = x;
                return true;
            }
        }
        dist[x] = usize::MAX;
        false
    }

    Matching::from_pairs(
        (0..nl).filter(|&x| mate_l[x] != NONE).map(|x| (inst.left[x].id, inst.right[mate_l[x]].id)).collect(),
    )
}

/// Whether the disks named by `ids` pairwise intersect. Ids index `disks`
/// by position; a repeated id is not a set and fails.
pub fn verify_clique(disks: &[Disk], ids: &[usize]) -> Result<bool> {
    if let Some(&bad) = ids.iter().find(|&&id| id >= disks.len()) {
        return Err(Error::UnknownId(bad));
    }
    let distinct: BTreeSet<usize> = ids.iter().copied().collect();
    if distinct.len() != ids.len() {
        return Ok(false);
    }
    Ok(crate::is_clique_by_id(disks, ids))
}

/// Whether every complement edge has an endpoint in `cover`. Explicit
/// `O(|X|·|Y|)` enumeration.
pub fn verify_vertex_cover(inst: &CobipInstance, cover: &VertexCover) -> bool {
    let covered: HashMap<usize, ()> = cover.cover_ids.iter().map(|&id| (id, ())).collect();
    inst.left.iter().all(|x| {
        covered.contains_key(&x.id)
            || inst
                .right
                .iter()
                .all(|y| covered.contains_key(&y.id) || !CobipInstance::is_complement_edge(x, y))
    })
}
