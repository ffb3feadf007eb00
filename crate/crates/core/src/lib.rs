//! Approximate maximum cliques in disk graphs.
//!
//! - [`cobip`]: near-linear (1−ε)-approximate clique in a co-bipartite disk
//!   graph, through a phase-bounded Hopcroft–Karp matching on the implicit
//!   complement graph and a layered vertex cover.
//! - [`unit`]: randomized (1−ε)-approximation for unit disk graphs using a
//!   √2 grid, 5×5 extensions and two-center lens sampling.
//! - [`multi`]: randomized approximation scheme for disk graphs with `t`
//!   distinct radii (anchor sampling, slab split, radius-subset loop).
//! - [`oracle`]: exact solvers and validity checks for small instances.
//!
//! Every solver returns a [`Clique`] whose ids index the input disks.

pub mod cobip;
pub mod furthest;
pub mod geometry;
pub mod multi;
pub mod oracle;
pub mod rng;
pub mod unit;

use std::cmp::Ordering;

use thiserror::Error;

pub use geometry::{Disk, Point};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(f64),

    #[error("delta must lie in (0, 1), got {0}")]
    InvalidDelta(f64),

    #[error("instance is empty")]
    EmptyInstance,

    #[error("instance has {n} disks, oracle limit is {max}")]
    TooLarge { n: usize, max: usize },

    #[error("unknown disk id {0}")]
    UnknownId(usize),

    #[error("unknown radius class {0}")]
    UnknownClass(usize),

    #[error("site {0} is already live")]
    DuplicateSite(usize),

    #[error("site {0} is not live")]
    UnknownSite(usize),

    #[error("disk {id}: {reason}")]
    InvalidDisk { id: usize, reason: &'static str },

    #[error("{t} distinct radii exceed the supported maximum of {max}")]
    TooManyRadii { t: usize, max: usize },

    #[error("returned id set failed clique verification")]
    VerificationFailed,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(eps))
    }
}

/// A set of disk ids, kept sorted ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Clique {
    ids: Vec<usize>,
}

impl Clique {
    pub fn new(mut ids: Vec<usize>) -> Self {
        ids.sort_unstable();
        ids.dedup();
        Self { ids }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn singleton(id: usize) -> Self {
        Self { ids: vec![id] }
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn into_ids(self) -> Vec<usize> {
        self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Preference order used by every reduction: larger first, then the
    /// lexicographically smaller id list. `Less` means `self` is preferred.
    pub fn preference(&self, other: &Self) -> Ordering {
        other.ids.len().cmp(&self.ids.len()).then_with(|| self.ids.cmp(&other.ids))
    }

    /// Keeps the preferred of `self` and `other`.
    pub fn keep_best(&mut self, other: Clique) {
        if other.preference(self) == Ordering::Less {
            *self = other;
        }
    }

    /// Reduction that does not depend on the order of its inputs.
    pub fn best_of(a: Clique, b: Clique) -> Clique {
        if b.preference(&a) == Ordering::Less {
            b
        } else {
            a
        }
    }
}

/// Pairwise intersection check over disks looked up by position `id`.
pub(crate) fn is_clique_by_id(disks: &[Disk], ids: &[usize]) -> bool {
    ids.iter().enumerate().all(|(k, &a)| {
        ids[k + 1..].iter().all(|&b| geometry::disks_intersect(&disks[a], &disks[b]))
    })
}

/// Pairwise intersection check over a slice of disks.
pub(crate) fn is_clique(disks: &[&Disk]) -> bool {
    disks
        .iter()
        .enumerate()
        .all(|(k, a)| disks[k + 1..].iter().all(|b| geometry::disks_intersect(a, b)))
}

/// `⌈(1−eps)·opt⌉`, guarded against representation error in `1−eps`.
pub fn approx_target(opt: usize, eps: f64) -> usize {
    ((1.0 - eps) * opt as f64 - 1e-9).ceil().max(0.0) as usize
}
