//! Seeded instance generators.

use clap::ValueEnum;
use diskclique::{Disk, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::instance::InstanceFile;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    UniformUnit,
    ClusteredUnit,
    MultiRadii,
}

#[derive(Debug, Clone)]
pub struct GenParams {
    pub kind: GenKind,
    pub n: usize,
    pub t: usize,
    /// Side of the square `[0, box]²` holding the centers.
    pub box_side: f64,
    pub seed: u64,
    /// Ratio of the radius ladder `r_i = rho^i`.
    pub rho: f64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { kind: GenKind::UniformUnit, n: 100, t: 1, box_side: 10.0, seed: 0, rho: 1.5 }
    }
}

pub fn generate(p: &GenParams) -> Result<InstanceFile, CliError> {
    if p.n == 0 {
        return Err(CliError::BadParams("n must be at least 1".into()));
    }
    if !(p.box_side.is_finite() && p.box_side > 0.0 && p.box_side <= 1e8) {
        return Err(CliError::BadParams(format!("box must be in (0, 1e8], got {}", p.box_side)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let uniform = |rng: &mut ChaCha8Rng| Point::new(rng.random_range(0.0..p.box_side), rng.random_range(0.0..p.box_side));

    let disks = match p.kind {
        GenKind::UniformUnit => (0..p.n).map(|i| Disk::unit(i, uniform(&mut rng))).collect(),
        GenKind::ClusteredUnit => {
            let centers: Vec<Point> = (0..p.n.div_ceil(10)).map(|_| uniform(&mut rng)).collect();
            (0..p.n)
                .map(|i| {
                    let c = centers[rng.random_range(0..centers.len())];
                    let angle = rng.random_range(0.0..std::f64::consts::TAU);
                    let dist = 1.5 * rng.random::<f64>().sqrt();
                    Disk::unit(i, Point::new(c.x + dist * angle.cos(), c.y + dist * angle.sin()))
                })
                .collect()
        }
        GenKind::MultiRadii => {
            if p.t == 0 || p.t > p.n {
                return Err(CliError::BadParams(format!("need 1 <= t <= n, got t={} n={}", p.t, p.n)));
            }
            if !(p.rho.is_finite() && p.rho > 1.0) {
                return Err(CliError::BadParams(format!("rho must exceed 1, got {}", p.rho)));
            }
            let ladder: Vec<f64> = (0..p.t).map(|i| p.rho.powi(i as i32)).collect();
            if ladder.last().is_some_and(|&r| r > diskclique::geometry::MAX_RADIUS) {
                return Err(CliError::BadParams("radius ladder overflows".into()));
            }
            // The first t disks take one radius each so every class is present.
            (0..p.n)
                .map(|i| {
                    let class = if i < p.t { i } else { rng.random_range(0..p.t) };
                    Disk { id: i, center: uniform(&mut rng), radius: ladder[class] }
                })
                .collect()
        }
    };
    Ok(InstanceFile::new(disks))
}
