#![allow(dead_code)]

use diskclique::cobip::CobipInstance;
use diskclique::{Disk, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut ChaCha8Rng, side: f64) -> Point {
    Point::new(rng.random_range(0.0..side), rng.random_range(0.0..side))
}

/// Two cliques around hubs `sep` apart. Centers sit within `rho` of their
/// hub and radii are at least `rho`, so each side is a clique.
pub fn cobip_instance(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> CobipInstance {
    let rho = rng.random_range(0.3..1.5);
    let sep = rng.random_range(rho..4.0 * rho + 2.5);
    let mut side = |hub: Point, count: usize, first_id: usize| -> Vec<Disk> {
        (0..count)
            .map(|k| {
                let angle = rng.random_range(0.0..std::f64::consts::TAU);
                let len = rho * rng.random::<f64>().sqrt();
                let r = rng.random_range(rho..rho + 1.0);
                Disk::new(first_id + k, Point::new(hub.x + len * angle.cos(), hub.y + len * angle.sin()), r).unwrap()
            })
            .collect()
    };
    let left = side(Point::new(0.0, 0.0), nx, 0);
    let right = side(Point::new(sep, 0.0), ny, nx);
    CobipInstance::new(left, right)
}

pub fn unit_disks(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<Disk> {
    (0..n).map(|i| Disk::unit(i, point(rng, side))).collect()
}

/// Radii `1.5^class`; the first `t` disks cover every class.
pub fn multi_disks(rng: &mut ChaCha8Rng, n: usize, t: usize, side: f64) -> Vec<Disk> {
    (0..n)
        .map(|i| {
            let class = if i < t { i } else { rng.random_range(0..t) };
            Disk::new(i, point(rng, side), 1.5f64.powi(class as i32)).unwrap()
        })
        .collect()
}

pub fn pairwise_intersect(disks: &[Disk]) -> bool {
    disks.iter().enumerate().all(|(k, a)| disks[k + 1..].iter().all(|b| diskclique::geometry::disks_intersect(a, b)))
}
