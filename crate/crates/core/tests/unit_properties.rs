mod common;

use diskclique::geometry::{dist, in_lens, lens_side, Disk, Point, Side};
use diskclique::oracle::{exact_max_clique, verify_clique};
use diskclique::unit::{self, CellPartition, UnitConfig, UnitInstance};
use diskclique::approx_target;
use proptest::prelude::*;
use rand::Rng;

use common::{rng, unit_disks};

fn pts() -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec((0.0f64..7.0, 0.0f64..7.0), 1..20)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn trial_cliques_stay_in_their_extension(p in pts(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let part = CellPartition::build(&p);
        let disks: Vec<Disk> = p.iter().enumerate().map(|(k, &c)| Disk::unit(k, c)).collect();
        for (cell, _) in part.cells() {
            let ext: Vec<Disk> = part.extension(cell).into_iter().map(|k| disks[k]).collect();
            let out = unit::lens_outcome(&ext, i.index(ext.len()), j.index(ext.len()), 0.2).unwrap();
            prop_assert!(out.ids().iter().all(|id| ext.iter().any(|d| d.id == *id)));
            prop_assert!(verify_clique(&disks, out.ids()).unwrap());
        }
    }

    #[test]
    fn optimum_lies_in_some_extension(p in pts()) {
        let disks: Vec<Disk> = p.iter().enumerate().map(|(k, &c)| Disk::unit(k, c)).collect();
        let best = exact_max_clique(&disks).unwrap();
        let part = CellPartition::build(&p);
        let contained = part.cells().any(|(c, _)| {
            let ext = part.extension(c);
            best.ids().iter().all(|id| ext.binary_search(id).is_ok())
        });
        prop_assert!(contained);
    }

    #[test]
    fn single_cell_bound(p in prop::collection::vec((0.0f64..7.0, 0.0f64..7.0), 1..200)) {
        let p: Vec<Point> = p.into_iter().map(|(x, y)| Point::new(x, y)).collect();
        let part = CellPartition::build(&p);
        for (c, _) in part.cells() {
            let ext: Vec<Point> = part.extension(c).into_iter().map(|k| p[k]).collect();
            prop_assert!(unit::maxcl_lower_bound(&ext) >= ext.len().div_ceil(25));
        }
    }

    #[test]
    fn half_lenses_have_diameter_two(x2 in -5.0f64..5.0, y2 in -5.0f64..5.0, dx in -2.0f64..2.0, dy in -2.0f64..2.0, seed in any::<u64>()) {
        let p2 = Point::new(x2, y2);
        let lens = unit::lens_for(Point::new(x2 + dx, y2 + dy), p2);
        let mut r = rng(seed);
        let mut halves: [Vec<Point>; 2] = Default::default();
        for _ in 0..200 {
            let q = Point::new(x2 + r.random_range(-2.0..2.0), y2 + r.random_range(-2.0..2.0));
            if in_lens(q, &lens) {
                halves[(lens_side(q, &lens) == Side::Right) as usize].push(q);
            }
        }
        for h in &halves {
            for a in h {
                for b in h {
                    prop_assert!(dist(*a, *b) <= 2.0 + 1e-9);
                }
            }
        }
    }

    #[test]
    fn sample_disk_fits_in_far_disk(x2 in -5.0f64..5.0, y2 in -5.0f64..5.0, len in 0.0f64..=2.0, angle in 0.0f64..std::f64::consts::TAU) {
        // x lies on the ray from p₂ through p₁ at distance 2, so
        // dist(x, p₁) + dist(p₁, p₂) = 2 and D(p₁, |p₁p₂|) ⊆ D(x, 2).
        let p2 = Point::new(x2, y2);
        let p1 = Point::new(x2 + len * angle.cos(), y2 + len * angle.sin());
        let x = unit::lens_for(p1, p2).axis_tip;
        prop_assert!((dist(x, p1) + dist(p1, p2) - 2.0).abs() <= 1e-9);
    }

    #[test]
    fn solve_unit_is_valid_and_bounded(seed in any::<u64>(), n in 1usize..30, side in 0.5f64..8.0, trials in 1u64..20) {
        let disks = unit_disks(&mut rng(seed), n, side);
        let inst = UnitInstance::new(disks.iter().map(|d| d.center).collect()).unwrap();
        let cfg = UnitConfig { master_seed: seed, trials_per_cell_override: Some(trials), ..Default::default() };
        let sol = unit::solve_unit(&inst, &cfg).unwrap();
        prop_assert!(verify_clique(&disks, sol.clique.ids()).unwrap());
        prop_assert!(sol.clique.len() <= exact_max_clique(&disks).unwrap().len());
        prop_assert_eq!(sol.trials_executed, sol.cells as u64 * sol.rounds * trials);
        let again = unit::solve_unit(&inst, &cfg).unwrap();
        prop_assert_eq!(again.clique, sol.clique);
    }
}

#[test]
fn cell_success_rate_on_small_square() {
    // 25 points in a 3×3 square share one extension.
    let disks = unit_disks(&mut rng(31), 25, 3.0);
    let target = approx_target(exact_max_clique(&disks).unwrap().len(), 0.2);
    let hits = (0..200)
        .filter(|&seed| {
            let cfg = UnitConfig { master_seed: seed, ..Default::default() };
            unit::solve_cell(&disks, &cfg, 0, 0).unwrap().clique.len() >= target
        })
        .count();
    assert!(hits >= 190, "{hits}/200");
}

#[test]
fn thread_count_does_not_change_output() {
    let disks = unit_disks(&mut rng(32), 120, 10.0);
    let inst = UnitInstance::new(disks.iter().map(|d| d.center).collect()).unwrap();
    let cfg = UnitConfig { master_seed: 5, trials_per_cell_override: Some(300), ..Default::default() };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| unit::solve_unit(&inst, &cfg))
    };
    let (a, b) = (run(1).unwrap(), run(4).unwrap());
    assert_eq!(a.clique, b.clique);
    assert_eq!(a.distinct_trials, b.distinct_trials);
}
