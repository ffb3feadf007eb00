//! Planar primitives shared by every solver.
//!
//! Disks are closed. All predicates compare squared quantities directly and
//! never fuzz with an epsilon, so two runs on the same input always agree.

use std::f64::consts::{PI, SQRT_2, TAU};

use crate::Error;

/// Largest accepted absolute coordinate.
pub const MAX_COORD: f64 = 1e9;
/// Smallest accepted radius.
pub const MIN_RADIUS: f64 = 1e-6;
/// Largest accepted radius.
pub const MAX_RADIUS: f64 = 1e9;

/// Side length of a grid cell whose diagonal is 2.
pub const CELL_SIDE: f64 = SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_admissible(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.x.abs() <= MAX_COORD && self.y.abs() <= MAX_COORD
    }
}

/// A closed disk. `id` is the disk's position in its owning instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disk {
    pub id: usize,
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    /// Validated constructor used at ingestion.
    pub fn new(id: usize, center: Point, radius: f64) -> Result<Self, Error> {
        if !center.is_admissible() {
            return Err(Error::InvalidDisk { id, reason: "coordinate not finite or out of range" });
        }
        if !(radius.is_finite() && (MIN_RADIUS..=MAX_RADIUS).contains(&radius)) {
            return Err(Error::InvalidDisk { id, reason: "radius out of range" });
        }
        Ok(Self { id, center, radius })
    }

    pub const fn unit(id: usize, center: Point) -> Self {
        Self { id, center, radius: 1.0 }
    }
}

#[inline]
pub fn dist2(a: Point, b: Point) -> f64 {
    let dx = a.x - b.x;
    let dy = a.y - b.y;
    dx * dx + dy * dy
}

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    dist2(a, b).sqrt()
}

/// Closed-disk intersection: `dist <= r1 + r2`, compared squared.
#[inline]
pub fn disks_intersect(d1: &Disk, d2: &Disk) -> bool {
    let s = d1.radius + d2.radius;
    dist2(d1.center, d2.center) <= s * s
}

#[inline]
fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Index in `0..6` of the cone of angle π/3 around `apex` containing `p`.
/// The apex itself belongs to cone 0.
pub fn cone_index(apex: Point, p: Point) -> u8 {
    let (dx, dy) = (p.x - apex.x, p.y - apex.y);
    if dx == 0.0 && dy == 0.0 {
        return 0;
    }
    let mut angle = dy.atan2(dx);
    if angle < 0.0 {
        angle += TAU;
    }
    ((angle * 3.0 / PI).floor() as i64).clamp(0, 5) as u8
}

/// Integer coordinates of a half-open grid cell of side √2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellCoord {
    pub cx: i64,
    pub cy: i64,
}

impl CellCoord {
    pub const fn new(cx: i64, cy: i64) -> Self {
        Self { cx, cy }
    }

    pub const fn offset(self, dx: i64, dy: i64) -> Self {
        Self { cx: self.cx + dx, cy: self.cy + dy }
    }
}

pub fn cell_of(p: Point) -> CellCoord {
    CellCoord { cx: (p.x / CELL_SIDE).floor() as i64, cy: (p.y / CELL_SIDE).floor() as i64 }
}

/// Intersection of two equal-radius disks, cut by the oriented axis
/// `axis_origin -> axis_tip` into a left and a right half.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lens {
    pub center_a: Point,
    pub center_b: Point,
    pub radius: f64,
    pub axis_origin: Point,
    pub axis_tip: Point,
}

impl Lens {
    /// Lens of `D(origin, radius) ∩ D(tip, radius)` with axis oriented from
    /// `origin` to `tip`.
    pub fn new(origin: Point, tip: Point, radius: f64) -> Self {
        Self { center_a: origin, center_b: tip, radius, axis_origin: origin, axis_tip: tip }
    }
}

pub fn in_lens(p: Point, lens: &Lens) -> bool {
    let r2 = lens.radius * lens.radius;
    dist2(p, lens.center_a) <= r2 && dist2(p, lens.center_b) <= r2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Points on the axis line are `Left`.
pub fn lens_side(p: Point, lens: &Lens) -> Side {
    if cross(lens.axis_origin, lens.axis_tip, p) >= 0.0 {
        Side::Left
    } else {
        Side::Right
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SlabSide {
    Outside,
    Above,
    Below,
}

/// Position of `p` relative to the closed vertical slab spanned by `a` and
/// `b` and the line through them. Points on the line are `Above`.
pub fn in_slab_and_side(p: Point, a: Point, b: Point) -> SlabSide {
    let (lo, hi) = if a.x <= b.x { (a, b) } else { (b, a) };
    if p.x < lo.x || p.x > hi.x {
        return SlabSide::Outside;
    }
    if cross(lo, hi, p) >= 0.0 {
        SlabSide::Above
    } else {
        SlabSide::Below
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn dist_examples() {
        assert_eq!(dist(p(0.0, 0.0), p(3.0, 4.0)), 5.0);
        assert_eq!(dist(p(1.0, 1.0), p(1.0, 1.0)), 0.0);
        assert!((dist(p(0.0, 0.0), p(1.0, 1.0)) - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn intersect_examples() {
        let a = Disk::unit(0, p(0.0, 0.0));
        assert!(disks_intersect(&a, &Disk::unit(1, p(2.0, 0.0))));
        assert!(!disks_intersect(&a, &Disk::unit(1, p(2.0001, 0.0))));
        let big = Disk { id: 0, center: p(0.0, 0.0), radius: 2.0 };
        let small = Disk { id: 1, center: p(1.0, 1.0), radius: 0.5 };
        assert!(disks_intersect(&big, &small));
    }

    #[test]
    fn cone_examples() {
        let o = p(0.0, 0.0);
        assert_eq!(cone_index(o, p(1.0, 0.0)), 0);
        assert_eq!(cone_index(o, p(0.0, 1.0)), 1);
        assert_eq!(cone_index(o, p(-1.0, 0.0)), 3);
        assert_eq!(cone_index(o, o), 0);
        assert_eq!(cone_index(o, p(1.0, -1e-300)), 5);
    }

    #[test]
    fn cell_examples() {
        assert_eq!(cell_of(p(0.0, 0.0)), CellCoord::new(0, 0));
        assert_eq!(cell_of(p(1.5, -0.1)), CellCoord::new(1, -1));
        assert_eq!(cell_of(p(SQRT_2, SQRT_2)), CellCoord::new(1, 1));
    }

    #[test]
    fn lens_examples() {
        let lens = Lens::new(p(0.0, 0.0), p(2.0, 0.0), 2.0);
        assert!(in_lens(p(1.0, 0.0), &lens));
        assert!(!in_lens(p(-2.0, 0.0), &lens));
        assert!(in_lens(p(1.0, 3f64.sqrt()), &lens));
    }

    #[test]
    fn lens_side_examples() {
        let lens = Lens::new(p(0.0, 0.0), p(0.0, 2.0), 2.0);
        assert_eq!(lens_side(p(-1.0, 1.0), &lens), Side::Left);
        assert_eq!(lens_side(p(1.0, 1.0), &lens), Side::Right);
        assert_eq!(lens_side(p(0.0, 1.0), &lens), Side::Left);
    }

    #[test]
    fn slab_examples() {
        let (a, b) = (p(0.0, 0.0), p(4.0, 0.0));
        assert_eq!(in_slab_and_side(p(2.0, 1.0), a, b), SlabSide::Above);
        assert_eq!(in_slab_and_side(p(5.0, 0.0), a, b), SlabSide::Outside);
        assert_eq!(in_slab_and_side(p(2.0, 0.0), a, b), SlabSide::Above);
        assert_eq!(in_slab_and_side(p(2.0, -1.0), b, a), SlabSide::Below);
        // degenerate vertical slab
        assert_eq!(in_slab_and_side(p(1.0, 5.0), p(1.0, 0.0), p(1.0, 0.0)), SlabSide::Above);
    }

    #[test]
    fn ingestion_limits() {
        assert!(Disk::new(0, p(0.0, 0.0), 0.0).is_err());
        assert!(Disk::new(0, p(f64::NAN, 0.0), 1.0).is_err());
        assert!(Disk::new(0, p(2e9, 0.0), 1.0).is_err());
        assert!(Disk::new(0, p(1e9, -1e9), 1e-6).is_ok());
    }

    fn coord() -> impl Strategy<Value = f64> {
        -50.0..50.0f64
    }

    proptest! {
        #[test]
        fn intersect_symmetric_reflexive(x1 in coord(), y1 in coord(), r1 in 0.01..5.0f64,
                                         x2 in coord(), y2 in coord(), r2 in 0.01..5.0f64) {
            let a = Disk { id: 0, center: p(x1, y1), radius: r1 };
            let b = Disk { id: 1, center: p(x2, y2), radius: r2 };
            prop_assert_eq!(disks_intersect(&a, &b), disks_intersect(&b, &a));
            prop_assert!(disks_intersect(&a, &a));
        }

        #[test]
        fn same_cell_within_two(x1 in coord(), y1 in coord(), fx in 0.0..1.0f64, fy in 0.0..1.0f64) {
            let a = p(x1, y1);
            let c = cell_of(a);
            let b = p((c.cx as f64 + fx) * CELL_SIDE, (c.cy as f64 + fy) * CELL_SIDE);
            if cell_of(b) == c {
                prop_assert!(dist(a, b) <= 2.0 + 1e-12);
            }
        }

        #[test]
        fn cone_partition(x in coord(), y in coord()) {
            let c = cone_index(p(0.0, 0.0), p(x, y));
            prop_assert!(c < 6);
        }
    }
}
