//! Floating-point parallel runner on a dense box.
//!
//! Large robust-regime runs (`n` around `10^5`) perform on the order of `10^8`
//! splits, which is out of reach for exact rationals. This runner keeps one
//! `f64` per site of a box around the origin and grows the box (restarting the
//! run) whenever the toppled set gets within one site of its edge. Its toppled
//! sets are cross-checked against the exact engine at smaller `n` in the tests.

use alloc::vec;
use alloc::vec::Vec;

use crate::lattice::{Region, Site, MAX_DIM};

#[derive(Clone, Debug, PartialEq)]
pub struct DenseRun {
    pub d: usize,
    pub n: f64,
    pub h: f64,
    /// Half-width of the box that was finally used.
    pub box_radius: i32,
    pub steps: u64,
    pub stabilized: bool,
    /// `T` with odometer values, in lexicographic site order.
    pub toppled: Vec<(Site, f64)>,
    /// Sites whose final mass differs from `h`, lexicographic.
    pub masses: Vec<(Site, f64)>,
}

impl DenseRun {
    pub fn toppled_region(&self) -> Region {
        self.toppled.iter().map(|(s, _)| *s).collect()
    }
}

struct Grid {
    d: usize,
    r: i32,
    side: usize,
    strides: [usize; MAX_DIM],
}

impl Grid {
    fn new(d: usize, r: i32) -> Grid {
        let side = (2 * r + 1) as usize;
        let mut strides = [0usize; MAX_DIM];
        let mut s = 1;
        for i in (0..d).rev() {
            strides[i] = s;
            s *= side;
        }
        Grid { d, r, side, strides }
    }

    fn len(&self) -> usize {
        self.side.pow(self.d as u32)
    }

    fn index(&self, x: &Site) -> usize {
        (0..self.d).map(|i| (x.coord(i) + self.r) as usize * self.strides[i]).sum()
    }

    fn site(&self, mut idx: usize) -> Site {
        let mut c = [0i32; MAX_DIM];
        for i in 0..self.d {
            c[i] = (idx / self.strides[i]) as i32 - self.r;
            idx %= self.strides[i];
        }
        Site::new(&c[..self.d])
    }

    /// Whether the site at `idx` lies on the outermost shell of the box.
    fn on_edge(&self, idx: usize) -> bool {
        (0..self.d).any(|i| {
            let c = (idx / self.strides[i]) % self.side;
            c == 0 || c == self.side - 1
        })
    }
}

enum Attempt {
    Done(DenseRun),
    TooSmall,
}

/// Runs the parallel splitting order from `n` at the origin over background `h`.
///
/// The box starts at half-width `initial_radius` and doubles as needed.
pub fn run_dense_parallel(d: usize, n: f64, h: f64, initial_radius: i32, max_steps: u64) -> DenseRun {
    assert!((1..=3).contains(&d), "dense runner supports d <= 3");
    assert!(h < 1.0);
    let mut r = initial_radius.max(2);
    loop {
        match attempt(d, n, h, r, max_steps) {
            Attempt::Done(run) => return run,
            Attempt::TooSmall => r *= 2,
        }
    }
}

fn attempt(d: usize, n: f64, h: f64, r: i32, max_steps: u64) -> Attempt {
    let grid = Grid::new(d, r);
    let len = grid.len();
    let mut mass = vec![h; len];
    let mut odo = vec![0.0f64; len];
    let mut queued = vec![false; len];
    let mut offsets = Vec::with_capacity(2 * d);
    for i in 0..d {
        offsets.push(-(grid.strides[i] as isize));
        offsets.push(grid.strides[i] as isize);
    }
    let origin = grid.index(&Site::origin(d));
    mass[origin] = n;
    let mut active: Vec<usize> = if n >= 1.0 { vec![origin] } else { Vec::new() };
    let mut emitted: Vec<f64> = Vec::new();
    let mut next: Vec<usize> = Vec::new();
    let share_den = (2 * d) as f64;
    let mut steps = 0u64;
    while !active.is_empty() && steps < max_steps {
        emitted.clear();
        for &i in &active {
            if grid.on_edge(i) {
                return Attempt::TooSmall;
            }
            emitted.push(mass[i]);
            odo[i] += mass[i];
            mass[i] = 0.0;
        }
        next.clear();
        for (&i, &m) in active.iter().zip(&emitted) {
            let share = m / share_den;
            for &o in &offsets {
                let j = (i as isize + o) as usize;
                mass[j] += share;
                if mass[j] >= 1.0 && !queued[j] {
                    queued[j] = true;
                    next.push(j);
                }
            }
        }
        // a receiving site may have been queued while below its final value;
        // every queued site is unstable since masses only grow during
        // distribution
        for &j in &next {
            queued[j] = false;
        }
        next.sort_unstable();
        core::mem::swap(&mut active, &mut next);
        steps += 1;
    }
    let toppled = (0..len).filter(|&i| odo[i] > 0.0).map(|i| (grid.site(i), odo[i])).collect();
    let masses = (0..len).filter(|&i| mass[i] != h).map(|i| (grid.site(i), mass[i])).collect();
    Attempt::Done(DenseRun {
        d,
        n,
        h,
        box_radius: r,
        steps,
        stabilized: active.is_empty(),
        toppled,
        masses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_on_a_line() {
        let run = run_dense_parallel(1, 4.0, 0.0, 2, 100);
        assert!(run.stabilized);
        assert_eq!(run.steps, 5);
        let t: Vec<i32> = run.toppled.iter().map(|(s, _)| s.coord(0)).collect();
        assert_eq!(t, [-2, -1, 0, 1, 2]);
        assert!(run.box_radius >= 4);
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(3, 4);
        for idx in [0, 17, 100, g.len() - 1] {
            assert_eq!(g.index(&g.site(idx)), idx);
        }
    }
}
