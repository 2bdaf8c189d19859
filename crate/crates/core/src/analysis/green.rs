//! Green's function of the simple random walk on a box: the solution of
//! `Δg = -δ_0` with asymptotic boundary values.
//!
//! For `d >= 3` the boundary value is `2 / ((d-2) ω_d |x|^{d-2})`
//! and `g(0)` is the expected number of visits to the origin counting time 0
//! (`1.5164...` for `d = 3`); [`GreenTable::expected_returns`] subtracts that
//! first visit. For `d = 2` the boundary value is `-(2/π) ln|x|` and the
//! table is shifted so that `g(0) = 0`, which makes it minus the potential
//! kernel (`g(e_1) = -1`).

use alloc::vec;
use alloc::vec::Vec;

use super::AnalysisError;
use crate::lattice::{Site, MAX_DIM};

#[derive(Clone, Debug, PartialEq)]
pub struct GreenTable {
    pub d: usize,
    pub radius: i32,
    /// Requested bound on the residual `|Δg + δ_0|` at interior sites.
    pub tolerance: f64,
    /// Largest residual reached.
    pub residual: f64,
    pub sweeps: usize,
    values: Vec<f64>,
    strides: [usize; MAX_DIM],
}

impl GreenTable {
    fn index(&self, x: &Site) -> Option<usize> {
        let mut idx = 0;
        for i in 0..self.d {
            let c = x.coord(i);
            if c.abs() > self.radius {
                return None;
            }
            idx += (c + self.radius) as usize * self.strides[i];
        }
        Some(idx)
    }

    /// `g(x)`, or `None` outside the box.
    pub fn get(&self, x: &Site) -> Option<f64> {
        self.index(x).map(|i| self.values[i])
    }

    /// `Δg(x)` for a site strictly inside the box.
    pub fn laplacian(&self, x: &Site) -> Option<f64> {
        if (0..self.d).any(|i| x.coord(i).abs() >= self.radius) {
            return None;
        }
        let sum: f64 = x.neighbors().map(|y| self.get(&y).expect("inside")).sum();
        Some(sum / (2 * self.d) as f64 - self.get(x).expect("inside"))
    }

    /// Largest `|Δg + δ_0|` over interior sites, recomputed from the values.
    pub fn max_residual(&self) -> f64 {
        let r = self.radius - 1;
        let mut worst = 0.0f64;
        crate::lattice::for_each_in_box(&vec![-r; self.d], &vec![r; self.d], |x| {
            let delta = if x.is_origin() { 1.0 } else { 0.0 };
            worst = worst.max((self.laplacian(&x).expect("interior") + delta).abs());
        });
        worst
    }

    /// Expected number of returns to the origin, `g(0) - 1`, for `d >= 3`.
    pub fn expected_returns(&self) -> Option<f64> {
        (self.d >= 3).then(|| self.values[self.index(&Site::origin(self.d)).expect("origin")] - 1.0)
    }
}

fn boundary_value(d: usize, norm: f64) -> f64 {
    match d {
        2 => -2.0 / core::f64::consts::PI * libm::log(norm),
        _ => 2.0 / ((d as f64 - 2.0) * super::unit_ball_volume(d) * libm::pow(norm, d as f64 - 2.0)),
    }
}

/// Successive over-relaxation until the largest residual is at most `tol`.
pub fn compute_green(d: usize, radius: i32, tol: f64, max_sweeps: usize) -> Result<GreenTable, AnalysisError> {
    if !(2..=MAX_DIM).contains(&d) {
        return Err(AnalysisError::PreconditionUnmet("Green's function needs d >= 2".into()));
    }
    if radius < 10 {
        return Err(AnalysisError::PreconditionUnmet("Green's function needs radius >= 10".into()));
    }
    let side = (2 * radius + 1) as usize;
    let mut strides = [0usize; MAX_DIM];
    let mut s = 1;
    for i in (0..d).rev() {
        strides[i] = s;
        s *= side;
    }
    let len = s;
    let coords = |mut idx: usize| {
        let mut c = [0i32; MAX_DIM];
        for i in 0..d {
            c[i] = (idx / strides[i]) as i32 - radius;
            idx %= strides[i];
        }
        c
    };
    let mut values = vec![0.0f64; len];
    let mut interior = Vec::new();
    let mut origin = 0;
    for (idx, v) in values.iter_mut().enumerate() {
        let c = coords(idx);
        let norm_sq: i64 = c[..d].iter().map(|&x| (x as i64) * (x as i64)).sum();
        if norm_sq == 0 {
            origin = idx;
            *v = 1.0;
        } else {
            *v = boundary_value(d, libm::sqrt(norm_sq as f64));
        }
        if c[..d].iter().all(|x| x.abs() < radius) {
            interior.push(idx);
        }
    }
    let offsets: Vec<usize> = strides[..d].to_vec();
    let share = 1.0 / (2 * d) as f64;
    let omega = 2.0 / (1.0 + libm::sin(core::f64::consts::PI / side as f64));
    let residual_at = |values: &[f64], i: usize| {
        let sum: f64 = offsets.iter().map(|&o| values[i - o] + values[i + o]).sum();
        sum * share - values[i] + if i == origin { 1.0 } else { 0.0 }
    };
    let mut sweeps = 0;
    let mut residual = f64::INFINITY;
    while sweeps < max_sweeps {
        for &i in &interior {
            let r = residual_at(&values, i);
            values[i] += omega * r;
        }
        sweeps += 1;
        if sweeps % 10 == 0 {
            residual = interior.iter().map(|&i| residual_at(&values, i).abs()).fold(0.0, f64::max);
            if residual <= tol {
                break;
            }
        }
    }
    if residual > tol {
        return Err(AnalysisError::NonConvergence { iterations: sweeps, residual });
    }
    if d == 2 {
        let g0 = values[origin];
        values.iter_mut().for_each(|v| *v -= g0);
    }
    Ok(GreenTable { d, radius, tolerance: tol, residual, sweeps, values, strides })
}
