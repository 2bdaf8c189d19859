//! Inner and outer Euclidean ball bounds for the toppled set.

use alloc::string::String;
use core::fmt::Write as _;

use crate::lattice::{outer_boundary, Region};
use crate::numeric::{to_f64, Rational};

/// Volume of the unit ball in `R^d`, from `ω_0 = 1`, `ω_1 = 2` and
/// `ω_d = 2π/d · ω_{d-2}`.
pub fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        _ => 2.0 * core::f64::consts::PI / d as f64 * unit_ball_volume(d - 2),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallBounds {
    pub d: usize,
    pub n: Rational,
    pub h: Rational,
    pub eps: Rational,
    /// `(n/ω_d)^{1/d}`
    pub r: f64,
    /// `(1-h)^{-1/d}`
    pub c1: f64,
    /// `(1/2 - ε - h)^{-1/d}`
    pub c1p: f64,
    /// Smallest squared norm of a site outside `T`; every site strictly
    /// closer to the origin is in `T`.
    pub inner_sq: i64,
    /// Largest squared norm of a site of `T`.
    pub outer_sq: i64,
    /// `c1·r - sqrt(inner_sq)`: the smallest `c2` with `B_{c1 r - c2} ⊆ T`.
    pub c2_obs: f64,
    /// `sqrt(outer_sq) - c1'·r`: the smallest `c2'` with `T ⊆ B_{c1' r + c2'}`.
    pub c2p_obs: f64,
}

impl BallBounds {
    pub const CSV_HEADER: &'static str = "d,h,n,r,c1,c2_obs,c1p,c2p_obs";

    pub fn csv_row(&self) -> String {
        let mut s = String::new();
        let _ = write!(
            s,
            "{},{},{},{},{},{},{},{}",
            self.d,
            self.h.reduced(),
            self.n.reduced(),
            self.r,
            self.c1,
            self.c2_obs,
            self.c1p,
            self.c2p_obs
        );
        s
    }
}

/// Observed margins of the ball bounds for a stabilized toppled set.
///
/// The inner ball is open: `B_ρ = {x : |x| < ρ}` with `ρ^2 = inner_sq`
/// exactly. Returns `None` when `T` is empty or `1/2 - ε - h <= 0`.
pub fn ball_bounds_check(t: &Region, n: &Rational, h: &Rational, d: usize, eps: &Rational) -> Option<BallBounds> {
    if t.is_empty() {
        return None;
    }
    let (nf, hf, ef) = (to_f64(n), to_f64(h), to_f64(eps));
    let slack = 0.5 - ef - hf;
    if slack <= 0.0 || hf >= 1.0 {
        return None;
    }
    let inv_d = 1.0 / d as f64;
    let r = libm::pow(nf / unit_ball_volume(d), inv_d);
    let c1 = libm::pow(1.0 - hf, -inv_d);
    let c1p = libm::pow(slack, -inv_d);
    // the nearest site outside T sits on its outer boundary
    let inner_sq = outer_boundary(t).iter().map(|s| s.norm_sq()).min().expect("nonempty boundary");
    let outer_sq = t.iter().map(|s| s.norm_sq()).max().expect("nonempty");
    Some(BallBounds {
        d,
        n: n.clone(),
        h: h.clone(),
        eps: eps.clone(),
        r,
        c1,
        c1p,
        inner_sq,
        outer_sq,
        c2_obs: c1 * r - libm::sqrt(inner_sq as f64),
        c2p_obs: libm::sqrt(outer_sq as f64) - c1p * r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Site;
    use crate::numeric::{int, rat};

    #[test]
    fn volumes() {
        assert_eq!(unit_ball_volume(1), 2.0);
        assert!((unit_ball_volume(2) - core::f64::consts::PI).abs() < 1e-15);
        assert!((unit_ball_volume(3) - 4.0 * core::f64::consts::PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn one_dimensional_interval() {
        let t: Region = (-25..=25).map(|x| Site::new(&[x])).collect();
        let b = ball_bounds_check(&t, &int(100), &int(-1), 1, &rat(1, 20)).unwrap();
        assert_eq!(b.r, 50.0);
        assert_eq!(b.c1, 0.5);
        assert_eq!(b.inner_sq, 26 * 26);
        assert_eq!(b.outer_sq, 25 * 25);
        assert_eq!(b.c2_obs, -1.0);
        assert!(b.csv_row().starts_with("1,-1,100,50,0.5,-1,"));
    }

    #[test]
    fn empty_set_is_flagged() {
        assert!(ball_bounds_check(&Region::new(), &rat(1, 2), &int(-1), 2, &rat(1, 20)).is_none());
    }
}
