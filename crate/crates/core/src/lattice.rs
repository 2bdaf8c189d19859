//! Sites of `Z^d`, finite regions and sparse mass configurations.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use hashbrown::HashMap;
use rustc_hash::FxBuildHasher;

use crate::numeric::AffineMass;

/// Largest supported dimension. Sites are stored inline as fixed arrays.
pub const MAX_DIM: usize = 8;

/// A lattice site. Ordering is lexicographic on the coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Site {
    // dim first so sites of equal dimension compare purely by coordinates
    dim: u8,
    coords: [i32; MAX_DIM],
}

impl Site {
    /// # Panics
    /// If `coords` is empty or longer than [`MAX_DIM`].
    pub fn new(coords: &[i32]) -> Site {
        assert!(
            !coords.is_empty() && coords.len() <= MAX_DIM,
            "dimension must be in 1..={MAX_DIM}"
        );
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        Site { dim: coords.len() as u8, coords: c }
    }

    pub fn origin(d: usize) -> Site {
        assert!((1..=MAX_DIM).contains(&d), "dimension must be in 1..={MAX_DIM}");
        Site { dim: d as u8, coords: [0; MAX_DIM] }
    }

    pub fn xy(x: i32, y: i32) -> Site {
        Site::new(&[x, y])
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn coords(&self) -> &[i32] {
        &self.coords[..self.dim as usize]
    }

    pub fn coord(&self, i: usize) -> i32 {
        self.coords()[i]
    }

    pub fn with_coord(mut self, i: usize, v: i32) -> Site {
        assert!(i < self.dim());
        self.coords[i] = v;
        self
    }

    pub fn offset(mut self, i: usize, delta: i32) -> Site {
        assert!(i < self.dim());
        self.coords[i] += delta;
        self
    }

    pub fn is_origin(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }

    /// The `2d` nearest neighbours: coordinate index ascending, `-1` before `+1`.
    pub fn neighbors(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.dim()).flat_map(move |i| [self.offset(i, -1), self.offset(i, 1)])
    }

    pub fn coord_sum(&self) -> i64 {
        self.coords().iter().map(|&c| c as i64).sum()
    }

    pub fn l1_norm(&self) -> i64 {
        self.coords().iter().map(|&c| (c as i64).abs()).sum()
    }

    pub fn linf_norm(&self) -> i64 {
        self.coords().iter().map(|&c| (c as i64).abs()).max().unwrap_or(0)
    }

    pub fn norm_sq(&self) -> i64 {
        self.coords().iter().map(|&c| (c as i64) * (c as i64)).sum()
    }

    pub fn parity(&self) -> Parity {
        if self.coord_sum().rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_neighbor_of(&self, other: &Site) -> bool {
        self.dim == other.dim
            && self
                .coords()
                .iter()
                .zip(other.coords())
                .map(|(a, b)| (*a as i64 - *b as i64).abs())
                .sum::<i64>()
                == 1
    }

    /// Absolute values of the coordinates sorted decreasingly: the orbit
    /// representative under coordinate permutations and sign flips.
    pub fn symmetry_class(&self) -> Site {
        let mut s = *self;
        let d = self.dim();
        for c in &mut s.coords[..d] {
            *c = c.abs();
        }
        s.coords[..d].sort_unstable_by(|a, b| b.cmp(a));
        s
    }

    /// All images of this site under the hyperoctahedral group (with repeats
    /// removed).
    pub fn symmetric_images(&self) -> BTreeSet<Site> {
        let d = self.dim();
        let mut out = BTreeSet::new();
        let mut perm: Vec<usize> = (0..d).collect();
        permutations(&mut perm, 0, &mut |p| {
            for signs in 0u32..(1 << d) {
                let mut c = [0i32; MAX_DIM];
                for i in 0..d {
                    let v = self.coords[p[i]];
                    c[i] = if signs & (1 << i) != 0 { -v } else { v };
                }
                out.insert(Site { dim: self.dim, coords: c });
            }
        });
        out
    }
}

fn permutations(v: &mut [usize], k: usize, f: &mut impl FnMut(&[usize])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_time(t: u64) -> Parity {
        if t % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// A finite set of sites, iterated in lexicographic order.
pub type Region = BTreeSet<Site>;

/// Sites outside `x` with at least one neighbour in `x`.
pub fn outer_boundary(x: &Region) -> Region {
    let mut out = Region::new();
    for s in x {
        for y in s.neighbors() {
            if !x.contains(&y) {
                out.insert(y);
            }
        }
    }
    out
}

/// `x` together with its outer boundary.
pub fn closure(x: &Region) -> Region {
    let mut out = outer_boundary(x);
    out.extend(x.iter().copied());
    out
}

/// Calls `f` on every site of the box `[lo_i, hi_i]` in lexicographic order.
pub fn for_each_in_box(lo: &[i32], hi: &[i32], mut f: impl FnMut(Site)) {
    let d = lo.len();
    assert_eq!(d, hi.len());
    if lo.iter().zip(hi).any(|(a, b)| a > b) {
        return;
    }
    let mut cur = Site::new(lo);
    loop {
        f(cur);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if cur.coords[i] < hi[i] {
                cur.coords[i] += 1;
                break;
            }
            cur.coords[i] = lo[i];
        }
    }
}

/// `{x : sum |x_i| <= r}`.
pub fn diamond_region(d: usize, r: i64) -> Region {
    let mut out = Region::new();
    if r < 0 {
        return out;
    }
    let r32 = r as i32;
    for_each_in_box(&[-r32; MAX_DIM][..d], &[r32; MAX_DIM][..d], |s| {
        if s.l1_norm() <= r {
            out.insert(s);
        }
    });
    out
}

/// `{x : sum |x_i| == r}`.
pub fn diamond_layer(d: usize, r: i64) -> Region {
    diamond_region(d, r).into_iter().filter(|s| s.l1_norm() == r).collect()
}

/// `{y : max_i |x_i - y_i| <= k}`.
pub fn cube_region(center: Site, k: i64) -> Region {
    let mut out = Region::new();
    if k < 0 {
        return out;
    }
    let d = center.dim();
    let k = k as i32;
    let lo: Vec<i32> = center.coords().iter().map(|c| c - k).collect();
    let hi: Vec<i32> = center.coords().iter().map(|c| c + k).collect();
    for_each_in_box(&lo[..d], &hi[..d], |s| {
        out.insert(s);
    });
    out
}

/// Diagonal fronts of the explosive-regime induction: `Γ_{k,0} = {(k,…,k)}` and
/// `Γ_{k,i}` the sites of the layer `Σx = dk + i` with exactly `i` neighbours in
/// `Γ_{k,i-1}`.
pub fn gamma_set(d: usize, k: i64, i: usize) -> Region {
    assert!(i <= d, "gamma_set index must be at most d");
    let mut cur = Region::new();
    cur.insert(Site::new(&[k as i32; MAX_DIM][..d]));
    for step in 1..=i {
        let mut candidates = Region::new();
        for s in &cur {
            for y in s.neighbors() {
                if y.coord_sum() == d as i64 * k + step as i64 {
                    candidates.insert(y);
                }
            }
        }
        cur = candidates
            .into_iter()
            .filter(|y| y.neighbors().filter(|z| cur.contains(z)).count() == step)
            .collect();
    }
    cur
}

/// Coordinate-wise bounds of a nonempty region.
pub fn bounding_box(x: &Region) -> Option<(Vec<i32>, Vec<i32>)> {
    let first = x.iter().next()?;
    let d = first.dim();
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for s in x {
        for i in 0..d {
            lo[i] = lo[i].min(s.coord(i));
            hi[i] = hi[i].max(s.coord(i));
        }
    }
    Some((lo, hi))
}

/// Whether the region is exactly the integer box spanned by its extremes.
pub fn is_box(x: &Region) -> bool {
    match bounding_box(x) {
        None => true,
        Some((lo, hi)) => {
            let volume: u128 = lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as u128).product();
            volume == x.len() as u128
        }
    }
}

type SiteMap<V> = HashMap<Site, V, FxBuildHasher>;

pub(crate) fn new_site_map<V>() -> SiteMap<V> {
    HashMap::with_hasher(FxBuildHasher)
}

/// A configuration equal to `background` everywhere except finitely many sites.
#[derive(Clone, Debug)]
pub struct SparseConfiguration {
    dim: usize,
    background: AffineMass,
    explicit: SiteMap<AffineMass>,
}

impl PartialEq for SparseConfiguration {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.background == other.background && self.explicit == other.explicit
    }
}

impl Eq for SparseConfiguration {}

impl SparseConfiguration {
    pub fn new(dim: usize, background: AffineMass) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension must be in 1..={MAX_DIM}");
        SparseConfiguration { dim, background, explicit: new_site_map() }
    }

    /// The point-source configuration: `n` at the origin, `h` elsewhere.
    pub fn point_source(dim: usize, n: AffineMass, background: AffineMass) -> Self {
        let mut c = SparseConfiguration::new(dim, background);
        c.set(Site::origin(dim), n);
        c
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn background(&self) -> &AffineMass {
        &self.background
    }

    pub fn get(&self, x: &Site) -> &AffineMass {
        self.explicit.get(x).unwrap_or(&self.background)
    }

    pub fn set(&mut self, x: Site, v: AffineMass) {
        debug_assert_eq!(x.dim(), self.dim);
        if v == self.background {
            self.explicit.remove(&x);
        } else {
            self.explicit.insert(x, v);
        }
    }

    pub fn add(&mut self, x: Site, v: &AffineMass) {
        let cur = self.get(&x) + v;
        self.set(x, cur);
    }

    pub fn explicit_len(&self) -> usize {
        self.explicit.len()
    }

    pub fn is_explicit(&self, x: &Site) -> bool {
        self.explicit.contains_key(x)
    }

    /// Explicit entries in unspecified order.
    pub fn iter_unordered(&self) -> impl Iterator<Item = (&Site, &AffineMass)> {
        self.explicit.iter()
    }

    /// Explicit entries sorted by site.
    pub fn sorted_entries(&self) -> Vec<(Site, AffineMass)> {
        let mut v: Vec<(Site, AffineMass)> =
            self.explicit.iter().map(|(s, m)| (*s, m.clone())).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn explicit_sites(&self) -> Region {
        self.explicit.keys().copied().collect()
    }

    /// Total mass over a finite window.
    pub fn total_over<'a>(&self, window: impl IntoIterator<Item = &'a Site>) -> AffineMass {
        let mut acc = AffineMass::zero();
        for s in window {
            acc += self.get(s);
        }
        acc
    }

    /// Replaces every mass `a + b*h` by its value at `h`.
    pub fn evaluate_at(&self, h: &crate::numeric::Rational) -> SparseConfiguration {
        let mut out = SparseConfiguration::new(self.dim, self.background.collapse(h));
        for (s, m) in &self.explicit {
            out.set(*s, m.collapse(h));
        }
        out
    }

    /// Coordinate-wise bounds of the explicit sites.
    pub fn explicit_bounds(&self) -> Option<(Vec<i32>, Vec<i32>)> {
        bounding_box(&self.explicit_sites())
    }
}
