//! Limiting-shape checks: `S_ε ⊆ f·(T + C) ⊆ S^ε` for a convex target `S`,
//! with `C` the cube of radius 1/2 and `ε`-erosion/dilation in the Euclidean
//! norm.
//!
//! The dilation test is a corner test: a scaled cube lies in the convex set
//! `S^ε` iff its corners do, and a corner's squared distance to `S` is a
//! rational. The erosion `S_ε` has vertices in `Q(σ)` with `σ = ε·√N`, where
//! `N` is the common squared length of the polygon's edge normals, so the
//! coverage test is an exact separating-axis test over `Q(σ)`.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::lattice::{Region, Site};
use crate::numeric::{format_rational, rat, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("polygon needs at least three vertices")]
    TooFewVertices,
    #[error("vertices are not in strictly convex counter-clockwise order")]
    NotConvex,
    #[error("largest vertex coordinate is {0}, expected 1")]
    NotNormalized(String),
    #[error("polygon is not invariant under the symmetries of the square")]
    NotSymmetric,
    #[error("edge normals do not have commensurable lengths")]
    IncommensurableNormals,
    #[error("erosion by {0} collapses the polygon")]
    EpsilonTooLarge(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

type Point = [Rational; 2];

fn dot(a: &Point, b: &Point) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1]
}

fn sub(a: &Point, b: &Point) -> Point {
    [&a[0] - &b[0], &a[1] - &b[1]]
}

/// Exact square root of a non-negative rational, if it is a square.
fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let (n, d) = (q.numer(), q.denom());
    if n.is_negative() {
        return None;
    }
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// `a + b·σ` with `σ > 0` fixed by `σ² = s2`.
#[derive(Clone, Debug)]
struct Surd {
    a: Rational,
    b: Rational,
}

impl Surd {
    fn sign(&self, s2: &Rational) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        if sb == Ordering::Equal || sa == sb {
            return sa;
        }
        if sa == Ordering::Equal {
            return sb;
        }
        match (&self.a * &self.a).cmp(&(&self.b * &self.b * s2)) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    /// Compares `self` with a rational.
    fn cmp_rat(&self, r: &Rational, s2: &Rational) -> Ordering {
        Surd { a: &self.a - r, b: self.b.clone() }.sign(s2)
    }
}

/// A convex polygon with edge half-planes `n_i·p <= c_i`, all normals of
/// squared length `norm_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polygon {
    pub name: String,
    /// Counter-clockwise.
    pub vertices: Vec<Point>,
    /// Outward normal and offset of the edge from vertex `i` to `i + 1`.
    pub edges: Vec<(Point, Rational)>,
    pub norm_sq: Rational,
}

const SYMMETRIES: [fn(&Point) -> Point; 8] = [
    |p| [p[0].clone(), p[1].clone()],
    |p| [-p[0].clone(), p[1].clone()],
    |p| [p[0].clone(), -p[1].clone()],
    |p| [-p[0].clone(), -p[1].clone()],
    |p| [p[1].clone(), p[0].clone()],
    |p| [-p[1].clone(), p[0].clone()],
    |p| [p[1].clone(), -p[0].clone()],
    |p| [-p[1].clone(), -p[0].clone()],
];

impl Polygon {
    /// Validates convexity, orientation, normalization (largest coordinate
    /// 1), symmetry and commensurable normals.
    pub fn new(name: &str, vertices: Vec<Point>) -> Result<Polygon, ShapeError> {
        let k = vertices.len();
        if k < 3 {
            return Err(ShapeError::TooFewVertices);
        }
        for i in 0..k {
            let e1 = sub(&vertices[(i + 1) % k], &vertices[i]);
            let e2 = sub(&vertices[(i + 2) % k], &vertices[(i + 1) % k]);
            if &e1[0] * &e2[1] - &e1[1] * &e2[0] <= Rational::zero() {
                return Err(ShapeError::NotConvex);
            }
        }
        let max = vertices.iter().flat_map(|p| p.iter().map(|c| c.abs())).max().expect("nonempty");
        if !max.is_one() {
            return Err(ShapeError::NotNormalized(format_rational(&max)));
        }
        let mut sorted = vertices.clone();
        sorted.sort();
        for s in SYMMETRIES {
            let mut img: Vec<Point> = vertices.iter().map(s).collect();
            img.sort();
            if img != sorted {
                return Err(ShapeError::NotSymmetric);
            }
        }
        let mut edges = Vec::with_capacity(k);
        let mut norm_sq = None;
        for i in 0..k {
            let e = sub(&vertices[(i + 1) % k], &vertices[i]);
            let mut n = [e[1].clone(), -e[0].clone()];
            let len = dot(&n, &n);
            let target = norm_sq.get_or_insert_with(|| len.clone());
            let scale = rational_sqrt(&(&*target / &len)).ok_or(ShapeError::IncommensurableNormals)?;
            n = [&n[0] * &scale, &n[1] * &scale];
            let c = dot(&n, &vertices[i]);
            edges.push((n, c));
        }
        Ok(Polygon { name: name.into(), vertices, edges, norm_sq: norm_sq.expect("nonempty") })
    }

    /// `|x| + |y| <= 1`.
    pub fn diamond() -> Polygon {
        let (o, l) = (Rational::zero(), Rational::one());
        let v = alloc::vec![[l.clone(), o.clone()], [o.clone(), l.clone()], [-l.clone(), o.clone()], [o, -l]];
        Polygon::new("diamond", v).expect("valid built-in")
    }

    /// `max(|x|, |y|) <= 1`.
    pub fn square() -> Polygon {
        let (l, m) = (Rational::one(), -Rational::one());
        let v = alloc::vec![[l.clone(), m.clone()], [l.clone(), l.clone()], [m.clone(), l.clone()], [m.clone(), m]];
        Polygon::new("square", v).expect("valid built-in")
    }

    /// Vertices `(0, 1)`, `(5/6, 5/6)` and their images.
    pub fn octagon() -> Polygon {
        let (o, l, f) = (Rational::zero(), Rational::one(), rat(5, 6));
        let v = alloc::vec![
            [l.clone(), o.clone()],
            [f.clone(), f.clone()],
            [o.clone(), l.clone()],
            [-f.clone(), f.clone()],
            [-l.clone(), o.clone()],
            [-f.clone(), -f.clone()],
            [o.clone(), -l.clone()],
            [f.clone(), -f.clone()],
        ];
        Polygon::new("octagon", v).expect("valid built-in")
    }

    pub fn builtin(name: &str) -> Option<Polygon> {
        match name {
            "diamond" | "D" => Some(Polygon::diamond()),
            "square" | "Q" => Some(Polygon::square()),
            "octagon" | "O" => Some(Polygon::octagon()),
            _ => None,
        }
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.edges.iter().all(|(n, c)| dot(n, p) <= *c)
    }

    /// Squared Euclidean distance from `p` to the polygon.
    pub fn dist_sq(&self, p: &Point) -> Rational {
        if self.contains(p) {
            return Rational::zero();
        }
        let k = self.vertices.len();
        (0..k)
            .map(|i| segment_dist_sq(p, &self.vertices[i], &self.vertices[(i + 1) % k]))
            .min()
            .expect("nonempty")
    }

    /// Vertices of the erosion, as `v + σ·w`. Fails when an edge vanishes.
    fn eroded(&self, eps: &Rational) -> Result<Vec<(Point, Point)>, ShapeError> {
        let k = self.vertices.len();
        let s2 = eps * eps * &self.norm_sq;
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let (a, _) = &self.edges[(i + k - 1) % k];
            let (b, _) = &self.edges[i];
            // solve [a; b] w = (-1, -1)
            let det = &a[0] * &b[1] - &a[1] * &b[0];
            let w = [(&a[1] - &b[1]) / &det, (&b[0] - &a[0]) / &det];
            out.push((self.vertices[i].clone(), w));
        }
        for (v, w) in &out {
            for (n, c) in &self.edges {
                // n·v + σ n·w <= c - σ
                let slack = Surd { a: c - dot(n, v), b: -(dot(n, w) + Rational::one()) };
                if slack.sign(&s2) == Ordering::Less {
                    return Err(ShapeError::EpsilonTooLarge(format_rational(eps)));
                }
            }
        }
        Ok(out)
    }
}

fn segment_dist_sq(p: &Point, a: &Point, b: &Point) -> Rational {
    let ab = sub(b, a);
    let ap = sub(p, a);
    let len = dot(&ab, &ab);
    let mut t = dot(&ap, &ab) / &len;
    if t < Rational::zero() {
        t = Rational::zero();
    } else if t > Rational::one() {
        t = Rational::one();
    }
    let q = [&a[0] + &t * &ab[0], &a[1] + &t * &ab[1]];
    let r = sub(p, &q);
    dot(&r, &r)
}

/// How gaps and excesses are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShapeMetric {
    /// Squared Euclidean lengths.
    EuclideanSquared,
    L1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShapeVerdict {
    /// `S_ε` is covered by the scaled cubes of `T`.
    pub inner_ok: bool,
    /// Every scaled cube of `T` lies in `S^ε`.
    pub outer_ok: bool,
    /// Sites outside `T` whose scaled cube meets the interior of `S_ε`.
    pub uncovered: usize,
    /// Sites of `T` with a scaled corner outside `S^ε`.
    pub outside: usize,
    /// Largest depth inside `S` of the centre of an uncovered cube (0 if
    /// none).
    pub inner_gap: Rational,
    /// Largest distance from a scaled corner of `T` to `S`.
    pub outer_excess: Rational,
    pub metric: ShapeMetric,
}

impl ShapeVerdict {
    pub fn passed(&self) -> bool {
        self.inner_ok && self.outer_ok
    }
}

fn boundary_cells(t: &Region) -> impl Iterator<Item = &Site> {
    // an interior cell lies between two boundary cells of its row, so by
    // convexity of the targets it never decides an outer test
    t.iter().filter(move |x| x.neighbors().any(|y| !t.contains(&y)))
}

fn half() -> Rational {
    rat(1, 2)
}

/// Exact check of `S_ε ⊆ f·(T + C) ⊆ S^ε` for a planar region.
pub fn shape_check(t: &Region, f: &Rational, s: &Polygon, eps: &Rational) -> Result<ShapeVerdict, ShapeError> {
    if !f.is_positive() {
        return Err(ShapeError::InvalidParameter("scale must be positive".into()));
    }
    if eps.is_negative() {
        return Err(ShapeError::InvalidParameter("epsilon must be non-negative".into()));
    }
    if t.iter().any(|x| x.dim() != 2) {
        return Err(ShapeError::InvalidParameter("polygon targets need a planar region".into()));
    }
    let h = half();
    let eps_sq = eps * eps;
    let corner = |x: &Site, sx: &Rational, sy: &Rational| -> Point {
        [f * (Rational::from_integer(x.coord(0).into()) + sx), f * (Rational::from_integer(x.coord(1).into()) + sy)]
    };
    let signs = [(-h.clone(), -h.clone()), (-h.clone(), h.clone()), (h.clone(), -h.clone()), (h.clone(), h.clone())];

    let mut outer_excess = Rational::zero();
    let mut outside = 0;
    for x in boundary_cells(t) {
        let mut bad = false;
        for (sx, sy) in &signs {
            let d = s.dist_sq(&corner(x, sx, sy));
            bad |= d > eps_sq;
            if d > outer_excess {
                outer_excess = d;
            }
        }
        outside += bad as usize;
    }

    let eroded = s.eroded(eps)?;
    let s2 = &eps_sq * &s.norm_sq;
    let k = (Rational::one() / f + &h).ceil().to_integer();
    let k: i32 = i32::try_from(k).map_err(|_| ShapeError::InvalidParameter("scale too small".into()))?;
    let mut uncovered = 0;
    let mut inner_gap = Rational::zero();
    for i in -k..=k {
        for j in -k..=k {
            let y = Site::xy(i, j);
            if t.contains(&y) {
                continue;
            }
            let corners: Vec<Point> = signs.iter().map(|(sx, sy)| corner(&y, sx, sy)).collect();
            if interiors_disjoint(&corners, s, &eroded, &s2) {
                continue;
            }
            uncovered += 1;
            let centre = corner(&y, &Rational::zero(), &Rational::zero());
            let depth = s.edges.iter().map(|(n, c)| c - dot(n, &centre)).min().expect("nonempty");
            if depth.is_positive() {
                let g = &depth * &depth / &s.norm_sq;
                if g > inner_gap {
                    inner_gap = g;
                }
            }
        }
    }
    Ok(ShapeVerdict {
        inner_ok: uncovered == 0,
        outer_ok: outside == 0,
        uncovered,
        outside,
        inner_gap,
        outer_excess,
        metric: ShapeMetric::EuclideanSquared,
    })
}

/// Separating-axis test between an axis-parallel box (given by its corners)
/// and the eroded polygon; touching counts as disjoint.
fn interiors_disjoint(corners: &[Point], s: &Polygon, eroded: &[(Point, Point)], s2: &Rational) -> bool {
    let proj = |n: &Point| {
        let v: Vec<Rational> = corners.iter().map(|p| dot(n, p)).collect();
        (v.iter().min().cloned().expect("corners"), v.iter().max().cloned().expect("corners"))
    };
    // the polygon itself contains the erosion, so this rational test is a
    // cheap sufficient condition
    for (n, c) in &s.edges {
        if proj(n).0 >= *c {
            return true;
        }
    }
    let unit = |i: usize| -> Point {
        let mut p = [Rational::zero(), Rational::zero()];
        p[i] = Rational::one();
        p
    };
    let axes: Vec<Point> = [unit(0), unit(1)].into_iter().chain(s.edges.iter().map(|(n, _)| n.clone())).collect();
    for n in &axes {
        let (bmin, bmax) = proj(n);
        let pts: Vec<Surd> = eroded.iter().map(|(v, w)| Surd { a: dot(n, v), b: dot(n, w) }).collect();
        if pts.iter().all(|p| p.cmp_rat(&bmax, s2) != Ordering::Less) {
            return true;
        }
        if pts.iter().all(|p| p.cmp_rat(&bmin, s2) != Ordering::Greater) {
            return true;
        }
    }
    false
}

/// The `d`-dimensional diamond check with `ε` measured in the L1 norm:
/// outer means every scaled cube of `T` lies in `{|p|_1 <= 1 + ε}`, inner
/// means every site whose scaled cube meets the open ball `{|p|_1 < 1 - ε}`
/// is in `T`.
pub fn diamond_l1_check(t: &Region, d: usize, f: &Rational, eps: &Rational) -> Result<ShapeVerdict, ShapeError> {
    if !f.is_positive() || eps.is_negative() {
        return Err(ShapeError::InvalidParameter("need f > 0 and eps >= 0".into()));
    }
    let one = Rational::one();
    let h = half();
    let dh = Rational::from_integer(BigInt::from(d as u64)) * &h;
    let mut outside = 0;
    let mut outer_excess = Rational::zero();
    for x in t {
        let far = f * (Rational::from_integer(x.l1_norm().into()) + &dh);
        let excess = &far - &one;
        if excess > *eps {
            outside += 1;
        }
        if excess > outer_excess {
            outer_excess = excess;
        }
    }
    let mut uncovered = 0;
    let mut inner_gap = Rational::zero();
    let bound = &one - eps;
    let k = (&one / f + &h).ceil().to_integer();
    let k = i32::try_from(k).map_err(|_| ShapeError::InvalidParameter("scale too small".into()))?;
    crate::lattice::for_each_in_box(&alloc::vec![-k; d], &alloc::vec![k; d], |y| {
        if t.contains(&y) {
            return;
        }
        let near: Rational = y
            .coords()
            .iter()
            .map(|&c| {
                let a = Rational::from_integer((c as i64).abs().into()) - &h;
                if a.is_negative() {
                    Rational::zero()
                } else {
                    a
                }
            })
            .fold(Rational::zero(), |s, a| s + a);
        if f * near < bound {
            uncovered += 1;
            let gap = &one - f * Rational::from_integer(y.l1_norm().into());
            if gap > inner_gap {
                inner_gap = gap;
            }
        }
    });
    Ok(ShapeVerdict {
        inner_ok: uncovered == 0,
        outer_ok: outside == 0,
        uncovered,
        outside,
        inner_gap,
        outer_excess,
        metric: ShapeMetric::L1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::diamond_region;

    #[test]
    fn builtins_have_common_normals() {
        assert_eq!(Polygon::diamond().norm_sq, rat(2, 1));
        assert_eq!(Polygon::square().norm_sq, rat(4, 1));
        let o = Polygon::octagon();
        let (n, c) = &o.edges[0];
        // edge (1,0) -> (5/6,5/6) has normal proportional to (5,1)
        assert_eq!(&n[0] / &n[1], rat(5, 1));
        assert_eq!(c / &n[1], rat(5, 1));
    }

    #[test]
    fn rejects_bad_polygons() {
        let p = |x: i64, y: i64| [rat(x, 1), rat(y, 1)];
        assert_eq!(Polygon::new("t", alloc::vec![p(1, 0), p(0, 1)]), Err(ShapeError::TooFewVertices));
        assert_eq!(
            Polygon::new("cw", alloc::vec![p(1, 0), p(0, -1), p(-1, 0), p(0, 1)]),
            Err(ShapeError::NotConvex)
        );
        assert!(matches!(
            Polygon::new("big", alloc::vec![p(2, 0), p(0, 2), p(-2, 0), p(0, -2)]),
            Err(ShapeError::NotNormalized(_))
        ));
        assert_eq!(
            Polygon::new("tri", alloc::vec![p(1, 0), p(0, 1), p(-1, -1)]),
            Err(ShapeError::NotSymmetric)
        );
    }

    #[test]
    fn distances() {
        let q = Polygon::square();
        assert_eq!(q.dist_sq(&[rat(2, 1), rat(0, 1)]), rat(1, 1));
        assert_eq!(q.dist_sq(&[rat(2, 1), rat(3, 1)]), rat(5, 1));
        let d = Polygon::diamond();
        assert_eq!(d.dist_sq(&[rat(1, 1), rat(1, 1)]), rat(1, 2));
    }

    #[test]
    fn exact_diamond_passes_with_margin() {
        // f = 1/t, T = D_t
        let t = 40;
        let region = diamond_region(2, t);
        let v = shape_check(&region, &rat(1, t), &Polygon::diamond(), &rat(1, 10)).unwrap();
        assert!(v.passed(), "{v:?}");
        // the outer corner of a tip cube is 1/(2t) past the tip along both axes
        assert_eq!(v.outer_excess, rat(1, 2 * t * t));
        let missing: Region = region.iter().filter(|s| s.l1_norm() < 10).cloned().collect();
        let hole: Region = region.difference(&missing).cloned().collect();
        let v = shape_check(&hole, &rat(1, t), &Polygon::diamond(), &rat(1, 10)).unwrap();
        assert!(!v.inner_ok && v.outer_ok);
    }

    #[test]
    fn square_region_against_wrong_target() {
        let region: Region = (-20..=20).flat_map(|i| (-20..=20).map(move |j| Site::xy(i, j))).collect();
        let f = rat(1, 20);
        assert!(shape_check(&region, &f, &Polygon::square(), &rat(1, 10)).unwrap().passed());
        let v = shape_check(&region, &f, &Polygon::diamond(), &rat(1, 10)).unwrap();
        assert!(v.inner_ok && !v.outer_ok);
    }

    #[test]
    fn erosion_limit() {
        assert!(matches!(
            shape_check(&Region::new(), &rat(1, 10), &Polygon::square(), &rat(2, 1)),
            Err(ShapeError::EpsilonTooLarge(_))
        ));
    }

    #[test]
    fn l1_diamond_in_three_dimensions() {
        let t = 12;
        let region = diamond_region(3, t);
        let v = diamond_l1_check(&region, 3, &rat(1, t), &rat(1, 5)).unwrap();
        assert!(v.passed(), "{v:?}");
    }
}
