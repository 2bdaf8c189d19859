//! The diamond, square and octagon automata and their recurrent patterns.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;

use super::text::parse_automaton;
use super::{AutomatonSpec, CAState, LabelId};
use crate::lattice::{diamond_region, Site};

fn build(text: &str) -> AutomatonSpec {
    parse_automaton(text).expect("built-in automaton text is well formed")
}

/// Labels `e`, `h` (background) and `u`; classes `s = {e, h}`.
pub fn builtin_diamond(d: usize) -> AutomatonSpec {
    let k = 2 * d;
    let rep = |sym: &str, times: usize| vec![sym; times].join(" ");
    let mut text = String::new();
    let _ = writeln!(text, "automaton diamond\ndim {d}\nlabels e h u\ndefault h\nclass s = e h");
    let _ = writeln!(text, "1: h | {} -> h", rep("s", k));
    let _ = writeln!(text, "2: s | {} -> u", rep("u", k));
    let _ = writeln!(text, "3: u | {} -> e", rep("s", k));
    let _ = writeln!(text, "4: h | u {} -> u", rep("*", k - 1));
    let origin: Vec<&str> = vec!["0"; d];
    let _ = writeln!(text, "at {} = u", origin.join(" "));
    build(&text)
}

const SQUARE: &str = "\
automaton square
dim 2
labels e h p m m' c d
default h
class s = e h p
1: h | s s s s -> h
2: p | s s s s -> p
3: c | * * * * -> c
4: m | * * * * -> e
5: d | * * * * -> c
6: m' | * * * * -> c
7: h | d s s s -> m
8: h | m s s s -> p
9: p | m m m' s -> d
10: h | d m s s -> d
11: h | m m s s -> d
12: e | d d c p -> m'
at 0 0 = d
";

/// The square automaton on `Z^2`, starting from `d` at the origin.
pub fn builtin_square() -> AutomatonSpec {
    build(SQUARE)
}

const OCTAGON_RULES: &str = "\
automaton octagon
dim 2
labels e h p m d d' d! c c' q q'
default h
class s = e h p
class u = m d d' d! c c' q q'
1: h | s s s s -> h
21: p | s s s s -> p
2: u | * * * * -> e
3: h | m s s s -> p
4: h | d s s s -> m
5: h | d' s s s -> m
6: h | d! s s s -> m
7: h | q s s s -> d
8: h | q m s s -> d!
9: h | q' m s s -> d!
10: h | m d' s s -> d'
11: h | d' d' s s -> d'
12: p | d! m c s -> q'
13: p | m m c s -> q
14: p | d m c s -> q
15: e | q' c d' s -> c
16: e | d! d! c' s -> c
17: e | q c d! s -> c
18: e | q' c d! s -> c
override 20: e | m q q c -> c'
19: e | u u u u -> c
";

/// First quadrant of the octagon automaton's initial grid, row `y = 0` first.
const OCTAGON_QUADRANT: [&[&str]; 7] = [
    &["c", "e", "c", "e", "c'", "e", "p"],
    &["e", "c", "e", "c", "e", "d!"],
    &["c", "e", "c", "e", "c", "p"],
    &["e", "c", "e", "c", "e", "m"],
    &["c'", "e", "c", "e", "d'"],
    &["e", "d!", "p", "m"],
    &["p"],
];

/// Sets `label` at `(x, y)` and all its images under the symmetries of the
/// square.
fn set_symmetric(state: &mut CAState, x: i32, y: i32, label: LabelId) {
    for s in Site::xy(x, y).symmetric_images() {
        state.set(s, label);
    }
}

/// The octagon automaton; rule 20 is listed before rule 19 and overrides it.
pub fn builtin_octagon() -> AutomatonSpec {
    let mut spec = build(OCTAGON_RULES);
    let mut initial = CAState::new(2, spec.default);
    for (y, row) in OCTAGON_QUADRANT.iter().enumerate() {
        for (x, name) in row.iter().enumerate() {
            let l = spec.label(name).expect("known label");
            set_symmetric(&mut initial, x as i32, y as i32, l);
        }
    }
    spec.initial = initial;
    spec
}

/// The diamond automaton's grid at time `t`: on `D_t`, `u` where
/// `sum x_i - t` is even and `e` elsewhere.
pub fn construct_diamond_pattern(spec: &AutomatonSpec, t: u64) -> CAState {
    let u = spec.label("u").expect("diamond label u");
    let e = spec.label("e").expect("diamond label e");
    let mut st = CAState::new(spec.dim, spec.default);
    st.t = t;
    for s in diamond_region(spec.dim, t as i64) {
        let even = (s.coord_sum() - t as i64).rem_euclid(2) == 0;
        st.set(s, if even { u } else { e });
    }
    st
}

/// `ζ_r`: `c` on the square of radius `r - 1`, `d`/`e` alternating on its
/// ring of radius `r`, `p` on outside cells next to an `e`.
pub fn construct_zeta(spec: &AutomatonSpec, r: u64) -> CAState {
    let l = |n: &str| spec.label(n).expect("square label");
    let (c, d, e, p) = (l("c"), l("d"), l("e"), l("p"));
    let r = r as i32;
    let mut st = CAState::new(2, spec.default);
    st.t = 2 * r as u64;
    let mut es = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            let s = Site::xy(i, j);
            if i.abs().max(j.abs()) < r {
                st.set(s, c);
            } else if (i - j).rem_euclid(2) == 0 {
                st.set(s, d);
            } else {
                st.set(s, e);
                es.push(s);
            }
        }
    }
    for s in es {
        for y in s.neighbors() {
            if y.linf_norm() > r as i64 {
                st.set(y, p);
            }
        }
    }
    st
}

/// Tile, bottom row first.
const TILE: [[&str; 5]; 3] = [
    ["c", "e", "c", "e", "q'"],
    ["e", "d!", "p", "m", "h"],
    ["p", "h", "h", "h", "h"],
];

/// Cornerstone, bottom row first.
const CORNERSTONE: [[&str; 4]; 4] = [
    ["e", "c", "e", "p"],
    ["c", "e", "d'", "h"],
    ["e", "d'", "h", "h"],
    ["p", "h", "h", "h"],
];

/// `χ^i`, the octagon automaton's grid at time `5 + 10i`.
///
/// Built on the octant `y >= x >= 0` and mirrored: a cornerstone at
/// `(5(i+1), 5(i+1))`, tiles at `(5(i-j), 7+5i+j)` for `j = 0..=i` (the cell
/// `(0, 7+6i)` is `c'`), background behind the tiles (every monotone path to
/// the origin crosses a tile or the cornerstone), and an `e`/`c` checkerboard
/// elsewhere.
pub fn construct_chi(spec: &AutomatonSpec, i: u64) -> CAState {
    let i = i as i32;
    let size = 6 * i + 12;
    let side = (size + 1) as usize;
    // octant labels from tiles and cornerstone; the blocked set is symmetric
    let mut fixed: Vec<Option<&str>> = vec![None; side * side];
    let idx = |x: i32, y: i32| (y as usize) * side + x as usize;
    let place = |fixed: &mut Vec<Option<&str>>, x: i32, y: i32, lab: &'static str| {
        fixed[idx(x, y)] = Some(lab);
        fixed[idx(y, x)] = Some(lab);
    };
    let corner = 5 * (i + 1);
    for (dy, row) in CORNERSTONE.iter().enumerate() {
        for (dx, lab) in row.iter().enumerate() {
            place(&mut fixed, corner + dx as i32, corner + dy as i32, lab);
        }
    }
    for j in 0..=i {
        let (tx, ty) = (5 * (i - j), 7 + 5 * i + j);
        for (dy, row) in TILE.iter().enumerate() {
            for (dx, lab) in row.iter().enumerate() {
                place(&mut fixed, tx + dx as i32, ty + dy as i32, lab);
            }
        }
    }
    place(&mut fixed, 0, 7 + 6 * i, "c'");
    // cells reachable from the origin by monotone paths avoiding the blocks
    let mut reach = vec![false; side * side];
    for y in 0..=size {
        for x in 0..=size {
            if fixed[idx(x, y)].is_some() {
                continue;
            }
            reach[idx(x, y)] = (x == 0 && y == 0)
                || (x > 0 && reach[idx(x - 1, y)])
                || (y > 0 && reach[idx(x, y - 1)]);
        }
    }
    let mut st = CAState::new(2, spec.default);
    st.t = 5 + 10 * i as u64;
    let e = spec.label("e").expect("octagon label e");
    let c = spec.label("c").expect("octagon label c");
    for y in 0..=size {
        for x in 0..=y {
            let label = match fixed[idx(x, y)] {
                Some(name) => spec.label(name).expect("octagon label"),
                None if reach[idx(x, y)] => {
                    if (x + y) % 2 == 0 {
                        e
                    } else {
                        c
                    }
                }
                None => spec.default,
            };
            set_symmetric(&mut st, x, y, label);
        }
    }
    st
}

/// L∞ radius of the growth cluster.
pub fn octagon_radius(state: &CAState) -> i64 {
    state.support().iter().map(Site::linf_norm).max().unwrap_or(0)
}

/// Sites of the grid with a given label, for tests and rendering.
pub fn sites_with_label(state: &CAState, l: LabelId) -> BTreeSet<Site> {
    state.sorted_entries().into_iter().filter(|(_, x)| *x == l).map(|(s, _)| s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::ca_run;

    #[test]
    fn builtins_are_valid() {
        for spec in [builtin_diamond(1), builtin_diamond(3), builtin_square(), builtin_octagon()] {
            spec.validate().unwrap();
        }
        assert_eq!(builtin_square().rules.len(), 12);
        // the published twenty plus the stable-p identity
        assert_eq!(builtin_octagon().rules.len(), 21);
    }

    #[test]
    fn zeta_two_matches_the_drawing() {
        let spec = builtin_square();
        let z = construct_zeta(&spec, 2);
        let expect = [
            (Site::xy(-1, 3), "p"),
            (Site::xy(1, 3), "p"),
            (Site::xy(-2, 2), "d"),
            (Site::xy(-1, 2), "e"),
            (Site::xy(0, 2), "d"),
            (Site::xy(-3, 1), "p"),
            (Site::xy(-2, 1), "e"),
            (Site::xy(-1, 1), "c"),
            (Site::xy(2, 0), "d"),
            (Site::xy(0, 0), "c"),
        ];
        for (s, name) in expect {
            assert_eq!(spec.label_name(z.get(&s)), name, "at {s}");
        }
        assert_eq!(z.len(), 25 + 8);
    }

    #[test]
    fn zeta_zero_is_the_initial_grid() {
        let spec = builtin_square();
        assert_eq!(construct_zeta(&spec, 0), spec.initial);
    }

    #[test]
    fn chi_zero_is_time_five() {
        let spec = builtin_octagon();
        let xi5 = ca_run(&spec, &spec.initial, 5).unwrap();
        assert_eq!(xi5.first_difference(&construct_chi(&spec, 0)), None);
        assert_eq!(octagon_radius(&xi5), 9);
    }
}
