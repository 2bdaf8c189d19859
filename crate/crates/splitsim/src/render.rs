//! Plain PPM rendering of mass configurations and automaton grids, plus the
//! text geometry overlay for shape checks.

use std::fmt::Write as _;

use splitsim_core::analysis::Polygon;
use splitsim_core::automata::{AutomatonSpec, CAState};
use splitsim_core::lattice::{bounding_box, Region, Site, SparseConfiguration};
use splitsim_core::numeric::{format_rational, int, to_f64, Rational};
use thiserror::Error;

pub type Rgb = [u8; 3];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("cannot render dimension {0}; only 1 and 2 are supported")]
    UnsupportedDimension(usize),
    #[error("unknown label `{0}` has no colour")]
    UnknownLabel(String),
}

pub const BLACK: Rgb = [0, 0, 0];
pub const DARK_BLUE: Rgb = [0, 0, 139];
pub const LIGHT_BLUE: Rgb = [135, 206, 250];
pub const YELLOW: Rgb = [255, 255, 0];
pub const DARK_YELLOW: Rgb = [204, 170, 0];
pub const ORANGE: Rgb = [255, 140, 0];
pub const RED: Rgb = [220, 0, 0];
pub const DARK_RED: Rgb = [139, 0, 0];
pub const LIGHT_GREEN: Rgb = [144, 238, 144];

/// Mass colour at a fixed `h`.
///
/// Background `h` is dark blue and `0` black. Masses in `(0, 1)` run from
/// blue through cyan and green to yellow-green; masses `>= 1` are dark
/// yellow below `2`, orange below `4` and red above. Other negative masses
/// are a muted navy.
pub fn mass_color(m: &Rational, h: &Rational) -> Rgb {
    if m == h {
        return DARK_BLUE;
    }
    if *m == int(0) {
        return BLACK;
    }
    if *m < int(0) {
        return [40, 40, 90];
    }
    if *m >= int(4) {
        return RED;
    }
    if *m >= int(2) {
        return ORANGE;
    }
    if *m >= int(1) {
        return DARK_YELLOW;
    }
    let x = to_f64(m);
    // four-stop cool-to-warm ramp
    let stops: [[f64; 3]; 4] = [[40.0, 80.0, 255.0], [0.0, 200.0, 220.0], [60.0, 200.0, 60.0], [200.0, 230.0, 40.0]];
    let s = x * 3.0;
    let i = (s.floor() as usize).min(2);
    let f = s - i as f64;
    let c = |k: usize| (stops[i][k] + (stops[i + 1][k] - stops[i][k]) * f).round() as u8;
    [c(0), c(1), c(2)]
}

/// Label colour for the automata. The named labels follow the usual figure
/// legend; the remaining ones (`u`, `d`, `q`, `m'`) have their own hues.
pub fn label_color(name: &str) -> Option<Rgb> {
    Some(match name {
        "e" => BLACK,
        "c" => YELLOW,
        "c'" => DARK_YELLOW,
        "p" => LIGHT_BLUE,
        "h" => DARK_BLUE,
        "m" => LIGHT_GREEN,
        "d'" => ORANGE,
        "d!" => RED,
        "q'" => DARK_RED,
        "u" => [255, 255, 255],
        "d" => [255, 105, 180],
        "q" => [148, 0, 211],
        "m'" => [0, 128, 0],
        _ => return None,
    })
}

/// A raster with one `scale x scale` block per site.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<Rgb>,
}

impl Image {
    /// Plain (ASCII) PPM.
    pub fn to_ppm(&self) -> String {
        let mut s = String::with_capacity(self.pixels.len() * 12 + 32);
        let _ = writeln!(s, "P3\n{} {}\n255", self.width, self.height);
        for row in self.pixels.chunks(self.width.max(1)) {
            let line: Vec<String> = row.iter().map(|p| format!("{} {} {}", p[0], p[1], p[2])).collect();
            let _ = writeln!(s, "{}", line.join(" "));
        }
        s
    }
}

/// Sites `[lo, hi]` in two coordinates; a line is a single row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Frame {
    pub lo: [i32; 2],
    pub hi: [i32; 2],
}

impl Frame {
    /// Bounding box of `sites` grown by `margin`; the origin if empty.
    pub fn around(d: usize, sites: &Region, margin: i32) -> Result<Frame, RenderError> {
        if d > 2 || d == 0 {
            return Err(RenderError::UnsupportedDimension(d));
        }
        let (lo, hi) = bounding_box(sites).unwrap_or((vec![0; d], vec![0; d]));
        let y = |v: &[i32]| if d == 2 { v[1] } else { 0 };
        let m2 = if d == 2 { margin } else { 0 };
        Ok(Frame { lo: [lo[0] - margin, y(&lo) - m2], hi: [hi[0] + margin, y(&hi) + m2] })
    }
}

fn paint(d: usize, frame: Frame, scale: usize, color: impl Fn(&Site) -> Rgb) -> Image {
    let scale = scale.max(1);
    let cols = (frame.hi[0] - frame.lo[0] + 1) as usize;
    let rows = (frame.hi[1] - frame.lo[1] + 1) as usize;
    let (width, height) = (cols * scale, rows * scale);
    let mut pixels = vec![BLACK; width * height];
    for r in 0..rows {
        // the top row is the largest y
        let y = frame.hi[1] - r as i32;
        for c in 0..cols {
            let x = frame.lo[0] + c as i32;
            let site = if d == 2 { Site::xy(x, y) } else { Site::new(&[x]) };
            let rgb = color(&site);
            for dy in 0..scale {
                let row = (r * scale + dy) * width;
                pixels[row + c * scale..row + (c + 1) * scale].fill(rgb);
            }
        }
    }
    Image { width, height, pixels }
}

/// Masses of a point configuration (background a constant) at the given
/// frame; callers evaluate symbolic configurations first.
pub fn render_masses(config: &SparseConfiguration, frame: Frame, scale: usize) -> Result<Image, RenderError> {
    let d = config.dim();
    if d > 2 {
        return Err(RenderError::UnsupportedDimension(d));
    }
    let h = config.background().a.clone();
    Ok(paint(d, frame, scale, |s| mass_color(&config.get(s).a, &h)))
}

pub fn render_labels(spec: &AutomatonSpec, state: &CAState, frame: Frame, scale: usize) -> Result<Image, RenderError> {
    let d = state.dim();
    if d > 2 {
        return Err(RenderError::UnsupportedDimension(d));
    }
    for name in &spec.labels {
        label_color(name).ok_or_else(|| RenderError::UnknownLabel(name.clone()))?;
    }
    Ok(paint(d, frame, scale, |s| label_color(spec.label_name(state.get(s))).expect("checked above")))
}

/// Polygon and ε bands in lattice coordinates, exact.
///
/// The limiting shape is `S/f`; the band edges are `n·x = (c ± ε|n|)/f` with
/// `|n|^2 = norm_sq`.
pub fn geometry_overlay(poly: &Polygon, f: &Rational, eps: &Rational) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "polygon {}", poly.name);
    let _ = writeln!(s, "scale {}", format_rational(f));
    let _ = writeln!(s, "epsilon {}", format_rational(eps));
    let _ = writeln!(s, "norm_sq {}", format_rational(&poly.norm_sq));
    for v in &poly.vertices {
        let _ = writeln!(s, "vertex {} {}", format_rational(&(&v[0] / f)), format_rational(&(&v[1] / f)));
    }
    for (n, c) in &poly.edges {
        let _ = writeln!(
            s,
            "edge {} {} {}",
            format_rational(&n[0]),
            format_rational(&n[1]),
            format_rational(&(c / f))
        );
    }
    s
}
