//! The configuration after eight parallel steps from `n = 3` on `Z^2`, as
//! integer multiples of `1/65536`.

use crate::lattice::{Site, SparseConfiguration};
use crate::numeric::{rat, AffineMass};

/// `(x, y, a, b)` for the first quadrant, mass `(a + b h) / 65536`. Cells not
/// listed hold `h`.
const QUADRANT: [(i32, i32, i64, i64); 35] = [
    (0, 6, 111, 88388),
    (0, 5, 0, 0),
    (1, 5, 675, 128772),
    (2, 5, 108, 89360),
    (3, 5, 81, 95692),
    (0, 4, 2610, 128408),
    (1, 4, 0, 0),
    (2, 4, 1350, 96824),
    (3, 4, 0, 0),
    (4, 4, 162, 125848),
    (0, 3, 0, 0),
    (1, 3, 4842, 116632),
    (2, 3, 0, 0),
    (3, 3, 1572, 112880),
    (4, 3, 0, 0),
    (5, 3, 81, 95692),
    (0, 2, 9423, 99268),
    (1, 2, 0, 0),
    (2, 2, 5814, 102920),
    (3, 2, 0, 0),
    (4, 2, 1350, 96824),
    (5, 2, 108, 89360),
    (0, 1, 0, 0),
    (1, 1, 11700, 98608),
    (2, 1, 0, 0),
    (3, 1, 4842, 116632),
    (4, 1, 0, 0),
    (5, 1, 675, 128772),
    (0, 0, 14592, 96512),
    (1, 0, 0, 0),
    (2, 0, 9423, 99268),
    (3, 0, 0, 0),
    (4, 0, 2610, 128408),
    (5, 0, 0, 0),
    (6, 0, 111, 88388),
];

/// Number of cells in the first-quadrant table.
pub const FIGURE8_CELLS: usize = QUADRANT.len();

/// The table extended by the symmetries of the square; background `h`.
pub fn figure8_table() -> SparseConfiguration {
    let mut cfg = SparseConfiguration::new(2, AffineMass::h());
    for &(x, y, a, b) in &QUADRANT {
        let m = AffineMass::new(rat(a, 65536), rat(b, 65536));
        for s in Site::xy(x, y).symmetric_images() {
            cfg.set(s, m.clone());
        }
    }
    cfg
}
