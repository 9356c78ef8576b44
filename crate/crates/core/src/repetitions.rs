//! Exhaustive detectors for distinct tandems, distinct quartics and runs.
//!
//! The accelerated detectors name every column segment `(top, height, col)`
//! by its exact content (hash-consing one cell at a time), which turns
//! column equality inside any row band into an integer comparison. Tandem
//! and quartic occurrences are then found with run-length scans, and run
//! periods with a failure function over those names. Distinct blocks are
//! deduplicated by fingerprint and confirmed cell by cell.
//!
//! The [`naive`] module holds the oracles: direct cell comparisons only,
//! guarded by an area cap.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::grid::{DistinctBlocks, Grid2D, HashKey, Rect};
use crate::periodicity::{Maximality, PeriodPair};

/// Distinct tandem counts, split by arrangement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct TandemCounts {
    /// Distinct blocks `W` occurring as `[W W]`.
    pub horizontal: usize,
    /// Distinct blocks `W` occurring stacked over themselves.
    pub vertical: usize,
}

impl TandemCounts {
    pub fn combined(&self) -> usize {
        self.horizontal + self.vertical
    }
}

/// A run together with its smallest periods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RunRecord {
    pub rect: Rect,
    pub h_period: usize,
    pub v_period: usize,
}

impl RunRecord {
    pub fn periods(&self) -> PeriodPair {
        PeriodPair {
            h: self.h_period,
            v: self.v_period,
        }
    }
}

/// Content names for every vertical segment of a grid.
///
/// `id(top, height, col)` is equal for two segments iff their cells are
/// equal (segments of different heights never share a name).
pub(crate) struct SegmentIds {
    rows: usize,
    cols: usize,
    ids: Vec<u32>,
}

impl SegmentIds {
    pub(crate) fn columns(g: &Grid2D) -> Self {
        let (rows, cols) = g.dims();
        let mut ids = vec![0u32; rows * rows * cols];
        let mut names: HashMap<(u32, u32), u32> = HashMap::new();
        for top in 0..rows {
            for height in 1..=rows - top {
                for col in 0..cols {
                    let prev = if height == 1 {
                        u32::MAX
                    } else {
                        ids[(top * rows + height - 2) * cols + col]
                    };
                    let next = names.len() as u32;
                    let id = *names
                        .entry((prev, g.get(top + height - 1, col)))
                        .or_insert(next);
                    ids[(top * rows + height - 1) * cols + col] = id;
                }
            }
        }
        SegmentIds { rows, cols, ids }
    }

    /// Names of the columns of the band `top..top + height`.
    #[inline]
    pub(crate) fn band(&self, top: usize, height: usize) -> &[u32] {
        let start = (top * self.rows + height - 1) * self.cols;
        &self.ids[start..start + self.cols]
    }
}

/// `out[c]` = number of consecutive positions from `c` where `eq` holds.
fn match_runs(len: usize, out: &mut Vec<usize>, eq: impl Fn(usize) -> bool) {
    out.clear();
    out.resize(len + 1, 0);
    for c in (0..len).rev() {
        out[c] = if eq(c) { out[c + 1] + 1 } else { 0 };
    }
}

pub fn count_distinct_tandems(g: &Grid2D) -> TandemCounts {
    count_distinct_tandems_with_key(g, HashKey::global())
}

pub fn count_distinct_tandems_with_key(g: &Grid2D, key: &HashKey) -> TandemCounts {
    TandemCounts {
        horizontal: horizontal_tandems(g, key),
        // A vertical tandem of W is a horizontal tandem of W transposed.
        vertical: horizontal_tandems(&g.transpose(), key),
    }
}

fn horizontal_tandems(g: &Grid2D, key: &HashKey) -> usize {
    let (rows, cols) = g.dims();
    let ids = SegmentIds::columns(g);
    let mut distinct = DistinctBlocks::new(g, key);
    let mut runs = Vec::new();
    for top in 0..rows {
        for height in 1..=rows - top {
            let band = ids.band(top, height);
            for half in 1..=cols / 2 {
                match_runs(cols - half, &mut runs, |c| band[c] == band[c + half]);
                for (left, &matched) in runs[..=cols - 2 * half].iter().enumerate() {
                    if matched >= half {
                        distinct.insert(Rect::new(top, left, height, half));
                    }
                }
            }
        }
    }
    distinct.len()
}

pub fn count_distinct_quartics(g: &Grid2D) -> usize {
    count_distinct_quartics_with_key(g, HashKey::global())
}

pub fn count_distinct_quartics_with_key(g: &Grid2D, key: &HashKey) -> usize {
    let (rows, cols) = g.dims();
    let ids = SegmentIds::columns(g);
    let mut distinct = DistinctBlocks::new(g, key);
    let (mut vertical, mut horizontal) = (Vec::new(), Vec::new());
    for top in 0..rows {
        for half_h in 1..=(rows - top) / 2 {
            let upper = ids.band(top, half_h);
            let lower = ids.band(top + half_h, half_h);
            let whole = ids.band(top, 2 * half_h);
            match_runs(cols, &mut vertical, |c| upper[c] == lower[c]);
            for half_w in 1..=cols / 2 {
                match_runs(cols - half_w, &mut horizontal, |c| {
                    whole[c] == whole[c + half_w]
                });
                for left in 0..=cols - 2 * half_w {
                    if vertical[left] >= 2 * half_w && horizontal[left] >= half_w {
                        distinct.insert(Rect::new(top, left, half_h, half_w));
                    }
                }
            }
        }
    }
    distinct.len()
}

pub fn enumerate_runs(g: &Grid2D) -> Vec<RunRecord> {
    enumerate_runs_with(g, Maximality::default())
}

/// Smallest periods of every rectangle sharing one top-left corner, indexed
/// by `(height - 1) * width_limit + (width - 1)`.
struct CornerPeriods {
    width_limit: usize,
    h: Vec<u32>,
    v: Vec<u32>,
}

impl CornerPeriods {
    #[inline]
    fn get(&self, height: usize, width: usize) -> (usize, usize) {
        let i = (height - 1) * self.width_limit + width - 1;
        (self.h[i] as usize, self.v[i] as usize)
    }
}

/// Border-array scan over `seq`, writing the smallest period of every prefix
/// into `out[stride * (len - 1)]`.
fn prefix_periods(
    seq: impl Fn(usize) -> u32,
    len: usize,
    border: &mut Vec<usize>,
    out: &mut [u32],
    stride: usize,
) {
    border.clear();
    border.resize(len, 0);
    let mut k = 0;
    out[0] = 1;
    for i in 1..len {
        let x = seq(i);
        while k > 0 && seq(k) != x {
            k = border[k - 1];
        }
        if seq(k) == x {
            k += 1;
        }
        border[i] = k;
        out[i * stride] = (i + 1 - k) as u32;
    }
}

/// All runs of `g` in `(top, left, height, width)` order.
///
/// Works corner by corner: for a fixed top-left corner the smallest periods
/// of every rectangle come from one failure-function pass per height (over
/// column names) and per width (over row names). Extensions up and left
/// are read from the neighbouring corners' tables, so memory stays at two
/// rows of corners.
pub fn enumerate_runs_with(g: &Grid2D, maximality: Maximality) -> Vec<RunRecord> {
    let (rows, cols) = g.dims();
    let col_ids = SegmentIds::columns(g);
    let row_ids = SegmentIds::columns(&g.transpose());
    let mut border = Vec::new();
    let mut out = Vec::new();
    let mut previous: Vec<CornerPeriods> = Vec::new();
    for top in 0..rows {
        let height_limit = rows - top;
        let current: Vec<CornerPeriods> = (0..cols)
            .map(|left| {
                let width_limit = cols - left;
                let mut h = vec![0u32; height_limit * width_limit];
                let mut v = vec![0u32; height_limit * width_limit];
                for height in 1..=height_limit {
                    let band = &col_ids.band(top, height)[left..];
                    let row = &mut h[(height - 1) * width_limit..height * width_limit];
                    prefix_periods(|i| band[i], width_limit, &mut border, row, 1);
                }
                for width in 1..=width_limit {
                    // Rows of width `width` starting at `left` are the
                    // transposed grid's column segments.
                    let band = &row_ids.band(left, width)[top..];
                    prefix_periods(
                        |i| band[i],
                        height_limit,
                        &mut border,
                        &mut v[width - 1..],
                        width_limit,
                    );
                }
                CornerPeriods { width_limit, h, v }
            })
            .collect();

        for left in 0..cols {
            let here = &current[left];
            for height in 1..=height_limit {
                for width in 1..=cols - left {
                    let (p, q) = here.get(height, width);
                    if 2 * p > width || 2 * q > height {
                        continue;
                    }
                    let blocked = |(ep, eq): (usize, usize), eh: usize, ew: usize| match maximality
                    {
                        Maximality::PeriodGrowth => ep > p || eq > q,
                        Maximality::PeriodicityLoss => 2 * ep > ew || 2 * eq > eh,
                    };
                    let maximal = (left + width == cols
                        || blocked(here.get(height, width + 1), height, width + 1))
                        && (height == height_limit
                            || blocked(here.get(height + 1, width), height + 1, width))
                        && (left == 0
                            || blocked(
                                current[left - 1].get(height, width + 1),
                                height,
                                width + 1,
                            ))
                        && (top == 0
                            || blocked(previous[left].get(height + 1, width), height + 1, width));
                    if maximal {
                        out.push(RunRecord {
                            rect: Rect::new(top, left, height, width),
                            h_period: p,
                            v_period: q,
                        });
                    }
                }
            }
        }
        previous = current;
    }
    out
}

/// Brute-force oracles built from direct cell comparisons.
pub mod naive {
    use std::collections::BTreeSet;

    use super::{RunRecord, TandemCounts};
    use crate::grid::{Grid2D, Rect, Symbol};
    use crate::periodicity::{
        is_run_naive, smallest_h_period_naive, smallest_v_period_naive, Maximality,
    };

    /// Largest grid area (in cells) the oracles accept.
    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct OracleCap(pub usize);

    impl Default for OracleCap {
        fn default() -> Self {
            OracleCap(40 * 40)
        }
    }

    #[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
    #[error("oracle refused a {rows}x{cols} grid ({cells} cells): cap is {cap} cells")]
    pub struct CapExceeded {
        pub rows: usize,
        pub cols: usize,
        pub cells: usize,
        pub cap: usize,
    }

    fn check_cap(g: &Grid2D, cap: OracleCap) -> Result<(), CapExceeded> {
        if g.area() > cap.0 {
            return Err(CapExceeded {
                rows: g.rows(),
                cols: g.cols(),
                cells: g.area(),
                cap: cap.0,
            });
        }
        Ok(())
    }

    type Content = (usize, usize, Vec<Symbol>);

    fn content(g: &Grid2D, r: Rect) -> Content {
        (r.height, r.width, g.block_content(r))
    }

    fn all_rects(g: &Grid2D) -> impl Iterator<Item = Rect> + '_ {
        let (rows, cols) = g.dims();
        (0..rows).flat_map(move |top| {
            (0..cols).flat_map(move |left| {
                (1..=rows - top)
                    .flat_map(move |h| (1..=cols - left).map(move |w| Rect::new(top, left, h, w)))
            })
        })
    }

    /// `true` iff every cell of `r` equals the cell of its top-left block of
    /// size `bh x bw` at the same offset modulo the block.
    fn tiles(g: &Grid2D, r: Rect, bh: usize, bw: usize) -> bool {
        (0..r.height).all(|i| {
            (0..r.width)
                .all(|j| g.get(r.top + i, r.left + j) == g.get(r.top + i % bh, r.left + j % bw))
        })
    }

    pub fn count_distinct_tandems(g: &Grid2D, cap: OracleCap) -> Result<TandemCounts, CapExceeded> {
        check_cap(g, cap)?;
        let mut horizontal = BTreeSet::new();
        let mut vertical = BTreeSet::new();
        for r in all_rects(g) {
            if r.width % 2 == 0 && tiles(g, r, r.height, r.width / 2) {
                horizontal.insert(content(g, Rect::new(r.top, r.left, r.height, r.width / 2)));
            }
            if r.height % 2 == 0 && tiles(g, r, r.height / 2, r.width) {
                vertical.insert(content(g, Rect::new(r.top, r.left, r.height / 2, r.width)));
            }
        }
        Ok(TandemCounts {
            horizontal: horizontal.len(),
            vertical: vertical.len(),
        })
    }

    pub fn count_distinct_quartics(g: &Grid2D, cap: OracleCap) -> Result<usize, CapExceeded> {
        check_cap(g, cap)?;
        let mut seen = BTreeSet::new();
        for r in all_rects(g) {
            if r.width % 2 == 0 && r.height % 2 == 0 && tiles(g, r, r.height / 2, r.width / 2) {
                seen.insert(content(
                    g,
                    Rect::new(r.top, r.left, r.height / 2, r.width / 2),
                ));
            }
        }
        Ok(seen.len())
    }

    pub fn enumerate_runs(
        g: &Grid2D,
        cap: OracleCap,
        maximality: Maximality,
    ) -> Result<Vec<RunRecord>, CapExceeded> {
        check_cap(g, cap)?;
        Ok(all_rects(g)
            .filter(|&r| is_run_naive(g, r, maximality))
            .map(|rect| RunRecord {
                rect,
                h_period: smallest_h_period_naive(g, rect),
                v_period: smallest_v_period_naive(g, rect),
            })
            .collect())
    }
}
