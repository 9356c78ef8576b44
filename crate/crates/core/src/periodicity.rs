//! Smallest horizontal/vertical periods of subrectangles and the 2D run
//! predicate.
//!
//! `p` is a horizontal period of a rectangle when column `i` equals column
//! `i + p` for every valid `i`; the vertical period is the row analogue.
//! The accelerated routines run a failure function over whole columns (or
//! rows), so each period costs O(area). The `_naive` variants try every
//! candidate shift with direct cell comparisons and serve as the oracle.

use serde::{Deserialize, Serialize};

use crate::grid::{Grid2D, Rect};

/// Smallest horizontal (`h`, in columns) and vertical (`v`, in rows)
/// periods of a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodPair {
    pub h: usize,
    pub v: usize,
}

/// How a periodic rectangle is judged maximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Maximality {
    /// Every one-cell extension inside the grid must have a larger smallest
    /// horizontal or vertical period than the rectangle itself.
    #[default]
    PeriodGrowth,
    /// Every one-cell extension inside the grid must stop being both
    /// h-periodic and v-periodic.
    PeriodicityLoss,
}

/// Smallest period of a sequence of length `len` whose elements are compared
/// with `eq`, via the failure function.
pub(crate) fn smallest_period_by(len: usize, mut eq: impl FnMut(usize, usize) -> bool) -> usize {
    if len == 0 {
        return 0;
    }
    let mut border = vec![0usize; len];
    let mut k = 0;
    for i in 1..len {
        while k > 0 && !eq(i, k) {
            k = border[k - 1];
        }
        if eq(i, k) {
            k += 1;
        }
        border[i] = k;
    }
    len - border[len - 1]
}

fn columns_equal(g: &Grid2D, r: Rect, a: usize, b: usize) -> bool {
    (r.top..r.bottom()).all(|row| g.get(row, r.left + a) == g.get(row, r.left + b))
}

fn rows_equal(g: &Grid2D, r: Rect, a: usize, b: usize) -> bool {
    g.row(r.top + a)[r.left..r.right()] == g.row(r.top + b)[r.left..r.right()]
}

fn assert_fits(g: &Grid2D, r: Rect) {
    assert!(
        r.fits(g),
        "rectangle {r} does not fit in a {}x{} grid",
        g.rows(),
        g.cols()
    );
}

/// Smallest horizontal period of `r`; `r.width` when nothing shorter works.
///
/// # Panics
///
/// Panics if `r` does not fit in `g`.
pub fn smallest_h_period(g: &Grid2D, r: Rect) -> usize {
    assert_fits(g, r);
    smallest_period_by(r.width, |a, b| columns_equal(g, r, a, b))
}

/// Smallest vertical period of `r`.
///
/// # Panics
///
/// Panics if `r` does not fit in `g`.
pub fn smallest_v_period(g: &Grid2D, r: Rect) -> usize {
    assert_fits(g, r);
    smallest_period_by(r.height, |a, b| rows_equal(g, r, a, b))
}

pub fn periods(g: &Grid2D, r: Rect) -> PeriodPair {
    PeriodPair {
        h: smallest_h_period(g, r),
        v: smallest_v_period(g, r),
    }
}

pub fn smallest_h_period_naive(g: &Grid2D, r: Rect) -> usize {
    assert_fits(g, r);
    (1..=r.width)
        .find(|&p| (0..r.width - p).all(|i| columns_equal(g, r, i, i + p)))
        .unwrap_or(r.width)
}

pub fn smallest_v_period_naive(g: &Grid2D, r: Rect) -> usize {
    assert_fits(g, r);
    (1..=r.height)
        .find(|&q| (0..r.height - q).all(|i| rows_equal(g, r, i, i + q)))
        .unwrap_or(r.height)
}

/// True iff the smallest horizontal period is at most half the width.
pub fn is_h_periodic(g: &Grid2D, r: Rect) -> bool {
    2 * smallest_h_period(g, r) <= r.width
}

pub fn is_v_periodic(g: &Grid2D, r: Rect) -> bool {
    2 * smallest_v_period(g, r) <= r.height
}

/// The one-cell extensions of `r` (left, right, up, down) that stay inside
/// `g`.
pub fn extensions(g: &Grid2D, r: Rect) -> impl Iterator<Item = Rect> {
    let left = (r.left > 0).then(|| Rect::new(r.top, r.left - 1, r.height, r.width + 1));
    let right = (r.right() < g.cols()).then(|| Rect::new(r.top, r.left, r.height, r.width + 1));
    let up = (r.top > 0).then(|| Rect::new(r.top - 1, r.left, r.height + 1, r.width));
    let down = (r.bottom() < g.rows()).then(|| Rect::new(r.top, r.left, r.height + 1, r.width));
    [left, right, up, down].into_iter().flatten()
}

/// Run test with the default [`Maximality::PeriodGrowth`] reading.
pub fn is_run(g: &Grid2D, r: Rect) -> bool {
    is_run_with(g, r, Maximality::default())
}

pub fn is_run_with(g: &Grid2D, r: Rect, maximality: Maximality) -> bool {
    run_check(g, r, maximality, periods)
}

/// Same contract as [`is_run_with`], computed with the naive period routines.
pub fn is_run_naive(g: &Grid2D, r: Rect, maximality: Maximality) -> bool {
    run_check(g, r, maximality, |g, r| PeriodPair {
        h: smallest_h_period_naive(g, r),
        v: smallest_v_period_naive(g, r),
    })
}

fn run_check(
    g: &Grid2D,
    r: Rect,
    maximality: Maximality,
    periods_of: impl Fn(&Grid2D, Rect) -> PeriodPair,
) -> bool {
    let own = periods_of(g, r);
    if 2 * own.h > r.width || 2 * own.v > r.height {
        return false;
    }
    extensions(g, r).all(|ext| {
        let p = periods_of(g, ext);
        match maximality {
            Maximality::PeriodGrowth => p.h > own.h || p.v > own.v,
            Maximality::PeriodicityLoss => 2 * p.h > ext.width || 2 * p.v > ext.height,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::run_family;
    use proptest::prelude::*;

    fn abab() -> Grid2D {
        Grid2D::from_rows(&[[0, 1, 0, 1, 0, 1], [1, 0, 1, 0, 1, 0]])
    }

    #[test]
    fn period_examples() {
        let zeros = Grid2D::zeros(2, 4).unwrap();
        assert_eq!(smallest_h_period(&zeros, zeros.full_rect()), 1);
        let row = Grid2D::from_rows(&[[0, 1, 1, 0]]);
        assert_eq!(smallest_h_period(&row, row.full_rect()), 3);
        assert_eq!(smallest_h_period(&abab(), abab().full_rect()), 2);

        let t = row.transpose();
        assert_eq!(smallest_v_period(&t, t.full_rect()), 3);
        let t = abab().transpose();
        assert_eq!(smallest_v_period(&t, t.full_rect()), 2);
    }

    #[test]
    fn periodicity_examples() {
        let zeros = Grid2D::zeros(2, 2).unwrap();
        assert!(is_h_periodic(&zeros, zeros.full_rect()));
        assert!(is_v_periodic(&zeros, zeros.full_rect()));
        let row = Grid2D::from_rows(&[[0, 1, 1, 0]]);
        assert!(!is_h_periodic(&row, row.full_rect()));
        assert!(is_h_periodic(&abab(), abab().full_rect()));
        // odd width: p <= floor(c / 2)
        let odd = Grid2D::from_rows(&[[0, 1, 0, 1, 0]]);
        assert!(is_h_periodic(&odd, odd.full_rect()));
        let odd = Grid2D::from_rows(&[[0, 1, 2, 0, 1]]);
        assert!(!is_h_periodic(&odd, odd.full_rect()));
    }

    #[test]
    fn run_examples() {
        let zeros = Grid2D::zeros(4, 4).unwrap();
        assert!(is_run(&zeros, zeros.full_rect()));
        assert!(!is_run(&zeros, Rect::new(0, 0, 2, 2)));

        let a1 = run_family(1).unwrap();
        let interior = Rect::new(1, 1, 6, 6);
        assert_eq!(periods(&a1, interior), PeriodPair { h: 1, v: 1 });
        assert!(is_run(&a1, interior));
        assert!(is_run_naive(&a1, interior, Maximality::PeriodGrowth));
        for ext in extensions(&a1, interior) {
            let p = periods(&a1, ext);
            assert!(p.h > 1 || p.v > 1, "{ext} keeps periods {p:?}");
        }
    }

    #[test]
    fn extensions_respect_bounds() {
        let g = Grid2D::zeros(3, 3).unwrap();
        assert_eq!(extensions(&g, g.full_rect()).count(), 0);
        assert_eq!(extensions(&g, Rect::new(1, 1, 1, 1)).count(), 4);
        assert_eq!(extensions(&g, Rect::new(0, 0, 1, 1)).count(), 2);
    }

    fn grid_and_rect() -> impl Strategy<Value = (Grid2D, Rect)> {
        (1usize..9, 1usize..13, 1u32..3).prop_flat_map(|(rows, cols, a)| {
            (
                proptest::collection::vec(0..=a, rows * cols),
                0..rows,
                0..cols,
                1..=rows,
                1..=cols,
            )
                .prop_map(move |(cells, t, l, h, w)| {
                    let g = Grid2D::new(rows, cols, a + 1, cells).unwrap();
                    let h = h.min(rows - t);
                    let w = w.min(cols - l);
                    (g, Rect::new(t, l, h, w))
                })
        })
    }

    proptest! {
        #[test]
        fn failure_function_matches_naive((g, r) in grid_and_rect()) {
            prop_assert_eq!(smallest_h_period(&g, r), smallest_h_period_naive(&g, r));
            prop_assert_eq!(smallest_v_period(&g, r), smallest_v_period_naive(&g, r));
            for m in [Maximality::PeriodGrowth, Maximality::PeriodicityLoss] {
                prop_assert_eq!(is_run_with(&g, r, m), is_run_naive(&g, r, m));
            }
        }

        // An extension whose period grows can no longer be periodic in that
        // direction, and one whose period is kept keeps the other period
        // too, so both readings accept the same rectangles.
        #[test]
        fn maximality_readings_agree((g, r) in grid_and_rect()) {
            prop_assert_eq!(
                is_run_with(&g, r, Maximality::PeriodGrowth),
                is_run_with(&g, r, Maximality::PeriodicityLoss)
            );
        }

        #[test]
        fn returned_period_is_minimal((g, r) in grid_and_rect()) {
            let p = smallest_h_period(&g, r);
            prop_assert!((1..=r.width).contains(&p));
            prop_assert!((0..r.width - p).all(|i| columns_equal(&g, r, i, i + p)));
            for smaller in 1..p {
                prop_assert!((0..r.width - smaller).any(|i| !columns_equal(&g, r, i, i + smaller)));
            }
        }

        #[test]
        fn transposition_duality((g, r) in grid_and_rect()) {
            let t = g.transpose();
            prop_assert_eq!(smallest_h_period(&g, r), smallest_v_period(&t, r.transpose()));
            prop_assert_eq!(smallest_v_period(&g, r), smallest_h_period(&t, r.transpose()));
            prop_assert_eq!(is_run(&g, r), is_run(&t, r.transpose()));
        }
    }
}
