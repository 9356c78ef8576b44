//! Rectangular 2D strings, subrectangle references and block comparison.
//!
//! Every other module consumes a [`Grid2D`]. Grids are immutable once
//! built; generators assemble a cell buffer and hand it to
//! [`Grid2D::new`] or [`Grid2D::from_fn`].

mod fingerprint;
mod io;

pub use fingerprint::{DistinctBlocks, Fingerprint, FingerprintTable, HashKey};
pub use io::{load_grid, save_grid, GridFormat, ParseError};

use std::fmt;

use serde::{Deserialize, Serialize};

/// A character stored in a grid cell.
pub type Symbol = u32;

/// Errors raised when constructing grids or addressing rectangles.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GridError {
    #[error("grid dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyGrid { rows: usize, cols: usize },
    #[error("expected {expected} cells for the declared dimensions, got {actual}")]
    CellCount { expected: usize, actual: usize },
    #[error("cell ({row}, {col}) holds {value}, outside alphabet of size {alphabet}")]
    SymbolOutOfRange {
        row: usize,
        col: usize,
        value: Symbol,
        alphabet: u32,
    },
    #[error("rectangle {rect} does not fit in a {rows}x{cols} grid")]
    RectOutOfBounds {
        rect: Rect,
        rows: usize,
        cols: usize,
    },
    #[error("rectangles {a} and {b} have different dimensions")]
    DimensionMismatch { a: Rect, b: Rect },
    #[error("grid is not binary (alphabet {alphabet})")]
    NotBinary { alphabet: u32 },
}

/// A subrectangle in 0-based grid coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub top: usize,
    pub left: usize,
    pub height: usize,
    pub width: usize,
}

impl Rect {
    pub const fn new(top: usize, left: usize, height: usize, width: usize) -> Self {
        Rect {
            top,
            left,
            height,
            width,
        }
    }

    /// One past the last row.
    pub const fn bottom(&self) -> usize {
        self.top + self.height
    }

    /// One past the last column.
    pub const fn right(&self) -> usize {
        self.left + self.width
    }

    pub const fn area(&self) -> usize {
        self.height * self.width
    }

    pub const fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub const fn transpose(&self) -> Rect {
        Rect::new(self.left, self.top, self.width, self.height)
    }

    /// True if the rectangle is non-empty and lies inside `grid`.
    pub fn fits(&self, grid: &Grid2D) -> bool {
        self.height >= 1
            && self.width >= 1
            && self.bottom() <= grid.rows()
            && self.right() <= grid.cols()
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}x{})",
            self.top, self.left, self.height, self.width
        )
    }
}

/// A rectangular array of small non-negative characters.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Grid2D {
    rows: usize,
    cols: usize,
    alphabet: u32,
    cells: Vec<Symbol>,
}

impl Grid2D {
    /// Builds a grid from row-major cells, checking dimensions and alphabet.
    pub fn new(
        rows: usize,
        cols: usize,
        alphabet: u32,
        cells: Vec<Symbol>,
    ) -> Result<Self, GridError> {
        if rows == 0 || cols == 0 {
            return Err(GridError::EmptyGrid { rows, cols });
        }
        if cells.len() != rows * cols {
            return Err(GridError::CellCount {
                expected: rows * cols,
                actual: cells.len(),
            });
        }
        if let Some(pos) = cells.iter().position(|&v| v >= alphabet) {
            return Err(GridError::SymbolOutOfRange {
                row: pos / cols,
                col: pos % cols,
                value: cells[pos],
                alphabet,
            });
        }
        Ok(Grid2D {
            rows,
            cols,
            alphabet,
            cells,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        alphabet: u32,
        mut f: impl FnMut(usize, usize) -> Symbol,
    ) -> Result<Self, GridError> {
        let mut cells = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                cells.push(f(r, c));
            }
        }
        Grid2D::new(rows, cols, alphabet, cells)
    }

    /// Builds a grid from nested rows; the alphabet is one more than the
    /// largest character (at least 2).
    ///
    /// # Panics
    ///
    /// Panics if `rows` is empty or ragged.
    pub fn from_rows<R: AsRef<[Symbol]>>(rows: &[R]) -> Self {
        assert!(!rows.is_empty(), "grid needs at least one row");
        let cols = rows[0].as_ref().len();
        let mut cells = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), cols, "ragged rows");
            cells.extend_from_slice(row);
        }
        let alphabet = cells.iter().copied().max().unwrap_or(0).max(1) + 1;
        Grid2D::new(rows.len(), cols, alphabet, cells).expect("valid grid")
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self, GridError> {
        Grid2D::new(rows, cols, 2, vec![0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn area(&self) -> usize {
        self.cells.len()
    }

    /// True when the grid only uses characters 0 and 1.
    pub fn is_binary(&self) -> bool {
        self.alphabet <= 2
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Symbol {
        self.cells[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Symbol] {
        &self.cells[row * self.cols..(row + 1) * self.cols]
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    pub fn full_rect(&self) -> Rect {
        Rect::new(0, 0, self.rows, self.cols)
    }

    pub fn check_rect(&self, rect: Rect) -> Result<(), GridError> {
        if rect.fits(self) {
            Ok(())
        } else {
            Err(GridError::RectOutOfBounds {
                rect,
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn transpose(&self) -> Grid2D {
        Grid2D::from_fn(self.cols, self.rows, self.alphabet, |r, c| self.get(c, r))
            .expect("transpose of a valid grid")
    }

    /// Copies the content of `rect` into a new grid with the same alphabet.
    pub fn extract(&self, rect: Rect) -> Result<Grid2D, GridError> {
        self.check_rect(rect)?;
        Grid2D::from_fn(rect.height, rect.width, self.alphabet, |r, c| {
            self.get(rect.top + r, rect.left + c)
        })
    }

    /// Row-major copy of the content of `rect`; used as an exact dedup key.
    pub(crate) fn block_content(&self, rect: Rect) -> Vec<Symbol> {
        let mut out = Vec::with_capacity(rect.area());
        for r in rect.top..rect.bottom() {
            out.extend_from_slice(&self.row(r)[rect.left..rect.right()]);
        }
        out
    }

    /// Cell-wise equality of two same-sized rectangles, without bounds or
    /// dimension checks.
    pub(crate) fn blocks_match(&self, a: Rect, b: Rect) -> bool {
        debug_assert_eq!(a.dims(), b.dims());
        (0..a.height).all(|dr| {
            self.row(a.top + dr)[a.left..a.right()] == self.row(b.top + dr)[b.left..b.right()]
        })
    }
}

impl fmt::Debug for Grid2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Grid2D {}x{} (alphabet {})",
            self.rows, self.cols, self.alphabet
        )?;
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        Ok(())
    }
}

/// Cell-wise comparison of two same-sized rectangles of `grid`.
pub fn block_equal(grid: &Grid2D, a: Rect, b: Rect) -> Result<bool, GridError> {
    grid.check_rect(a)?;
    grid.check_rect(b)?;
    if a.dims() != b.dims() {
        return Err(GridError::DimensionMismatch { a, b });
    }
    Ok(grid.blocks_match(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::run_family;
    use proptest::prelude::*;

    #[test]
    fn zero_grid_blocks_are_equal() {
        let g = Grid2D::zeros(4, 4).unwrap();
        assert!(block_equal(&g, Rect::new(0, 0, 2, 2), Rect::new(2, 2, 2, 2)).unwrap());
    }

    #[test]
    fn rect_equals_itself() {
        let g = Grid2D::from_rows(&[[0, 1, 2], [2, 1, 0]]);
        let r = Rect::new(0, 1, 2, 2);
        assert!(block_equal(&g, r, r).unwrap());
    }

    #[test]
    fn run_family_corner_blocks() {
        let g = run_family(1).unwrap();
        // Both corner blocks hold 1s on their own antidiagonal.
        assert!(block_equal(&g, Rect::new(0, 0, 2, 2), Rect::new(6, 6, 2, 2)).unwrap());
        assert!(!block_equal(&g, Rect::new(0, 0, 2, 2), Rect::new(2, 2, 2, 2)).unwrap());
        assert!(!block_equal(&g, Rect::new(0, 0, 2, 2), Rect::new(5, 5, 2, 2)).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let g = Grid2D::zeros(4, 4).unwrap();
        let err = block_equal(&g, Rect::new(0, 0, 2, 2), Rect::new(0, 0, 2, 3)).unwrap_err();
        assert!(matches!(err, GridError::DimensionMismatch { .. }));
        let err = block_equal(&g, Rect::new(3, 3, 2, 2), Rect::new(0, 0, 2, 2)).unwrap_err();
        assert!(matches!(err, GridError::RectOutOfBounds { .. }));
    }

    #[test]
    fn constructor_checks_invariants() {
        assert!(matches!(
            Grid2D::new(0, 3, 2, vec![]),
            Err(GridError::EmptyGrid { .. })
        ));
        assert!(matches!(
            Grid2D::new(2, 2, 2, vec![0, 1, 0]),
            Err(GridError::CellCount { .. })
        ));
        assert_eq!(
            Grid2D::new(1, 2, 2, vec![0, 2]),
            Err(GridError::SymbolOutOfRange {
                row: 0,
                col: 1,
                value: 2,
                alphabet: 2
            })
        );
    }

    #[test]
    fn transpose_swaps_axes() {
        let g = Grid2D::from_rows(&[[0, 1, 2], [3, 4, 5]]);
        let t = g.transpose();
        assert_eq!(t.dims(), (3, 2));
        assert_eq!(t.row(2), &[2, 5]);
        assert_eq!(t.transpose(), g);
    }

    fn small_grid() -> impl Strategy<Value = Grid2D> {
        (1usize..6, 1usize..6, 1u32..3).prop_flat_map(|(r, c, a)| {
            proptest::collection::vec(0..=a, r * c)
                .prop_map(move |cells| Grid2D::new(r, c, a + 1, cells).unwrap())
        })
    }

    proptest! {
        #[test]
        fn block_equal_is_an_equivalence(g in small_grid(), seeds in proptest::collection::vec(any::<u64>(), 6)) {
            let h = 1 + (seeds[0] as usize) % g.rows();
            let w = 1 + (seeds[1] as usize) % g.cols();
            let pick = |s: u64, t: u64| Rect::new(
                (s as usize) % (g.rows() - h + 1),
                (t as usize) % (g.cols() - w + 1),
                h,
                w,
            );
            let a = pick(seeds[2], seeds[3]);
            let b = pick(seeds[4], seeds[5]);
            let c = pick(seeds[3], seeds[4]);
            let eq = |x, y| block_equal(&g, x, y).unwrap();
            prop_assert!(eq(a, a));
            prop_assert_eq!(eq(a, b), eq(b, a));
            if eq(a, b) && eq(b, c) {
                prop_assert!(eq(a, c));
            }
        }
    }
}
