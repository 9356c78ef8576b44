use super::{FamilyError, FamilyKind, FamilySpec, WitnessKind, WitnessSet};
use crate::grid::{Grid2D, Rect};
use crate::periodicity::PeriodPair;

/// A level-`i` copy placed inside the run family grid. `filled` copies have
/// their antidiagonal set to 1s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RunCopy {
    pub level: u32,
    pub filled: bool,
    pub top: usize,
    pub left: usize,
}

/// Side of a level-`i` block; level 0 is the `2 x 2` seed.
fn side(level: u32) -> usize {
    2 << (2 * level)
}

fn place(
    level: u32,
    filled: bool,
    top: usize,
    left: usize,
    cells: &mut [u32],
    n: usize,
    copies: &mut Vec<RunCopy>,
) {
    if level == 0 {
        if filled {
            cells[top * n + left + 1] = 1;
            cells[(top + 1) * n + left] = 1;
        }
        return;
    }
    copies.push(RunCopy {
        level,
        filled,
        top,
        left,
    });
    let child = side(level - 1);
    for bi in 0..4 {
        for bj in 0..4 {
            let corner = (bi, bj) == (0, 0) || (bi, bj) == (3, 3);
            let on_antidiagonal = filled && bi + bj == 3;
            place(
                level - 1,
                corner || on_antidiagonal,
                top + bi * child,
                left + bj * child,
                cells,
                n,
                copies,
            );
        }
    }
}

fn build(level: u32) -> Result<(Grid2D, Vec<RunCopy>), FamilyError> {
    let spec = FamilySpec::new(FamilyKind::Run, level)?;
    let n = spec.check_cells()?;
    let mut cells = vec![0u32; n * n];
    let mut copies = Vec::new();
    place(level, false, 0, 0, &mut cells, n, &mut copies);
    copies.sort();
    let grid = Grid2D::new(n, n, 2, cells).expect("run family cells are binary");
    Ok((grid, copies))
}

/// The run family: `A_1` is `8 x 8` zeros with 1s at `(0,1)`, `(1,0)`,
/// `(6,7)` and `(7,6)`; `A_i` is a `4 x 4` arrangement of `A_{i-1}` whose
/// upper-left and bottom-right copies have their antidiagonals filled.
///
/// ```
/// let a = rep2d::families::run_family(1).unwrap();
/// let ones: Vec<_> = (0..8)
///     .flat_map(|r| (0..8).map(move |c| (r, c)))
///     .filter(|&(r, c)| a.get(r, c) == 1)
///     .collect();
/// assert_eq!(ones, [(0, 1), (1, 0), (6, 7), (7, 6)]);
/// ```
pub fn run_family(level: u32) -> Result<Grid2D, FamilyError> {
    build(level).map(|(g, _)| g)
}

/// Every copy of `A_i` and of its antidiagonal-filled variant, for
/// `i = 1..=level`, including the whole grid itself.
pub fn run_family_copies(level: u32) -> Result<Vec<RunCopy>, FamilyError> {
    build(level).map(|(_, c)| c)
}

/// For every unfilled copy of `A_i`, the `(N - 1)^2` runs spanning from the
/// antidiagonal of its upper-left child to that of its bottom-right child,
/// where `N` is the child side (`N = 2` at level 1). Expected periods are
/// `N` in both directions for `i >= 2` and 1 at level 1.
pub fn run_witnesses(level: u32) -> Result<WitnessSet, FamilyError> {
    let spec = FamilySpec::new(FamilyKind::Run, level)?;
    let predicted = crate::formulas::run_counts(level).ok().map(|c| c.total);
    spec.check_witnesses(predicted)?;
    let copies = run_family_copies(level)?;
    let mut rects = Vec::new();
    let mut expected_periods = Vec::new();
    for copy in copies.iter().filter(|c| !c.filled) {
        let n = side(copy.level - 1);
        let period = if copy.level == 1 { 1 } else { n };
        for t in 0..n - 1 {
            for s in 1..n {
                let top = copy.top + t + 1;
                let left = copy.left + n - 1 - t;
                let bottom = copy.top + 3 * n + s - 1;
                let right = copy.left + 4 * n - 1 - s;
                rects.push(Rect::new(top, left, bottom - top + 1, right - left + 1));
                expected_periods.push(PeriodPair {
                    h: period,
                    v: period,
                });
            }
        }
    }
    Ok(WitnessSet {
        spec,
        kind: WitnessKind::Run,
        rects,
        expected_periods,
    })
}
