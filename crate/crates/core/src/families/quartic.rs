use super::{FamilyError, FamilyKind, FamilySpec, WitnessKind, WitnessSet};
use crate::grid::{Grid2D, Rect, Symbol};

/// One level of the quartic construction: `rows x n` cells and the all-zero
/// column ranges `(start, width)` that the next level subdivides.
struct Level {
    rows: usize,
    cells: Vec<Symbol>,
    ranges: Vec<(usize, usize)>,
    specials: u32,
}

/// Levels `1..=level` of the quartic construction for side `n = 3^level - 1`.
fn levels(level: u32, n: usize) -> Vec<Level> {
    let g = (n - 2) / 3;
    let mut first = vec![0; 2 * n];
    for row in 0..2 {
        first[row * n + g] = 1;
        first[row * n + 2 * g + 1] = 1;
    }
    let mut out = vec![Level {
        rows: 2,
        cells: first,
        ranges: vec![(0, g), (g + 1, g), (2 * g + 2, g)],
        specials: 1,
    }];
    for _ in 2..=level {
        let prev = out.last().unwrap();
        let mut separator = vec![0; n];
        let mut ranges = Vec::with_capacity(3 * prev.ranges.len());
        for (j, &(start, width)) in prev.ranges.iter().enumerate() {
            let sub = (width - 2) / 3;
            let special = 3 * prev.specials + 1 + j as u32;
            separator[start + sub] = special;
            separator[start + 2 * sub + 1] = special;
            ranges.extend([
                (start, sub),
                (start + sub + 1, sub),
                (start + 2 * sub + 2, sub),
            ]);
        }
        let mut cells = Vec::with_capacity((3 * prev.rows + 2) * n);
        for copy in 0..3u32 {
            if copy > 0 {
                cells.extend_from_slice(&separator);
            }
            let shift = copy * prev.specials;
            cells.extend(
                prev.cells
                    .iter()
                    .map(|&c| if c == 0 { 0 } else { c + shift }),
            );
        }
        out.push(Level {
            rows: 3 * prev.rows + 2,
            cells,
            ranges,
            specials: 3 * prev.specials + prev.ranges.len() as u32,
        });
    }
    out
}

fn top_level(level: u32) -> Result<(usize, Level), FamilyError> {
    let spec = FamilySpec::new(FamilyKind::Quartic, level)?;
    let n = spec.check_cells()?;
    let top = levels(level, n).pop().unwrap();
    Ok((n, top))
}

/// The quartic family over `{0}` and the special characters `1..=S_l`.
///
/// ```
/// let a = rep2d::families::quartic_family(3).unwrap();
/// assert_eq!(a.dims(), (26, 26));
/// assert_eq!(a.alphabet(), 28);
/// ```
pub fn quartic_family(level: u32) -> Result<Grid2D, FamilyError> {
    let (n, top) = top_level(level)?;
    debug_assert_eq!(top.rows, n);
    Ok(Grid2D::new(n, n, top.specials + 1, top.cells).expect("quartic family is well formed"))
}

/// Gadget side `k = 2 + ceil(sqrt(b))` where `b = ceil(log2(sigma + 1))` bits
/// hold every character `0..=sigma`.
pub fn binary_gadget_size(sigma: u128) -> usize {
    let bits = (u128::BITS - sigma.leading_zeros()) as usize;
    let mut side = 0;
    while side * side < bits {
        side += 1;
    }
    2 + side
}

/// The `k x k` binary block encoding `c`: zero first row and column, 1s in
/// the rest of the last row and column, and `c` in the middle
/// `(k - 2) x (k - 2)` cells, most significant bit first, row by row.
///
/// ```
/// let b = rep2d::families::gadget(5, 4).unwrap();
/// assert_eq!(b.row(1), &[0, 0, 1, 1]);
/// assert_eq!(b.row(3), &[0, 1, 1, 1]);
/// ```
pub fn gadget(c: u64, k: usize) -> Result<Grid2D, FamilyError> {
    let bits = k.saturating_sub(2).pow(2);
    if k < 2 || (bits < 64 && c >> bits != 0) {
        return Err(FamilyError::GadgetOverflow { c, k, bits });
    }
    let m = k - 2;
    Ok(Grid2D::from_fn(k, k, 2, |r, col| gadget_cell(c, k, m, r, col)).expect("gadget is binary"))
}

#[inline]
fn gadget_cell(c: u64, k: usize, m: usize, r: usize, col: usize) -> u32 {
    if r == 0 || col == 0 {
        0
    } else if r == k - 1 || col == k - 1 {
        1
    } else {
        let index = (r - 1) * m + (col - 1);
        let shift = m * m - 1 - index;
        if shift >= 64 {
            0
        } else {
            ((c >> shift) & 1) as u32
        }
    }
}

/// The quartic family with each cell holding `c` replaced by
/// `gadget(c, k)`; character 0 becomes the gadget with an all-zero middle.
pub fn quartic_binary_family(level: u32) -> Result<Grid2D, FamilyError> {
    let spec = FamilySpec::new(FamilyKind::QuarticBinary, level)?;
    let side = spec.check_cells()?;
    let k = spec.k().unwrap();
    let base = quartic_family(level)?;
    let m = k - 2;
    Ok(Grid2D::from_fn(side, side, 2, |r, c| {
        gadget_cell(base.get(r / k, c / k) as u64, k, m, r % k, c % k)
    })
    .expect("gadget substitution is binary"))
}

/// Witnesses at scale `k` (1 for the plain family) for the level rooted at
/// row `row0` of the unscaled grid.
fn collect(levels: &[Level], i: usize, row0: usize, g: usize, k: usize, out: &mut Vec<Rect>) {
    if i == 1 {
        for u in 0..=g * k {
            out.push(Rect::new(row0 * k, u, 2 * k, 2 * (g + 1) * k));
        }
        return;
    }
    let prev = &levels[i - 2];
    let m = prev.rows;
    for copy in 0..3 {
        collect(levels, i - 1, row0 + copy * (m + 1), g, k, out);
    }
    for &(start, width) in &prev.ranges {
        let sub = (width - 2) / 3;
        for v in 0..=m * k {
            for u in 0..=sub * k {
                out.push(Rect::new(
                    row0 * k + v,
                    start * k + u,
                    2 * (m + 1) * k,
                    2 * (sub + 1) * k,
                ));
            }
        }
    }
}

fn witness_set(spec: FamilySpec, k: usize) -> Result<WitnessSet, FamilyError> {
    let n = spec.check_cells()? / k;
    let predicted = crate::formulas::binary_quartic_counts(spec.level, k as u128)
        .ok()
        .map(|c| c.exact.last().copied().unwrap_or(0));
    spec.check_witnesses(predicted)?;
    let levels = levels(spec.level, n);
    let mut rects = Vec::new();
    collect(&levels, spec.level as usize, 0, (n - 2) / 3, k, &mut rects);
    Ok(WitnessSet {
        spec,
        kind: WitnessKind::Quartic,
        rects,
        expected_periods: Vec::new(),
    })
}

/// `Q_l` quartics: at level 1 the `(n + 1) / 3` horizontal shifts of a
/// `2 x 2((n-2)/3 + 1)` block, and at each level `i` the shifted blocks
/// spanning two stacked copies of `A_{i-1}` inside one zero column range.
pub fn quartic_witnesses(level: u32) -> Result<WitnessSet, FamilyError> {
    witness_set(FamilySpec::new(FamilyKind::Quartic, level)?, 1)
}

/// The quartic witnesses scaled by `k`, with the finer shifts allowed by
/// the gadget substitution.
pub fn quartic_binary_witnesses(level: u32) -> Result<WitnessSet, FamilyError> {
    let spec = FamilySpec::new(FamilyKind::QuarticBinary, level)?;
    witness_set(spec, spec.k().unwrap())
}

/// Position of `r` relative to the gadget lattice, `(r.top mod k, r.left
/// mod k)`, read from the contents of `r` alone: in a gadget-substituted
/// grid the all-zero rows and columns are exactly the lattice lines.
///
/// ```
/// use rep2d::families::{quartic_binary_family, recover_offsets};
/// use rep2d::grid::Rect;
///
/// let a = quartic_binary_family(2).unwrap();
/// assert_eq!(recover_offsets(&a, Rect::new(6, 11, 4, 9), 4).unwrap(), (2, 3));
/// ```
pub fn recover_offsets(g: &Grid2D, r: Rect, k: usize) -> Result<(usize, usize), FamilyError> {
    if k == 0 || r.height < k || r.width < k {
        return Err(FamilyError::RectTooSmall { rect: r, k });
    }
    g.check_rect(r)
        .map_err(|_| FamilyError::RectTooSmall { rect: r, k })?;
    let zero_row = (0..r.height)
        .find(|&i| g.row(r.top + i)[r.left..r.right()].iter().all(|&c| c == 0))
        .ok_or(FamilyError::NotAFamilyGrid {
            rect: r,
            axis: "row",
        })?;
    let zero_col = (0..r.width)
        .find(|&j| (r.top..r.bottom()).all(|row| g.get(row, r.left + j) == 0))
        .ok_or(FamilyError::NotAFamilyGrid {
            rect: r,
            axis: "column",
        })?;
    Ok(((k - zero_row % k) % k, (k - zero_col % k) % k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::DistinctBlocks;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn is_quartic(g: &Grid2D, r: Rect) -> bool {
        let (h, w) = (r.height / 2, r.width / 2);
        r.height.is_multiple_of(2)
            && r.width.is_multiple_of(2)
            && [(0, w), (h, 0), (h, w)].iter().all(|&(dr, dc)| {
                g.blocks_match(
                    Rect::new(r.top, r.left, h, w),
                    Rect::new(r.top + dr, r.left + dc, h, w),
                )
            })
    }

    #[test]
    fn first_level_layout() {
        let a = quartic_family(2).unwrap();
        // A_1 is the top two rows; specials at 1-based columns 3 and 6.
        for row in 0..2 {
            let specials: Vec<_> = (0..8).filter(|&c| a.get(row, c) != 0).collect();
            assert_eq!(specials, [2, 5]);
        }
        // The separating row splits each zero range of A_1 into three.
        assert_eq!(a.row(2), &[4, 4, 0, 5, 5, 0, 6, 6]);
        assert_eq!(a.row(2), a.row(5));
        assert_eq!(levels(2, 8)[0].ranges, [(0, 2), (3, 2), (6, 2)]);
    }

    #[test]
    fn special_counts() {
        let a = quartic_family(3).unwrap();
        assert_eq!(a.dims(), (26, 26));
        let used: std::collections::BTreeSet<_> =
            a.cells().iter().copied().filter(|&c| c != 0).collect();
        assert_eq!(used.len(), 27);
        assert_eq!(levels(4, 80).last().unwrap().specials, 108);
    }

    #[test]
    fn copies_carry_disjoint_specials() {
        let a = quartic_family(3).unwrap();
        let block = |i: usize| -> std::collections::BTreeSet<u32> {
            (i * 9..i * 9 + 8)
                .flat_map(|r| a.row(r).iter().copied())
                .filter(|&c| c != 0)
                .collect()
        };
        let (b0, b1, b2) = (block(0), block(1), block(2));
        assert!(b0.is_disjoint(&b1) && b1.is_disjoint(&b2) && b0.is_disjoint(&b2));
        for sep in [8, 17] {
            assert_eq!(a.row(sep).iter().filter(|&&c| c != 0).count(), 18);
        }
    }

    #[test]
    fn gadget_examples() {
        let g = gadget(0, 4).unwrap();
        assert_eq!(
            g,
            Grid2D::from_rows(&[[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 1], [0, 1, 1, 1]])
        );
        let g = gadget(5, 4).unwrap();
        assert_eq!(
            g,
            Grid2D::from_rows(&[[0, 0, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1], [0, 1, 1, 1]])
        );
        assert!(matches!(
            gadget(16, 4),
            Err(FamilyError::GadgetOverflow { .. })
        ));
        let all: std::collections::HashSet<_> = (0..16).map(|c| gadget(c, 4).unwrap()).collect();
        assert_eq!(all.len(), 16);
    }

    #[test]
    fn gadget_sizes() {
        assert_eq!(binary_gadget_size(6), 4);
        assert_eq!(binary_gadget_size(27), 5);
        assert_eq!(binary_gadget_size(108), 5);
        assert_eq!(binary_gadget_size(1), 3);
    }

    #[test]
    fn quartic_witness_examples() {
        let w = quartic_witnesses(1).unwrap();
        assert_eq!(w.rects, [Rect::new(0, 0, 2, 2)]);
        let w = quartic_witnesses(2).unwrap();
        assert_eq!(w.len(), 18);
        assert_eq!(
            &w.rects[..3],
            &[
                Rect::new(0, 0, 2, 6),
                Rect::new(0, 1, 2, 6),
                Rect::new(0, 2, 2, 6)
            ]
        );
        assert_eq!(quartic_witnesses(3).unwrap().len(), 243);
    }

    #[test]
    fn witnesses_are_distinct_quartics() {
        for (grid, set) in [
            (quartic_family(2).unwrap(), quartic_witnesses(2).unwrap()),
            (quartic_family(3).unwrap(), quartic_witnesses(3).unwrap()),
            (
                quartic_binary_family(2).unwrap(),
                quartic_binary_witnesses(2).unwrap(),
            ),
        ] {
            let mut distinct = DistinctBlocks::new(&grid, &crate::grid::HashKey::from_seed(3));
            for &r in &set.rects {
                assert!(is_quartic(&grid, r), "{r}");
                distinct.insert(Rect::new(r.top, r.left, r.height / 2, r.width / 2));
            }
            assert_eq!(distinct.len(), set.len());
        }
    }

    #[test]
    fn binary_frame() {
        for level in 2..=3 {
            let a = quartic_binary_family(level).unwrap();
            let k = FamilySpec::new(FamilyKind::QuarticBinary, level)
                .unwrap()
                .k()
                .unwrap();
            for r in 0..a.rows() {
                let zero = a.row(r).iter().all(|&c| c == 0);
                assert_eq!(zero, r % k == 0, "row {r}");
                if r % k != 0 {
                    assert!(a.row(r).windows(k).all(|w| w.contains(&1)));
                }
            }
        }
    }

    #[test]
    fn level_one_binary_witness_width() {
        let w = quartic_binary_witnesses(2).unwrap();
        // n = 8, k = 4: width 2((n k - 2 k)/3 + k) = 24, height 2k.
        assert_eq!(w.rects[0], Rect::new(0, 0, 8, 24));
        assert_eq!(w.rects.iter().filter(|r| r.height == 8).count(), 27);
    }

    #[test]
    fn offsets_are_recovered() {
        let a = quartic_binary_family(2).unwrap();
        let k = 4;
        assert_eq!(
            recover_offsets(&a, Rect::new(4, 8, 4, 4), k).unwrap(),
            (0, 0)
        );
        assert_eq!(
            recover_offsets(&a, Rect::new(3, 0, 4, 32), k).unwrap(),
            (3, 0)
        );
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let h = rng.random_range(k..=a.rows());
            let w = rng.random_range(k..=a.cols());
            let r = Rect::new(
                rng.random_range(0..=a.rows() - h),
                rng.random_range(0..=a.cols() - w),
                h,
                w,
            );
            assert_eq!(recover_offsets(&a, r, k).unwrap(), (r.top % k, r.left % k));
        }
        assert!(matches!(
            recover_offsets(&a, Rect::new(0, 0, 3, 8), k),
            Err(FamilyError::RectTooSmall { .. })
        ));
        let ones = Grid2D::from_fn(4, 4, 2, |_, _| 1).unwrap();
        assert!(matches!(
            recover_offsets(&ones, ones.full_rect(), k),
            Err(FamilyError::NotAFamilyGrid { .. })
        ));
    }
}
