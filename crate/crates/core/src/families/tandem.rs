use super::{FamilyError, FamilyKind, FamilySpec, WitnessKind, WitnessSet};
use crate::grid::{Grid2D, Rect};

/// How rows of the tandem family are labelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TandemLabels {
    /// `l`-bit labels holding `i - 1` for row `i`. With `n > 2^l` rows the
    /// labels wrap around, so rows repeat.
    #[default]
    Literal,
    /// The shortest label width `L` with `2^L >= 3*2^l + 2L`, which keeps
    /// every row label distinct. The side becomes `3*2^l + 2L`.
    Widened,
}

impl TandemLabels {
    /// Label width in bits for level `level`.
    pub fn bits(self, level: u32) -> u32 {
        match self {
            TandemLabels::Literal => level,
            TandemLabels::Widened => (1..)
                .find(|&b: &u32| {
                    let rows = 3u128 << level.min(100);
                    b >= 127 || (1u128 << b) >= rows + 2 * b as u128
                })
                .unwrap(),
        }
    }
}

fn layout(level: u32, labels: TandemLabels) -> Result<(usize, usize, usize), FamilyError> {
    let spec = FamilySpec::new(FamilyKind::Tandem, level)?;
    // The widened side is never smaller than the literal one.
    let probe = FamilySpec {
        kind: FamilyKind::Tandem,
        level,
    };
    probe.check_cells()?;
    let bits = labels.bits(level) as usize;
    let marker = 1usize << level;
    let n = 3 * marker + 2 * bits;
    let cells = (n as u128) * (n as u128);
    if cells > super::MAX_GRID_CELLS {
        return Err(FamilyError::TooLarge {
            kind: spec.kind,
            level,
            what: "grid cells",
            size: cells,
            limit: super::MAX_GRID_CELLS,
        });
    }
    Ok((n, marker, bits))
}

/// The tandem family with literal row labels.
///
/// Row `i` (1-based) is `M B M B M` where `M` is `2^l - 1` zeros followed by
/// a 1 and `B` is `i - 1` written in `l` binary digits (low bits, most
/// significant first).
///
/// ```
/// let a = rep2d::families::tandem_family(1).unwrap();
/// assert_eq!(a.dims(), (8, 8));
/// assert_eq!(a.row(0), &[0, 1, 0, 0, 1, 0, 0, 1]);
/// assert_eq!(a.row(1), &[0, 1, 1, 0, 1, 1, 0, 1]);
/// ```
pub fn tandem_family(level: u32) -> Result<Grid2D, FamilyError> {
    tandem_family_with(level, TandemLabels::Literal)
}

pub fn tandem_family_with(level: u32, labels: TandemLabels) -> Result<Grid2D, FamilyError> {
    let (n, marker, bits) = layout(level, labels)?;
    let period = marker + bits;
    let grid = Grid2D::from_fn(n, n, 2, |r, c| {
        let offset = c % period;
        if offset < marker {
            (offset == marker - 1) as u32
        } else {
            let bit = bits - 1 - (offset - marker);
            // Bits beyond the usize width are zero.
            u32::try_from(r.checked_shr(bit as u32).unwrap_or(0) & 1).unwrap()
        }
    })
    .expect("tandem family dimensions are positive");
    Ok(grid)
}

/// One horizontal tandem per choice of a row range `i..=j` and a left
/// column `k` in `1..=2^l` (1-based), of width `2(2^l + l)`.
pub fn tandem_witnesses(level: u32) -> Result<WitnessSet, FamilyError> {
    tandem_witnesses_with(level, TandemLabels::Literal)
}

pub fn tandem_witnesses_with(level: u32, labels: TandemLabels) -> Result<WitnessSet, FamilyError> {
    let (n, marker, bits) = layout(level, labels)?;
    let spec = FamilySpec::new(FamilyKind::Tandem, level)?;
    let count = (n as u128) * (n as u128 + 1) / 2 * marker as u128;
    spec.check_witnesses(Some(count))?;
    let width = 2 * (marker + bits);
    let mut rects = Vec::with_capacity(count as usize);
    for top in 0..n {
        for bottom in top..n {
            for left in 0..marker {
                rects.push(Rect::new(top, left, bottom - top + 1, width));
            }
        }
    }
    Ok(WitnessSet {
        spec,
        kind: WitnessKind::TandemHorizontal,
        rects,
        expected_periods: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn literal_rows() {
        let a = tandem_family(1).unwrap();
        assert_eq!(a.dims(), (8, 8));
        assert_eq!(a.row(0), &[0, 1, 0, 0, 1, 0, 0, 1]);
        assert_eq!(a.row(1), &[0, 1, 1, 0, 1, 1, 0, 1]);
        assert_eq!(tandem_family(2).unwrap().dims(), (16, 16));
        assert_eq!(tandem_family(3).unwrap().dims(), (30, 30));
    }

    #[test]
    fn literal_labels_wrap() {
        // Only 2^l labels exist for 3*2^l + 2l rows.
        for level in 1..=3 {
            let a = tandem_family(level).unwrap();
            let rows: HashSet<&[u32]> = (0..a.rows()).map(|r| a.row(r)).collect();
            assert_eq!(rows.len(), 1 << level);
        }
    }

    #[test]
    fn widened_rows_are_distinct() {
        assert_eq!(TandemLabels::Widened.bits(1), 4);
        assert_eq!(TandemLabels::Widened.bits(2), 5);
        assert_eq!(TandemLabels::Widened.bits(3), 6);
        for level in 1..=3 {
            let a = tandem_family_with(level, TandemLabels::Widened).unwrap();
            let rows: HashSet<&[u32]> = (0..a.rows()).map(|r| a.row(r)).collect();
            assert_eq!(rows.len(), a.rows());
        }
    }

    #[test]
    fn witness_counts_and_shape() {
        let w = tandem_witnesses(1).unwrap();
        assert_eq!(w.len(), 72);
        assert_eq!(tandem_witnesses(2).unwrap().len(), 544);
        let a = tandem_family(1).unwrap();
        for r in &w.rects {
            assert_eq!(r.width, 6);
            let half = r.width / 2;
            assert!(a.blocks_match(
                Rect::new(r.top, r.left, r.height, half),
                Rect::new(r.top, r.left + half, r.height, half)
            ));
        }
    }
}
