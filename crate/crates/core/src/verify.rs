//! Witness checking against a generated grid.

use std::collections::HashSet;

use serde::Serialize;

use crate::families::{WitnessKind, WitnessSet};
use crate::grid::{DistinctBlocks, Grid2D, HashKey, Rect};
use crate::periodicity::{is_run, periods};

/// Outcome of checking every rectangle of a [`WitnessSet`].
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct WitnessReport {
    pub total: usize,
    pub verified: usize,
    /// Rectangles that are not the claimed repetition (or fall outside the
    /// grid, or are runs with unexpected periods).
    pub failed: Vec<Rect>,
    /// Distinct repeated blocks `W` among the witnesses (distinct rectangles
    /// for runs).
    pub distinct: usize,
    /// Fingerprint matches resolved as different content during dedup.
    pub collisions: usize,
}

impl WitnessReport {
    /// All witnesses verified and all of them distinct.
    pub fn passed(&self) -> bool {
        self.failed.is_empty() && self.verified == self.total && self.distinct == self.total
    }
}

fn halves_match(g: &Grid2D, r: Rect, kind: WitnessKind) -> bool {
    match kind {
        WitnessKind::TandemHorizontal => {
            let w = r.width / 2;
            r.width.is_multiple_of(2)
                && g.blocks_match(
                    Rect::new(r.top, r.left, r.height, w),
                    Rect::new(r.top, r.left + w, r.height, w),
                )
        }
        WitnessKind::Quartic => {
            let (h, w) = (r.height / 2, r.width / 2);
            let base = Rect::new(r.top, r.left, h, w);
            r.height.is_multiple_of(2)
                && r.width.is_multiple_of(2)
                && [(0, w), (h, 0), (h, w)]
                    .iter()
                    .all(|&(dr, dc)| g.blocks_match(base, Rect::new(r.top + dr, r.left + dc, h, w)))
        }
        WitnessKind::Run => unreachable!(),
    }
}

pub fn verify_witnesses(g: &Grid2D, set: &WitnessSet) -> WitnessReport {
    verify_witnesses_with_key(g, set, HashKey::global())
}

pub fn verify_witnesses_with_key(g: &Grid2D, set: &WitnessSet, key: &HashKey) -> WitnessReport {
    let mut report = WitnessReport {
        total: set.rects.len(),
        ..WitnessReport::default()
    };
    match set.kind {
        WitnessKind::Run => {
            let mut seen = HashSet::new();
            for (i, &r) in set.rects.iter().enumerate() {
                let ok = r.fits(g)
                    && is_run(g, r)
                    && set
                        .expected_periods
                        .get(i)
                        .is_none_or(|&p| periods(g, r) == p);
                if ok {
                    report.verified += 1;
                } else {
                    report.failed.push(r);
                }
                seen.insert(r);
            }
            report.distinct = seen.len();
        }
        kind => {
            let mut blocks = DistinctBlocks::new(g, key);
            for &r in &set.rects {
                if r.fits(g) && halves_match(g, r, kind) {
                    report.verified += 1;
                    let w = if kind == WitnessKind::Quartic {
                        Rect::new(r.top, r.left, r.height / 2, r.width / 2)
                    } else {
                        Rect::new(r.top, r.left, r.height, r.width / 2)
                    };
                    blocks.insert(w);
                } else {
                    report.failed.push(r);
                }
            }
            report.distinct = blocks.len();
            report.collisions = blocks.collisions();
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{quartic_family, quartic_witnesses, run_family, run_witnesses};

    #[test]
    fn genuine_witnesses_pass() {
        let report = verify_witnesses(&run_family(2).unwrap(), &run_witnesses(2).unwrap());
        assert_eq!(
            (report.total, report.verified, report.distinct),
            (63, 63, 63)
        );
        assert!(report.passed());
        let report = verify_witnesses(&quartic_family(2).unwrap(), &quartic_witnesses(2).unwrap());
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn tampered_witnesses_fail() {
        let g = quartic_family(2).unwrap();
        let mut set = quartic_witnesses(2).unwrap();
        set.rects[0].left += 5;
        set.rects[1] = Rect::new(7, 7, 2, 2);
        set.rects.push(set.rects[2]);
        let report = verify_witnesses(&g, &set);
        assert_eq!(report.failed.len(), 2);
        assert!(!report.passed());

        let g = run_family(1).unwrap();
        let mut set = run_witnesses(1).unwrap();
        set.rects[0].width -= 1;
        assert_eq!(verify_witnesses(&g, &set).failed, [Rect::new(1, 1, 6, 5)]);
    }
}
