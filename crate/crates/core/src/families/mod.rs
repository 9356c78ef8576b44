//! Generators for the extremal grid families and the rectangles their
//! lower-bound arguments count.
//!
//! Four families are provided:
//!
//! * [`tandem_family`]: `n x n` binary grid with `n = 3*2^l + 2l`, every
//!   row a periodic word built from a marker block and a row label.
//! * [`quartic_family`]: `n x n` grid with `n = 3^l - 1` over `{0}` plus
//!   `S_l` special characters, built by stacking three renamed copies of
//!   the previous level with separating rows.
//! * [`quartic_binary_family`]: the quartic family with every character
//!   replaced by a `k x k` binary [`gadget`].
//! * [`run_family`]: `2*4^l` square binary grid built from `4 x 4` copies
//!   of the previous level, with 1s along the antidiagonals of designated
//!   copies.
//!
//! Each family has a matching `*_witnesses` function returning a
//! [`WitnessSet`].

mod quartic;
mod run;
mod tandem;

pub use quartic::{
    binary_gadget_size, gadget, quartic_binary_family, quartic_binary_witnesses, quartic_family,
    quartic_witnesses, recover_offsets,
};
pub use run::{run_family, run_family_copies, run_witnesses, RunCopy};
pub use tandem::{
    tandem_family, tandem_family_with, tandem_witnesses, tandem_witnesses_with, TandemLabels,
};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::grid::Rect;
use crate::periodicity::PeriodPair;

/// Generation refuses grids with more cells than this.
pub const MAX_GRID_CELLS: u128 = 1 << 25;
/// Witness generation refuses sets with more rectangles than this.
pub const MAX_WITNESSES: u128 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    Tandem,
    Quartic,
    QuarticBinary,
    Run,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [
        FamilyKind::Tandem,
        FamilyKind::Quartic,
        FamilyKind::QuarticBinary,
        FamilyKind::Run,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Tandem => "tandem",
            FamilyKind::Quartic => "quartic",
            FamilyKind::QuarticBinary => "quartic_binary",
            FamilyKind::Run => "run",
        }
    }

    /// Smallest level accepted for generation.
    pub fn min_level(self) -> u32 {
        match self {
            FamilyKind::QuarticBinary => 2,
            _ => 1,
        }
    }

    /// The repetition kind the family's witnesses claim.
    pub fn witness_kind(self) -> WitnessKind {
        match self {
            FamilyKind::Tandem => WitnessKind::TandemHorizontal,
            FamilyKind::Quartic | FamilyKind::QuarticBinary => WitnessKind::Quartic,
            FamilyKind::Run => WitnessKind::Run,
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tandem" | "tandems" => Ok(FamilyKind::Tandem),
            "quartic" | "quartics" => Ok(FamilyKind::Quartic),
            "quartic_binary" | "quartic-binary" | "binary" => Ok(FamilyKind::QuarticBinary),
            "run" | "runs" => Ok(FamilyKind::Run),
            other => Err(FamilyError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    TandemHorizontal,
    Quartic,
    Run,
}

impl WitnessKind {
    pub fn name(self) -> &'static str {
        match self {
            WitnessKind::TandemHorizontal => "tandem-horizontal",
            WitnessKind::Quartic => "quartic",
            WitnessKind::Run => "run",
        }
    }
}

impl fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WitnessKind {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tandem-horizontal" => Ok(WitnessKind::TandemHorizontal),
            "quartic" => Ok(WitnessKind::Quartic),
            "run" => Ok(WitnessKind::Run),
            other => Err(FamilyError::UnknownKind(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("unknown family kind `{0}` (expected tandem, quartic, quartic_binary or run)")]
    UnknownKind(String),
    #[error("{kind} family needs level >= {min}, got {level}")]
    LevelTooSmall {
        kind: FamilyKind,
        level: u32,
        min: u32,
    },
    #[error("{kind} family at level {level} needs {size} {what}, over the limit of {limit}")]
    TooLarge {
        kind: FamilyKind,
        level: u32,
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("character {c} does not fit in the {bits} payload bits of a {k}x{k} gadget")]
    GadgetOverflow { c: u64, k: usize, bits: usize },
    #[error("rectangle {rect} is smaller than {k}x{k}")]
    RectTooSmall { rect: Rect, k: usize },
    #[error("rectangle {rect} has no all-zero {axis}: not a gadget-substituted grid")]
    NotAFamilyGrid { rect: Rect, axis: &'static str },
    #[error("witness file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A family together with its level; every derived size follows from these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub level: u32,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, level: u32) -> Result<Self, FamilyError> {
        if level < kind.min_level() {
            return Err(FamilyError::LevelTooSmall {
                kind,
                level,
                min: kind.min_level(),
            });
        }
        Ok(FamilySpec { kind, level })
    }

    /// Side length of the underlying (non-substituted) construction. `None`
    /// when it overflows `u128`.
    pub fn base_size(&self) -> Option<u128> {
        let l = self.level;
        match self.kind {
            FamilyKind::Tandem => 2u128
                .checked_pow(l)
                .and_then(|p| p.checked_mul(3))
                .and_then(|v| v.checked_add(2 * l as u128)),
            FamilyKind::Quartic | FamilyKind::QuarticBinary => 3u128.checked_pow(l).map(|p| p - 1),
            FamilyKind::Run => 4u128.checked_pow(l).and_then(|p| p.checked_mul(2)),
        }
    }

    /// `n` as a `usize`; panics when the size does not fit.
    pub fn n(&self) -> usize {
        self.base_size()
            .and_then(|n| usize::try_from(n).ok())
            .expect("family size overflows usize")
    }

    /// Number of special characters, for the quartic families.
    pub fn sigma(&self) -> Option<u128> {
        match self.kind {
            FamilyKind::Quartic | FamilyKind::QuarticBinary => 3u128
                .checked_pow(self.level - 1)
                .map(|p| p * self.level as u128),
            _ => None,
        }
    }

    /// Gadget side for the binary quartic family.
    pub fn k(&self) -> Option<usize> {
        match self.kind {
            FamilyKind::QuarticBinary => self.sigma().map(binary_gadget_size),
            _ => None,
        }
    }

    /// Side length of the generated grid (`n * k` for the binary family).
    pub fn side(&self) -> Option<u128> {
        let n = self.base_size()?;
        match self.k() {
            Some(k) => n.checked_mul(k as u128),
            None => Some(n),
        }
    }

    pub(crate) fn check_cells(&self) -> Result<usize, FamilyError> {
        let side = self.side();
        let cells = side.and_then(|s| s.checked_mul(s));
        match cells {
            Some(c) if c <= MAX_GRID_CELLS => Ok(side.unwrap() as usize),
            _ => Err(FamilyError::TooLarge {
                kind: self.kind,
                level: self.level,
                what: "grid cells",
                size: cells.unwrap_or(u128::MAX),
                limit: MAX_GRID_CELLS,
            }),
        }
    }

    pub(crate) fn check_witnesses(&self, count: Option<u128>) -> Result<(), FamilyError> {
        match count {
            Some(c) if c <= MAX_WITNESSES => Ok(()),
            _ => Err(FamilyError::TooLarge {
                kind: self.kind,
                level: self.level,
                what: "witness rectangles",
                size: count.unwrap_or(u128::MAX),
                limit: MAX_WITNESSES,
            }),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "family={} level={}", self.kind, self.level)?;
        if let Some(n) = self.base_size() {
            write!(f, " n={n}")?;
        }
        if let (Some(sigma), Some(k), Some(side)) = (self.sigma(), self.k(), self.side()) {
            write!(f, " sigma={sigma} k={k} n_prime={side}")?;
        }
        Ok(())
    }
}

/// Rectangles counted by a family's lower-bound argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSet {
    pub spec: FamilySpec,
    pub kind: WitnessKind,
    pub rects: Vec<Rect>,
    /// Smallest periods each run witness is expected to have, parallel to
    /// `rects`. Empty for tandem and quartic witnesses, and after parsing.
    pub expected_periods: Vec<PeriodPair>,
}

impl WitnessSet {
    pub fn len(&self) -> usize {
        self.rects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    /// Line-oriented text: a `#` header echoing the spec, then
    /// `top left height width` per rectangle.
    pub fn to_text(&self) -> String {
        use fmt::Write as _;
        let mut out = format!(
            "# {} kind={} count={}\n",
            self.spec,
            self.kind,
            self.rects.len()
        );
        for r in &self.rects {
            let _ = writeln!(out, "{} {} {} {}", r.top, r.left, r.height, r.width);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, FamilyError> {
        let parse_err = |line: usize, message: String| FamilyError::Parse { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| parse_err(1, "empty witness file".into()))?;
        let header = header
            .strip_prefix('#')
            .ok_or_else(|| parse_err(1, "missing `#` header".into()))?;
        let (mut kind, mut level, mut claimed, mut count) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| parse_err(1, format!("malformed header field `{field}`")))?;
            match key {
                "family" => kind = Some(value.parse::<FamilyKind>()?),
                "level" => {
                    level = Some(
                        value
                            .parse::<u32>()
                            .map_err(|e| parse_err(1, e.to_string()))?,
                    )
                }
                "kind" => claimed = Some(value.parse::<WitnessKind>()?),
                "count" => {
                    count = Some(
                        value
                            .parse::<usize>()
                            .map_err(|e| parse_err(1, e.to_string()))?,
                    )
                }
                _ => {}
            }
        }
        let spec = FamilySpec::new(
            kind.ok_or_else(|| parse_err(1, "header lacks `family`".into()))?,
            level.ok_or_else(|| parse_err(1, "header lacks `level`".into()))?,
        )?;
        let mut rects = Vec::new();
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let nums: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            match nums.as_deref() {
                Ok([t, l, h, w]) if *h > 0 && *w > 0 => rects.push(Rect::new(*t, *l, *h, *w)),
                _ => {
                    return Err(parse_err(
                        i + 1,
                        format!("expected `top left height width`, found `{line}`"),
                    ))
                }
            }
        }
        if let Some(c) = count {
            if c != rects.len() {
                return Err(parse_err(
                    1,
                    format!("header announces {c} rectangles, file has {}", rects.len()),
                ));
            }
        }
        Ok(WitnessSet {
            spec,
            kind: claimed.unwrap_or(spec.kind.witness_kind()),
            rects,
            expected_periods: Vec::new(),
        })
    }
}

/// Generates the grid of any family.
pub fn generate(spec: FamilySpec) -> Result<crate::grid::Grid2D, FamilyError> {
    match spec.kind {
        FamilyKind::Tandem => tandem_family(spec.level),
        FamilyKind::Quartic => quartic_family(spec.level),
        FamilyKind::QuarticBinary => quartic_binary_family(spec.level),
        FamilyKind::Run => run_family(spec.level),
    }
}

/// Witnesses of any family.
pub fn witnesses(spec: FamilySpec) -> Result<WitnessSet, FamilyError> {
    match spec.kind {
        FamilyKind::Tandem => tandem_witnesses(spec.level),
        FamilyKind::Quartic => quartic_witnesses(spec.level),
        FamilyKind::QuarticBinary => quartic_binary_witnesses(spec.level),
        FamilyKind::Run => run_witnesses(spec.level),
    }
}
