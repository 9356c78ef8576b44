//! Exact predicted counts for every family.
//!
//! Each quantity is evaluated both by its recurrence and by its closed form
//! and the two are required to agree; inequalities used by the lower-bound
//! arguments are checked on the exact values. Counts are `u128`, which holds
//! every value up to level 10 with a wide margin; the binary quartic lower
//! bound is an exact rational.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::families::{binary_gadget_size, FamilyKind, FamilySpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormulaError {
    #[error("level must be at least {min}, got {level}")]
    LevelTooSmall { level: u32, min: u32 },
    #[error("arithmetic overflow evaluating level {level}")]
    Overflow { level: u32 },
    #[error("{quantity}_{i}: recurrence gives {recurrence}, closed form gives {closed}")]
    Inconsistent {
        quantity: &'static str,
        i: u32,
        recurrence: u128,
        closed: u128,
    },
    #[error("check failed at level {level}: {check}")]
    Violated { level: u32, check: String },
}

fn pow(base: u128, exp: u32, level: u32) -> Result<u128, FormulaError> {
    base.checked_pow(exp)
        .ok_or(FormulaError::Overflow { level })
}

fn agree(
    quantity: &'static str,
    i: u32,
    recurrence: u128,
    closed: u128,
) -> Result<(), FormulaError> {
    if recurrence == closed {
        Ok(())
    } else {
        Err(FormulaError::Inconsistent {
            quantity,
            i,
            recurrence,
            closed,
        })
    }
}

fn check(level: u32, ok: bool, check: impl FnOnce() -> String) -> Result<(), FormulaError> {
    if ok {
        Ok(())
    } else {
        Err(FormulaError::Violated {
            level,
            check: check(),
        })
    }
}

fn min_level(level: u32, min: u32) -> Result<(), FormulaError> {
    if level < min {
        Err(FormulaError::LevelTooSmall { level, min })
    } else {
        Ok(())
    }
}

/// Per-level values of the quartic construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuarticLevel {
    pub i: u32,
    /// Rows of `A_i`.
    pub m: u128,
    /// Width of the zero column ranges left after level `i`.
    pub n: u128,
    /// Quartics counted in `A_i`.
    pub q: u128,
    /// Special characters used by `A_i`.
    pub s: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuarticCounts {
    pub level: u32,
    pub n: u128,
    pub levels: Vec<QuarticLevel>,
}

impl QuarticCounts {
    pub fn total(&self) -> u128 {
        self.levels.last().map_or(0, |l| l.q)
    }
}

/// `M_i`, `N_i`, `Q_i` and `S_i` for `i = 1..=level` with `n = 3^level - 1`.
///
/// ```
/// let c = rep2d::formulas::quartic_counts(2).unwrap();
/// assert_eq!(c.total(), 18);
/// ```
pub fn quartic_counts(level: u32) -> Result<QuarticCounts, FormulaError> {
    min_level(level, 1)?;
    let n = pow(3, level, level)? - 1;
    let mut levels: Vec<QuarticLevel> = Vec::with_capacity(level as usize);
    for i in 1..=level {
        let three_i = pow(3, i, level)?;
        let ranges = three_i / 3;
        let (m, width, q, q_short, s) = match levels.last() {
            None => (2, (n - 2) / 3, (n + 1) / 3, (n + 1) / 3, 1),
            Some(p) => {
                let sub = (p.n - 2) / 3;
                let fresh = ranges * (sub + 1) * (p.m + 1);
                (
                    3 * p.m + 2,
                    sub,
                    3 * p.q + fresh,
                    3 * p.q + ranges / 3 * (n + 1),
                    3 * p.s + ranges,
                )
            }
        };
        agree("M", i, m, three_i - 1)?;
        agree("N", i, width, (n + 1) / three_i - 1)?;
        // 3^(i-2) i (n+1), kept integral at i = 1.
        agree("Q", i, q, three_i * i as u128 * (n + 1) / 9)?;
        agree("Q", i, q_short, q)?;
        agree("S", i, s, i as u128 * ranges)?;
        levels.push(QuarticLevel {
            i,
            m,
            n: width,
            q,
            s,
        });
    }
    Ok(QuarticCounts { level, n, levels })
}

fn ratio_as_string<S: Serializer>(r: &Ratio<i128>, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinaryQuarticCounts {
    pub level: u32,
    pub n: u128,
    pub k: u128,
    pub n_prime: u128,
    /// `Q'_i` for `i = 1..=level`.
    pub exact: Vec<u128>,
    /// `3^(l-3) k^2 ((l-1) n - 3^l / 2)`.
    #[serde(serialize_with = "ratio_as_string")]
    pub bound: Ratio<i128>,
}

impl BinaryQuarticCounts {
    pub fn total(&self) -> u128 {
        self.exact.last().copied().unwrap_or(0)
    }

    /// Whether the exact count strictly exceeds the lower-bound expression.
    pub fn bound_holds(&self) -> bool {
        Ratio::from_integer(self.total() as i128) > self.bound
    }
}

/// Exact `Q'_i` for gadget side `k`, together with the closed lower bound.
///
/// `Q'_1 = (n k - 2k)/3 + 1` and
/// `Q'_i = 3 Q'_{i-1} + 3^(i-1) ((N_{i-1} k - 2k)/3 + 1)(M_{i-1} k + 1)`.
pub fn binary_quartic_counts(level: u32, k: u128) -> Result<BinaryQuarticCounts, FormulaError> {
    let base = quartic_counts(level)?;
    let n = base.n;
    let overflow = FormulaError::Overflow { level };
    let mut exact: Vec<u128> = Vec::with_capacity(level as usize);
    for i in 1..=level {
        let value = if i == 1 {
            (n * k - 2 * k) / 3 + 1
        } else {
            let p = &base.levels[i as usize - 2];
            let shifts = (p.n * k - 2 * k) / 3 + 1;
            let fresh = pow(3, i - 1, level)?
                .checked_mul(shifts)
                .and_then(|v| v.checked_mul(p.m * k + 1))
                .ok_or(overflow.clone())?;
            exact[i as usize - 2]
                .checked_mul(3)
                .and_then(|v| v.checked_add(fresh))
                .ok_or(overflow.clone())?
        };
        exact.push(value);
    }
    let l = level as i128;
    let three_l = pow(3, level, level)? as i128;
    let scale = if level >= 3 {
        Ratio::from_integer(pow(3, level - 3, level)? as i128)
    } else {
        Ratio::new(1, pow(3, 3 - level, level)? as i128)
    };
    let k = k as i128;
    let inner = Ratio::from_integer((l - 1) * n as i128) - Ratio::new(three_l, 2);
    let bound = scale * Ratio::from_integer(k * k) * inner;
    Ok(BinaryQuarticCounts {
        level,
        n,
        k: k as u128,
        n_prime: n * k as u128,
        exact,
        bound,
    })
}

/// Binary quartic counts with the gadget side used by the generator.
pub fn binary_quartic_counts_default(level: u32) -> Result<BinaryQuarticCounts, FormulaError> {
    let base = quartic_counts(level)?;
    let sigma = base.levels.last().unwrap().s;
    binary_quartic_counts(level, binary_gadget_size(sigma) as u128)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunLevel {
    pub i: u32,
    /// Runs contributed by one unfilled copy of `A_i`.
    pub r: u128,
    /// Unfilled copies of `A_i` in `A_l`.
    pub x: u128,
    /// Antidiagonal-filled copies of `A_i` in `A_l`.
    pub y: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunCounts {
    pub level: u32,
    pub n: u128,
    pub levels: Vec<RunLevel>,
    /// `sum X_i R_i`.
    pub total: u128,
}

/// `R_i`, `X_i`, `Y_i` and their weighted sum, with the copy-count
/// inequalities checked exactly.
///
/// ```
/// let c = rep2d::formulas::run_counts(3).unwrap();
/// assert_eq!(c.levels[0].x, 216);
/// assert_eq!(c.total, 1863);
/// ```
pub fn run_counts(level: u32) -> Result<RunCounts, FormulaError> {
    min_level(level, 1)?;
    let overflow = || FormulaError::Overflow { level };
    let sixteen = |e: u32| pow(16, e, level);
    let mut levels = vec![
        RunLevel {
            i: level,
            r: 0,
            x: 1,
            y: 0
        };
        level as usize
    ];
    for i in (1..level).rev() {
        let up = levels[i as usize];
        let x =
            up.x.checked_mul(14)
                .and_then(|a| a.checked_add(10 * up.y))
                .ok_or_else(overflow)?;
        let y =
            up.y.checked_mul(6)
                .and_then(|a| a.checked_add(2 * up.x))
                .ok_or_else(overflow)?;
        levels[i as usize - 1] = RunLevel { i, r: 0, x, y };
    }
    let mut total = 0u128;
    for entry in &mut levels {
        let i = entry.i;
        let child = 2 * pow(4, i - 1, level)?;
        let r = (child - 1).checked_pow(2).ok_or_else(overflow)?;
        agree("R", i, r, sixteen(i)? / 4 - pow(4, i, level)? + 1)?;
        entry.r = r;
        total = entry
            .x
            .checked_mul(r)
            .and_then(|v| v.checked_add(total))
            .ok_or_else(overflow)?;

        let copies = sixteen(level - i)?;
        check(level, entry.x + entry.y == copies, || {
            format!("X_{i} + Y_{i} = 16^{}", level - i)
        })?;
        if i < level {
            check(level, entry.x >= 5 * entry.y, || {
                format!("X_{i} >= 5 Y_{i}")
            })?;
        }
        check(level, 6 * entry.x >= 5 * copies, || {
            format!("X_{i} >= (5/6) 16^{}", level - i)
        })?;
    }
    if level >= 2 {
        let bound = sixteen(level)?
            .checked_mul(level as u128)
            .ok_or_else(overflow)?;
        check(level, 24 * total >= bound, || {
            "sum X_i R_i >= l 16^l / 24".into()
        })?;
    }
    Ok(RunCounts {
        level,
        n: 2 * pow(4, level, level)?,
        levels,
        total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TandemPrediction {
    pub level: u32,
    pub n: u128,
    /// `n(n+1)/2 * 2^l`.
    pub witnesses: u128,
}

impl TandemPrediction {
    /// `witnesses / n^3`.
    pub fn cubic_ratio(&self) -> f64 {
        self.witnesses as f64 / (self.n as f64).powi(3)
    }
}

pub fn tandem_counts(level: u32) -> Result<TandemPrediction, FormulaError> {
    min_level(level, 1)?;
    let marker = pow(2, level, level)?;
    let n = 3 * marker + 2 * level as u128;
    let witnesses = n
        .checked_mul(n + 1)
        .map(|v| v / 2)
        .and_then(|v| v.checked_mul(marker))
        .ok_or(FormulaError::Overflow { level })?;
    Ok(TandemPrediction {
        level,
        n,
        witnesses,
    })
}

/// Predicted values for one family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum PredictedCounts {
    Tandem(TandemPrediction),
    Quartic(QuarticCounts),
    QuarticBinary(BinaryQuarticCounts),
    Run(RunCounts),
}

impl PredictedCounts {
    pub fn for_spec(spec: FamilySpec) -> Result<Self, FormulaError> {
        Ok(match spec.kind {
            FamilyKind::Tandem => PredictedCounts::Tandem(tandem_counts(spec.level)?),
            FamilyKind::Quartic => PredictedCounts::Quartic(quartic_counts(spec.level)?),
            FamilyKind::QuarticBinary => {
                PredictedCounts::QuarticBinary(binary_quartic_counts_default(spec.level)?)
            }
            FamilyKind::Run => PredictedCounts::Run(run_counts(spec.level)?),
        })
    }

    /// Size of the family's witness set.
    pub fn witness_total(&self) -> u128 {
        match self {
            PredictedCounts::Tandem(t) => t.witnesses,
            PredictedCounts::Quartic(q) => q.total(),
            PredictedCounts::QuarticBinary(b) => b.total(),
            PredictedCounts::Run(r) => r.total,
        }
    }

    /// Side of the generated grid.
    pub fn side(&self) -> u128 {
        match self {
            PredictedCounts::Tandem(t) => t.n,
            PredictedCounts::Quartic(q) => q.n,
            PredictedCounts::QuarticBinary(b) => b.n_prime,
            PredictedCounts::Run(r) => r.n,
        }
    }
}
