//! Extremal 2D strings and exhaustive counters for their repetitions.
//!
//! A 2D string is a rectangular [`Grid2D`]. This crate builds grid families
//! that are rich in three kinds of repetition:
//!
//! * distinct **tandems**, blocks `W` occurring as `[W W]` (or stacked),
//! * distinct **quartics**, blocks `W` occurring as a `2 x 2` tiling,
//! * **runs**, subrectangles that are periodic in both directions and
//!   cannot be extended by one row or column without a period growing,
//!
//! lists the rectangles each construction is designed to contain, counts
//! the repetitions of arbitrary grids, and evaluates the predicted counts
//! exactly.
//!
//! ```
//! use rep2d::{families, formulas, repetitions};
//!
//! let grid = families::run_family(2)?;
//! let runs = repetitions::enumerate_runs(&grid);
//! let predicted = formulas::run_counts(2)?.total;
//! assert!(runs.len() as u128 >= predicted);
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod families;
pub mod formulas;
pub mod grid;
pub mod periodicity;
pub mod repetitions;
pub mod verify;

pub use grid::{Grid2D, Rect};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/periods-and-runs.md")]
    mod periods_and_runs {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/families.md")]
    mod families {}
    #[doc = include_str!("../../../book/src/predictions.md")]
    mod predictions {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
