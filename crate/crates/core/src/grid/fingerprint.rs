//! Two-dimensional polynomial fingerprints over the Mersenne prime 2^61 - 1.
//!
//! A rectangle `R` of height `h` and width `w` is digested as
//! `sum (R[i][j] + 1) * x^i * y^j mod p` for two independent base pairs
//! `(x, y)`. A [`FingerprintTable`] stores 2D prefix sums so any rectangle's
//! digest is available in O(1). Equal content always produces equal
//! fingerprints; the converse only holds with high probability, so
//! [`DistinctBlocks`] confirms every fingerprint match cell by cell.

use std::collections::HashMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Grid2D, Rect};

const MODULUS: u64 = (1 << 61) - 1;

#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    let t = a as u128 * b as u128;
    let t = ((t >> 61) as u64) + ((t as u64) & MODULUS);
    if t >= MODULUS {
        t - MODULUS
    } else {
        t
    }
}

#[inline]
fn add_mod(a: u64, b: u64) -> u64 {
    let t = a + b;
    if t >= MODULUS {
        t - MODULUS
    } else {
        t
    }
}

#[inline]
fn sub_mod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + MODULUS - b
    }
}

fn pow_mod(mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base);
        }
        base = mul_mod(base, base);
        exp >>= 1;
    }
    acc
}

fn inverse(a: u64) -> u64 {
    pow_mod(a, MODULUS - 2)
}

/// Random bases for the two digests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashKey {
    row_base: [u64; 2],
    col_base: [u64; 2],
}

static GLOBAL_KEY: OnceLock<HashKey> = OnceLock::new();

impl HashKey {
    pub fn from_seed(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::sample(&mut rng)
    }

    /// A key drawn from OS entropy.
    pub fn random() -> Self {
        let mut rng = ChaCha8Rng::from_os_rng();
        Self::sample(&mut rng)
    }

    fn sample<R: Rng>(rng: &mut R) -> Self {
        let mut draw = || rng.random_range(256..MODULUS - 1);
        HashKey {
            row_base: [draw(), draw()],
            col_base: [draw(), draw()],
        }
    }

    /// Explicit bases; degenerate choices (e.g. all ones) are useful for
    /// exercising the collision fallback.
    pub fn from_bases(row_base: [u64; 2], col_base: [u64; 2]) -> Self {
        assert!(
            row_base
                .iter()
                .chain(&col_base)
                .all(|&b| b > 0 && b < MODULUS),
            "bases must be non-zero residues"
        );
        HashKey { row_base, col_base }
    }

    /// The process-wide key used by the accelerated detectors. Drawn from
    /// entropy on first use unless [`HashKey::install_global`] ran first.
    pub fn global() -> &'static HashKey {
        GLOBAL_KEY.get_or_init(HashKey::random)
    }

    /// Pins the process-wide key to `seed`. Returns `false` if a key was
    /// already installed (the existing key is kept).
    pub fn install_global(seed: u64) -> bool {
        GLOBAL_KEY.set(HashKey::from_seed(seed)).is_ok()
    }
}

/// Digest of a rectangle's content together with its dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub height: u32,
    pub width: u32,
    pub digests: [u64; 2],
}

/// Prefix-sum table answering rectangle fingerprints in O(1).
#[derive(Debug, Clone)]
pub struct FingerprintTable {
    cols: usize,
    // (rows + 1) x (cols + 1) prefix sums for each digest.
    prefix: [Vec<u64>; 2],
    inv_row_pow: [Vec<u64>; 2],
    inv_col_pow: [Vec<u64>; 2],
}

impl FingerprintTable {
    pub fn new(grid: &Grid2D, key: &HashKey) -> Self {
        let (rows, cols) = grid.dims();
        let stride = cols + 1;
        let mut prefix = [
            vec![0u64; (rows + 1) * stride],
            vec![0u64; (rows + 1) * stride],
        ];
        let mut inv_row_pow = [Vec::new(), Vec::new()];
        let mut inv_col_pow = [Vec::new(), Vec::new()];
        for d in 0..2 {
            let x = key.row_base[d];
            let y = key.col_base[d];
            let col_pows: Vec<u64> = std::iter::successors(Some(1u64), |&p| Some(mul_mod(p, y)))
                .take(cols)
                .collect();
            let table = &mut prefix[d];
            let mut row_pow = 1u64;
            for r in 0..rows {
                let mut running = 0u64;
                for c in 0..cols {
                    let term = mul_mod(mul_mod(grid.get(r, c) as u64 + 1, row_pow), col_pows[c]);
                    running = add_mod(running, term);
                    table[(r + 1) * stride + c + 1] = add_mod(table[r * stride + c + 1], running);
                }
                row_pow = mul_mod(row_pow, x);
            }
            let (ix, iy) = (inverse(x), inverse(y));
            inv_row_pow[d] = std::iter::successors(Some(1u64), |&p| Some(mul_mod(p, ix)))
                .take(rows)
                .collect();
            inv_col_pow[d] = std::iter::successors(Some(1u64), |&p| Some(mul_mod(p, iy)))
                .take(cols)
                .collect();
        }
        FingerprintTable {
            cols,
            prefix,
            inv_row_pow,
            inv_col_pow,
        }
    }

    /// Fingerprint of `rect`, which must lie inside the table's grid.
    pub fn get(&self, rect: Rect) -> Fingerprint {
        let stride = self.cols + 1;
        let (t, l, b, r) = (rect.top, rect.left, rect.bottom(), rect.right());
        let mut digests = [0u64; 2];
        for (d, out) in digests.iter_mut().enumerate() {
            let p = &self.prefix[d];
            let sum = sub_mod(
                add_mod(p[b * stride + r], p[t * stride + l]),
                add_mod(p[t * stride + r], p[b * stride + l]),
            );
            *out = mul_mod(mul_mod(sum, self.inv_row_pow[d][t]), self.inv_col_pow[d][l]);
        }
        Fingerprint {
            height: rect.height as u32,
            width: rect.width as u32,
            digests,
        }
    }
}

/// Set of distinct block contents of one grid, keyed by fingerprint with
/// cell-wise confirmation on every fingerprint match.
#[derive(Debug)]
pub struct DistinctBlocks<'g> {
    grid: &'g Grid2D,
    table: FingerprintTable,
    buckets: HashMap<Fingerprint, Vec<Rect>>,
    len: usize,
    collisions: usize,
}

impl<'g> DistinctBlocks<'g> {
    pub fn new(grid: &'g Grid2D, key: &HashKey) -> Self {
        DistinctBlocks {
            grid,
            table: FingerprintTable::new(grid, key),
            buckets: HashMap::new(),
            len: 0,
            collisions: 0,
        }
    }

    /// Records the content of `rect`; returns `true` if it was not seen
    /// before.
    pub fn insert(&mut self, rect: Rect) -> bool {
        let fp = self.table.get(rect);
        let bucket = self.buckets.entry(fp).or_default();
        if bucket.iter().any(|&rep| self.grid.blocks_match(rep, rect)) {
            return false;
        }
        if !bucket.is_empty() {
            self.collisions += 1;
        }
        bucket.push(rect);
        self.len += 1;
        true
    }

    /// Number of distinct contents recorded.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Fingerprint matches that turned out to be different content.
    pub fn collisions(&self) -> usize {
        self.collisions
    }

    /// One representative rectangle per distinct content.
    pub fn representatives(&self) -> impl Iterator<Item = Rect> + '_ {
        self.buckets.values().flatten().copied()
    }
}
