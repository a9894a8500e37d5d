//! Channel data model, validation, and generator families.
//!
//! A [`Channel`] is a row-stochastic matrix `W(y|x)` over finite input and
//! output alphabets, stored dense in row-major order. Every constructor in
//! this module funnels through [`validate`], so a `Channel` value always has
//! nonnegative entries and rows that sum to exactly 1 after normalization.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::util::{binomial, for_each_combination};

/// Row sums may deviate from 1 by at most this much before rejection.
pub const ROW_SUM_TOLERANCE: f64 = 1e-9;

/// Default cap on `n = k*t` for [`make_tightness`]; `|Y| = C(n, t)` grows fast.
pub const DEFAULT_TIGHTNESS_CAP: usize = 16;

/// Default cap on the total entry count `|X|^n * |Y|^n` of a tensor power.
pub const DEFAULT_TENSOR_CAP: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ChannelError {
    #[error("channel matrix is empty")]
    EmptyMatrix,
    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedMatrix {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("negative entry {value} at ({x}, {y})")]
    NegativeEntry { x: usize, y: usize, value: f64 },
    #[error("row {x} sums to {sum}, further than {ROW_SUM_TOLERANCE} from 1")]
    RowSumViolation { x: usize, sum: f64 },
    #[error("parameter {name} = {value} is outside [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("parameter {name} must be at least 1")]
    ParameterTooSmall { name: &'static str },
    #[error("requested size {requested} exceeds the cap {cap}")]
    SizeCapExceeded { requested: usize, cap: usize },
    #[error("set {index} has {got} elements, expected {expected}")]
    SetSizeMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("set {index} contains {element}, outside a ground set of size {ground}")]
    ElementOutOfRange {
        index: usize,
        element: usize,
        ground: usize,
    },
    #[error("set {index} contains {element} more than once")]
    DuplicateElement { index: usize, element: usize },
}

/// A discrete memoryless channel `W(y|x)` with `x_size` inputs and `y_size`
/// outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    x_size: usize,
    y_size: usize,
    /// Row-major: `w[x * y_size + y] = W(y|x)`.
    w: Vec<f64>,
    name: Option<String>,
}

impl Channel {
    pub fn x_size(&self) -> usize {
        self.x_size
    }

    pub fn y_size(&self) -> usize {
        self.y_size
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// `W(y|x)`. Panics if either index is out of range.
    #[inline]
    pub fn prob(&self, x: usize, y: usize) -> f64 {
        assert!(x < self.x_size && y < self.y_size);
        self.w[x * self.y_size + y]
    }

    /// The row `W(·|x)` as a slice of length `y_size`.
    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        assert!(x < self.x_size);
        &self.w[x * self.y_size..(x + 1) * self.y_size]
    }

    /// Copies the matrix out as a vector of rows.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.x_size).map(|x| self.row(x).to_vec()).collect()
    }
}

/// Checks a candidate transition matrix and normalizes each row exactly to 1.
///
/// Rejects empty or ragged matrices, negative (or NaN) entries, and rows
/// whose sum is further than [`ROW_SUM_TOLERANCE`] from 1. Rows within the
/// tolerance are divided by their sum, so the invariants downstream code
/// relies on (`Σ_y W(y|x) = 1`, entries in `[0, 1]`) hold exactly up to
/// floating-point rounding.
pub fn validate(rows: &[Vec<f64>]) -> Result<Channel, ChannelError> {
    if rows.is_empty() || rows[0].is_empty() {
        return Err(ChannelError::EmptyMatrix);
    }
    let y_size = rows[0].len();
    let x_size = rows.len();
    let mut w = Vec::with_capacity(x_size * y_size);
    for (x, row) in rows.iter().enumerate() {
        if row.len() != y_size {
            return Err(ChannelError::RaggedMatrix {
                row: x,
                expected: y_size,
                got: row.len(),
            });
        }
        let mut sum = 0.0;
        for (y, &v) in row.iter().enumerate() {
            if v.is_nan() || v < 0.0 {
                return Err(ChannelError::NegativeEntry { x, y, value: v });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
            return Err(ChannelError::RowSumViolation { x, sum });
        }
        for &v in row {
            w.push(v / sum);
        }
    }
    Ok(Channel {
        x_size,
        y_size,
        w,
        name: None,
    })
}

/// Binary symmetric channel with crossover probability `p`.
pub fn make_bsc(p: f64) -> Result<Channel, ChannelError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(ChannelError::OutOfRange {
            name: "p",
            value: p,
        });
    }
    let rows = vec![vec![1.0 - p, p], vec![p, 1.0 - p]];
    Ok(validate(&rows)?.with_name(format!("bsc({p})")))
}

/// Binary erasure channel: inputs `{0, 1}`, outputs `{0, 1, e}` where column
/// 2 is the erasure symbol, hit with probability `eps` from either input.
pub fn make_erasure(eps: f64) -> Result<Channel, ChannelError> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(ChannelError::OutOfRange {
            name: "eps",
            value: eps,
        });
    }
    let rows = vec![vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps]];
    Ok(validate(&rows)?.with_name(format!("erasure({eps})")))
}

/// Uniform-incidence family on `n = k*t` inputs whose outputs are the
/// `t`-subsets of the input alphabet, in lexicographic order:
/// `W(y|x) = 1 / C(n-1, t-1)` if `x ∈ y`, else 0.
///
/// The non-signaling relaxation of this family equals 1 at message count `k`
/// while the exact value stays bounded away from 1, which is what makes it
/// the worst case for the greedy-vs-relaxation gap.
pub fn make_tightness(k: usize, t: usize) -> Result<Channel, ChannelError> {
    make_tightness_with_cap(k, t, DEFAULT_TIGHTNESS_CAP)
}

/// [`make_tightness`] with an explicit cap on `n = k*t`.
pub fn make_tightness_with_cap(k: usize, t: usize, cap: usize) -> Result<Channel, ChannelError> {
    if k < 1 {
        return Err(ChannelError::ParameterTooSmall { name: "k" });
    }
    if t < 1 {
        return Err(ChannelError::ParameterTooSmall { name: "t" });
    }
    let n = k
        .checked_mul(t)
        .ok_or(ChannelError::SizeCapExceeded {
            requested: usize::MAX,
            cap,
        })?;
    if n > cap {
        return Err(ChannelError::SizeCapExceeded { requested: n, cap });
    }
    let y_size = binomial(n as u64, t as u64) as usize;
    let weight = 1.0 / binomial(n as u64 - 1, t as u64 - 1) as f64;
    let mut rows = vec![vec![0.0; y_size]; n];
    let mut y = 0usize;
    for_each_combination(n, t, |subset| {
        for &x in subset {
            rows[x][y] = weight;
        }
        y += 1;
    });
    debug_assert_eq!(y, y_size);
    Ok(validate(&rows)?.with_name(format!("tightness({k},{t})")))
}

/// Channel of a `d`-uniform set system: `W(y|x) = 1/d` if `y ∈ T_x`, else 0.
///
/// Maximum coverage embeds into channel coding this way: `d · f(S)` counts
/// the elements covered by `∪_{x in S} T_x`.
pub fn from_set_system(sys: &SetSystem) -> Channel {
    let d = sys.d as f64;
    let mut rows = vec![vec![0.0; sys.ground_size]; sys.sets.len()];
    for (x, set) in sys.sets.iter().enumerate() {
        for &e in set {
            rows[x][e] = 1.0 / d;
        }
    }
    // Row sums are d * (1/d); always within tolerance.
    validate(&rows)
        .expect("set-system channel is row-stochastic by construction")
        .with_name(format!("coverage({},{})", sys.sets.len(), sys.ground_size))
}

/// `n`-fold tensor power `W^n` with tuple alphabets in lexicographic order
/// (the iterated Kronecker product ordering).
pub fn tensor_power(w: &Channel, n: usize) -> Result<Channel, ChannelError> {
    tensor_power_with_cap(w, n, DEFAULT_TENSOR_CAP)
}

/// [`tensor_power`] with an explicit cap on the total entry count.
pub fn tensor_power_with_cap(w: &Channel, n: usize, cap: usize) -> Result<Channel, ChannelError> {
    if n < 1 {
        return Err(ChannelError::ParameterTooSmall { name: "n" });
    }
    let (xs, ys) = (w.x_size as u128, w.y_size as u128);
    let entries = xs
        .checked_pow(n as u32)
        .and_then(|a| ys.checked_pow(n as u32).and_then(|b| a.checked_mul(b)))
        .ok_or(ChannelError::SizeCapExceeded {
            requested: usize::MAX,
            cap,
        })?;
    if entries > cap as u128 {
        return Err(ChannelError::SizeCapExceeded {
            requested: entries.min(usize::MAX as u128) as usize,
            cap,
        });
    }
    let mut rows: Vec<Vec<f64>> = w.rows();
    for _ in 1..n {
        let mut next = Vec::with_capacity(rows.len() * w.x_size);
        for big in &rows {
            for x in 0..w.x_size {
                let mut row = Vec::with_capacity(big.len() * w.y_size);
                for &a in big {
                    for y in 0..w.y_size {
                        row.push(a * w.prob(x, y));
                    }
                }
                next.push(row);
            }
        }
        rows = next;
    }
    let mut out = validate(&rows)?;
    if let Some(base) = &w.name {
        out = out.with_name(format!("{base}^{n}"));
    }
    Ok(out)
}

/// Seeded random channel: each row is a vector of iid uniforms normalized to
/// sum 1. Identical `(x_size, y_size, seed)` yields identical channels.
pub fn random_channel(x_size: usize, y_size: usize, seed: u64) -> Result<Channel, ChannelError> {
    if x_size < 1 {
        return Err(ChannelError::ParameterTooSmall { name: "x_size" });
    }
    if y_size < 1 {
        return Err(ChannelError::ParameterTooSmall { name: "y_size" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(x_size);
    for _ in 0..x_size {
        loop {
            let row: Vec<f64> = (0..y_size).map(|_| rng.random::<f64>()).collect();
            let sum: f64 = row.iter().sum();
            if sum > 1e-9 {
                rows.push(row.iter().map(|v| v / sum).collect::<Vec<f64>>());
                break;
            }
        }
    }
    Ok(validate(&rows)?.with_name(format!("random({x_size},{y_size};{seed})")))
}

/// A `d`-uniform set system `T_0, .., T_{m-1}` over `{0, .., ground_size-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground_size: usize,
    d: usize,
    sets: Vec<Vec<usize>>,
}

impl SetSystem {
    /// Validates uniform size, element range, and distinctness within sets.
    pub fn new(
        ground_size: usize,
        d: usize,
        sets: Vec<Vec<usize>>,
    ) -> Result<SetSystem, ChannelError> {
        if ground_size < 1 {
            return Err(ChannelError::ParameterTooSmall { name: "ground_size" });
        }
        if d < 1 {
            return Err(ChannelError::ParameterTooSmall { name: "d" });
        }
        if sets.is_empty() {
            return Err(ChannelError::EmptyMatrix);
        }
        for (index, set) in sets.iter().enumerate() {
            if set.len() != d {
                return Err(ChannelError::SetSizeMismatch {
                    index,
                    expected: d,
                    got: set.len(),
                });
            }
            let mut seen = vec![false; ground_size];
            for &element in set {
                if element >= ground_size {
                    return Err(ChannelError::ElementOutOfRange {
                        index,
                        element,
                        ground: ground_size,
                    });
                }
                if seen[element] {
                    return Err(ChannelError::DuplicateElement { index, element });
                }
                seen[element] = true;
            }
        }
        Ok(SetSystem {
            ground_size,
            d,
            sets,
        })
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn uniform_size(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }
}
