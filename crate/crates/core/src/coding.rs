//! Codes and the submodular objective behind them.
//!
//! For a code that sends `k` equiprobable messages through `W` using a
//! codeword set `S` and maximum-likelihood decoding, the success probability
//! is `f(S) / k` where
//!
//! ```text
//! f(S) = Σ_y max_{x in S} W(y|x)
//! ```
//!
//! `f` is monotone and submodular, so the best `k`-message code is the best
//! `min(k, |X|)`-element subset ([`exact_opt`]) and greedy selection
//! ([`greedy`], [`greedy_lazy`]) carries the classic `1 - (1 - 1/k)^l`
//! approximation guarantee.
//!
//! Ties are broken toward smaller input indices everywhere: the two greedy
//! variants produce identical chains, enumeration returns the
//! lexicographically smallest optimum, and decoders pick the smallest
//! maximizing message. Identical inputs give identical outputs.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;

use crate::channel::Channel;
use crate::util::{binomial, for_each_combination};

/// Default cap on the number of subsets [`exact_opt`] will enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Encoder/decoder rows may deviate from sum 1 by at most this much.
pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodingError {
    #[error("input index {index} is outside an alphabet of size {x_size}")]
    IndexOutOfRange { index: usize, x_size: usize },
    #[error("codeword set is empty")]
    EmptySet,
    #[error("parameter {name} must be at least 1")]
    ParameterTooSmall { name: &'static str },
    #[error("{count} subsets exceed the enumeration cap {cap}")]
    EnumerationCapExceeded { count: u128, cap: u64 },
    #[error("codeword {x} is listed twice")]
    DuplicateCodeword { x: usize },
    #[error("{got} codewords for {k} messages")]
    TooManyCodewords { got: usize, k: usize },
    #[error("{matrix} row {row} is not a distribution (sum {sum})")]
    StochasticityViolation {
        matrix: &'static str,
        row: usize,
        sum: f64,
    },
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
}

/// `f(S) = Σ_y max_{x in S} W(y|x)`; the empty set scores 0.
pub fn f_value(w: &Channel, s: &[usize]) -> Result<f64, CodingError> {
    for &x in s {
        if x >= w.x_size() {
            return Err(CodingError::IndexOutOfRange {
                index: x,
                x_size: w.x_size(),
            });
        }
    }
    let mut total = 0.0;
    for y in 0..w.y_size() {
        let mut best = 0.0f64;
        for &x in s {
            best = best.max(w.prob(x, y));
        }
        total += best;
    }
    Ok(total)
}

/// Moving-max view of a partially selected set: `cur[y] = max_{x in S} W(y|x)`.
fn marginal_gain(w: &Channel, cur: &[f64], x: usize) -> f64 {
    let mut gain = 0.0;
    for (y, &c) in cur.iter().enumerate() {
        let v = w.prob(x, y);
        if v > c {
            gain += v - c;
        }
    }
    gain
}

/// Exhaustive optimum of `S(W, k) = (1/k) max_{|S| <= min(k,|X|)} f(S)`.
///
/// Returns the value and the lexicographically smallest maximizing subset.
/// Monotonicity means only subsets of size exactly `min(k, |X|)` need to be
/// visited; their count must stay below the cap.
pub fn exact_opt(w: &Channel, k: usize) -> Result<(f64, Vec<usize>), CodingError> {
    exact_opt_with_cap(w, k, DEFAULT_ENUMERATION_CAP)
}

/// [`exact_opt`] with an explicit enumeration cap.
pub fn exact_opt_with_cap(
    w: &Channel,
    k: usize,
    cap: u64,
) -> Result<(f64, Vec<usize>), CodingError> {
    if k < 1 {
        return Err(CodingError::ParameterTooSmall { name: "k" });
    }
    let m = k.min(w.x_size());
    let count = binomial(w.x_size() as u64, m as u64);
    if count > cap as u128 {
        return Err(CodingError::EnumerationCapExceeded { count, cap });
    }
    let y_size = w.y_size();
    let mut best_f = f64::NEG_INFINITY;
    let mut best_set = Vec::new();
    for_each_combination(w.x_size(), m, |subset| {
        let mut f = 0.0;
        for y in 0..y_size {
            let mut col = 0.0f64;
            for &x in subset {
                col = col.max(w.prob(x, y));
            }
            f += col;
        }
        // Strict improvement keeps the lexicographically first optimum.
        if f > best_f {
            best_f = f;
            best_set = subset.to_vec();
        }
    });
    Ok((best_f / k as f64, best_set))
}

/// The selection order and marginal gains of a greedy run.
///
/// `selected[i]` is the element added at step `i` and `gains[i]` its marginal
/// gain `f(S_i ∪ {x}) - f(S_i)`; submodularity makes `gains` non-increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyTrace {
    pub selected: Vec<usize>,
    pub gains: Vec<f64>,
}

impl GreedyTrace {
    /// The nested chain `S_1 ⊂ S_2 ⊂ …` as prefixes of the selection order.
    pub fn chain(&self) -> Vec<Vec<usize>> {
        (1..=self.selected.len())
            .map(|i| self.selected[..i].to_vec())
            .collect()
    }
}

/// Greedy maximization of `f`: `min(k, |X|)` steps, each adding the element
/// with the largest marginal gain (smallest index on ties). Returns
/// `f(S)/k` and the trace.
pub fn greedy(w: &Channel, k: usize) -> Result<(f64, GreedyTrace), CodingError> {
    if k < 1 {
        return Err(CodingError::ParameterTooSmall { name: "k" });
    }
    let steps = k.min(w.x_size());
    let mut cur = vec![0.0f64; w.y_size()];
    let mut in_set = vec![false; w.x_size()];
    let mut selected = Vec::with_capacity(steps);
    let mut gains = Vec::with_capacity(steps);
    for _ in 0..steps {
        let mut best_gain = f64::NEG_INFINITY;
        let mut best_x = usize::MAX;
        for (x, &picked) in in_set.iter().enumerate() {
            if picked {
                continue;
            }
            let g = marginal_gain(w, &cur, x);
            if g > best_gain {
                best_gain = g;
                best_x = x;
            }
        }
        in_set[best_x] = true;
        selected.push(best_x);
        gains.push(best_gain);
        for (y, c) in cur.iter_mut().enumerate() {
            *c = c.max(w.prob(best_x, y));
        }
    }
    let f: f64 = cur.iter().sum();
    Ok((f / k as f64, GreedyTrace { selected, gains }))
}

#[derive(Debug)]
struct LazyEntry {
    gain: f64,
    x: usize,
    round: usize,
}

impl PartialEq for LazyEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == core::cmp::Ordering::Equal
    }
}
impl Eq for LazyEntry {}
impl PartialOrd for LazyEntry {
    fn partial_cmp(&self, other: &Self) -> Option<core::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for LazyEntry {
    fn cmp(&self, other: &Self) -> core::cmp::Ordering {
        // Max-heap: larger gain first, then smaller index. Gains are finite.
        self.gain
            .partial_cmp(&other.gain)
            .expect("gains are never NaN")
            .then_with(|| other.x.cmp(&self.x))
    }
}

/// Lazy-evaluation greedy. Stale heap entries are upper bounds (gains only
/// shrink as the set grows), so an entry recomputed in the current round that
/// still tops the heap is the true argmax. Produces exactly the same chain
/// as [`greedy`]: recomputation reuses the same gain arithmetic and the heap
/// order prefers smaller indices on equal gains.
pub fn greedy_lazy(w: &Channel, k: usize) -> Result<(f64, GreedyTrace), CodingError> {
    if k < 1 {
        return Err(CodingError::ParameterTooSmall { name: "k" });
    }
    let steps = k.min(w.x_size());
    let mut cur = vec![0.0f64; w.y_size()];
    let mut selected = Vec::with_capacity(steps);
    let mut gains = Vec::with_capacity(steps);
    let mut heap = BinaryHeap::with_capacity(w.x_size());
    for x in 0..w.x_size() {
        heap.push(LazyEntry {
            gain: marginal_gain(w, &cur, x),
            x,
            round: 0,
        });
    }
    let mut round = 0;
    while selected.len() < steps {
        let top = heap.pop().expect("heap holds every unselected element");
        if top.round == round {
            selected.push(top.x);
            gains.push(top.gain);
            for (y, c) in cur.iter_mut().enumerate() {
                *c = c.max(w.prob(top.x, y));
            }
            round += 1;
        } else {
            heap.push(LazyEntry {
                gain: marginal_gain(w, &cur, top.x),
                x: top.x,
                round,
            });
        }
    }
    let f: f64 = cur.iter().sum();
    Ok((f / k as f64, GreedyTrace { selected, gains }))
}

/// A deterministic code: an ordered codeword set with its maximum-likelihood
/// decoder, for `k` messages (message `i` beyond the codeword count reuses
/// the first codeword).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    k: usize,
    codewords: Vec<usize>,
    /// `decoder[y]` = message index decoded on output `y` (the smallest
    /// message whose codeword maximizes `W(y|·)` over the set).
    decoder: Vec<usize>,
}

impl Code {
    /// Builds the ML decoder for `codewords` (distinct, at most `k` of them).
    pub fn new(w: &Channel, codewords: Vec<usize>, k: usize) -> Result<Code, CodingError> {
        if k < 1 {
            return Err(CodingError::ParameterTooSmall { name: "k" });
        }
        if codewords.is_empty() {
            return Err(CodingError::EmptySet);
        }
        if codewords.len() > k {
            return Err(CodingError::TooManyCodewords {
                got: codewords.len(),
                k,
            });
        }
        let mut seen = vec![false; w.x_size()];
        for &x in &codewords {
            if x >= w.x_size() {
                return Err(CodingError::IndexOutOfRange {
                    index: x,
                    x_size: w.x_size(),
                });
            }
            if seen[x] {
                return Err(CodingError::DuplicateCodeword { x });
            }
            seen[x] = true;
        }
        let mut decoder = Vec::with_capacity(w.y_size());
        for y in 0..w.y_size() {
            let mut best_i = 0;
            let mut best = w.prob(codewords[0], y);
            for (i, &x) in codewords.iter().enumerate().skip(1) {
                let v = w.prob(x, y);
                if v > best {
                    best = v;
                    best_i = i;
                }
            }
            decoder.push(best_i);
        }
        Ok(Code {
            k,
            codewords,
            decoder,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn codewords(&self) -> &[usize] {
        &self.codewords
    }

    pub fn decoder(&self) -> &[usize] {
        &self.decoder
    }

    /// Success probability `(1/k) Σ_y W(y | x_{decoder[y]})`, which equals
    /// `f(codewords) / k` because the decoder is maximum-likelihood.
    pub fn success_probability(&self, w: &Channel) -> Result<f64, CodingError> {
        self.check_channel(w)?;
        let mut total = 0.0;
        for (y, &i) in self.decoder.iter().enumerate() {
            total += w.prob(self.codewords[i], y);
        }
        Ok(total / self.k as f64)
    }

    /// Row-stochastic encoder `e(x|i)` of shape `k x x_size`.
    pub fn encoder_matrix(&self, x_size: usize) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; x_size]; self.k];
        for (i, row) in rows.iter_mut().enumerate() {
            let x = if i < self.codewords.len() {
                self.codewords[i]
            } else {
                self.codewords[0]
            };
            row[x] = 1.0;
        }
        rows
    }

    /// Row-stochastic decoder `d(i|y)` of shape `y_size x k`.
    pub fn decoder_matrix(&self) -> Vec<Vec<f64>> {
        let mut rows = vec![vec![0.0; self.k]; self.decoder.len()];
        for (y, row) in rows.iter_mut().enumerate() {
            row[self.decoder[y]] = 1.0;
        }
        rows
    }

    fn check_channel(&self, w: &Channel) -> Result<(), CodingError> {
        if self.decoder.len() != w.y_size() {
            return Err(CodingError::DimensionMismatch {
                what: "decoder length vs output alphabet",
                expected: w.y_size(),
                got: self.decoder.len(),
            });
        }
        if self.codewords.iter().any(|&x| x >= w.x_size()) {
            return Err(CodingError::IndexOutOfRange {
                index: *self.codewords.iter().max().unwrap(),
                x_size: w.x_size(),
            });
        }
        Ok(())
    }
}

/// Success probability of an arbitrary randomized encoder/decoder pair:
/// `(1/k) Σ_{i,x,y} e(x|i) W(y|x) d(i|y)`. Both matrices must be
/// row-stochastic within [`STOCHASTIC_TOLERANCE`].
pub fn evaluate_pair(
    w: &Channel,
    encoder: &[Vec<f64>],
    decoder: &[Vec<f64>],
) -> Result<f64, CodingError> {
    let k = encoder.len();
    if k == 0 {
        return Err(CodingError::ParameterTooSmall { name: "k" });
    }
    if decoder.len() != w.y_size() {
        return Err(CodingError::DimensionMismatch {
            what: "decoder rows vs output alphabet",
            expected: w.y_size(),
            got: decoder.len(),
        });
    }
    check_stochastic("encoder", encoder, w.x_size())?;
    check_stochastic("decoder", decoder, k)?;
    let mut total = 0.0;
    for (i, erow) in encoder.iter().enumerate() {
        for (x, &e) in erow.iter().enumerate() {
            if e == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (y, drow) in decoder.iter().enumerate() {
                inner += w.prob(x, y) * drow[i];
            }
            total += e * inner;
        }
    }
    Ok(total / k as f64)
}

fn check_stochastic(
    matrix: &'static str,
    rows: &[Vec<f64>],
    width: usize,
) -> Result<(), CodingError> {
    for (row, r) in rows.iter().enumerate() {
        if r.len() != width {
            return Err(CodingError::DimensionMismatch {
                what: matrix,
                expected: width,
                got: r.len(),
            });
        }
        let mut sum = 0.0;
        for &v in r {
            if v.is_nan() || v < 0.0 {
                return Err(CodingError::StochasticityViolation {
                    matrix,
                    row,
                    sum: f64::NAN,
                });
            }
            sum += v;
        }
        if (sum - 1.0).abs() > STOCHASTIC_TOLERANCE {
            return Err(CodingError::StochasticityViolation { matrix, row, sum });
        }
    }
    Ok(())
}

/// `log2 f(S)`: how many bits the set `S` can carry in one shot at full
/// reliability pressure. Empty sets are rejected.
pub fn i_infinity(w: &Channel, s: &[usize]) -> Result<f64, CodingError> {
    if s.is_empty() {
        return Err(CodingError::EmptySet);
    }
    // Trait-qualified so the call also resolves without std's inherent f64
    // methods (the crate is no_std; tests link std).
    Ok(num_traits::Float::log2(f_value(w, s)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_bsc, make_erasure, make_tightness, random_channel};

    #[test]
    fn f_value_basics() {
        let w = make_bsc(0.1).unwrap();
        assert_eq!(f_value(&w, &[]).unwrap(), 0.0);
        assert_eq!(f_value(&w, &[0]).unwrap(), 1.0);
        assert!((f_value(&w, &[0, 1]).unwrap() - 1.8).abs() < 1e-15);
        assert!(matches!(
            f_value(&w, &[2]),
            Err(CodingError::IndexOutOfRange { index: 2, .. })
        ));
    }

    #[test]
    fn exact_small_channels() {
        let w = make_bsc(0.1).unwrap();
        let (v, s) = exact_opt(&w, 2).unwrap();
        assert!((v - 0.9).abs() < 1e-12);
        assert_eq!(s, vec![0, 1]);
        // One message always succeeds.
        let (v1, _) = exact_opt(&w, 1).unwrap();
        assert!((v1 - 1.0).abs() < 1e-15);

        let e = make_erasure(0.5).unwrap();
        let (ve, _) = exact_opt(&e, 2).unwrap();
        assert!((ve - 0.75).abs() < 1e-12);

        // k beyond |X| keeps the full input set but divides by k.
        let (vbig, sbig) = exact_opt(&w, 5).unwrap();
        assert!((vbig - 1.8 / 5.0).abs() < 1e-12);
        assert_eq!(sbig, vec![0, 1]);
    }

    #[test]
    fn exact_tightness_value() {
        let w = make_tightness(2, 2).unwrap();
        let (v, s) = exact_opt(&w, 2).unwrap();
        assert!((v - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(s, vec![0, 1]); // every pair ties; lexicographic first
    }

    #[test]
    fn enumeration_cap() {
        let w = random_channel(20, 3, 7).unwrap();
        assert!(matches!(
            exact_opt_with_cap(&w, 10, 1000),
            Err(CodingError::EnumerationCapExceeded { .. })
        ));
    }

    #[test]
    fn greedy_bsc_trace() {
        let w = make_bsc(0.1).unwrap();
        let (v, trace) = greedy(&w, 2).unwrap();
        assert!((v - 0.9).abs() < 1e-12);
        assert_eq!(trace.selected, vec![0, 1]);
        assert!((trace.gains[0] - 1.0).abs() < 1e-15);
        assert!((trace.gains[1] - 0.8).abs() < 1e-15);
        assert_eq!(trace.chain(), vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn greedy_gains_non_increasing_and_lazy_identical() {
        for seed in 0..25u64 {
            let w = random_channel(7, 5, seed).unwrap();
            for k in 1..=7 {
                let (v, t) = greedy(&w, k).unwrap();
                let (vl, tl) = greedy_lazy(&w, k).unwrap();
                assert_eq!(t, tl, "trace mismatch at seed {seed}, k {k}");
                assert_eq!(v.to_bits(), vl.to_bits());
                for pair in t.gains.windows(2) {
                    assert!(pair[0] >= pair[1] - 1e-12);
                }
            }
        }
    }

    #[test]
    fn greedy_between_uniform_and_exact() {
        for seed in 100..120u64 {
            let w = random_channel(6, 6, seed).unwrap();
            for k in 1..=4 {
                let (g, _) = greedy(&w, k).unwrap();
                let (e, _) = exact_opt(&w, k).unwrap();
                assert!(g <= e + 1e-12);
                assert!(e <= 1.0 + 1e-12);
                assert!(g >= 1.0 / k as f64 - 1e-12);
            }
        }
    }

    #[test]
    fn code_decoder_ties_and_value() {
        let w = make_erasure(0.5).unwrap();
        let code = Code::new(&w, vec![0, 1], 2).unwrap();
        // Output 0 -> message 0, output 1 -> message 1, erasure ties -> 0.
        assert_eq!(code.decoder(), &[0, 1, 0]);
        let sp = code.success_probability(&w).unwrap();
        assert!((sp - 0.75).abs() < 1e-15);
        let f = f_value(&w, code.codewords()).unwrap();
        assert_eq!(sp.to_bits(), (f / 2.0).to_bits());
    }

    #[test]
    fn code_validation() {
        let w = make_bsc(0.1).unwrap();
        assert!(matches!(
            Code::new(&w, vec![], 2),
            Err(CodingError::EmptySet)
        ));
        assert!(matches!(
            Code::new(&w, vec![0, 0], 2),
            Err(CodingError::DuplicateCodeword { x: 0 })
        ));
        assert!(matches!(
            Code::new(&w, vec![0, 1], 1),
            Err(CodingError::TooManyCodewords { got: 2, k: 1 })
        ));
        assert!(matches!(
            Code::new(&w, vec![5], 1),
            Err(CodingError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn matrix_round_trip_matches_f_value() {
        for seed in 200..210u64 {
            let w = random_channel(5, 4, seed).unwrap();
            for k in 1..=5 {
                let (_, s) = exact_opt(&w, k).unwrap();
                let code = Code::new(&w, s.clone(), k).unwrap();
                let via_pair =
                    evaluate_pair(&w, &code.encoder_matrix(w.x_size()), &code.decoder_matrix())
                        .unwrap();
                let direct = f_value(&w, &s).unwrap() / k as f64;
                assert!((via_pair - direct).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn evaluate_pair_rejects_non_stochastic() {
        let w = make_bsc(0.1).unwrap();
        let enc = vec![vec![0.7, 0.7]];
        let dec = vec![vec![1.0], vec![1.0]];
        assert!(matches!(
            evaluate_pair(&w, &enc, &dec),
            Err(CodingError::StochasticityViolation {
                matrix: "encoder",
                row: 0,
                ..
            })
        ));
    }

    #[test]
    fn messages_beyond_codewords_reuse_first() {
        let w = make_bsc(0.0).unwrap();
        let code = Code::new(&w, vec![0, 1], 3).unwrap();
        let enc = code.encoder_matrix(2);
        assert_eq!(enc.len(), 3);
        assert_eq!(enc[2], vec![1.0, 0.0]);
        // Perfect channel, 2 distinct codewords, 3 messages: 2/3 success.
        let v = evaluate_pair(&w, &enc, &code.decoder_matrix()).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn i_infinity_values() {
        let w = make_bsc(0.1).unwrap();
        let v = i_infinity(&w, &[0, 1]).unwrap();
        assert!((v - 1.8f64.log2()).abs() < 1e-15);
        assert!(matches!(i_infinity(&w, &[]), Err(CodingError::EmptySet)));
    }
}
