//! Randomized rounding of relaxation optima into concrete codes.
//!
//! Draw `l` codewords iid from the distribution `{p_x / k}` of an LP
//! solution, collapse duplicates, and decode by maximum likelihood. The
//! expected success probability of the sampled code is available in closed
//! form — no sampling loop needed:
//!
//! ```text
//! E[f(S)] = Σ_y Σ_i W(y|x_i) [ (1 - Q_{i-1}/k)^l - (1 - Q_i/k)^l ]
//! ```
//!
//! where, per output `y`, inputs are ordered by decreasing `W(y|x)` and
//! `Q_i` accumulates their `p` mass: the bracket is the probability that
//! input `x_i` is the best sampled codeword for `y`. The expectation is
//! guaranteed to be at least `ratio(k, l) * ns_value(W, k)`, which is how
//! the relaxation rounds back to real codes. [`monte_carlo`] estimates the
//! same quantity by simulation as an independent cross-check.

use alloc::vec::Vec;

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::ratio;
use crate::channel::Channel;
use crate::coding::{f_value, Code, CodingError};
use crate::metaconverse::LpSolution;

/// `Σ p` may deviate from `k` by at most this much when sampling.
pub const MASS_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RoundingError {
    #[error("marginals sum to {sum}, expected {expected}")]
    DegenerateDistribution { sum: f64, expected: f64 },
    #[error("parameter {name} must be at least 1")]
    ParameterTooSmall { name: &'static str },
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Coding(#[from] CodingError),
}

fn check_inputs(w: &Channel, sol: &LpSolution, l: usize) -> Result<(), RoundingError> {
    if l < 1 {
        return Err(RoundingError::ParameterTooSmall { name: "l" });
    }
    if sol.x_size != w.x_size() || sol.p.len() != w.x_size() {
        return Err(RoundingError::DimensionMismatch {
            what: "solution inputs vs channel",
            expected: w.x_size(),
            got: sol.p.len(),
        });
    }
    let sum: f64 = sol.p.iter().sum();
    let expected = sol.k as f64;
    if (sum - expected).abs() > MASS_TOLERANCE {
        return Err(RoundingError::DegenerateDistribution { sum, expected });
    }
    Ok(())
}

fn sample_with<R: Rng>(sol: &LpSolution, l: usize, rng: &mut R) -> Vec<usize> {
    let kf = sol.k as f64;
    let mut picks: Vec<usize> = Vec::with_capacity(l);
    for _ in 0..l {
        // Inverse-CDF over p/k; u < cum skips zero-mass inputs by itself.
        let u = rng.random::<f64>() * kf;
        let mut cum = 0.0;
        let mut chosen = None;
        for (x, &px) in sol.p.iter().enumerate() {
            cum += px;
            if u < cum {
                chosen = Some(x);
                break;
            }
        }
        let x = chosen.unwrap_or_else(|| {
            // Roundoff pushed u past the last positive-mass entry.
            sol.p
                .iter()
                .rposition(|&px| px > 0.0)
                .expect("mass sums to k >= 1")
        });
        picks.push(x);
    }
    picks.sort_unstable();
    picks.dedup();
    picks
}

/// Samples one rounded code: `l` iid draws from `{p_x/k}`, duplicates
/// collapsed, ML-decoded, with `l` messages.
pub fn sample_code(
    w: &Channel,
    sol: &LpSolution,
    l: usize,
    seed: u64,
) -> Result<Code, RoundingError> {
    check_inputs(w, sol, l)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codewords = sample_with(sol, l, &mut rng);
    Ok(Code::new(w, codewords, l)?)
}

/// Exact expectation `E[f(S)/l]` of the sampled code value, by the prefix
/// formula in the module docs.
pub fn exact_expected_value(w: &Channel, sol: &LpSolution, l: usize) -> Result<f64, RoundingError> {
    check_inputs(w, sol, l)?;
    assert!(l <= i32::MAX as usize, "draw count fits an i32 exponent");
    let kf = sol.k as f64;
    let xs = w.x_size();
    let mut order: Vec<usize> = (0..xs).collect();
    let mut total = 0.0;
    for y in 0..w.y_size() {
        // Decreasing channel weight, smaller input first on ties.
        order.sort_by(|&a, &b| {
            w.prob(b, y)
                .partial_cmp(&w.prob(a, y))
                .expect("channel entries are never NaN")
        });
        let mut q = 0.0;
        let mut tail_prev = 1.0;
        for &x in &order {
            let weight = w.prob(x, y);
            if weight == 0.0 {
                break; // descending order: nothing left can contribute
            }
            q += sol.p[x];
            let tail = Float::powi((1.0 - q / kf).max(0.0), l as i32);
            total += weight * (tail_prev - tail);
            tail_prev = tail;
        }
        order.sort_unstable();
    }
    Ok(total / l as f64)
}

/// One rounding experiment: the exact expectation, a seeded Monte-Carlo
/// estimate of it, and the guarantee it must clear.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundingReport {
    pub l: usize,
    pub exact_expectation: f64,
    pub mc_mean: f64,
    pub mc_stddev: f64,
    pub mc_trials: usize,
    /// `ratio(k, l) * sol.value`: the rounding guarantee.
    pub bound: f64,
    pub seed: u64,
}

/// Runs `trials` independent rounding experiments. Trial `t` uses stream `t`
/// of a ChaCha generator seeded with `seed`, so the report is reproducible
/// and trials are order-independent. `mc_stddev` is the sample standard
/// deviation (Welford accumulation).
pub fn monte_carlo(
    w: &Channel,
    sol: &LpSolution,
    l: usize,
    trials: usize,
    seed: u64,
) -> Result<RoundingReport, RoundingError> {
    check_inputs(w, sol, l)?;
    if trials < 1 {
        return Err(RoundingError::ParameterTooSmall { name: "trials" });
    }
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let codewords = sample_with(sol, l, &mut rng);
        let value = f_value(w, &codewords)? / l as f64;
        let delta = value - mean;
        mean += delta / (t + 1) as f64;
        m2 += delta * (value - mean);
    }
    let mc_stddev = if trials > 1 {
        Float::sqrt(m2 / (trials - 1) as f64)
    } else {
        0.0
    };
    Ok(RoundingReport {
        l,
        exact_expectation: exact_expected_value(w, sol, l)?,
        mc_mean: mean,
        mc_stddev,
        mc_trials: trials,
        bound: ratio(sol.k as u64, l as u64) * sol.value,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_bsc, make_tightness, random_channel};
    use crate::metaconverse::ns_value;
    use std::vec;

    #[test]
    fn single_draw_always_succeeds() {
        for seed in 0..5u64 {
            let w = random_channel(4, 4, seed).unwrap();
            for k in 1..=4 {
                let sol = ns_value(&w, k).unwrap();
                let e = exact_expected_value(&w, &sol, 1).unwrap();
                assert!((e - 1.0).abs() < 1e-9, "seed {seed} k {k}: {e}");
            }
        }
    }

    #[test]
    fn expectation_matches_tuple_enumeration() {
        // Brute force over all l-tuples of codeword draws.
        for seed in 5..12u64 {
            let w = random_channel(3, 4, seed).unwrap();
            for (k, l) in [(2usize, 2usize), (2, 3), (3, 2)] {
                let sol = ns_value(&w, k).unwrap();
                let kf = k as f64;
                let n = w.x_size();
                let tuples = n.pow(l as u32);
                let mut expect = 0.0;
                for code in 0..tuples {
                    let mut idx = code;
                    let mut prob = 1.0;
                    let mut set = vec![];
                    for _ in 0..l {
                        let x = idx % n;
                        idx /= n;
                        prob *= sol.p[x] / kf;
                        if !set.contains(&x) {
                            set.push(x);
                        }
                    }
                    if prob > 0.0 {
                        expect += prob * f_value(&w, &set).unwrap();
                    }
                }
                expect /= l as f64;
                let formula = exact_expected_value(&w, &sol, l).unwrap();
                assert!(
                    (expect - formula).abs() < 1e-10,
                    "seed {seed} k {k} l {l}: {expect} vs {formula}"
                );
            }
        }
    }

    #[test]
    fn expectation_clears_the_guarantee() {
        for seed in 20..35u64 {
            let w = random_channel(6, 5, seed).unwrap();
            for k in 1..=4 {
                let sol = ns_value(&w, k).unwrap();
                for l in 1..=4 {
                    let e = exact_expected_value(&w, &sol, l).unwrap();
                    let bound = ratio(k as u64, l as u64) * sol.value;
                    assert!(e >= bound - 1e-9, "seed {seed} k {k} l {l}: {e} < {bound}");
                }
            }
        }
    }

    #[test]
    fn sampling_is_deterministic_and_valid() {
        let w = make_tightness(2, 2).unwrap();
        let sol = ns_value(&w, 2).unwrap();
        let a = sample_code(&w, &sol, 2, 123).unwrap();
        let b = sample_code(&w, &sol, 2, 123).unwrap();
        assert_eq!(a, b);
        assert!(a.codewords().windows(2).all(|p| p[0] < p[1]));
        assert!(a.codewords().len() <= 2);
        assert_eq!(a.k(), 2);
    }

    #[test]
    fn monte_carlo_report() {
        let w = make_bsc(0.1).unwrap();
        let sol = ns_value(&w, 2).unwrap();
        let r = monte_carlo(&w, &sol, 2, 2000, 77).unwrap();
        let r2 = monte_carlo(&w, &sol, 2, 2000, 77).unwrap();
        assert_eq!(r, r2);
        // BSC optimum is integral: every sample draws both inputs or one.
        assert!(r.mc_mean >= r.bound - 1e-9);
        let stderr = r.mc_stddev / Float::sqrt(r.mc_trials as f64);
        assert!(
            (r.mc_mean - r.exact_expectation).abs() <= 4.0 * stderr + 1e-9,
            "mean {} expectation {} stderr {stderr}",
            r.mc_mean,
            r.exact_expectation
        );
    }

    #[test]
    fn degenerate_mass_is_rejected() {
        let w = make_bsc(0.1).unwrap();
        let mut sol = ns_value(&w, 2).unwrap();
        sol.p[0] = 0.5;
        assert!(matches!(
            exact_expected_value(&w, &sol, 2),
            Err(RoundingError::DegenerateDistribution { .. })
        ));
        assert!(matches!(
            sample_code(&w, &sol, 0, 1),
            Err(RoundingError::ParameterTooSmall { .. })
        ));
    }
}
