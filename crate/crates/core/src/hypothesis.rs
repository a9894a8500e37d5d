//! Binary hypothesis testing and its minimax link to the relaxation.
//!
//! `beta(P, Q, alpha)` is the smallest false-alarm probability `Σ_z Q(z)T(z)`
//! achievable by a (randomized) test `T : Z -> [0, 1]` whose detection power
//! `Σ_z P(z)T(z)` is at least `alpha`. Two independent routes compute it:
//! a direct LP ([`beta`]) and the likelihood-ratio threshold construction
//! ([`neyman_pearson`]); they must agree to solver precision.
//!
//! The channel-level form ties back to coding: for every input distribution
//! `mu`,
//!
//! ```text
//! max_nu beta_{1-1/k}(mu x nu, mu x W) >= 1 - ns_value(W, k)
//! ```
//!
//! with equality at the minimizing `mu` — which can be read off an optimal
//! relaxation solution as `mu = p/k` with test `T = 1 - r/p`
//! ([`test_from_lp`]). The max over `nu` concentrates on worst-case outputs,
//! so [`max_output_beta`] needs just one power constraint per output column.
//! [`verify_minimax`] checks both directions numerically.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::Channel;
use crate::metaconverse::{self, LpSolution, MetaError};
use crate::simplex::{self, Constraint, LinearProgram, Relation, SimplexError, Status};

/// Distributions must sum to 1 within this tolerance.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Residual tolerance for the minimax identity checks.
pub const MINIMAX_TOLERANCE: f64 = 1e-6;

/// Random input distributions probed by [`verify_minimax`].
pub const MINIMAX_TRIALS: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HypothesisError {
    #[error("distribution {name}: {detail}")]
    InvalidDistribution {
        name: &'static str,
        detail: &'static str,
    },
    #[error("alpha = {value} is outside [0, 1]")]
    AlphaOutOfRange { value: f64 },
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("test constraint at output {index} violated by {violation}")]
    TestViolation { index: usize, violation: f64 },
    #[error("hypothesis-testing LP terminated with status {status:?}")]
    UnexpectedStatus { status: Status },
    #[error(transparent)]
    Solver(#[from] SimplexError),
    #[error(transparent)]
    Relaxation(#[from] MetaError),
}

fn check_distribution(name: &'static str, v: &[f64]) -> Result<(), HypothesisError> {
    if v.is_empty() {
        return Err(HypothesisError::InvalidDistribution {
            name,
            detail: "empty",
        });
    }
    let mut sum = 0.0;
    for &e in v {
        if e.is_nan() || e < 0.0 {
            return Err(HypothesisError::InvalidDistribution {
                name,
                detail: "negative or NaN entry",
            });
        }
        sum += e;
    }
    if (sum - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(HypothesisError::InvalidDistribution {
            name,
            detail: "does not sum to 1",
        });
    }
    Ok(())
}

fn check_alpha(alpha: f64) -> Result<(), HypothesisError> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(HypothesisError::AlphaOutOfRange { value: alpha });
    }
    Ok(())
}

/// `beta_alpha(P, Q)` by LP: minimize `Σ Q T` over `T in [0,1]^Z` subject to
/// `Σ P T >= alpha`. Returns the error probability and an optimal test.
pub fn beta(p: &[f64], q: &[f64], alpha: f64) -> Result<(f64, Vec<f64>), HypothesisError> {
    check_distribution("p", p)?;
    check_distribution("q", q)?;
    check_alpha(alpha)?;
    if p.len() != q.len() {
        return Err(HypothesisError::DimensionMismatch {
            what: "q vs p",
            expected: p.len(),
            got: q.len(),
        });
    }
    let lp = LinearProgram {
        objective: q.iter().map(|v| -v).collect(),
        constraints: vec![Constraint::new(p.to_vec(), Relation::Ge, alpha)],
        bounds: vec![(0.0, 1.0); p.len()],
    };
    let res = simplex::solve(&lp)?;
    if res.status != Status::Optimal {
        return Err(HypothesisError::UnexpectedStatus { status: res.status });
    }
    Ok(((-res.value).max(0.0), res.primal))
}

/// `beta_alpha(P, Q)` by the threshold construction: sort outcomes by
/// likelihood ratio `P/Q` (descending, `Q = 0` first, smaller index on
/// ties), accept greedily until the power budget `alpha` is spent, with one
/// fractional outcome at the boundary. Serves as the independent oracle for
/// [`beta`] — the two must agree to solver precision.
pub fn neyman_pearson(
    p: &[f64],
    q: &[f64],
    alpha: f64,
) -> Result<(f64, Vec<f64>), HypothesisError> {
    check_distribution("p", p)?;
    check_distribution("q", q)?;
    check_alpha(alpha)?;
    if p.len() != q.len() {
        return Err(HypothesisError::DimensionMismatch {
            what: "q vs p",
            expected: p.len(),
            got: q.len(),
        });
    }
    // Outcomes with p = 0 never help the power constraint and can only add
    // error mass: leave them at T = 0.
    let mut order: Vec<usize> = (0..p.len()).filter(|&z| p[z] > 0.0).collect();
    order.sort_by(|&a, &b| {
        // ratio_a > ratio_b  <=>  p_a q_b > p_b q_a  (cross-multiplied to
        // dodge infinities; all values are finite and nonnegative).
        let lhs = p[a] * q[b];
        let rhs = p[b] * q[a];
        rhs.partial_cmp(&lhs)
            .expect("inputs are validated finite")
            .then_with(|| a.cmp(&b))
    });
    let mut test = vec![0.0; p.len()];
    let mut err = 0.0;
    let mut spent = 0.0;
    for &z in &order {
        let remaining = alpha - spent;
        if remaining <= 0.0 {
            break;
        }
        let take = p[z].min(remaining);
        test[z] = take / p[z];
        err += q[z] * test[z];
        spent += take;
    }
    Ok((err, test))
}

/// A hypothesis test against channel outputs, attached to an input
/// distribution: `value = Σ_{x,y} mu(x) W(y|x) T(x,y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelTest {
    pub mu: Vec<f64>,
    /// Row-major `test[x * y_size + y]` in `[0, 1]`.
    pub test: Vec<f64>,
    pub value: f64,
}

impl ChannelTest {
    /// Confirms the per-output power constraints
    /// `Σ_x mu(x) T(x,y) >= 1 - 1/k` and entry ranges, within `tol`.
    pub fn check(&self, w: &Channel, k: usize, tol: f64) -> Result<(), HypothesisError> {
        let (xs, ys) = (w.x_size(), w.y_size());
        if self.mu.len() != xs {
            return Err(HypothesisError::DimensionMismatch {
                what: "mu vs input alphabet",
                expected: xs,
                got: self.mu.len(),
            });
        }
        if self.test.len() != xs * ys {
            return Err(HypothesisError::DimensionMismatch {
                what: "test entries",
                expected: xs * ys,
                got: self.test.len(),
            });
        }
        check_distribution("mu", &self.mu)?;
        let threshold = 1.0 - 1.0 / k as f64;
        for (index, &t) in self.test.iter().enumerate() {
            if !(t >= -tol && t <= 1.0 + tol) {
                return Err(HypothesisError::TestViolation {
                    index,
                    violation: if t < 0.0 { -t } else { t - 1.0 },
                });
            }
        }
        for y in 0..ys {
            let power: f64 = (0..xs).map(|x| self.mu[x] * self.test[x * ys + y]).sum();
            if power < threshold - tol {
                return Err(HypothesisError::TestViolation {
                    index: y,
                    violation: threshold - power,
                });
            }
        }
        Ok(())
    }
}

/// `max_nu beta_{1-1/k}(mu x nu, mu x W)` for fixed `mu`.
///
/// The adversarial output distribution `nu` concentrates wherever the test
/// is weakest, so the maximum over `nu` becomes one power constraint per
/// output: minimize `Σ mu W T` over `T in [0,1]` with
/// `Σ_x mu(x) T(x,y) >= 1 - 1/k` for every `y`.
pub fn max_output_beta(w: &Channel, k: usize, mu: &[f64]) -> Result<ChannelTest, HypothesisError> {
    if k < 1 {
        return Err(HypothesisError::Relaxation(MetaError::ParameterTooSmall {
            name: "k",
        }));
    }
    if mu.len() != w.x_size() {
        return Err(HypothesisError::DimensionMismatch {
            what: "mu vs input alphabet",
            expected: w.x_size(),
            got: mu.len(),
        });
    }
    check_distribution("mu", mu)?;
    let (xs, ys) = (w.x_size(), w.y_size());
    let nvars = xs * ys;
    let mut objective = vec![0.0; nvars];
    for x in 0..xs {
        for y in 0..ys {
            objective[x * ys + y] = -(mu[x] * w.prob(x, y));
        }
    }
    let threshold = 1.0 - 1.0 / k as f64;
    let mut constraints = Vec::with_capacity(ys);
    for y in 0..ys {
        let mut coeffs = vec![0.0; nvars];
        for x in 0..xs {
            coeffs[x * ys + y] = mu[x];
        }
        constraints.push(Constraint::new(coeffs, Relation::Ge, threshold));
    }
    let lp = LinearProgram {
        objective,
        constraints,
        bounds: vec![(0.0, 1.0); nvars],
    };
    let res = simplex::solve(&lp)?;
    if res.status != Status::Optimal {
        return Err(HypothesisError::UnexpectedStatus { status: res.status });
    }
    Ok(ChannelTest {
        mu: mu.to_vec(),
        test: res.primal,
        value: (-res.value).max(0.0),
    })
}

/// Reads the minimax witness off a relaxation optimum: `mu = p/k` and
/// `T(x,y) = 1 - r_{x,y}/p_x` (1 where `p_x = 0`). Its value is exactly
/// `1 - ns_value(W, k)`.
pub fn test_from_lp(w: &Channel, sol: &LpSolution) -> Result<ChannelTest, HypothesisError> {
    sol.check(w, 1e-7).map_err(HypothesisError::Relaxation)?;
    let (xs, ys) = (w.x_size(), w.y_size());
    let kf = sol.k as f64;
    let mu: Vec<f64> = sol.p.iter().map(|v| v / kf).collect();
    let mut test = vec![0.0; xs * ys];
    for x in 0..xs {
        for y in 0..ys {
            let t = if sol.p[x] > 0.0 {
                (1.0 - sol.r_at(x, y) / sol.p[x]).clamp(0.0, 1.0)
            } else {
                1.0
            };
            test[x * ys + y] = t;
        }
    }
    let mut value = 0.0;
    for x in 0..xs {
        for y in 0..ys {
            value += mu[x] * w.prob(x, y) * test[x * ys + y];
        }
    }
    Ok(ChannelTest { mu, test, value })
}

/// Numeric check of the minimax identity
/// `min_mu max_nu beta_{1-1/k} = 1 - ns_value(W, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimaxReport {
    pub k: usize,
    pub ns_value: f64,
    /// `1 - ns_value`: the value both sides must meet.
    pub target: f64,
    /// `max_output_beta` at the constructed minimizer `mu = p/k`.
    pub constructed_value: f64,
    pub constructed_residual: f64,
    pub random_trials: usize,
    /// Smallest value seen over random `mu`; must stay above `target`.
    pub random_min_value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Verifies both directions of the identity: the constructed `mu = p/k`
/// achieves the target value (equality within [`MINIMAX_TOLERANCE`]), and
/// [`MINIMAX_TRIALS`] seeded random distributions never beat it (the target
/// is the minimum over `mu`).
pub fn verify_minimax(w: &Channel, k: usize, seed: u64) -> Result<MinimaxReport, HypothesisError> {
    let sol = metaconverse::ns_value(w, k)?;
    let target = 1.0 - sol.value;
    let witness = test_from_lp(w, &sol)?;
    let constructed = max_output_beta(w, k, &witness.mu)?;
    let constructed_residual = constructed.value - target;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut random_min = f64::INFINITY;
    for _ in 0..MINIMAX_TRIALS {
        let mu = random_distribution(w.x_size(), &mut rng);
        let probe = max_output_beta(w, k, &mu)?;
        random_min = random_min.min(probe.value);
    }
    let pass = constructed_residual.abs() <= MINIMAX_TOLERANCE
        && random_min >= target - MINIMAX_TOLERANCE;
    Ok(MinimaxReport {
        k,
        ns_value: sol.value,
        target,
        constructed_value: constructed.value,
        constructed_residual,
        random_trials: MINIMAX_TRIALS,
        random_min_value: random_min,
        tolerance: MINIMAX_TOLERANCE,
        pass,
    })
}

/// A random distribution on `n` points: iid uniforms normalized to sum 1.
pub fn random_distribution<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let draws: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let sum: f64 = draws.iter().sum();
        if sum > 1e-9 {
            return draws.iter().map(|v| v / sum).collect();
        }
    }
}
