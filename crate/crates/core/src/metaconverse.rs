//! The non-signaling relaxation of one-shot coding and its box form.
//!
//! Allowing the encoder/decoder pair to share an arbitrary non-signaling
//! correlation relaxes the combinatorial problem to a linear program:
//!
//! ```text
//! ns_value(W, k) = max (1/k) Σ_{x,y} W(y|x) r_{x,y}
//!                  s.t. Σ_x r_{x,y} <= 1          for every y
//!                       Σ_x p_x      = k
//!                       0 <= r_{x,y} <= p_x <= 1
//! ```
//!
//! The `p_x <= 1` bound is only valid when `k <= |X|`, so that is a hard
//! precondition here. The optimum upper-bounds the exact value `S(W, k)` and
//! lower-bounds nothing worse than `ratio(k, l)` times it after rounding;
//! [`crate::bounds`] wires those inequalities together.
//!
//! For fixed marginals `p` the inner maximum over `r` is a fractional
//! knapsack per output column — [`f_fractional`] computes it directly,
//! making `ns_value(W, k) = (1/k) max_{Σp = k, p <= 1} f_fractional(W, p)`.
//!
//! [`box_from_lp`] and [`lp_from_box`] translate between LP solutions and
//! two-party boxes `P(x, j | i, y)` (encoder side sees the message `i` and
//! emits `x`; decoder side sees the channel output `y` and emits the guess
//! `j`). The translation preserves the success probability exactly.

use alloc::vec;
use alloc::vec::Vec;

use crate::channel::Channel;
use crate::simplex::{self, Constraint, LinearProgram, Relation, SimplexError, Status};

/// LP solutions are accepted with at most this much constraint slack.
pub const SOLUTION_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetaError {
    #[error("message count {k} exceeds the input alphabet size {x_size}")]
    KExceedsInputAlphabet { k: usize, x_size: usize },
    #[error("parameter {name} must be at least 1")]
    ParameterTooSmall { name: &'static str },
    #[error("{name}[{index}] = {value} is outside [0, 1]")]
    OutOfRange {
        name: &'static str,
        index: usize,
        value: f64,
    },
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("invalid LP solution: {reason}")]
    InvalidSolution { reason: &'static str },
    #[error("box violates {check} by {violation}")]
    BoxViolation {
        check: &'static str,
        violation: f64,
    },
    #[error("relaxation LP terminated with status {status:?}")]
    UnexpectedStatus { status: Status },
    #[error(transparent)]
    Solver(#[from] SimplexError),
}

/// An optimum (or candidate) of the non-signaling program.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub k: usize,
    pub x_size: usize,
    pub y_size: usize,
    /// Row-major `r[x * y_size + y]`.
    pub r: Vec<f64>,
    pub p: Vec<f64>,
    /// `(1/k) Σ W(y|x) r_{x,y}`, recomputed from `r`.
    pub value: f64,
}

impl LpSolution {
    #[inline]
    pub fn r_at(&self, x: usize, y: usize) -> f64 {
        self.r[x * self.y_size + y]
    }

    /// Verifies shapes against `w` and every program constraint within
    /// `tol`, including that `value` matches `r`.
    pub fn check(&self, w: &Channel, tol: f64) -> Result<(), MetaError> {
        if self.x_size != w.x_size() || self.p.len() != self.x_size {
            return Err(MetaError::DimensionMismatch {
                what: "solution inputs vs channel",
                expected: w.x_size(),
                got: self.p.len(),
            });
        }
        if self.y_size != w.y_size() || self.r.len() != self.x_size * self.y_size {
            return Err(MetaError::DimensionMismatch {
                what: "solution r entries vs channel",
                expected: w.x_size() * w.y_size(),
                got: self.r.len(),
            });
        }
        if self.k < 1 {
            return Err(MetaError::ParameterTooSmall { name: "k" });
        }
        for (x, &px) in self.p.iter().enumerate() {
            if !(px >= -tol && px <= 1.0 + tol) {
                return Err(MetaError::OutOfRange {
                    name: "p",
                    index: x,
                    value: px,
                });
            }
        }
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                let r = self.r_at(x, y);
                if !(r >= -tol && r <= 1.0 + tol) {
                    return Err(MetaError::OutOfRange {
                        name: "r",
                        index: x * self.y_size + y,
                        value: r,
                    });
                }
                if r > self.p[x] + tol {
                    return Err(MetaError::InvalidSolution {
                        reason: "r exceeds p",
                    });
                }
            }
        }
        let psum: f64 = self.p.iter().sum();
        if (psum - self.k as f64).abs() > SOLUTION_TOLERANCE.max(tol) {
            return Err(MetaError::InvalidSolution {
                reason: "p does not sum to k",
            });
        }
        for y in 0..self.y_size {
            let col: f64 = (0..self.x_size).map(|x| self.r_at(x, y)).sum();
            if col > 1.0 + tol {
                return Err(MetaError::InvalidSolution {
                    reason: "an output column of r exceeds capacity 1",
                });
            }
        }
        let mut v = 0.0;
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                v += w.prob(x, y) * self.r_at(x, y);
            }
        }
        v /= self.k as f64;
        if (v - self.value).abs() > tol.max(1e-12) {
            return Err(MetaError::InvalidSolution {
                reason: "stored value disagrees with r",
            });
        }
        Ok(())
    }
}

/// Builds the relaxation as an explicit [`LinearProgram`].
///
/// Variable order: all `r_{x,y}` row-major, then `p_0..p_{|X|-1}`.
/// Constraint order: one `<=` row per output column, the `Σp = k` equality,
/// then `r_{x,y} - p_x <= 0` row-major. All variables live in `[0, 1]`.
pub fn build_ns_lp(w: &Channel, k: usize) -> Result<LinearProgram, MetaError> {
    if k < 1 {
        return Err(MetaError::ParameterTooSmall { name: "k" });
    }
    if k > w.x_size() {
        return Err(MetaError::KExceedsInputAlphabet {
            k,
            x_size: w.x_size(),
        });
    }
    let (xs, ys) = (w.x_size(), w.y_size());
    let nr = xs * ys;
    let nvars = nr + xs;
    let mut objective = vec![0.0; nvars];
    for x in 0..xs {
        for y in 0..ys {
            objective[x * ys + y] = w.prob(x, y) / k as f64;
        }
    }
    let mut constraints = Vec::with_capacity(ys + 1 + nr);
    for y in 0..ys {
        let mut coeffs = vec![0.0; nvars];
        for x in 0..xs {
            coeffs[x * ys + y] = 1.0;
        }
        constraints.push(Constraint::new(coeffs, Relation::Le, 1.0));
    }
    let mut coeffs = vec![0.0; nvars];
    for x in 0..xs {
        coeffs[nr + x] = 1.0;
    }
    constraints.push(Constraint::new(coeffs, Relation::Eq, k as f64));
    for x in 0..xs {
        for y in 0..ys {
            let mut coeffs = vec![0.0; nvars];
            coeffs[x * ys + y] = 1.0;
            coeffs[nr + x] = -1.0;
            constraints.push(Constraint::new(coeffs, Relation::Le, 0.0));
        }
    }
    Ok(LinearProgram {
        objective,
        constraints,
        bounds: vec![(0.0, 1.0); nvars],
    })
}

/// The inner program for fixed marginals: maximize `Σ W r` over
/// `0 <= r_{x,y} <= p_x` with unit column capacity. [`f_fractional`] solves
/// it in closed form; this LP form exists to cross-check it.
pub fn build_fractional_lp(w: &Channel, p: &[f64]) -> Result<LinearProgram, MetaError> {
    check_marginals(w, p)?;
    let (xs, ys) = (w.x_size(), w.y_size());
    let nvars = xs * ys;
    let mut objective = vec![0.0; nvars];
    for x in 0..xs {
        for y in 0..ys {
            objective[x * ys + y] = w.prob(x, y);
        }
    }
    let mut constraints = Vec::with_capacity(ys);
    for y in 0..ys {
        let mut coeffs = vec![0.0; nvars];
        for x in 0..xs {
            coeffs[x * ys + y] = 1.0;
        }
        constraints.push(Constraint::new(coeffs, Relation::Le, 1.0));
    }
    let bounds = (0..xs)
        .flat_map(|x| core::iter::repeat_n((0.0, p[x]), ys))
        .collect();
    Ok(LinearProgram {
        objective,
        constraints,
        bounds,
    })
}

fn check_marginals(w: &Channel, p: &[f64]) -> Result<(), MetaError> {
    if p.len() != w.x_size() {
        return Err(MetaError::DimensionMismatch {
            what: "marginals vs input alphabet",
            expected: w.x_size(),
            got: p.len(),
        });
    }
    for (index, &v) in p.iter().enumerate() {
        if !(0.0..=1.0).contains(&v) {
            return Err(MetaError::OutOfRange {
                name: "p",
                index,
                value: v,
            });
        }
    }
    Ok(())
}

/// `max Σ W r` for fixed `p`: each output column is a fractional knapsack of
/// capacity 1 filled in decreasing `W(y|x)` order (smaller `x` first on
/// ties), taking up to `p_x` from each input.
pub fn f_fractional(w: &Channel, p: &[f64]) -> Result<f64, MetaError> {
    check_marginals(w, p)?;
    let xs = w.x_size();
    let mut order: Vec<usize> = (0..xs).collect();
    let mut total = 0.0;
    for y in 0..w.y_size() {
        // Stable sort: equal weights keep ascending input order.
        order.sort_by(|&a, &b| {
            w.prob(b, y)
                .partial_cmp(&w.prob(a, y))
                .expect("channel entries are never NaN")
        });
        let mut capacity = 1.0f64;
        for &x in &order {
            let weight = w.prob(x, y);
            if weight == 0.0 || capacity <= 0.0 {
                break;
            }
            let take = p[x].min(capacity);
            total += weight * take;
            capacity -= take;
        }
        order.sort_unstable();
    }
    Ok(total)
}

/// Solves the relaxation and canonicalizes the optimum: `p` is clamped to
/// `[0, 1]` and adjusted to sum to exactly `k`, `r` is clamped into
/// `[0, p_x]`, and every output column of `r` is brought to sum exactly 1
/// (scaling down the rare overshoot, topping up slack in input order). A
/// saturated column sum is what makes the box conversion non-signaling, and
/// top-ups never lower the objective, so the canonical optimum is still
/// optimal. `value` is recomputed from the canonical `r`.
pub fn ns_value(w: &Channel, k: usize) -> Result<LpSolution, MetaError> {
    let lp = build_ns_lp(w, k)?;
    let res = simplex::solve(&lp)?;
    if res.status != Status::Optimal {
        return Err(MetaError::UnexpectedStatus { status: res.status });
    }
    let (xs, ys) = (w.x_size(), w.y_size());
    let nr = xs * ys;
    let mut r = res.primal[..nr].to_vec();
    let mut p = res.primal[nr..nr + xs].to_vec();
    for v in p.iter_mut() {
        *v = v.clamp(0.0, 1.0);
    }
    let p = clip_and_fill(&p, k as f64)?;
    for x in 0..xs {
        for y in 0..ys {
            let v = r[x * ys + y].clamp(0.0, 1.0).min(p[x]);
            r[x * ys + y] = v;
        }
    }
    for y in 0..ys {
        let col: f64 = (0..xs).map(|x| r[x * ys + y]).sum();
        if col > 1.0 {
            for x in 0..xs {
                r[x * ys + y] /= col;
            }
        } else if col < 1.0 {
            let mut deficit = 1.0 - col;
            for x in 0..xs {
                let room = p[x] - r[x * ys + y];
                if room > 0.0 {
                    let add = room.min(deficit);
                    r[x * ys + y] += add;
                    deficit -= add;
                    if deficit <= 0.0 {
                        break;
                    }
                }
            }
        }
    }
    let mut value = 0.0;
    for x in 0..xs {
        for y in 0..ys {
            value += w.prob(x, y) * r[x * ys + y];
        }
    }
    value /= k as f64;
    Ok(LpSolution {
        k,
        x_size: xs,
        y_size: ys,
        r,
        p,
        value,
    })
}

/// Clamps every entry into `[0, 1]` and then adjusts entries in index order
/// until the vector sums to `target` (raising toward 1 or lowering toward 0
/// as needed). Errors if `target` cannot fit in `[0, len]`.
pub fn clip_and_fill(values: &[f64], target: f64) -> Result<Vec<f64>, MetaError> {
    if !(target >= 0.0 && target <= values.len() as f64) {
        return Err(MetaError::InvalidSolution {
            reason: "target mass does not fit the unit box",
        });
    }
    let mut out: Vec<f64> = values.iter().map(|v| v.clamp(0.0, 1.0)).collect();
    let sum: f64 = out.iter().sum();
    let mut delta = target - sum;
    if delta > 0.0 {
        for v in out.iter_mut() {
            let add = (1.0 - *v).min(delta);
            *v += add;
            delta -= add;
            if delta <= 0.0 {
                break;
            }
        }
    } else if delta < 0.0 {
        for v in out.iter_mut() {
            let sub = (*v).min(-delta);
            *v -= sub;
            delta += sub;
            if delta >= 0.0 {
                break;
            }
        }
    }
    Ok(out)
}

/// A two-party correlation `P(x, j | i, y)`: the encoder party turns a
/// message `i` into a channel input `x`, the decoder party turns a channel
/// output `y` into a guess `j`.
///
/// `probs` is flat in `[x][j][i][y]` order. `marginal_a[i * x_size + x]`
/// stores `P_A(x|i)` and `marginal_b[y * k + j]` stores `P_B(j|y)`, both
/// computed by averaging over the other party's input; [`NsBox::validate`]
/// checks that the per-input marginals actually agree with these averages,
/// which is exactly the non-signaling condition.
#[derive(Debug, Clone, PartialEq)]
pub struct NsBox {
    pub k: usize,
    pub x_size: usize,
    pub y_size: usize,
    pub probs: Vec<f64>,
    pub marginal_a: Vec<f64>,
    pub marginal_b: Vec<f64>,
}

impl NsBox {
    #[inline]
    pub fn prob(&self, x: usize, j: usize, i: usize, y: usize) -> f64 {
        self.probs[((x * self.k + j) * self.k + i) * self.y_size + y]
    }

    fn check_shape(&self) -> Result<(), MetaError> {
        if self.k < 1 {
            return Err(MetaError::ParameterTooSmall { name: "k" });
        }
        let expected = self.x_size * self.k * self.k * self.y_size;
        if self.probs.len() != expected {
            return Err(MetaError::DimensionMismatch {
                what: "box entries",
                expected,
                got: self.probs.len(),
            });
        }
        if self.marginal_a.len() != self.k * self.x_size {
            return Err(MetaError::DimensionMismatch {
                what: "encoder marginal",
                expected: self.k * self.x_size,
                got: self.marginal_a.len(),
            });
        }
        if self.marginal_b.len() != self.y_size * self.k {
            return Err(MetaError::DimensionMismatch {
                what: "decoder marginal",
                expected: self.y_size * self.k,
                got: self.marginal_b.len(),
            });
        }
        Ok(())
    }

    /// Checks, within `tol`: entries form a distribution for every input
    /// pair `(i, y)`, the encoder marginal `Σ_j P(x, j | i, y)` matches
    /// `marginal_a` regardless of `y`, and the decoder marginal
    /// `Σ_x P(x, j | i, y)` matches `marginal_b` regardless of `i`.
    pub fn validate(&self, tol: f64) -> Result<(), MetaError> {
        self.check_shape()?;
        for &v in &self.probs {
            if !(v >= -tol && v <= 1.0 + tol) {
                return Err(MetaError::BoxViolation {
                    check: "entry range",
                    violation: if v < 0.0 { -v } else { v - 1.0 },
                });
            }
        }
        for i in 0..self.k {
            for y in 0..self.y_size {
                let mut mass = 0.0;
                for x in 0..self.x_size {
                    for j in 0..self.k {
                        mass += self.prob(x, j, i, y);
                    }
                }
                if (mass - 1.0).abs() > tol {
                    return Err(MetaError::BoxViolation {
                        check: "normalization",
                        violation: (mass - 1.0).abs(),
                    });
                }
            }
        }
        for i in 0..self.k {
            for x in 0..self.x_size {
                let stored = self.marginal_a[i * self.x_size + x];
                for y in 0..self.y_size {
                    let m: f64 = (0..self.k).map(|j| self.prob(x, j, i, y)).sum();
                    if (m - stored).abs() > tol {
                        return Err(MetaError::BoxViolation {
                            check: "encoder marginal independence",
                            violation: (m - stored).abs(),
                        });
                    }
                }
            }
        }
        for y in 0..self.y_size {
            for j in 0..self.k {
                let stored = self.marginal_b[y * self.k + j];
                for i in 0..self.k {
                    let m: f64 = (0..self.x_size).map(|x| self.prob(x, j, i, y)).sum();
                    if (m - stored).abs() > tol {
                        return Err(MetaError::BoxViolation {
                            check: "decoder marginal independence",
                            violation: (m - stored).abs(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Success probability of coding through `w` with this box:
    /// `(1/k) Σ_{i,x,y} W(y|x) P(x, i | i, y)`.
    pub fn success_probability(&self, w: &Channel) -> Result<f64, MetaError> {
        self.check_shape()?;
        if self.x_size != w.x_size() || self.y_size != w.y_size() {
            return Err(MetaError::DimensionMismatch {
                what: "box alphabets vs channel",
                expected: w.x_size() * w.y_size(),
                got: self.x_size * self.y_size,
            });
        }
        let mut total = 0.0;
        for x in 0..self.x_size {
            for y in 0..self.y_size {
                let wxy = w.prob(x, y);
                if wxy == 0.0 {
                    continue;
                }
                let hit: f64 = (0..self.k).map(|i| self.prob(x, i, i, y)).sum();
                total += wxy * hit;
            }
        }
        Ok(total / self.k as f64)
    }
}

/// Turns an LP solution into a non-signaling box:
///
/// ```text
/// P(x, j | i, y) = r_{x,y} / k                    if j = i
///                  (p_x - r_{x,y}) / (k (k - 1))  otherwise
/// ```
///
/// The formula is applied verbatim. The result passes [`NsBox::validate`]
/// when every output column of `r` sums to 1 — true for canonical
/// [`ns_value`] optima — because the decoder-side marginal works out to
/// `Σ_x P(x, j | i, y) = (1 - Σ_x r_{x,y}) / (k - 1)` on mismatched `j`,
/// which is `i`-independent only at saturation.
pub fn box_from_lp(sol: &LpSolution) -> Result<NsBox, MetaError> {
    let (k, xs, ys) = (sol.k, sol.x_size, sol.y_size);
    if k < 1 {
        return Err(MetaError::ParameterTooSmall { name: "k" });
    }
    if sol.p.len() != xs || sol.r.len() != xs * ys {
        return Err(MetaError::DimensionMismatch {
            what: "solution fields",
            expected: xs * ys,
            got: sol.r.len(),
        });
    }
    for (index, &v) in sol.p.iter().enumerate() {
        if !(-1e-9..=1.0 + 1e-9).contains(&v) {
            return Err(MetaError::OutOfRange {
                name: "p",
                index,
                value: v,
            });
        }
    }
    for x in 0..xs {
        for y in 0..ys {
            let r = sol.r_at(x, y);
            if !(-1e-9..=1.0 + 1e-9).contains(&r) {
                return Err(MetaError::OutOfRange {
                    name: "r",
                    index: x * ys + y,
                    value: r,
                });
            }
            if r > sol.p[x] + 1e-9 {
                return Err(MetaError::InvalidSolution {
                    reason: "r exceeds p",
                });
            }
        }
    }
    let psum: f64 = sol.p.iter().sum();
    if (psum - k as f64).abs() > SOLUTION_TOLERANCE {
        return Err(MetaError::InvalidSolution {
            reason: "p does not sum to k",
        });
    }

    let kf = k as f64;
    let off_denom = kf * (kf - 1.0);
    let mut probs = vec![0.0; xs * k * k * ys];
    for x in 0..xs {
        for j in 0..k {
            for i in 0..k {
                for y in 0..ys {
                    let r = sol.r_at(x, y);
                    let v = if i == j {
                        r / kf
                    } else {
                        ((sol.p[x] - r) / off_denom).max(0.0)
                    };
                    probs[((x * k + j) * k + i) * ys + y] = v;
                }
            }
        }
    }
    let mut bx = NsBox {
        k,
        x_size: xs,
        y_size: ys,
        probs,
        marginal_a: vec![0.0; k * xs],
        marginal_b: vec![0.0; ys * k],
    };
    fill_marginals(&mut bx);
    Ok(bx)
}

/// Computes the stored marginals as averages over the other party's input.
fn fill_marginals(bx: &mut NsBox) {
    for i in 0..bx.k {
        for x in 0..bx.x_size {
            let mut m = 0.0;
            for y in 0..bx.y_size {
                for j in 0..bx.k {
                    m += bx.prob(x, j, i, y);
                }
            }
            bx.marginal_a[i * bx.x_size + x] = m / bx.y_size as f64;
        }
    }
    for y in 0..bx.y_size {
        for j in 0..bx.k {
            let mut m = 0.0;
            for i in 0..bx.k {
                for x in 0..bx.x_size {
                    m += bx.prob(x, j, i, y);
                }
            }
            bx.marginal_b[y * bx.k + j] = m / bx.k as f64;
        }
    }
}

/// Recovers an LP solution from a non-signaling box:
/// `r_{x,y} = Σ_i P(x, i | i, y)` and `p_x = Σ_i P_A(x|i)`, with `p` clipped
/// into the unit box and topped up in index order so it sums to `k` again
/// (clipping can only create slack because `Σ_x p_x = k` pre-clip).
///
/// Needs `k <= |X|` — otherwise no feasible `p` exists. For a valid box the
/// recovered solution is feasible and reproduces the box's success
/// probability exactly.
pub fn lp_from_box(bx: &NsBox, w: &Channel) -> Result<LpSolution, MetaError> {
    bx.check_shape()?;
    if bx.x_size != w.x_size() || bx.y_size != w.y_size() {
        return Err(MetaError::DimensionMismatch {
            what: "box alphabets vs channel",
            expected: w.x_size() * w.y_size(),
            got: bx.x_size * bx.y_size,
        });
    }
    let (k, xs, ys) = (bx.k, bx.x_size, bx.y_size);
    if k > xs {
        return Err(MetaError::KExceedsInputAlphabet { k, x_size: xs });
    }
    let mut r = vec![0.0; xs * ys];
    for x in 0..xs {
        for y in 0..ys {
            let hit: f64 = (0..k).map(|i| bx.prob(x, i, i, y)).sum();
            r[x * ys + y] = hit.clamp(0.0, 1.0);
        }
    }
    let raw_p: Vec<f64> = (0..xs)
        .map(|x| (0..k).map(|i| bx.marginal_a[i * xs + x]).sum())
        .collect();
    let p = clip_and_fill(&raw_p, k as f64)?;
    let mut value = 0.0;
    for x in 0..xs {
        for y in 0..ys {
            value += w.prob(x, y) * r[x * ys + y];
        }
    }
    value /= k as f64;
    Ok(LpSolution {
        k,
        x_size: xs,
        y_size: ys,
        r,
        p,
        value,
    })
}
