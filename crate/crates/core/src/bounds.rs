//! The approximation-ratio arithmetic and end-to-end inequality checks.
//!
//! Everything in this crate hangs off one chain, for `1 <= l, k <= |X|`:
//!
//! ```text
//! ratio(k, l) * ns_value(W, k) <= greedy(W, l) <= exact(W, l)
//!                                             <= ns_value(W, l) <= 1
//! ```
//!
//! with `ratio(k, l) = (k/l) (1 - (1 - 1/k)^l)` and, independently,
//! `exact(W, l) >= 1/l` (one message always gets through). The rounding
//! expectation clears the same `ratio(k, l) * ns_value(W, k)` floor.
//! [`verify_gap_bounds`] evaluates every leg on a concrete channel and
//! reports signed residuals; the other verifiers cover the centered
//! inequality, the fractional-extension bound, and the uniform-incidence
//! family where the chain is tight.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Float;

use crate::channel::Channel;
use crate::coding::{self, exact_opt_with_cap, f_value, CodingError, DEFAULT_ENUMERATION_CAP};
use crate::metaconverse::{self, MetaError};
use crate::rounding::{self, RoundingError};
use crate::util::binomial;

/// Default residual tolerance for the verifiers.
pub const BOUND_TOLERANCE: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BoundsError {
    #[error("parameter {name} must be at least 1")]
    ParameterTooSmall { name: &'static str },
    #[error("{name} = {value} is out of range: {why}")]
    OutOfRange {
        name: &'static str,
        value: usize,
        why: &'static str,
    },
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Relaxation(#[from] MetaError),
    #[error(transparent)]
    Rounding(#[from] RoundingError),
}

/// `ratio(k, l) = (k/l) (1 - (1 - 1/k)^l)`, evaluated as
/// `exp(l * ln(1 - 1/k))` so large `k` loses no precision to cancellation
/// (`k = 1` degenerates cleanly to `1/l`). Decreasing in `l`, increasing in
/// `k`, and at least `1 - l/(2k)`; `ratio(k, k) -> 1 - 1/e` from above.
///
/// Panics if either argument is zero.
pub fn ratio(k: u64, l: u64) -> f64 {
    assert!(k >= 1 && l >= 1, "ratio is defined for k, l >= 1");
    let (kf, lf) = (k as f64, l as f64);
    // (1 - 1/k)^l = exp(l ln(1 - 1/k)); ln_1p keeps small-1/k accuracy and
    // exp_m1 keeps the difference from 1 accurate.
    let pow = lf * Float::ln_1p(-1.0 / kf);
    (kf / lf) * -Float::exp_m1(pow)
}

/// The two closed-form lower estimates of [`ratio`]:
/// `(k/l)(1 - e^{-l/k})` and `1 - l/(2k)`.
pub fn ratio_lower_bounds(k: u64, l: u64) -> (f64, f64) {
    assert!(k >= 1 && l >= 1, "bounds are defined for k, l >= 1");
    let (kf, lf) = (k as f64, l as f64);
    let exp_form = (kf / lf) * -Float::exp_m1(-lf / kf);
    (exp_form, 1.0 - lf / (2.0 * kf))
}

/// One leg of the inequality chain: `lhs >= rhs` with
/// `residual = lhs - rhs` and `pass = residual >= -tol`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

fn check(name: &'static str, lhs: f64, rhs: f64, tol: f64) -> BoundCheck {
    let residual = lhs - rhs;
    BoundCheck {
        name,
        lhs,
        rhs,
        residual,
        pass: residual >= -tol,
    }
}

/// Every quantity in the chain for one `(W, k, l)`, with its residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub channel: Option<String>,
    pub k: usize,
    pub l: usize,
    pub s_exact: f64,
    pub s_greedy: f64,
    /// `ns_value(W, k)` — the relaxation being rounded from.
    pub s_ns_k: f64,
    /// `ns_value(W, l)` — the upper bound on `s_exact`.
    pub s_ns_l: f64,
    pub rounding_expectation: f64,
    pub ratio: f64,
    pub tolerance: f64,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Evaluates the full chain on `W` with relaxation size `k` and code size
/// `l` (both in `[1, |X|]`), at residual tolerance `tol`.
pub fn verify_gap_bounds(
    w: &Channel,
    k: usize,
    l: usize,
    tol: f64,
) -> Result<BoundReport, BoundsError> {
    let (s_exact, _) = coding::exact_opt(w, l)?;
    let (s_greedy, _) = coding::greedy(w, l)?;
    let sol_k = metaconverse::ns_value(w, k)?;
    let sol_l = metaconverse::ns_value(w, l)?;
    let rounding_expectation = rounding::exact_expected_value(w, &sol_k, l)?;
    let rt = ratio(k as u64, l as u64);
    let floor = rt * sol_k.value;
    let checks = alloc::vec![
        check("greedy_ge_scaled_relaxation", s_greedy, floor, tol),
        check("exact_ge_scaled_relaxation", s_exact, floor, tol),
        check(
            "rounding_ge_scaled_relaxation",
            rounding_expectation,
            floor,
            tol
        ),
        check("exact_ge_greedy", s_exact, s_greedy, tol),
        check("relaxation_ge_exact", sol_l.value, s_exact, tol),
        check("exact_ge_uniform", s_exact, 1.0 / l as f64, tol),
        check("relaxation_le_one", 1.0, sol_l.value, tol),
    ];
    Ok(BoundReport {
        channel: w.name().map(String::from),
        k,
        l,
        s_exact,
        s_greedy,
        s_ns_k: sol_k.value,
        s_ns_l: sol_l.value,
        rounding_expectation,
        ratio: rt,
        tolerance: tol,
        checks,
    })
}

/// The centered inequality at `l = k`:
/// `S - 1/k >= (1 - (1 - 1/k)^{k-1}) (S_ns - 1/k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredReport {
    pub k: usize,
    pub s_exact: f64,
    pub s_ns: f64,
    /// `1 - (1 - 1/k)^{k-1}`.
    pub factor: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Checks the centered inequality, which sharpens the plain ratio bound by
/// measuring both values against the `1/k` success floor.
pub fn verify_centered(w: &Channel, k: usize) -> Result<CenteredReport, BoundsError> {
    let (s_exact, _) = coding::exact_opt(w, k)?;
    let sol = metaconverse::ns_value(w, k)?;
    let kf = k as f64;
    // k = 1 would evaluate 0 * ln(0); the factor is 1 - 0^0 = 0 there.
    let factor = if k == 1 {
        0.0
    } else {
        -Float::exp_m1((kf - 1.0) * Float::ln_1p(-1.0 / kf))
    };
    let lhs = s_exact - 1.0 / kf;
    let rhs = factor * (sol.value - 1.0 / kf);
    let residual = lhs - rhs;
    Ok(CenteredReport {
        k,
        s_exact,
        s_ns: sol.value,
        factor,
        lhs,
        rhs,
        residual,
        tolerance: BOUND_TOLERANCE,
        pass: residual >= -BOUND_TOLERANCE,
    })
}

/// The fractional extension never beats a set by more than its total mass
/// times the best single improvement:
/// `f_fractional(W, p) <= f(S) + (Σ_x p_x) max_x [f(S ∪ {x}) - f(S)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalReport {
    pub f_set: f64,
    pub f_fractional: f64,
    /// `Σ_x p_x` — plays the role of `k` without needing to be integral.
    pub mass: f64,
    pub max_gain: f64,
    /// `f_set + mass * max_gain - f_fractional`; nonnegative when the bound
    /// holds.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Evaluates the fractional-extension bound for an arbitrary set `s` and
/// marginals `p` (entries in `[0, 1]`).
pub fn verify_fractional_bound(
    w: &Channel,
    s: &[usize],
    p: &[f64],
) -> Result<FractionalReport, BoundsError> {
    let f_set = f_value(w, s)?;
    let f_frac = metaconverse::f_fractional(w, p)?;
    let mass: f64 = p.iter().sum();
    // Best single-element gain over the whole alphabet (elements of `s`
    // contribute 0).
    let mut cur = alloc::vec![0.0f64; w.y_size()];
    for &x in s {
        for (y, c) in cur.iter_mut().enumerate() {
            *c = c.max(w.prob(x, y));
        }
    }
    let mut max_gain = 0.0f64;
    for x in 0..w.x_size() {
        let mut gain = 0.0;
        for (y, &c) in cur.iter().enumerate() {
            let v = w.prob(x, y);
            if v > c {
                gain += v - c;
            }
        }
        max_gain = max_gain.max(gain);
    }
    let residual = f_set + mass * max_gain - f_frac;
    Ok(FractionalReport {
        f_set,
        f_fractional: f_frac,
        mass,
        max_gain,
        residual,
        tolerance: BOUND_TOLERANCE,
        pass: residual >= -BOUND_TOLERANCE,
    })
}

/// Exact value of the uniform-incidence family in closed form:
/// `S(W_{k,t}, l) = (k/l) (1 - Π_{j=0}^{l-1} (1 - t/(n-j)))` on `n = k t`
/// inputs. Needs `l <= n`.
pub fn tightness_closed_form(k: usize, t: usize, l: usize) -> Result<f64, BoundsError> {
    if k < 1 {
        return Err(BoundsError::ParameterTooSmall { name: "k" });
    }
    if t < 1 {
        return Err(BoundsError::ParameterTooSmall { name: "t" });
    }
    if l < 1 {
        return Err(BoundsError::ParameterTooSmall { name: "l" });
    }
    let n = k * t;
    if l > n {
        return Err(BoundsError::OutOfRange {
            name: "l",
            value: l,
            why: "more codewords than inputs",
        });
    }
    let tf = t as f64;
    let mut miss = 1.0;
    for j in 0..l {
        miss *= 1.0 - tf / ((n - j) as f64);
    }
    Ok((k as f64 / l as f64) * (1.0 - miss))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMethod {
    Exact,
    Greedy,
}

impl core::fmt::Display for SweepMethod {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SweepMethod::Exact => f.write_str("exact"),
            SweepMethod::Greedy => f.write_str("greedy"),
        }
    }
}

/// One row of a code-size sweep: the best value found at size `l` (exact
/// when the subset count fits the cap, greedy otherwise) next to the
/// relaxation at the same size.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub l: usize,
    pub s_value: f64,
    pub method: SweepMethod,
    pub s_ns: f64,
}

/// Sweeps `l` over `[l_min, l_max]` (bounded by `|X|` through the
/// relaxation's precondition), falling back to greedy past `exact_cap`
/// enumerated subsets.
pub fn sweep(
    w: &Channel,
    l_min: usize,
    l_max: usize,
    exact_cap: u64,
) -> Result<Vec<SweepRow>, BoundsError> {
    if l_min < 1 {
        return Err(BoundsError::ParameterTooSmall { name: "l_min" });
    }
    if l_max < l_min {
        return Err(BoundsError::OutOfRange {
            name: "l_max",
            value: l_max,
            why: "below l_min",
        });
    }
    let mut rows = Vec::with_capacity(l_max - l_min + 1);
    for l in l_min..=l_max {
        let m = l.min(w.x_size());
        let feasible = binomial(w.x_size() as u64, m as u64) <= exact_cap as u128;
        let (s_value, method) = if feasible {
            (
                exact_opt_with_cap(w, l, exact_cap)?.0,
                SweepMethod::Exact,
            )
        } else {
            (coding::greedy(w, l)?.0, SweepMethod::Greedy)
        };
        let s_ns = metaconverse::ns_value(w, l)?.value;
        rows.push(SweepRow {
            l,
            s_value,
            method,
            s_ns,
        });
    }
    Ok(rows)
}

/// Re-export of the default enumeration cap for sweep callers.
pub const SWEEP_EXACT_CAP: u64 = DEFAULT_ENUMERATION_CAP;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{make_bsc, make_tightness, random_channel, validate};

    #[test]
    fn ratio_small_cases() {
        assert!((ratio(2, 2) - 0.75).abs() < 1e-15);
        assert!((ratio(2, 1) - 1.0).abs() < 1e-12);
        assert!((ratio(1, 4) - 0.25).abs() < 1e-15);
        assert!((ratio(3, 2) - (3.0 / 2.0) * (1.0 - (2.0f64 / 3.0).powi(2))).abs() < 1e-12);
        // Large-k limit at l = k approaches 1 - 1/e from above.
        let r = ratio(1000, 1000);
        assert!((r - (1.0 - (-1.0f64).exp())).abs() < 1e-3);
        assert!(r > 1.0 - (-1.0f64).exp());
    }

    #[test]
    fn ratio_orderings() {
        for k in 1..=20u64 {
            for l in 1..=k {
                let r = ratio(k, l);
                let (exp_form, linear) = ratio_lower_bounds(k, l);
                assert!(r <= 1.0 + 1e-12);
                assert!(r >= exp_form - 1e-12, "k {k} l {l}");
                assert!(exp_form >= linear - 1e-12, "k {k} l {l}");
                if l > 1 {
                    assert!(ratio(k, l - 1) >= r - 1e-12);
                }
            }
        }
    }

    #[test]
    fn gap_bounds_on_small_channels() {
        for seed in 0..10u64 {
            let w = random_channel(5, 4, seed).unwrap();
            for k in 1..=4 {
                for l in 1..=k {
                    let report = verify_gap_bounds(&w, k, l, 1e-7).unwrap();
                    assert!(report.pass(), "seed {seed} k {k} l {l}: {report:?}");
                }
            }
        }
    }

    #[test]
    fn centered_inequality_values() {
        // Identity channel: S = S_ns = 1, so the residual is
        // (1 - 1/2) - (1 - (1/2)^1)(1 - 1/2) = 0.25.
        let id2 = validate(&[alloc::vec![1.0, 0.0], alloc::vec![0.0, 1.0]]).unwrap();
        let r = verify_centered(&id2, 2).unwrap();
        assert!(r.pass);
        assert!((r.residual - 0.25).abs() < 1e-9);

        // Pure-noise BSC: both sides center to exactly 0.
        let r = verify_centered(&make_bsc(0.5).unwrap(), 2).unwrap();
        assert!(r.pass);
        assert!(r.residual.abs() < 1e-9);

        let r = verify_centered(&make_bsc(0.1).unwrap(), 2).unwrap();
        assert!(r.pass);
        assert!((r.residual - 0.2).abs() < 1e-7);

        // k = 1: one message always gets through, so both sides center to 0.
        let r = verify_centered(&make_bsc(0.3).unwrap(), 1).unwrap();
        assert!(r.pass);
        assert!(r.factor.abs() < 1e-15);
        assert!(r.residual.abs() < 1e-9);
    }

    #[test]
    fn closed_form_matches_exact_search() {
        let w = make_tightness(2, 2).unwrap();
        for l in 1..=4usize {
            let cf = tightness_closed_form(2, 2, l).unwrap();
            let (ex, _) = coding::exact_opt(&w, l).unwrap();
            assert!((cf - ex).abs() < 1e-12, "l {l}: {cf} vs {ex}");
        }
        assert!((tightness_closed_form(2, 2, 2).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert!(matches!(
            tightness_closed_form(2, 2, 5),
            Err(BoundsError::OutOfRange { .. })
        ));
    }

    #[test]
    fn fractional_bound_holds() {
        let w = random_channel(5, 6, 42).unwrap();
        let report = verify_fractional_bound(&w, &[0, 2], &[0.3, 0.7, 0.1, 0.9, 0.5]).unwrap();
        assert!(report.pass, "{report:?}");
        // Indicator marginals of the same set: f_frac = f_set, bound slack
        // is exactly mass * max_gain >= 0.
        let report = verify_fractional_bound(&w, &[1, 3], &[0.0, 1.0, 0.0, 1.0, 0.0]).unwrap();
        assert!(report.pass);
        assert!((report.f_fractional - report.f_set).abs() < 1e-12);
    }

    #[test]
    fn sweep_tightness_family() {
        let w = make_tightness(2, 2).unwrap();
        let rows = sweep(&w, 1, 4, SWEEP_EXACT_CAP).unwrap();
        assert_eq!(rows.len(), 4);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.l, i + 1);
            assert_eq!(row.method, SweepMethod::Exact);
            let cf = tightness_closed_form(2, 2, row.l).unwrap();
            assert!((row.s_value - cf).abs() < 1e-9);
            assert!(row.s_ns >= row.s_value - 1e-7);
        }
        // The relaxation is exactly 1 at l = k = 2.
        assert!((rows[1].s_ns - 1.0).abs() < 1e-7);

        // A tiny cap forces greedy fallback (C(4,3) = 4 subsets > 1).
        let rows = sweep(&w, 3, 3, 1).unwrap();
        assert_eq!(rows[0].method, SweepMethod::Greedy);
        let cf = tightness_closed_form(2, 2, 3).unwrap();
        // Greedy happens to be exact on this symmetric family.
        assert!((rows[0].s_value - cf).abs() < 1e-9);
    }
}
