//! One-shot channel coding over finite alphabets.
//!
//! Given a discrete channel `W(y|x)` and a message count `k`, the maximum
//! success probability over all `k`-message codes is
//!
//! ```text
//! S(W, k) = (1/k) · max_{|S| <= k} f(S),    f(S) = Σ_y max_{x in S} W(y|x)
//! ```
//!
//! `f` is monotone submodular, so the exact optimum is reachable by subset
//! enumeration ([`coding::exact_opt`]) and approximable by greedy selection
//! ([`coding::greedy`]) with the usual `1 - 1/e` style guarantee — measured
//! here against the *non-signaling* relaxation [`metaconverse::ns_value`],
//! a linear program whose optimum upper-bounds `S(W, k)` and doubles as a
//! hypothesis-testing converse ([`hypothesis`]). Randomized rounding of the
//! LP optimum ([`rounding`]) turns the relaxation back into concrete codes,
//! and [`bounds`] packages the inequality chain with certified residuals.
//!
//! The crate is `no_std` (with `alloc`); all floating-point work is `f64`.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod bounds;
pub mod channel;
pub mod coding;
pub mod hypothesis;
pub mod metaconverse;
pub mod rounding;
pub mod simplex;

mod util;

pub use bounds::{BoundCheck, BoundReport, BoundsError, CenteredReport, FractionalReport};
pub use channel::{Channel, ChannelError, SetSystem};
pub use coding::{Code, CodingError, GreedyTrace};
pub use hypothesis::{ChannelTest, HypothesisError, MinimaxReport};
pub use metaconverse::{LpSolution, MetaError, NsBox};
pub use rounding::{RoundingError, RoundingReport};
pub use simplex::{
    check_feasible, solve, Constraint, LinearProgram, LpResult, Relation, SimplexError, Status,
};
