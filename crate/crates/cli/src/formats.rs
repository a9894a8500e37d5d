//! On-disk JSON schemas and their conversions to and from the library types.
//!
//! Every file format is a plain serde struct; field order in the structs is
//! the field order in the emitted JSON, which keeps output byte-stable.

use serde::{Deserialize, Serialize};

use occ_core::bounds::{BoundReport, CenteredReport, FractionalReport};
use occ_core::channel::{self, Channel, SetSystem};
use occ_core::coding::Code;
use occ_core::hypothesis::MinimaxReport;
use occ_core::metaconverse::{LpSolution, MetaError, NsBox};
use occ_core::rounding::RoundingReport;

use crate::Failure;

/// Channel file: `{"name"?, "x", "y", "rows"}` with `rows[x][y]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChannelFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub x: usize,
    pub y: usize,
    pub rows: Vec<Vec<f64>>,
}

impl ChannelFile {
    pub fn from_channel(w: &Channel) -> ChannelFile {
        ChannelFile {
            name: w.name().map(String::from),
            x: w.x_size(),
            y: w.y_size(),
            rows: w.rows(),
        }
    }

    /// Re-validates on every load; the declared sizes must match the matrix.
    pub fn into_channel(self) -> Result<Channel, Failure> {
        if self.rows.len() != self.x || self.rows.first().map_or(0, Vec::len) != self.y {
            return Err(Failure::Input(format!(
                "channel file declares {}x{} but carries a {}x{} matrix",
                self.x,
                self.y,
                self.rows.len(),
                self.rows.first().map_or(0, Vec::len),
            )));
        }
        let w = channel::validate(&self.rows).map_err(|e| Failure::Input(e.to_string()))?;
        Ok(match self.name {
            Some(name) => w.with_name(name),
            None => w,
        })
    }
}

/// Set-system file: `{"ground", "d", "sets"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetSystemFile {
    pub ground: usize,
    pub d: usize,
    pub sets: Vec<Vec<usize>>,
}

impl SetSystemFile {
    pub fn into_system(self) -> Result<SetSystem, Failure> {
        SetSystem::new(self.ground, self.d, self.sets).map_err(|e| Failure::Input(e.to_string()))
    }
}

/// Code file: `{"k", "codewords", "decoder"}` with one decoder entry per
/// output symbol.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeFile {
    pub k: usize,
    pub codewords: Vec<usize>,
    pub decoder: Vec<usize>,
}

impl CodeFile {
    pub fn from_code(code: &Code) -> CodeFile {
        CodeFile {
            k: code.k(),
            codewords: code.codewords().to_vec(),
            decoder: code.decoder().to_vec(),
        }
    }
}

/// Relaxation-solution file: `{"k", "value", "p", "r"}` with `r[x][y]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LpSolutionFile {
    pub k: usize,
    pub value: f64,
    pub p: Vec<f64>,
    pub r: Vec<Vec<f64>>,
}

impl LpSolutionFile {
    pub fn from_solution(sol: &LpSolution) -> LpSolutionFile {
        let r = (0..sol.x_size)
            .map(|x| (0..sol.y_size).map(|y| sol.r_at(x, y)).collect())
            .collect();
        LpSolutionFile {
            k: sol.k,
            value: sol.value,
            p: sol.p.clone(),
            r,
        }
    }
}

/// Distribution file: `{"probs"}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistributionFile {
    pub probs: Vec<f64>,
}

/// A non-signaling box dumped as its full 4-index table
/// `probs[x][j][i][y]` plus both marginals.
#[derive(Debug, Clone, Serialize)]
pub struct BoxFile {
    pub k: usize,
    pub x: usize,
    pub y: usize,
    pub probs: Vec<Vec<Vec<Vec<f64>>>>,
    pub marginal_a: Vec<Vec<f64>>,
    pub marginal_b: Vec<Vec<f64>>,
}

impl BoxFile {
    pub fn from_box(bx: &NsBox) -> BoxFile {
        let probs = (0..bx.x_size)
            .map(|x| {
                (0..bx.k)
                    .map(|j| {
                        (0..bx.k)
                            .map(|i| (0..bx.y_size).map(|y| bx.prob(x, j, i, y)).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let marginal_a = (0..bx.k)
            .map(|i| (0..bx.x_size).map(|x| bx.marginal_a[i * bx.x_size + x]).collect())
            .collect();
        let marginal_b = (0..bx.y_size)
            .map(|y| (0..bx.k).map(|j| bx.marginal_b[y * bx.k + j]).collect())
            .collect();
        BoxFile {
            k: bx.k,
            x: bx.x_size,
            y: bx.y_size,
            probs,
            marginal_a,
            marginal_b,
        }
    }
}

/// One leg of an inequality report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOut {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub pass: bool,
}

/// The full inequality-chain report.
#[derive(Debug, Clone, Serialize)]
pub struct GapReportOut {
    pub check: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel: Option<String>,
    pub k: usize,
    pub l: usize,
    pub s_exact: f64,
    pub s_greedy: f64,
    pub s_ns_k: f64,
    pub s_ns_l: f64,
    pub rounding_expectation: f64,
    pub ratio: f64,
    pub tolerance: f64,
    pub checks: Vec<CheckOut>,
    pub pass: bool,
}

impl GapReportOut {
    pub fn from_report(r: &BoundReport) -> GapReportOut {
        GapReportOut {
            check: "gap",
            channel: r.channel.clone(),
            k: r.k,
            l: r.l,
            s_exact: r.s_exact,
            s_greedy: r.s_greedy,
            s_ns_k: r.s_ns_k,
            s_ns_l: r.s_ns_l,
            rounding_expectation: r.rounding_expectation,
            ratio: r.ratio,
            tolerance: r.tolerance,
            pass: r.pass(),
            checks: r
                .checks
                .iter()
                .map(|c| CheckOut {
                    name: c.name,
                    lhs: c.lhs,
                    rhs: c.rhs,
                    residual: c.residual,
                    pass: c.pass,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CenteredReportOut {
    pub check: &'static str,
    pub k: usize,
    pub s_exact: f64,
    pub s_ns: f64,
    pub factor: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CenteredReportOut {
    pub fn from_report(r: &CenteredReport) -> CenteredReportOut {
        CenteredReportOut {
            check: "centered",
            k: r.k,
            s_exact: r.s_exact,
            s_ns: r.s_ns,
            factor: r.factor,
            lhs: r.lhs,
            rhs: r.rhs,
            residual: r.residual,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

/// Batch summary of fractional-extension trials.
#[derive(Debug, Clone, Serialize)]
pub struct FractionalBatchOut {
    pub check: &'static str,
    pub trials: usize,
    pub seed: u64,
    pub min_residual: f64,
    pub max_mass: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl FractionalBatchOut {
    pub fn new(trials: usize, seed: u64, reports: &[FractionalReport]) -> FractionalBatchOut {
        FractionalBatchOut {
            check: "fractional",
            trials,
            seed,
            min_residual: reports.iter().map(|r| r.residual).fold(f64::INFINITY, f64::min),
            max_mass: reports.iter().map(|r| r.mass).fold(0.0, f64::max),
            tolerance: reports.first().map_or(0.0, |r| r.tolerance),
            pass: reports.iter().all(|r| r.pass),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimaxReportOut {
    pub check: &'static str,
    pub k: usize,
    pub ns_value: f64,
    pub target: f64,
    pub constructed_value: f64,
    pub constructed_residual: f64,
    pub random_trials: usize,
    pub random_min_value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl MinimaxReportOut {
    pub fn from_report(r: &MinimaxReport) -> MinimaxReportOut {
        MinimaxReportOut {
            check: "minimax",
            k: r.k,
            ns_value: r.ns_value,
            target: r.target,
            constructed_value: r.constructed_value,
            constructed_residual: r.constructed_residual,
            random_trials: r.random_trials,
            random_min_value: r.random_min_value,
            tolerance: r.tolerance,
            pass: r.pass,
        }
    }
}

/// Box conversion round-trip report.
#[derive(Debug, Clone, Serialize)]
pub struct NsBoxReportOut {
    pub check: &'static str,
    pub k: usize,
    pub lp_value: f64,
    pub box_value: f64,
    pub round_trip_value: f64,
    pub max_value_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct RoundingReportOut {
    pub method: &'static str,
    pub k: usize,
    pub l: usize,
    pub ns_value: f64,
    pub exact_expectation: f64,
    pub mc_mean: f64,
    pub mc_stddev: f64,
    pub mc_trials: usize,
    pub bound: f64,
    pub seed: u64,
    pub sample: CodeFile,
    pub sample_value: f64,
}

impl RoundingReportOut {
    pub fn new(
        report: &RoundingReport,
        ns_value: f64,
        k: usize,
        sample: &Code,
        sample_value: f64,
    ) -> RoundingReportOut {
        RoundingReportOut {
            method: "mc-rounding",
            k,
            l: report.l,
            ns_value,
            exact_expectation: report.exact_expectation,
            mc_mean: report.mc_mean,
            mc_stddev: report.mc_stddev,
            mc_trials: report.mc_trials,
            bound: report.bound,
            seed: report.seed,
            sample: CodeFile::from_code(sample),
            sample_value,
        }
    }
}

/// Maps a relaxation error to the CLI failure taxonomy: solver breakdowns
/// are numerical failures, everything else is bad input.
pub fn meta_failure(e: MetaError) -> Failure {
    match e {
        MetaError::Solver(inner) => Failure::Numerical(inner.to_string()),
        MetaError::UnexpectedStatus { .. }
        | MetaError::InvalidSolution { .. }
        | MetaError::BoxViolation { .. } => Failure::Numerical(e.to_string()),
        _ => Failure::Input(e.to_string()),
    }
}
