//! Dense two-phase simplex for small linear programs.
//!
//! Maximizes `c · x` subject to row constraints (`<=`, `=`, `>=`) and box
//! bounds `lo <= x <= hi` (finite `lo`, possibly infinite `hi`). Finite upper
//! bounds are expanded into explicit `<=` rows, lower bounds are shifted
//! away, and the resulting standard form is solved with the textbook tableau
//! method: phase 1 drives artificial variables out, phase 2 optimizes.
//!
//! Pivoting is deterministic. The entering column is the most negative
//! reduced cost (lowest index on ties); the leaving row is the minimum
//! ratio (lowest row index on ties). After [`STALL_LIMIT_FACTOR`]`*(m+n)`
//! consecutive non-improving pivots the solver switches to Bland's rule
//! (lowest-index entering column, lowest basic-variable leaving row), which
//! prevents cycling on degenerate programs. Identical inputs pivot
//! identically, so results replay bit-for-bit.

use alloc::vec;
use alloc::vec::Vec;

/// Entries this close to zero are treated as zero during pivoting.
pub const PIVOT_TOLERANCE: f64 = 1e-9;

/// Maximum constraint violation tolerated in a claimed optimum.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-7;

/// Tolerance used by [`check_feasible`] when certifying a point.
pub const POINT_TOLERANCE: f64 = 1e-9;

/// Objective improvements below this count as degenerate (non-improving).
const DEGENERATE_IMPROVEMENT: f64 = 1e-12;

/// Bland's rule engages after `STALL_LIMIT_FACTOR * (m + n)` stalled pivots.
const STALL_LIMIT_FACTOR: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<f64>, relation: Relation, rhs: f64) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

/// A linear program in maximization form.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub constraints: Vec<Constraint>,
    /// Per-variable `(lo, hi)`; `lo` finite, `hi` may be `f64::INFINITY`.
    pub bounds: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output. `value` and `primal` are meaningful only when `status` is
/// [`Status::Optimal`]; an infeasible maximum reports `-inf` (supremum over
/// an empty set) and an unbounded one `+inf`, both with an empty primal.
#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: Status,
    pub value: f64,
    pub primal: Vec<f64>,
    pub iterations: usize,
}

/// Which constraint a point violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstraintRef {
    Row(usize),
    Lower(usize),
    Upper(usize),
}

impl core::fmt::Display for ConstraintRef {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ConstraintRef::Row(i) => write!(f, "row {i}"),
            ConstraintRef::Lower(j) => write!(f, "lower bound of variable {j}"),
            ConstraintRef::Upper(j) => write!(f, "upper bound of variable {j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimplexError {
    #[error("constraint {index} has {got} coefficients, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("variable {var} has invalid bounds [{lo}, {hi}]")]
    InvalidBounds { var: f64, lo: f64, hi: f64 },
    #[error("{what} {index} is not finite")]
    NonFiniteData { what: &'static str, index: usize },
    #[error("point has {got} coordinates, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("point violates {constraint} by {violation}")]
    InfeasiblePoint {
        constraint: ConstraintRef,
        violation: f64,
    },
    #[error("claimed optimum violates a constraint by {residual}")]
    NumericalFailure { residual: f64 },
    #[error("pivot budget exhausted after {iterations} iterations")]
    IterationLimit { iterations: usize },
}

impl LinearProgram {
    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Shape and finiteness checks shared by [`solve`] and [`check_feasible`].
    pub fn validate(&self) -> Result<(), SimplexError> {
        let n = self.objective.len();
        if n == 0 {
            return Err(SimplexError::DimensionMismatch {
                index: 0,
                expected: 1,
                got: 0,
            });
        }
        for (index, c) in self.objective.iter().enumerate() {
            if !c.is_finite() {
                return Err(SimplexError::NonFiniteData {
                    what: "objective coefficient",
                    index,
                });
            }
        }
        for (index, con) in self.constraints.iter().enumerate() {
            if con.coeffs.len() != n {
                return Err(SimplexError::DimensionMismatch {
                    index,
                    expected: n,
                    got: con.coeffs.len(),
                });
            }
            if !con.rhs.is_finite() || con.coeffs.iter().any(|a| !a.is_finite()) {
                return Err(SimplexError::NonFiniteData {
                    what: "constraint",
                    index,
                });
            }
        }
        if self.bounds.len() != n {
            return Err(SimplexError::DimensionMismatch {
                index: 0,
                expected: n,
                got: self.bounds.len(),
            });
        }
        for (j, &(lo, hi)) in self.bounds.iter().enumerate() {
            // `hi` may be +inf, but neither bound may be NaN.
            if !lo.is_finite() || hi.is_nan() || lo > hi {
                return Err(SimplexError::InvalidBounds {
                    var: j as f64,
                    lo,
                    hi,
                });
            }
        }
        Ok(())
    }
}

struct Tableau {
    /// `m` rows of width `ncols + 1`; the last column is the rhs.
    rows: Vec<Vec<f64>>,
    /// Reduced-cost row, same width; last entry is the current objective.
    obj: Vec<f64>,
    basis: Vec<usize>,
    ncols: usize,
    iterations: usize,
    bland: bool,
    stall: usize,
    stall_limit: usize,
    budget: usize,
}

enum LoopExit {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    /// Installs a fresh objective `c` (maximize) and canonicalizes it against
    /// the current basis.
    fn set_objective(&mut self, c: &[f64]) {
        let mut obj = vec![0.0; self.ncols + 1];
        for (j, &cj) in c.iter().enumerate() {
            obj[j] = -cj;
        }
        for (i, &b) in self.basis.iter().enumerate() {
            let factor = obj[b];
            if factor != 0.0 {
                for (o, &r) in obj.iter_mut().zip(&self.rows[i]) {
                    *o -= factor * r;
                }
                obj[b] = 0.0;
            }
        }
        self.obj = obj;
    }

    fn pivot(&mut self, r: usize, jcol: usize) {
        let piv = self.rows[r][jcol];
        for j in 0..=self.ncols {
            self.rows[r][j] /= piv;
        }
        self.rows[r][jcol] = 1.0;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][jcol];
            if f != 0.0 {
                for j in 0..=self.ncols {
                    self.rows[i][j] -= f * self.rows[r][j];
                }
                self.rows[i][jcol] = 0.0;
            }
        }
        let f = self.obj[jcol];
        if f != 0.0 {
            for j in 0..=self.ncols {
                self.obj[j] -= f * self.rows[r][j];
            }
            self.obj[jcol] = 0.0;
        }
        self.basis[r] = jcol;
        self.iterations += 1;
    }

    fn entering(&self) -> Option<usize> {
        if self.bland {
            (0..self.ncols).find(|&j| self.obj[j] < -PIVOT_TOLERANCE)
        } else {
            let mut best: Option<(f64, usize)> = None;
            for j in 0..self.ncols {
                let rc = self.obj[j];
                if rc < -PIVOT_TOLERANCE && best.is_none_or(|(b, _)| rc < b) {
                    best = Some((rc, j));
                }
            }
            best.map(|(_, j)| j)
        }
    }

    fn leaving(&self, jcol: usize) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for i in 0..self.rows.len() {
            let a = self.rows[i][jcol];
            if a > PIVOT_TOLERANCE {
                let ratio = self.rhs(i) / a;
                let better = match best {
                    None => true,
                    Some((br, bi)) => {
                        ratio < br
                            || (ratio == br
                                && if self.bland {
                                    self.basis[i] < self.basis[bi]
                                } else {
                                    false // first (lowest) row wins ties
                                })
                    }
                };
                if better {
                    best = Some((ratio, i));
                }
            }
        }
        best.map(|(_, i)| i)
    }

    fn run(&mut self) -> Result<LoopExit, SimplexError> {
        loop {
            let Some(jcol) = self.entering() else {
                return Ok(LoopExit::Optimal);
            };
            let Some(r) = self.leaving(jcol) else {
                return Ok(LoopExit::Unbounded);
            };
            let before = self.obj[self.ncols];
            self.pivot(r, jcol);
            if self.iterations > self.budget {
                return Err(SimplexError::IterationLimit {
                    iterations: self.iterations,
                });
            }
            if self.obj[self.ncols] - before <= DEGENERATE_IMPROVEMENT {
                self.stall += 1;
                if self.stall > self.stall_limit {
                    self.bland = true;
                }
            } else {
                self.stall = 0;
            }
        }
    }

    /// Pivots basic artificial variables out (or drops the redundant rows
    /// they prove), then truncates the artificial columns away.
    fn remove_artificials(&mut self, art_start: usize) {
        let mut keep = vec![true; self.rows.len()];
        for (i, flag) in keep.iter_mut().enumerate() {
            if self.basis[i] < art_start {
                continue;
            }
            let col = (0..art_start).find(|&j| self.rows[i][j].abs() > PIVOT_TOLERANCE);
            match col {
                Some(j) => self.pivot(i, j),
                // 0 = 0 row: the original constraint was redundant.
                None => *flag = false,
            }
        }
        let mut idx = 0;
        self.rows.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
        idx = 0;
        self.basis.retain(|_| {
            let k = keep[idx];
            idx += 1;
            k
        });
        let old_rhs = self.ncols;
        for row in &mut self.rows {
            row[art_start] = row[old_rhs];
            row.truncate(art_start + 1);
        }
        self.ncols = art_start;
    }
}

/// Solves the program. See the module docs for the pivoting discipline.
///
/// Errors indicate malformed input or a numerical breakdown (a claimed
/// optimum that fails certification, or an exhausted pivot budget);
/// infeasibility and unboundedness are reported through [`LpResult::status`],
/// not as errors.
pub fn solve(lp: &LinearProgram) -> Result<LpResult, SimplexError> {
    lp.validate()?;
    let n0 = lp.num_vars();
    let lo: Vec<f64> = lp.bounds.iter().map(|b| b.0).collect();
    let upper: Vec<f64> = lp.bounds.iter().map(|b| b.1 - b.0).collect();

    // Shift x' = x - lo and expand finite upper bounds into rows, after the
    // user rows, in variable order.
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::new();
    for con in &lp.constraints {
        let shift: f64 = con.coeffs.iter().zip(&lo).map(|(a, l)| a * l).sum();
        rows.push((con.coeffs.clone(), con.relation, con.rhs - shift));
    }
    for (j, &u) in upper.iter().enumerate() {
        if u.is_finite() {
            let mut coeffs = vec![0.0; n0];
            coeffs[j] = 1.0;
            rows.push((coeffs, Relation::Le, u));
        }
    }

    // Standard form: nonnegative rhs, slack/surplus columns, artificials.
    for (coeffs, relation, rhs) in &mut rows {
        if *rhs < 0.0 {
            for a in coeffs.iter_mut() {
                *a = -*a;
            }
            *rhs = -*rhs;
            *relation = match *relation {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }
    let m = rows.len();
    let ns = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let na = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let art_start = n0 + ns;
    let ncols = art_start + na;

    let mut trows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_slack = n0;
    let mut next_art = art_start;
    for (coeffs, relation, rhs) in &rows {
        let mut row = vec![0.0; ncols + 1];
        row[..n0].copy_from_slice(coeffs);
        row[ncols] = *rhs;
        match relation {
            Relation::Le => {
                row[next_slack] = 1.0;
                basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                row[next_slack] = -1.0;
                next_slack += 1;
                row[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
            Relation::Eq => {
                row[next_art] = 1.0;
                basis.push(next_art);
                next_art += 1;
            }
        }
        trows.push(row);
    }

    let mut t = Tableau {
        rows: trows,
        obj: vec![0.0; ncols + 1],
        basis,
        ncols,
        iterations: 0,
        bland: false,
        stall: 0,
        stall_limit: STALL_LIMIT_FACTOR * (m + ncols),
        budget: 10_000 + 200 * (m + ncols),
    };

    if na > 0 {
        let mut c1 = vec![0.0; ncols];
        for c in c1.iter_mut().take(ncols).skip(art_start) {
            *c = -1.0;
        }
        t.set_objective(&c1);
        match t.run()? {
            // Phase 1 maximizes -(sum of artificials) <= 0: never unbounded.
            LoopExit::Unbounded => {
                return Err(SimplexError::NumericalFailure {
                    residual: f64::INFINITY,
                })
            }
            LoopExit::Optimal => {}
        }
        if t.obj[t.ncols] < -FEASIBILITY_TOLERANCE {
            return Ok(LpResult {
                status: Status::Infeasible,
                value: f64::NEG_INFINITY,
                primal: Vec::new(),
                iterations: t.iterations,
            });
        }
        t.remove_artificials(art_start);
    }

    let mut c2 = vec![0.0; t.ncols];
    c2[..n0].copy_from_slice(&lp.objective);
    t.set_objective(&c2);
    match t.run()? {
        LoopExit::Unbounded => {
            return Ok(LpResult {
                status: Status::Unbounded,
                value: f64::INFINITY,
                primal: Vec::new(),
                iterations: t.iterations,
            });
        }
        LoopExit::Optimal => {}
    }

    // Extract the primal in the original coordinates.
    let mut x = lo;
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n0 {
            x[b] += t.rhs(i);
        }
    }
    // Snap roundoff back onto the box, then certify against the original
    // program before reporting anything.
    let mut worst: f64 = 0.0;
    for (j, xj) in x.iter_mut().enumerate() {
        let (blo, bhi) = lp.bounds[j];
        if *xj < blo {
            worst = worst.max(blo - *xj);
            *xj = blo;
        } else if *xj > bhi {
            worst = worst.max(*xj - bhi);
            *xj = bhi;
        }
    }
    for con in &lp.constraints {
        let s: f64 = con.coeffs.iter().zip(&x).map(|(a, v)| a * v).sum();
        let violation = match con.relation {
            Relation::Le => s - con.rhs,
            Relation::Ge => con.rhs - s,
            Relation::Eq => (s - con.rhs).abs(),
        };
        worst = worst.max(violation);
    }
    if worst > FEASIBILITY_TOLERANCE {
        return Err(SimplexError::NumericalFailure { residual: worst });
    }
    let value: f64 = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
    Ok(LpResult {
        status: Status::Optimal,
        value,
        primal: x,
        iterations: t.iterations,
    })
}

/// Certifies `point` against every constraint and bound at
/// [`POINT_TOLERANCE`] and returns its objective value, or reports the first
/// violated constraint (rows in order, then lower/upper bounds per variable).
pub fn check_feasible(lp: &LinearProgram, point: &[f64]) -> Result<f64, SimplexError> {
    lp.validate()?;
    let n = lp.num_vars();
    if point.len() != n {
        return Err(SimplexError::PointLength {
            expected: n,
            got: point.len(),
        });
    }
    for (i, con) in lp.constraints.iter().enumerate() {
        let s: f64 = con.coeffs.iter().zip(point).map(|(a, v)| a * v).sum();
        let violation = match con.relation {
            Relation::Le => s - con.rhs,
            Relation::Ge => con.rhs - s,
            Relation::Eq => (s - con.rhs).abs(),
        };
        if violation > POINT_TOLERANCE {
            return Err(SimplexError::InfeasiblePoint {
                constraint: ConstraintRef::Row(i),
                violation,
            });
        }
    }
    for (j, (&(lo, hi), &v)) in lp.bounds.iter().zip(point).enumerate() {
        if lo - v > POINT_TOLERANCE {
            return Err(SimplexError::InfeasiblePoint {
                constraint: ConstraintRef::Lower(j),
                violation: lo - v,
            });
        }
        if v - hi > POINT_TOLERANCE {
            return Err(SimplexError::InfeasiblePoint {
                constraint: ConstraintRef::Upper(j),
                violation: v - hi,
            });
        }
    }
    Ok(lp.objective.iter().zip(point).map(|(c, v)| c * v).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(
        objective: Vec<f64>,
        constraints: Vec<(Vec<f64>, Relation, f64)>,
        bounds: Vec<(f64, f64)>,
    ) -> LinearProgram {
        LinearProgram {
            objective,
            constraints: constraints
                .into_iter()
                .map(|(c, r, b)| Constraint::new(c, r, b))
                .collect(),
            bounds,
        }
    }

    #[test]
    fn box_maximum_via_bounds() {
        let p = lp(vec![1.0, 2.0], vec![], vec![(0.0, 1.0), (0.0, 1.0)]);
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.value - 3.0).abs() < 1e-12);
        assert_eq!(r.primal, vec![1.0, 1.0]);
    }

    #[test]
    fn simplex_with_rows() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
        let p = lp(
            vec![1.0, 1.0],
            vec![
                (vec![1.0, 2.0], Relation::Le, 4.0),
                (vec![3.0, 1.0], Relation::Le, 6.0),
            ],
            vec![(0.0, f64::INFINITY), (0.0, f64::INFINITY)],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.value - 2.8).abs() < 1e-9);
        assert!((r.primal[0] - 1.6).abs() < 1e-9);
        assert!((r.primal[1] - 1.2).abs() < 1e-9);
    }

    #[test]
    fn equality_and_shifted_bounds() {
        // max x - y s.t. x + y = 3, x in [0.5, 2], y in [0.5, inf).
        let p = lp(
            vec![1.0, -1.0],
            vec![(vec![1.0, 1.0], Relation::Eq, 3.0)],
            vec![(0.5, 2.0), (0.5, f64::INFINITY)],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.value - 1.0).abs() < 1e-9);
        assert!((r.primal[0] - 2.0).abs() < 1e-9);
        assert!((r.primal[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_program() {
        let p = lp(
            vec![1.0],
            vec![(vec![1.0], Relation::Le, -1.0)],
            vec![(0.0, f64::INFINITY)],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Infeasible);
        assert_eq!(r.value, f64::NEG_INFINITY);
        assert!(r.primal.is_empty());
    }

    #[test]
    fn unbounded_program() {
        let p = lp(vec![1.0], vec![], vec![(0.0, f64::INFINITY)]);
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Unbounded);
        assert_eq!(r.value, f64::INFINITY);
    }

    #[test]
    fn ge_rows_need_phase_one() {
        // min x + y (as max of negation) with x + y >= 2, both in [0, 5].
        let p = lp(
            vec![-1.0, -1.0],
            vec![(vec![1.0, 1.0], Relation::Ge, 2.0)],
            vec![(0.0, 5.0), (0.0, 5.0)],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.value + 2.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling program; Dantzig pivoting alone loops
        // forever on it, the stall-triggered switch to Bland's rule must
        // terminate at value 1/20.
        let p = lp(
            vec![0.75, -150.0, 0.02, -6.0],
            vec![
                (vec![0.25, -60.0, -0.04, 9.0], Relation::Le, 0.0),
                (vec![0.5, -90.0, -0.02, 3.0], Relation::Le, 0.0),
                (vec![0.0, 0.0, 1.0, 0.0], Relation::Le, 1.0),
            ],
            vec![(0.0, f64::INFINITY); 4],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.value - 0.05).abs() < 1e-9, "value = {}", r.value);
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let p = lp(
            vec![1.0, 1.0],
            vec![
                (vec![1.0, 1.0], Relation::Eq, 1.0),
                (vec![2.0, 2.0], Relation::Eq, 2.0),
            ],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        let r = solve(&p).unwrap();
        assert_eq!(r.status, Status::Optimal);
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn check_feasible_accepts_and_rejects() {
        let p = lp(
            vec![2.0, 1.0],
            vec![(vec![1.0, 1.0], Relation::Le, 1.0)],
            vec![(0.0, 1.0), (0.0, 1.0)],
        );
        assert_eq!(check_feasible(&p, &[0.5, 0.5]).unwrap(), 1.5);
        match check_feasible(&p, &[0.9, 0.9]) {
            Err(SimplexError::InfeasiblePoint {
                constraint: ConstraintRef::Row(0),
                violation,
            }) => assert!((violation - 0.8).abs() < 1e-12),
            other => panic!("expected row violation, got {other:?}"),
        }
        match check_feasible(&p, &[-0.1, 0.0]) {
            Err(SimplexError::InfeasiblePoint {
                constraint: ConstraintRef::Lower(0),
                ..
            }) => {}
            other => panic!("expected bound violation, got {other:?}"),
        }
        assert!(matches!(
            check_feasible(&p, &[0.5]),
            Err(SimplexError::PointLength { .. })
        ));
    }

    #[test]
    fn deterministic_replay() {
        let p = lp(
            vec![1.0, 2.0, -0.5],
            vec![
                (vec![1.0, 1.0, 1.0], Relation::Le, 2.0),
                (vec![1.0, -1.0, 0.0], Relation::Ge, -1.0),
                (vec![0.0, 1.0, 2.0], Relation::Eq, 1.5),
            ],
            vec![(0.0, 2.0), (0.0, 2.0), (0.0, 2.0)],
        );
        let a = solve(&p).unwrap();
        let b = solve(&p).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.iterations, b.iterations);
    }

    #[test]
    fn validation_failures() {
        let p = lp(vec![], vec![], vec![]);
        assert!(solve(&p).is_err());
        let p = lp(vec![1.0], vec![(vec![1.0, 2.0], Relation::Le, 1.0)], vec![(0.0, 1.0)]);
        assert!(matches!(
            solve(&p),
            Err(SimplexError::DimensionMismatch { index: 0, .. })
        ));
        let p = lp(vec![1.0], vec![], vec![(f64::NEG_INFINITY, 1.0)]);
        assert!(matches!(solve(&p), Err(SimplexError::InvalidBounds { .. })));
        let p = lp(vec![1.0], vec![], vec![(2.0, 1.0)]);
        assert!(matches!(solve(&p), Err(SimplexError::InvalidBounds { .. })));
    }
}
