//! Exact linear programming over [`Rational`].
//!
//! Problems are in standard form: maximize `c·x` subject to `A·x = b`, `x ≥ 0`.
//! Variables forced to zero by homogeneous single-signed rows are removed
//! first; the rest is solved by a two-phase dense tableau simplex using
//! Bland's rule, so it always terminates and is deterministic. Infeasibility is reported with a
//! Farkas certificate `y` such that `yᵀA ≤ 0` and `yᵀb > 0`.

use thiserror::Error;

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("constraint row {row} has {found} columns, expected {expected}")]
    RowWidth {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("right-hand side has {found} entries for {expected} constraint rows")]
    RhsLength { expected: usize, found: usize },
    #[error("variable index {index} out of range ({num_vars} variables)")]
    VariableIndex { index: usize, num_vars: usize },
}

/// `maximize objective·x  s.t.  constraints·x = rhs, x ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    constraints: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<Rational>,
        constraints: Vec<Vec<Rational>>,
        rhs: Vec<Rational>,
    ) -> Result<Self, LpError> {
        check_dims(objective.len(), &constraints, &rhs)?;
        Ok(LinearProgram {
            objective,
            constraints,
            rhs,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<Rational>] {
        &self.constraints
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }
}

fn check_dims(width: usize, a: &[Vec<Rational>], b: &[Rational]) -> Result<(), LpError> {
    if let Some((row, r)) = a.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(LpError::RowWidth {
            row,
            expected: width,
            found: r.len(),
        });
    }
    if b.len() != a.len() {
        return Err(LpError::RhsLength {
            expected: a.len(),
            found: b.len(),
        });
    }
    Ok(())
}

/// Incremental, sparse-entry construction of a [`LinearProgram`].
#[derive(Debug, Clone, Default)]
pub struct LpBuilder {
    objective: Vec<Rational>,
    rows: Vec<(Vec<(usize, Rational)>, Rational)>,
}

impl LpBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a nonnegative variable with the given objective coefficient and
    /// returns its index.
    pub fn add_var(&mut self, objective: Rational) -> usize {
        self.objective.push(objective);
        self.objective.len() - 1
    }

    pub fn add_vars(&mut self, count: usize) -> std::ops::Range<usize> {
        let start = self.objective.len();
        self.objective
            .extend(std::iter::repeat_with(Rational::zero).take(count));
        start..self.objective.len()
    }

    pub fn set_objective(&mut self, var: usize, coeff: Rational) {
        self.objective[var] = coeff;
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Adds `Σ coeff·x[var] = rhs`. Repeated variables are summed.
    pub fn add_eq(&mut self, terms: Vec<(usize, Rational)>, rhs: Rational) {
        self.rows.push((terms, rhs));
    }

    pub fn build(self) -> Result<LinearProgram, LpError> {
        let n = self.objective.len();
        let mut constraints = Vec::with_capacity(self.rows.len());
        let mut rhs = Vec::with_capacity(self.rows.len());
        for (terms, b) in self.rows {
            let mut row = vec![Rational::zero(); n];
            for (var, coeff) in terms {
                if var >= n {
                    return Err(LpError::VariableIndex {
                        index: var,
                        num_vars: n,
                    });
                }
                row[var] += &coeff;
            }
            constraints.push(row);
            rhs.push(b);
        }
        LinearProgram::new(self.objective, constraints, rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        solution: Vec<Rational>,
    },
    /// Farkas witness: `yᵀA ≤ 0` componentwise and `yᵀb > 0`.
    Infeasible { certificate: Vec<Rational> },
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// Some `x ≥ 0` with `A·x = b`.
    Feasible(Vec<Rational>),
    /// Farkas witness as in [`LpOutcome::Infeasible`].
    Infeasible(Vec<Rational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> LpOutcome {
    let pre = match Presolve::run(&lp.constraints, &lp.rhs) {
        Ok(p) => p,
        Err(certificate) => return LpOutcome::Infeasible { certificate },
    };
    let (a, b) = pre.reduced(&lp.constraints, &lp.rhs);
    let mut tab = match Phase1::run(&a, &b) {
        Phase1::Infeasible(y) => {
            return LpOutcome::Infeasible {
                certificate: pre.certificate(&lp.constraints, y),
            }
        }
        Phase1::Feasible(t) => t,
    };
    let objective: Vec<Rational> = pre.cols.iter().map(|&j| lp.objective[j].clone()).collect();
    if !tab.optimize(&objective) {
        return LpOutcome::Unbounded;
    }
    let solution = pre.expand(tab.solution(), lp.num_vars());
    let value = dot(&lp.objective, &solution);
    LpOutcome::Optimal { value, solution }
}

/// Decides whether `A·x = b` has a nonnegative solution.
pub fn feasible(a: &[Vec<Rational>], b: &[Rational]) -> Result<Feasibility, LpError> {
    let width = a.first().map_or(0, Vec::len);
    check_dims(width, a, b)?;
    let pre = match Presolve::run(a, b) {
        Ok(p) => p,
        Err(y) => return Ok(Feasibility::Infeasible(y)),
    };
    let (ra, rb) = pre.reduced(a, b);
    Ok(match Phase1::run(&ra, &rb) {
        Phase1::Infeasible(y) => Feasibility::Infeasible(pre.certificate(a, y)),
        Phase1::Feasible(t) => Feasibility::Feasible(pre.expand(t.solution(), width)),
    })
}

/// Removes variables forced to zero by rows `Σ a_j x_j = 0` whose remaining
/// coefficients share one sign, repeating until nothing changes. Rows left
/// without variables are dropped.
struct Presolve {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Removed rows in removal order, each with the columns it forced to zero.
    removed: Vec<(usize, Vec<usize>)>,
}

impl Presolve {
    /// Returns a Farkas certificate if some row is left with no variables
    /// but a nonzero right-hand side.
    fn run(a: &[Vec<Rational>], b: &[Rational]) -> Result<Self, Vec<Rational>> {
        let width = a.first().map_or(0, Vec::len);
        let support: Vec<Vec<usize>> = a
            .iter()
            .map(|row| (0..width).filter(|&j| !row[j].is_zero()).collect())
            .collect();
        let mut col_alive = vec![true; width];
        let mut row_alive = vec![true; a.len()];
        let mut removed = Vec::new();
        let mut changed = true;
        while changed {
            changed = false;
            for (i, sup) in support.iter().enumerate() {
                if !row_alive[i] {
                    continue;
                }
                let live: Vec<usize> = sup.iter().copied().filter(|&j| col_alive[j]).collect();
                if live.is_empty() {
                    if !b[i].is_zero() {
                        let pre = Presolve {
                            rows: Vec::new(),
                            cols: Vec::new(),
                            removed,
                        };
                        let mut y = vec![Rational::zero(); a.len()];
                        y[i] = Rational::from_integer(b[i].signum().into());
                        pre.repair(a, &mut y);
                        return Err(y);
                    }
                } else if !b[i].is_zero() {
                    continue;
                } else {
                    let positive = a[i][live[0]].is_positive();
                    if live.iter().any(|&j| a[i][j].is_positive() != positive) {
                        continue;
                    }
                    for &j in &live {
                        col_alive[j] = false;
                    }
                }
                row_alive[i] = false;
                removed.push((i, live));
                changed = true;
            }
        }
        Ok(Presolve {
            rows: (0..a.len()).filter(|&i| row_alive[i]).collect(),
            cols: (0..width).filter(|&j| col_alive[j]).collect(),
            removed,
        })
    }

    fn reduced(&self, a: &[Vec<Rational>], b: &[Rational]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
        let ra = self
            .rows
            .iter()
            .map(|&i| self.cols.iter().map(|&j| a[i][j].clone()).collect())
            .collect();
        let rb = self.rows.iter().map(|&i| b[i].clone()).collect();
        (ra, rb)
    }

    fn expand(&self, x: Vec<Rational>, width: usize) -> Vec<Rational> {
        let mut full = vec![Rational::zero(); width];
        for (&j, v) in self.cols.iter().zip(x) {
            full[j] = v;
        }
        full
    }

    /// Lifts a certificate of the reduced system to the original one.
    fn certificate(&self, a: &[Vec<Rational>], reduced: Vec<Rational>) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); a.len()];
        for (&i, v) in self.rows.iter().zip(reduced) {
            y[i] = v;
        }
        self.repair(a, &mut y);
        y
    }

    /// Makes `yᵀA ≤ 0` on removed columns by weighting the removed rows,
    /// latest first. Each removed row has zero right-hand side, so `yᵀb` is
    /// unchanged, and it touches no column that survived it.
    fn repair(&self, a: &[Vec<Rational>], y: &mut [Rational]) {
        for (r, killed) in self.removed.iter().rev() {
            let mut t = Rational::zero();
            for &j in killed {
                let mut c = Rational::zero();
                for (i, yi) in y.iter().enumerate() {
                    if !yi.is_zero() && !a[i][j].is_zero() {
                        c += yi * &a[i][j];
                    }
                }
                let need = c / a[*r][j].abs();
                if need > t {
                    t = need;
                }
            }
            if !t.is_zero() {
                y[*r] = if a[*r][killed[0]].is_positive() { -t } else { t };
            }
        }
    }
}

/// Exact check of `A·x = b` and `x ≥ 0`.
pub fn verify_solution(a: &[Vec<Rational>], b: &[Rational], x: &[Rational]) -> bool {
    a.len() == b.len()
        && x.iter().all(|v| !v.is_negative())
        && a
            .iter()
            .zip(b)
            .all(|(row, bi)| row.len() == x.len() && dot(row, x) == *bi)
}

/// Exact check of the Farkas conditions `yᵀA ≤ 0`, `yᵀb > 0`.
pub fn verify_certificate(a: &[Vec<Rational>], b: &[Rational], y: &[Rational]) -> bool {
    if y.len() != a.len() || b.len() != a.len() {
        return false;
    }
    let width = a.first().map_or(0, Vec::len);
    let mut combo = vec![Rational::zero(); width];
    for (row, yi) in a.iter().zip(y) {
        if yi.is_zero() {
            continue;
        }
        for (c, v) in combo.iter_mut().zip(row) {
            c.sub_mul(&-yi, v);
        }
    }
    combo.iter().all(|c| !c.is_positive()) && dot(y, b).is_positive()
}

pub(crate) fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    let mut acc = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += x * y;
        }
    }
    acc
}

/// Dense simplex tableau in minimization convention. The last column of every
/// row holds the basic variable values; `cost[width]` holds minus the current
/// objective value.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    cost: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns `0..eligible` may enter the basis.
    eligible: usize,
    num_structural: usize,
}

enum Phase1 {
    Feasible(Tableau),
    Infeasible(Vec<Rational>),
}

impl Phase1 {
    /// Minimizes the sum of one artificial variable per row.
    fn run(a: &[Vec<Rational>], b: &[Rational]) -> Phase1 {
        let m = a.len();
        let n = a.first().map_or(0, Vec::len);
        let width = n + m;
        let mut signs = Vec::with_capacity(m);
        let mut rows = Vec::with_capacity(m);
        let mut cost = vec![Rational::zero(); width + 1];
        for (i, (row, bi)) in a.iter().zip(b).enumerate() {
            let flip = bi.is_negative();
            signs.push(flip);
            let mut t = Vec::with_capacity(width + 1);
            for v in row {
                t.push(if flip { -v } else { v.clone() });
            }
            t.extend(std::iter::repeat_with(Rational::zero).take(m));
            t[n + i] = Rational::one();
            t.push(if flip { -bi } else { bi.clone() });
            for (c, v) in cost.iter_mut().zip(&t).take(n) {
                *c -= v;
            }
            cost[width] -= &t[width];
            rows.push(t);
        }
        let mut tab = Tableau {
            rows,
            cost,
            basis: (n..n + m).collect(),
            eligible: width,
            num_structural: n,
        };
        let bounded = tab.iterate(true);
        debug_assert!(bounded, "phase one is bounded below by zero");

        if !tab.cost[width].is_zero() {
            // y_i = 1 - reduced cost of artificial i, undoing the row flips
            let certificate = (0..m)
                .map(|i| {
                    let y = Rational::one() - &tab.cost[n + i];
                    if signs[i] {
                        -y
                    } else {
                        y
                    }
                })
                .collect();
            return Phase1::Infeasible(certificate);
        }

        tab.expel_artificials();
        Phase1::Feasible(tab)
    }
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.width();
        let mut prow = std::mem::take(&mut self.rows[r]);
        let piv = prow[c].clone();
        if !piv.is_one() {
            let inv = piv.recip();
            for v in prow.iter_mut() {
                if !v.is_zero() {
                    *v = &*v * &inv;
                }
            }
        }
        let nz: Vec<usize> = (0..=w).filter(|&j| !prow[j].is_zero()).collect();
        let eliminate = |row: &mut Vec<Rational>| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for &j in &nz {
                row[j].sub_mul(&f, &prow[j]);
            }
        };
        for row in self.rows.iter_mut() {
            if !row.is_empty() {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = prow;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column, then lowest basic index
    /// among minimum-ratio rows. Returns false if unbounded. With `floor_zero`
    /// the objective is known to be nonnegative, so reaching zero is optimal.
    fn iterate(&mut self, floor_zero: bool) -> bool {
        let w = self.width();
        loop {
            if floor_zero && self.cost[w].is_zero() {
                return true;
            }
            let Some(c) = (0..self.eligible).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut best: Option<usize> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(k) => {
                        let cur = &self.rows[k];
                        // row[w]/row[c] vs cur[w]/cur[c], denominators positive
                        let lhs = &row[w] * &cur[c];
                        let rhs = &cur[w] * &row[c];
                        match lhs.cmp(&rhs) {
                            std::cmp::Ordering::Less => Some(i),
                            std::cmp::Ordering::Equal if self.basis[i] < self.basis[k] => Some(i),
                            _ => Some(k),
                        }
                    }
                };
            }
            match best {
                None => return false,
                Some(r) => self.pivot(r, c),
            }
        }
    }

    /// After a zero-valued phase one, pivots basic artificials out where a
    /// structural column allows it and drops the remaining (redundant) rows.
    /// The artificial columns are removed afterwards.
    fn expel_artificials(&mut self) {
        let n = self.num_structural;
        let mut redundant = Vec::new();
        for r in 0..self.rows.len() {
            if self.basis[r] < n {
                continue;
            }
            match (0..n).find(|&j| !self.rows[r][j].is_zero()) {
                Some(c) => self.pivot(r, c),
                None => redundant.push(r),
            }
        }
        for &r in redundant.iter().rev() {
            self.rows.remove(r);
            self.basis.remove(r);
        }
        let w = self.width();
        for row in self.rows.iter_mut().chain(std::iter::once(&mut self.cost)) {
            let rhs = row[w].clone();
            row.truncate(n);
            row.push(rhs);
        }
        self.eligible = n;
    }

    /// Phase two: maximize `objective` from the current feasible basis.
    fn optimize(&mut self, objective: &[Rational]) -> bool {
        let n = self.num_structural;
        let mut cost: Vec<Rational> = objective.iter().map(|c| -c).collect();
        cost.push(Rational::zero());
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            let cb = cost[bv].clone();
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                if !row[j].is_zero() {
                    cost[j].sub_mul(&cb, &row[j]);
                }
            }
        }
        self.cost = cost;
        self.iterate(false)
    }

    fn solution(&self) -> Vec<Rational> {
        let w = self.width();
        let mut x = vec![Rational::zero(); self.num_structural];
        for (row, &bv) in self.rows.iter().zip(&self.basis) {
            if bv < self.num_structural {
                x[bv] = row[w].clone();
            }
        }
        x
    }
}
