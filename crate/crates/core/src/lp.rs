//! Exact rational linear programming.
//!
//! A dense two-phase tableau simplex with Bland's anti-cycling rule. No
//! floating point anywhere: every solve returns an exactly feasible primal
//! point together with exactly feasible dual multipliers whose objective
//! matches the primal one (strong duality is witnessed, not assumed), or an
//! exact Farkas certificate of infeasibility, or a feasible point plus an
//! improving ray when unbounded. [`lp_check_certificate`] re-verifies any of
//! these outcomes independently of the solver internals.
//!
//! Problems at this scale (tens of variables, a few hundred rows) solve in
//! milliseconds; sparse or large-scale performance is a non-goal.

use serde::{Deserialize, Serialize};

use crate::rat::Rat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<Rat>,
    pub relation: Relation,
    pub rhs: Rat,
}

/// A linear program over free variables with optional per-variable bounds.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpProblem {
    pub n_vars: usize,
    pub sense: Sense,
    pub objective: Vec<Rat>,
    pub constraints: Vec<Constraint>,
    pub lower: Vec<Option<Rat>>,
    pub upper: Vec<Option<Rat>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Exact multipliers proving that no feasible point exists.
///
/// Aggregating the constraints with these multipliers yields `0 <= v` for
/// some negative rational `v`: `row_mults` are `>= 0` on `Le` rows and
/// `<= 0` on `Ge` rows, `lower_mults <= 0` charge lower bounds,
/// `upper_mults >= 0` charge upper bounds, the combination of all
/// coefficient columns vanishes, and the combined right-hand side is
/// negative.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FarkasCertificate {
    pub row_mults: Vec<Rat>,
    pub lower_mults: Vec<Rat>,
    pub upper_mults: Vec<Rat>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Feasible point when `Optimal` or `Unbounded`.
    pub primal: Vec<Rat>,
    /// One multiplier per constraint when `Optimal`.
    pub dual: Vec<Rat>,
    /// Multiplier of `x_j >= l_j` per variable when `Optimal`.
    pub lower_duals: Vec<Rat>,
    /// Multiplier of `x_j <= u_j` per variable when `Optimal`.
    pub upper_duals: Vec<Rat>,
    pub objective: Rat,
    pub farkas: Option<FarkasCertificate>,
    /// Improving direction when `Unbounded`.
    pub ray: Option<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("malformed problem: {0}")]
    MalformedProblem(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

impl LpProblem {
    pub fn new(sense: Sense, objective: Vec<Rat>) -> Self {
        let n = objective.len();
        LpProblem {
            n_vars: n,
            sense,
            objective,
            constraints: Vec::new(),
            lower: vec![None; n],
            upper: vec![None; n],
        }
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rat>, relation: Relation, rhs: Rat) {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn set_lower(&mut self, var: usize, bound: Rat) {
        self.lower[var] = Some(bound);
    }

    pub fn set_upper(&mut self, var: usize, bound: Rat) {
        self.upper[var] = Some(bound);
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.objective.len() != self.n_vars
            || self.lower.len() != self.n_vars
            || self.upper.len() != self.n_vars
        {
            return Err(LpError::MalformedProblem(
                "objective/bounds length differs from variable count".into(),
            ));
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if c.coeffs.len() != self.n_vars {
                return Err(LpError::MalformedProblem(format!(
                    "constraint {i} has {} coefficients, expected {}",
                    c.coeffs.len(),
                    self.n_vars
                )));
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Internal normalized model
// ---------------------------------------------------------------------------
//
// Variables with a finite lower bound become a single shifted column
// `x = l + x'`, other variables split into a positive and a negative part.
// Upper bounds are materialized as rows. Each row gets an artificial
// variable; the artificial columns carry the running basis inverse, so dual
// multipliers for every row (even ones dropped as redundant) are read off
// their reduced costs.

#[derive(Clone, Copy, Debug)]
enum ColKind {
    Shifted,
    SplitPos,
    SplitNeg,
    Slack,
    Artificial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RowSrc {
    Constraint(usize),
    UpperBound(usize),
}

struct Tableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
    n_cols: usize,
    enterable: Vec<bool>,
}

enum SimplexEnd {
    Optimal,
    Unbounded { entering: usize },
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.a[row][col].recip();
        for v in self.a[row].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        self.b[row] = &self.b[row] * &inv;
        let pivot_row = self.a[row].clone();
        let pivot_b = self.b[row].clone();
        for r in 0..self.a.len() {
            if r == row || self.a[r][col].is_zero() {
                continue;
            }
            let factor = self.a[r][col].clone();
            for (v, p) in self.a[r].iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v = &*v - &(&factor * p);
                }
            }
            self.b[r] = &self.b[r] - &(&factor * &pivot_b);
        }
        self.basis[row] = col;
    }

    /// Reduced costs `c_j - c_B B^{-1} A_j` for the given column costs.
    fn reduced_costs(&self, costs: &[Rat]) -> Vec<Rat> {
        let mut r = costs.to_vec();
        for (i, &bcol) in self.basis.iter().enumerate() {
            let cb = &costs[bcol];
            if cb.is_zero() {
                continue;
            }
            for (j, rj) in r.iter_mut().enumerate() {
                if !self.a[i][j].is_zero() {
                    *rj = &*rj - &(cb * &self.a[i][j]);
                }
            }
        }
        r
    }

    fn objective_of(&self, costs: &[Rat]) -> Rat {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &bcol)| &costs[bcol] * &self.b[i])
            .sum()
    }

    /// Dantzig pricing (most negative reduced cost, ties to the smallest
    /// index) with a deterministic anti-cycling fallback: after a streak
    /// of degenerate pivots the rule switches to Bland's least-index rule
    /// and stays there until the objective strictly improves, so cycling
    /// is impossible. Leaving rows break ratio ties by the least basic
    /// variable index.
    fn run(&mut self, costs: &[Rat]) -> SimplexEnd {
        const DEGENERATE_STREAK_LIMIT: usize = 24;
        let mut bland_mode = false;
        let mut streak = 0usize;
        loop {
            let reduced = self.reduced_costs(costs);
            let entering = if bland_mode {
                (0..self.n_cols).find(|&j| self.enterable[j] && reduced[j].is_negative())
            } else {
                let mut best: Option<usize> = None;
                for j in 0..self.n_cols {
                    if self.enterable[j] && reduced[j].is_negative() {
                        match best {
                            None => best = Some(j),
                            Some(b) => {
                                if reduced[j] < reduced[b] {
                                    best = Some(j);
                                }
                            }
                        }
                    }
                }
                best
            };
            let Some(e) = entering else {
                return SimplexEnd::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if !self.a[i][e].is_positive() {
                    continue;
                }
                let ratio = &self.b[i] / &self.a[i][e];
                match &leave {
                    None => leave = Some((i, ratio)),
                    Some((li, lr)) => {
                        if ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]) {
                            leave = Some((i, ratio));
                        }
                    }
                }
            }
            match leave {
                Some((row, ratio)) => {
                    if ratio.is_zero() {
                        streak += 1;
                        if streak > DEGENERATE_STREAK_LIMIT {
                            bland_mode = true;
                        }
                    } else {
                        streak = 0;
                        bland_mode = false;
                    }
                    self.pivot(row, e);
                }
                None => return SimplexEnd::Unbounded { entering: e },
            }
        }
    }
}

#[derive(Clone, Copy)]
enum VarRepr {
    Shifted(usize),
    Split(usize, usize),
}

struct Normalized {
    tab: Tableau,
    var_cols: Vec<VarRepr>,
    /// `(source, flipped)` per created row, in creation order; the i-th
    /// row's artificial column is `art_base + i`.
    all_rows: Vec<(RowSrc, bool)>,
    art_base: usize,
    /// Constant added to the internal objective by lower-bound shifts.
    objective_shift: Rat,
    /// Internal (minimization) costs per column.
    costs: Vec<Rat>,
}

fn normalize(p: &LpProblem) -> Normalized {
    let negate_obj = p.sense == Sense::Maximize;
    let obj: Vec<Rat> = p
        .objective
        .iter()
        .map(|c| if negate_obj { -c } else { c.clone() })
        .collect();

    let mut cols: Vec<ColKind> = Vec::new();
    let mut costs: Vec<Rat> = Vec::new();
    let mut var_cols = Vec::with_capacity(p.n_vars);
    let mut objective_shift = Rat::zero();
    for j in 0..p.n_vars {
        match &p.lower[j] {
            Some(l) => {
                var_cols.push(VarRepr::Shifted(cols.len()));
                cols.push(ColKind::Shifted);
                costs.push(obj[j].clone());
                objective_shift += &obj[j] * l;
            }
            None => {
                var_cols.push(VarRepr::Split(cols.len(), cols.len() + 1));
                cols.push(ColKind::SplitPos);
                costs.push(obj[j].clone());
                cols.push(ColKind::SplitNeg);
                costs.push(-&obj[j]);
            }
        }
    }

    // Rows: original constraints, then upper-bound rows, with lower-bound
    // shifts folded into the right-hand sides.
    let mut raw_rows: Vec<(Vec<Rat>, Relation, Rat, RowSrc)> = Vec::new();
    for (i, c) in p.constraints.iter().enumerate() {
        let mut row = vec![Rat::zero(); cols.len()];
        let mut rhs = c.rhs.clone();
        for j in 0..p.n_vars {
            if c.coeffs[j].is_zero() {
                continue;
            }
            match var_cols[j] {
                VarRepr::Shifted(col) => {
                    row[col] = c.coeffs[j].clone();
                    rhs -= &c.coeffs[j] * p.lower[j].as_ref().unwrap();
                }
                VarRepr::Split(pos, neg) => {
                    row[pos] = c.coeffs[j].clone();
                    row[neg] = -&c.coeffs[j];
                }
            }
        }
        raw_rows.push((row, c.relation, rhs, RowSrc::Constraint(i)));
    }
    for j in 0..p.n_vars {
        if let Some(u) = &p.upper[j] {
            let mut row = vec![Rat::zero(); cols.len()];
            let mut rhs = u.clone();
            match var_cols[j] {
                VarRepr::Shifted(col) => {
                    row[col] = Rat::one();
                    rhs -= p.lower[j].as_ref().unwrap();
                }
                VarRepr::Split(pos, neg) => {
                    row[pos] = Rat::one();
                    row[neg] = -Rat::one();
                }
            }
            raw_rows.push((row, Relation::Le, rhs, RowSrc::UpperBound(j)));
        }
    }

    let m = raw_rows.len();
    let n_slacks = raw_rows
        .iter()
        .filter(|(_, rel, _, _)| *rel != Relation::Eq)
        .count();
    let slack_base = cols.len();
    for _ in 0..n_slacks {
        cols.push(ColKind::Slack);
        costs.push(Rat::zero());
    }
    let art_base = cols.len();
    for _ in 0..m {
        cols.push(ColKind::Artificial);
        costs.push(Rat::zero());
    }
    let n_cols = cols.len();

    let mut a = vec![vec![Rat::zero(); n_cols]; m];
    let mut b = vec![Rat::zero(); m];
    let mut all_rows = Vec::with_capacity(m);
    let mut slack_cursor = slack_base;
    for (i, (row, rel, rhs, src)) in raw_rows.into_iter().enumerate() {
        let flip = rhs.is_negative();
        for (j, v) in row.into_iter().enumerate() {
            a[i][j] = if flip { -v } else { v };
        }
        b[i] = if flip { -rhs } else { rhs };
        let slack_sign = match rel {
            Relation::Le => Some(Rat::one()),
            Relation::Ge => Some(-Rat::one()),
            Relation::Eq => None,
        };
        if let Some(s) = slack_sign {
            a[i][slack_cursor] = if flip { -s } else { s };
            slack_cursor += 1;
        }
        a[i][art_base + i] = Rat::one();
        all_rows.push((src, flip));
    }

    let basis: Vec<usize> = (0..m).map(|i| art_base + i).collect();
    let enterable: Vec<bool> = (0..n_cols).map(|j| j < art_base).collect();

    Normalized {
        tab: Tableau {
            a,
            b,
            basis,
            n_cols,
            enterable,
        },
        var_cols,
        all_rows,
        art_base,
        objective_shift,
        costs,
    }
}

impl Normalized {
    /// Multipliers per created row in normalized orientation.
    fn row_multipliers(&self, costs: &[Rat]) -> Vec<Rat> {
        let reduced = self.tab.reduced_costs(costs);
        (0..self.all_rows.len())
            .map(|i| &costs[self.art_base + i] - &reduced[self.art_base + i])
            .collect()
    }

    /// Multiplier of a row in the original (pre-flip) orientation.
    fn dual_for(&self, mults: &[Rat], want: RowSrc) -> Rat {
        for (i, (src, flip)) in self.all_rows.iter().enumerate() {
            if *src == want {
                return if *flip { -&mults[i] } else { mults[i].clone() };
            }
        }
        Rat::zero()
    }
}

// ---------------------------------------------------------------------------
// Solve
// ---------------------------------------------------------------------------

/// Solves the program. Deterministic: Bland's pivot rule on a fixed column
/// and row layout.
pub fn lp_solve(p: &LpProblem) -> Result<LpSolution, LpError> {
    p.validate()?;
    let mut norm = normalize(p);

    // Phase 1: minimize the sum of artificials.
    let phase1_costs: Vec<Rat> = (0..norm.tab.n_cols)
        .map(|j| {
            if j >= norm.art_base {
                Rat::one()
            } else {
                Rat::zero()
            }
        })
        .collect();
    match norm.tab.run(&phase1_costs) {
        SimplexEnd::Optimal => {}
        SimplexEnd::Unbounded { .. } => unreachable!("phase 1 is bounded below by zero"),
    }
    let infeas = norm.tab.objective_of(&phase1_costs);
    if infeas.is_positive() {
        let farkas = extract_farkas(p, &norm, &phase1_costs);
        debug_assert_eq!(verify_farkas(p, &farkas), Ok(()));
        return Ok(LpSolution {
            status: LpStatus::Infeasible,
            primal: Vec::new(),
            dual: Vec::new(),
            lower_duals: Vec::new(),
            upper_duals: Vec::new(),
            objective: Rat::zero(),
            farkas: Some(farkas),
            ray: None,
        });
    }

    // Drive remaining basic artificials out; drop rows that reduced to 0 = 0.
    let mut i = 0;
    while i < norm.tab.a.len() {
        if norm.tab.basis[i] >= norm.art_base {
            let pivot_col =
                (0..norm.art_base).find(|&j| norm.tab.enterable[j] && !norm.tab.a[i][j].is_zero());
            match pivot_col {
                Some(j) => {
                    norm.tab.pivot(i, j);
                    i += 1;
                }
                None => {
                    norm.tab.a.remove(i);
                    norm.tab.b.remove(i);
                    norm.tab.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    for j in norm.art_base..norm.tab.n_cols {
        norm.tab.enterable[j] = false;
    }

    // Phase 2.
    let costs = norm.costs.clone();
    match norm.tab.run(&costs) {
        SimplexEnd::Optimal => {
            let sol = extract_optimal(p, &norm);
            debug_assert_eq!(verify_solution(p, &sol), Ok(()));
            Ok(sol)
        }
        SimplexEnd::Unbounded { entering } => {
            let sol = extract_unbounded(p, &norm, entering);
            debug_assert_eq!(verify_solution(p, &sol), Ok(()));
            Ok(sol)
        }
    }
}

fn primal_point(p: &LpProblem, norm: &Normalized) -> Vec<Rat> {
    let mut col_val = vec![Rat::zero(); norm.tab.n_cols];
    for (i, &bcol) in norm.tab.basis.iter().enumerate() {
        col_val[bcol] = norm.tab.b[i].clone();
    }
    (0..p.n_vars)
        .map(|j| match norm.var_cols[j] {
            VarRepr::Shifted(col) => p.lower[j].as_ref().unwrap() + &col_val[col],
            VarRepr::Split(pos, neg) => &col_val[pos] - &col_val[neg],
        })
        .collect()
}

fn extract_optimal(p: &LpProblem, norm: &Normalized) -> LpSolution {
    let primal = primal_point(p, norm);
    let mults = norm.row_multipliers(&norm.costs);
    let reduced = norm.tab.reduced_costs(&norm.costs);
    let sense_flip = p.sense == Sense::Maximize;
    let orient = |v: Rat| if sense_flip { -v } else { v };

    let dual: Vec<Rat> = (0..p.constraints.len())
        .map(|i| orient(norm.dual_for(&mults, RowSrc::Constraint(i))))
        .collect();
    let upper_duals: Vec<Rat> = (0..p.n_vars)
        .map(|j| orient(norm.dual_for(&mults, RowSrc::UpperBound(j))))
        .collect();
    let lower_duals: Vec<Rat> = (0..p.n_vars)
        .map(|j| match norm.var_cols[j] {
            VarRepr::Shifted(col) => orient(reduced[col].clone()),
            VarRepr::Split(..) => Rat::zero(),
        })
        .collect();

    let internal_obj = norm.tab.objective_of(&norm.costs) + &norm.objective_shift;
    let objective = orient(internal_obj);

    LpSolution {
        status: LpStatus::Optimal,
        primal,
        dual,
        lower_duals,
        upper_duals,
        objective,
        farkas: None,
        ray: None,
    }
}

fn extract_unbounded(p: &LpProblem, norm: &Normalized, entering: usize) -> LpSolution {
    let primal = primal_point(p, norm);
    let mut col_dir = vec![Rat::zero(); norm.tab.n_cols];
    col_dir[entering] = Rat::one();
    for (i, &bcol) in norm.tab.basis.iter().enumerate() {
        if bcol != entering {
            col_dir[bcol] = -&norm.tab.a[i][entering];
        }
    }
    let ray: Vec<Rat> = (0..p.n_vars)
        .map(|j| match norm.var_cols[j] {
            VarRepr::Shifted(col) => col_dir[col].clone(),
            VarRepr::Split(pos, neg) => &col_dir[pos] - &col_dir[neg],
        })
        .collect();
    let objective = crate::linalg::dot(&p.objective, &primal);
    LpSolution {
        status: LpStatus::Unbounded,
        primal,
        dual: Vec::new(),
        lower_duals: Vec::new(),
        upper_duals: Vec::new(),
        objective,
        farkas: None,
        ray: Some(ray),
    }
}

fn extract_farkas(p: &LpProblem, norm: &Normalized, phase1_costs: &[Rat]) -> FarkasCertificate {
    let mults = norm.row_multipliers(phase1_costs);
    let row_mults: Vec<Rat> = (0..p.constraints.len())
        .map(|i| -norm.dual_for(&mults, RowSrc::Constraint(i)))
        .collect();
    let upper_mults: Vec<Rat> = (0..p.n_vars)
        .map(|j| -norm.dual_for(&mults, RowSrc::UpperBound(j)))
        .collect();
    // Lower-bound multipliers close the zero-combination identity.
    let mut lower_mults = vec![Rat::zero(); p.n_vars];
    for j in 0..p.n_vars {
        if p.lower[j].is_none() {
            continue;
        }
        let mut s = Rat::zero();
        for (i, c) in p.constraints.iter().enumerate() {
            if !c.coeffs[j].is_zero() {
                s += &row_mults[i] * &c.coeffs[j];
            }
        }
        s += &upper_mults[j];
        lower_mults[j] = -s;
    }
    FarkasCertificate {
        row_mults,
        lower_mults,
        upper_mults,
    }
}

// ---------------------------------------------------------------------------
// Independent certificate verification
// ---------------------------------------------------------------------------

/// Re-verifies a solution against the problem data with exact arithmetic,
/// sharing nothing with the solver's tableau state. Returns the first
/// failing condition.
pub fn lp_verify(p: &LpProblem, s: &LpSolution) -> Result<(), String> {
    p.validate().map_err(|e| e.to_string())?;
    match s.status {
        LpStatus::Optimal | LpStatus::Unbounded => verify_solution(p, s).map_err(|e| e.to_string()),
        LpStatus::Infeasible => {
            let f = s.farkas.as_ref().ok_or("missing Farkas certificate")?;
            verify_farkas(p, f).map_err(|e| e.to_string())
        }
    }
}

/// Boolean form of [`lp_verify`].
pub fn lp_check_certificate(p: &LpProblem, s: &LpSolution) -> Result<bool, LpError> {
    p.validate()?;
    if s.status == LpStatus::Optimal
        && (s.primal.len() != p.n_vars
            || s.dual.len() != p.constraints.len()
            || s.lower_duals.len() != p.n_vars
            || s.upper_duals.len() != p.n_vars)
    {
        return Err(LpError::DimensionMismatch(
            "solution vectors do not match problem shape".into(),
        ));
    }
    Ok(lp_verify(p, s).is_ok())
}

fn check_primal_feasible(p: &LpProblem, x: &[Rat]) -> Result<(), String> {
    if x.len() != p.n_vars {
        return Err("primal length mismatch".into());
    }
    for (i, c) in p.constraints.iter().enumerate() {
        let lhs = crate::linalg::dot(&c.coeffs, x);
        let ok = match c.relation {
            Relation::Le => lhs <= c.rhs,
            Relation::Eq => lhs == c.rhs,
            Relation::Ge => lhs >= c.rhs,
        };
        if !ok {
            return Err(format!("primal violates constraint {i}"));
        }
    }
    for j in 0..p.n_vars {
        if let Some(l) = &p.lower[j] {
            if &x[j] < l {
                return Err(format!("primal violates lower bound of variable {j}"));
            }
        }
        if let Some(u) = &p.upper[j] {
            if &x[j] > u {
                return Err(format!("primal violates upper bound of variable {j}"));
            }
        }
    }
    Ok(())
}

fn verify_solution(p: &LpProblem, s: &LpSolution) -> Result<(), String> {
    check_primal_feasible(p, &s.primal)?;
    if s.status == LpStatus::Unbounded {
        let ray = s.ray.as_ref().ok_or("missing ray")?;
        if ray.len() != p.n_vars {
            return Err("ray length mismatch".into());
        }
        for (i, c) in p.constraints.iter().enumerate() {
            let d = crate::linalg::dot(&c.coeffs, ray);
            let ok = match c.relation {
                Relation::Le => !d.is_positive(),
                Relation::Eq => d.is_zero(),
                Relation::Ge => !d.is_negative(),
            };
            if !ok {
                return Err(format!("ray violates constraint {i}"));
            }
        }
        for j in 0..p.n_vars {
            if p.lower[j].is_some() && ray[j].is_negative() {
                return Err(format!("ray decreases bounded-below variable {j}"));
            }
            if p.upper[j].is_some() && ray[j].is_positive() {
                return Err(format!("ray increases bounded-above variable {j}"));
            }
        }
        let gain = crate::linalg::dot(&p.objective, ray);
        let improving = match p.sense {
            Sense::Maximize => gain.is_positive(),
            Sense::Minimize => gain.is_negative(),
        };
        if !improving {
            return Err("ray does not improve the objective".into());
        }
        return Ok(());
    }

    if s.dual.len() != p.constraints.len()
        || s.lower_duals.len() != p.n_vars
        || s.upper_duals.len() != p.n_vars
    {
        return Err("dual vector shapes mismatch".into());
    }
    let max = p.sense == Sense::Maximize;
    // Sign feasibility and complementary slackness per row.
    for (i, c) in p.constraints.iter().enumerate() {
        let y = &s.dual[i];
        let sign_ok = match (c.relation, max) {
            (Relation::Le, true) | (Relation::Ge, false) => !y.is_negative(),
            (Relation::Ge, true) | (Relation::Le, false) => !y.is_positive(),
            (Relation::Eq, _) => true,
        };
        if !sign_ok {
            return Err(format!("dual multiplier {i} has wrong sign"));
        }
        let slack = crate::linalg::dot(&c.coeffs, &s.primal) - &c.rhs;
        if !(y * &slack).is_zero() {
            return Err(format!("complementary slackness fails on constraint {i}"));
        }
    }
    // Same for bound multipliers.
    for j in 0..p.n_vars {
        let (lo, up) = (&s.lower_duals[j], &s.upper_duals[j]);
        if !lo.is_zero() {
            let l = p.lower[j]
                .as_ref()
                .ok_or(format!("lower dual on unbounded variable {j}"))?;
            let sign_ok = if max {
                !lo.is_positive()
            } else {
                !lo.is_negative()
            };
            if !sign_ok {
                return Err(format!("lower dual {j} has wrong sign"));
            }
            if !((&s.primal[j] - l) * lo).is_zero() {
                return Err(format!("complementary slackness fails on lower bound {j}"));
            }
        }
        if !up.is_zero() {
            let u = p.upper[j]
                .as_ref()
                .ok_or(format!("upper dual on unbounded variable {j}"))?;
            let sign_ok = if max {
                !up.is_negative()
            } else {
                !up.is_positive()
            };
            if !sign_ok {
                return Err(format!("upper dual {j} has wrong sign"));
            }
            if !((&s.primal[j] - u) * up).is_zero() {
                return Err(format!("complementary slackness fails on upper bound {j}"));
            }
        }
    }
    // Stationarity: the objective is exactly the dual combination.
    for j in 0..p.n_vars {
        let mut lhs = Rat::zero();
        for (i, c) in p.constraints.iter().enumerate() {
            if !c.coeffs[j].is_zero() {
                lhs += &s.dual[i] * &c.coeffs[j];
            }
        }
        lhs += &s.lower_duals[j];
        lhs += &s.upper_duals[j];
        if lhs != p.objective[j] {
            return Err(format!("stationarity fails at variable {j}"));
        }
    }
    // Exact strong duality.
    let primal_obj = crate::linalg::dot(&p.objective, &s.primal);
    let mut dual_obj: Rat = s
        .dual
        .iter()
        .zip(&p.constraints)
        .map(|(y, c)| y * &c.rhs)
        .sum();
    for j in 0..p.n_vars {
        if let Some(l) = &p.lower[j] {
            dual_obj += &s.lower_duals[j] * l;
        }
        if let Some(u) = &p.upper[j] {
            dual_obj += &s.upper_duals[j] * u;
        }
    }
    if primal_obj != dual_obj {
        return Err("primal and dual objectives differ".into());
    }
    if primal_obj != s.objective {
        return Err("reported objective differs from primal value".into());
    }
    Ok(())
}

fn verify_farkas(p: &LpProblem, f: &FarkasCertificate) -> Result<(), String> {
    if f.row_mults.len() != p.constraints.len()
        || f.lower_mults.len() != p.n_vars
        || f.upper_mults.len() != p.n_vars
    {
        return Err("Farkas vector shapes mismatch".into());
    }
    for (i, c) in p.constraints.iter().enumerate() {
        let y = &f.row_mults[i];
        let ok = match c.relation {
            Relation::Le => !y.is_negative(),
            Relation::Ge => !y.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return Err(format!("Farkas multiplier {i} has wrong sign"));
        }
    }
    let mut value = Rat::zero();
    for (y, c) in f.row_mults.iter().zip(&p.constraints) {
        value += y * &c.rhs;
    }
    for j in 0..p.n_vars {
        let lo = &f.lower_mults[j];
        let up = &f.upper_mults[j];
        if lo.is_positive() {
            return Err(format!("Farkas lower multiplier {j} must be <= 0"));
        }
        if up.is_negative() {
            return Err(format!("Farkas upper multiplier {j} must be >= 0"));
        }
        if !lo.is_zero() {
            let l = p.lower[j]
                .as_ref()
                .ok_or(format!("Farkas charges absent lower bound {j}"))?;
            value += lo * l;
        }
        if !up.is_zero() {
            let u = p.upper[j]
                .as_ref()
                .ok_or(format!("Farkas charges absent upper bound {j}"))?;
            value += up * u;
        }
        let mut col = Rat::zero();
        for (i, c) in p.constraints.iter().enumerate() {
            if !c.coeffs[j].is_zero() {
                col += &f.row_mults[i] * &c.coeffs[j];
            }
        }
        col += lo;
        col += up;
        if !col.is_zero() {
            return Err(format!("Farkas combination is nonzero at variable {j}"));
        }
    }
    if !value.is_negative() {
        return Err("Farkas value is not negative".into());
    }
    Ok(())
}
