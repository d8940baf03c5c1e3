//! Dense two-phase simplex with Farkas certificates, and a cutting-plane driver.
//!
//! Pivoting uses Dantzig's most-negative reduced cost and switches to Bland's
//! lowest-index rule once a run of degenerate pivots is observed, which rules
//! out cycling while keeping the common case fast. Ties in the ratio test go
//! to the lowest basic column.

use std::fmt::Write as _;

use crate::num::{CONSTRAINT_TOL, PIVOT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn lhs(&self, point: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(v, a)| a * point[v]).sum()
    }

    /// Amount by which `point` violates the constraint (0 when satisfied).
    pub fn violation(&self, point: &[f64]) -> f64 {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<(usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearSystem {
    pub variables: Vec<Variable>,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Objective>,
}

/// Nonnegative multipliers proving `0 >= gap > 0`.
///
/// `rows[r]` multiplies constraint `r` written in `>=` form (a `<=` row is
/// negated first; equality rows may take either sign). `lower[v]` multiplies
/// `x_v >= l_v` and `upper[v]` multiplies `-x_v >= -u_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibilityCertificate {
    pub rows: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Feasible { point: Vec<f64>, objective: Option<f64> },
    Infeasible(InfeasibilityCertificate),
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpError {
    #[error("malformed system: {0}")]
    Malformed(String),
    #[error("numerically degenerate basis: {0}")]
    Degenerate(String),
    #[error("pivot limit of {0} reached")]
    PivotLimit(usize),
    #[error("separation callback returned a constraint the point already satisfies")]
    ContractViolation,
}

impl LinearSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, lower: Option<f64>, upper: Option<f64>) -> usize {
        self.variables.push(Variable { name: name.into(), lower, upper });
        self.variables.len() - 1
    }

    /// Variable bounded below by zero.
    pub fn add_nonneg(&mut self, name: impl Into<String>) -> usize {
        self.add_var(name, Some(0.0), None)
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> usize {
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
        self.constraints.len() - 1
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: Vec<(usize, f64)>) {
        self.objective = Some(Objective { sense, coeffs });
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    fn check_well_formed(&self) -> Result<(), LpError> {
        let n = self.variables.len();
        for (v, var) in self.variables.iter().enumerate() {
            if let (Some(l), Some(u)) = (var.lower, var.upper) {
                if l > u {
                    return Err(LpError::Malformed(format!("variable {v} has lower > upper")));
                }
            }
            if var.lower.is_some_and(|l| !l.is_finite()) || var.upper.is_some_and(|u| !u.is_finite()) {
                return Err(LpError::Malformed(format!("variable {v} has a non-finite bound")));
            }
        }
        let coeff_lists = self
            .constraints
            .iter()
            .map(|c| &c.coeffs)
            .chain(self.objective.as_ref().map(|o| &o.coeffs));
        for coeffs in coeff_lists {
            for &(v, a) in coeffs {
                if v >= n {
                    return Err(LpError::Malformed(format!("coefficient references undeclared variable {v}")));
                }
                if !a.is_finite() {
                    return Err(LpError::Malformed("non-finite coefficient".into()));
                }
            }
        }
        if self.constraints.iter().any(|c| !c.rhs.is_finite()) {
            return Err(LpError::Malformed("non-finite right-hand side".into()));
        }
        Ok(())
    }

    /// Largest violation of any constraint or bound at `point`.
    pub fn max_violation(&self, point: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            worst = worst.max(c.violation(point));
        }
        for (v, var) in self.variables.iter().enumerate() {
            if let Some(l) = var.lower {
                worst = worst.max(l - point[v]);
            }
            if let Some(u) = var.upper {
                worst = worst.max(point[v] - u);
            }
        }
        worst
    }

    /// Plain-text dump: one `name: [lo, hi]` line per variable, then one line
    /// per constraint such as `c3: 2 x0 - 1 x4 <= 5`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        if let Some(obj) = &self.objective {
            let sense = match obj.sense {
                Sense::Minimize => "minimize",
                Sense::Maximize => "maximize",
            };
            let _ = writeln!(out, "{sense}: {}", self.format_terms(&obj.coeffs));
        }
        for v in &self.variables {
            let lo = v.lower.map_or("-inf".to_string(), |l| l.to_string());
            let hi = v.upper.map_or("inf".to_string(), |u| u.to_string());
            let _ = writeln!(out, "var {}: [{lo}, {hi}]", v.name);
        }
        for (k, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Ge => ">=",
                Relation::Eq => "=",
            };
            let _ = writeln!(out, "c{k}: {} {rel} {}", self.format_terms(&c.coeffs), c.rhs);
        }
        out
    }

    fn format_terms(&self, coeffs: &[(usize, f64)]) -> String {
        if coeffs.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, &(v, a)) in coeffs.iter().enumerate() {
            if k > 0 {
                s.push_str(if a < 0.0 { " - " } else { " + " });
                let _ = write!(s, "{} {}", a.abs(), self.variables[v].name);
            } else {
                let _ = write!(s, "{a} {}", self.variables[v].name);
            }
        }
        s
    }
}

impl InfeasibilityCertificate {
    /// Re-derives the contradiction from the system's data.
    pub fn verify(&self, sys: &LinearSystem) -> bool {
        let n = sys.num_vars();
        if self.rows.len() != sys.constraints.len() || self.lower.len() != n || self.upper.len() != n {
            return false;
        }
        let mut g = vec![0.0; n];
        let mut rhs = 0.0;
        for (c, &lam) in sys.constraints.iter().zip(&self.rows) {
            let sign = match c.relation {
                Relation::Ge | Relation::Eq => 1.0,
                Relation::Le => -1.0,
            };
            if c.relation != Relation::Eq && lam < -PIVOT_TOL {
                return false;
            }
            for &(v, a) in &c.coeffs {
                g[v] += lam * sign * a;
            }
            rhs += lam * sign * c.rhs;
        }
        for v in 0..n {
            let (mu, nu) = (self.lower[v], self.upper[v]);
            if mu < -PIVOT_TOL || nu < -PIVOT_TOL {
                return false;
            }
            if mu > 0.0 {
                match sys.variables[v].lower {
                    Some(l) => rhs += mu * l,
                    None => return false,
                }
            }
            if nu > 0.0 {
                match sys.variables[v].upper {
                    Some(u) => rhs -= nu * u,
                    None => return false,
                }
            }
            g[v] += mu - nu;
        }
        let scale = 1.0 + self.rows.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        g.iter().all(|x| x.abs() <= CONSTRAINT_TOL * scale) && rhs > CONSTRAINT_TOL
    }
}

/// How an original variable maps onto nonnegative tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// x = offset + col
    Shifted { col: usize, offset: f64 },
    /// x = offset - col
    Mirrored { col: usize, offset: f64 },
    /// x = col_plus - col_minus
    Split { plus: usize, minus: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum RowOrigin {
    Constraint(usize),
    UpperBound,
}

struct Tableau {
    m: usize,
    width: usize,
    /// m rows of `width + 1` entries, last entry the right-hand side.
    t: Vec<f64>,
    basis: Vec<usize>,
    pivots: usize,
    limit: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.t[r * (self.width + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.width)
    }

    fn pivot(&mut self, r: usize, q: usize, cost: &mut [f64], obj: &mut f64) {
        let w = self.width + 1;
        let p = self.t[r * w + q];
        for c in 0..w {
            self.t[r * w + c] /= p;
        }
        let nz: Vec<usize> = (0..w).filter(|&c| self.t[r * w + c] != 0.0).collect();
        for k in 0..self.m {
            if k == r {
                continue;
            }
            let f = self.t[k * w + q];
            if f == 0.0 {
                continue;
            }
            for &c in &nz {
                self.t[k * w + c] -= f * self.t[r * w + c];
            }
            self.t[k * w + q] = 0.0;
        }
        let f = cost[q];
        if f != 0.0 {
            for &c in &nz {
                if c == self.width {
                    *obj -= f * self.t[r * w + c];
                } else {
                    cost[c] -= f * self.t[r * w + c];
                }
            }
            cost[q] = 0.0;
        }
        self.basis[r] = q;
        self.pivots += 1;
    }

    /// Minimizes with the given reduced costs. `allowed` masks enterable columns.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &mut [f64], obj: &mut f64, allowed: &[bool]) -> Result<bool, LpError> {
        let mut degenerate_run = 0usize;
        loop {
            if self.pivots > self.limit {
                return Err(LpError::PivotLimit(self.limit));
            }
            let bland = degenerate_run > 50;
            let mut enter = None;
            let mut best = -PIVOT_TOL;
            for c in 0..self.width {
                if !allowed[c] || cost[c] >= -PIVOT_TOL {
                    continue;
                }
                if bland {
                    enter = Some(c);
                    break;
                }
                if cost[c] < best {
                    best = cost[c];
                    enter = Some(c);
                }
            }
            let Some(q) = enter else { return Ok(true) };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.m {
                let a = self.at(r, q);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lv)) => {
                            ratio < lv - PIVOT_TOL || (ratio <= lv + PIVOT_TOL && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else { return Ok(false) };
            if ratio <= PIVOT_TOL {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, q, cost, obj);
        }
    }

    fn remove_row(&mut self, r: usize) {
        let w = self.width + 1;
        self.t.drain(r * w..(r + 1) * w);
        self.basis.remove(r);
        self.m -= 1;
    }
}

/// Solves the system; with an objective the returned point is an optimal vertex.
pub fn solve(sys: &LinearSystem) -> Result<LpOutcome, LpError> {
    sys.check_well_formed()?;
    let n = sys.num_vars();

    // Column layout for the structural part.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for var in &sys.variables {
        match (var.lower, var.upper) {
            (Some(l), u) => {
                maps.push(VarMap::Shifted { col: ncols, offset: l });
                if let Some(u) = u {
                    upper_rows.push((ncols, u - l));
                }
                ncols += 1;
            }
            (None, Some(u)) => {
                maps.push(VarMap::Mirrored { col: ncols, offset: u });
                ncols += 1;
            }
            (None, None) => {
                maps.push(VarMap::Split { plus: ncols, minus: ncols + 1 });
                ncols += 2;
            }
        }
    }

    // Rows in column space: (dense coefficients, relation, rhs, origin).
    let mut rows: Vec<(Vec<f64>, Relation, f64, RowOrigin)> = Vec::new();
    for (k, c) in sys.constraints.iter().enumerate() {
        let mut a = vec![0.0; ncols];
        let mut rhs = c.rhs;
        for &(v, coef) in &c.coeffs {
            match maps[v] {
                VarMap::Shifted { col, offset } => {
                    a[col] += coef;
                    rhs -= coef * offset;
                }
                VarMap::Mirrored { col, offset } => {
                    a[col] -= coef;
                    rhs -= coef * offset;
                }
                VarMap::Split { plus, minus } => {
                    a[plus] += coef;
                    a[minus] -= coef;
                }
            }
        }
        rows.push((a, c.relation, rhs, RowOrigin::Constraint(k)));
    }
    for &(col, bound) in &upper_rows {
        let mut a = vec![0.0; ncols];
        a[col] = 1.0;
        rows.push((a, Relation::Le, bound, RowOrigin::UpperBound));
    }

    // Normalize to nonnegative right-hand sides.
    let mut signs = vec![1.0; rows.len()];
    for (r, row) in rows.iter_mut().enumerate() {
        if row.2 < 0.0 {
            signs[r] = -1.0;
            row.0.iter_mut().for_each(|x| *x = -*x);
            row.2 = -row.2;
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let m = rows.len();
    let n_slack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let n_art = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let width = ncols + n_slack + n_art;
    let w = width + 1;
    let mut t = vec![0.0; m * w];
    let mut basis = vec![0usize; m];
    let mut slack_of = vec![None; m];
    let mut art_of = vec![None; m];
    let mut is_art = vec![false; width];
    let (mut s_next, mut a_next) = (ncols, ncols + n_slack);
    for (r, (a, rel, rhs, _)) in rows.iter().enumerate() {
        t[r * w..r * w + ncols].copy_from_slice(a);
        t[r * w + width] = *rhs;
        match rel {
            Relation::Le => {
                t[r * w + s_next] = 1.0;
                slack_of[r] = Some(s_next);
                basis[r] = s_next;
                s_next += 1;
            }
            Relation::Ge => {
                t[r * w + s_next] = -1.0;
                slack_of[r] = Some(s_next);
                s_next += 1;
                t[r * w + a_next] = 1.0;
                art_of[r] = Some(a_next);
                is_art[a_next] = true;
                basis[r] = a_next;
                a_next += 1;
            }
            Relation::Eq => {
                t[r * w + a_next] = 1.0;
                art_of[r] = Some(a_next);
                is_art[a_next] = true;
                basis[r] = a_next;
                a_next += 1;
            }
        }
    }
    let limit = 50 * (m + width) + 10_000;
    let mut tab = Tableau { m, width, t, basis, pivots: 0, limit };

    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![0.0; width];
    let mut obj = 0.0;
    for c in 0..width {
        if is_art[c] {
            cost[c] = 1.0;
        }
    }
    for r in 0..m {
        if art_of[r].is_some() {
            for c in 0..width {
                cost[c] -= tab.at(r, c);
            }
            obj -= tab.rhs(r);
        }
    }
    let all = vec![true; width];
    tab.optimize(&mut cost, &mut obj, &all)?;
    let infeasibility = -obj;
    let rhs_scale = 1.0 + rows.iter().fold(0.0f64, |acc, r| acc.max(r.2.abs()));
    if infeasibility > CONSTRAINT_TOL * rhs_scale {
        // Duals from the reduced costs of each row's slack or artificial.
        let mut y = vec![0.0; m];
        for r in 0..m {
            y[r] = match (art_of[r], slack_of[r]) {
                (Some(a), _) => 1.0 - cost[a],
                (None, Some(s)) => -cost[s],
                (None, None) => 0.0,
            };
        }
        return certificate_from_duals(sys, &rows, &signs, &y).map(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis, dropping redundant rows.
    let mut r = 0;
    while r < tab.m {
        if is_art[tab.basis[r]] {
            let q = (0..width).find(|&c| !is_art[c] && tab.at(r, c).abs() > PIVOT_TOL);
            match q {
                Some(q) => {
                    let mut dummy = vec![0.0; width];
                    let mut dummy_obj = 0.0;
                    tab.pivot(r, q, &mut dummy, &mut dummy_obj);
                    r += 1;
                }
                None => tab.remove_row(r),
            }
        } else {
            r += 1;
        }
    }

    // Phase 2.
    let allowed: Vec<bool> = (0..width).map(|c| !is_art[c]).collect();
    let mut cost = vec![0.0; width];
    let mut obj = 0.0;
    if let Some(o) = &sys.objective {
        let sense_sign = if o.sense == Sense::Maximize { -1.0 } else { 1.0 };
        for &(v, coef) in &o.coeffs {
            let coef = coef * sense_sign;
            match maps[v] {
                VarMap::Shifted { col, .. } => cost[col] += coef,
                VarMap::Mirrored { col, .. } => cost[col] -= coef,
                VarMap::Split { plus, minus } => {
                    cost[plus] += coef;
                    cost[minus] -= coef;
                }
            }
        }
        for r in 0..tab.m {
            let cb = cost[tab.basis[r]];
            if cb != 0.0 {
                for c in 0..width {
                    cost[c] -= cb * tab.at(r, c);
                }
                obj -= cb * tab.rhs(r);
            }
        }
        if !tab.optimize(&mut cost, &mut obj, &allowed)? {
            return Ok(LpOutcome::Unbounded);
        }
    }

    let mut colval = vec![0.0; width];
    for r in 0..tab.m {
        colval[tab.basis[r]] = tab.rhs(r).max(0.0);
    }
    let point: Vec<f64> = maps
        .iter()
        .map(|mp| match *mp {
            VarMap::Shifted { col, offset } => offset + colval[col],
            VarMap::Mirrored { col, offset } => offset - colval[col],
            VarMap::Split { plus, minus } => colval[plus] - colval[minus],
        })
        .collect();
    let worst = sys.max_violation(&point);
    if worst > CONSTRAINT_TOL {
        return Err(LpError::Degenerate(format!("recovered point violates the system by {worst:e}")));
    }
    let objective = sys.objective.as_ref().map(|o| o.coeffs.iter().map(|&(v, a)| a * point[v]).sum());
    Ok(LpOutcome::Feasible { point, objective })
}

fn certificate_from_duals(
    sys: &LinearSystem,
    rows: &[(Vec<f64>, Relation, f64, RowOrigin)],
    signs: &[f64],
    y: &[f64],
) -> Result<InfeasibilityCertificate, LpError> {
    let n = sys.num_vars();
    let mut lam = vec![0.0; sys.constraints.len()];
    for (r, row) in rows.iter().enumerate() {
        if let RowOrigin::Constraint(k) = row.3 {
            // Multiplier on the original row as written.
            let as_written = y[r] * signs[r];
            lam[k] = match sys.constraints[k].relation {
                Relation::Ge | Relation::Eq => as_written,
                Relation::Le => -as_written,
            };
        }
    }
    for (k, c) in sys.constraints.iter().enumerate() {
        if c.relation != Relation::Eq && lam[k] < 0.0 {
            if lam[k] < -1e-6 {
                return Err(LpError::Degenerate("dual multiplier has the wrong sign".into()));
            }
            lam[k] = 0.0;
        }
    }
    let scale = lam.iter().fold(0.0f64, |acc, l| acc.max(l.abs()));
    if scale > 0.0 {
        lam.iter_mut().for_each(|l| *l /= scale);
    }
    for l in lam.iter_mut() {
        if l.abs() < 1e-12 {
            *l = 0.0;
        }
    }
    let mut g = vec![0.0; n];
    let mut rhs = 0.0;
    for (c, &l) in sys.constraints.iter().zip(&lam) {
        let s = if c.relation == Relation::Le { -1.0 } else { 1.0 };
        for &(v, a) in &c.coeffs {
            g[v] += l * s * a;
        }
        rhs += l * s * c.rhs;
    }
    let mut lower = vec![0.0; n];
    let mut upper = vec![0.0; n];
    for v in 0..n {
        if g[v] > PIVOT_TOL {
            match sys.variables[v].upper {
                Some(u) => {
                    upper[v] = g[v];
                    rhs -= g[v] * u;
                }
                None => return Err(LpError::Degenerate("certificate needs a missing upper bound".into())),
            }
        } else if g[v] < -PIVOT_TOL {
            match sys.variables[v].lower {
                Some(l) => {
                    lower[v] = -g[v];
                    rhs += -g[v] * l;
                }
                None => return Err(LpError::Degenerate("certificate needs a missing lower bound".into())),
            }
        }
    }
    let cert = InfeasibilityCertificate { rows: lam, lower, upper, gap: rhs };
    if !cert.verify(sys) {
        return Err(LpError::Degenerate("infeasibility certificate failed verification".into()));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CutOutcome {
    Accepted { point: Vec<f64>, cuts: Vec<Constraint>, rounds: usize },
    Infeasible { certificate: InfeasibilityCertificate, cuts: Vec<Constraint>, rounds: usize },
    Unbounded { cuts: Vec<Constraint> },
    CutLimit { cuts: Vec<Constraint> },
}

/// Re-solves `base` plus accumulated cuts until the callback accepts a point,
/// the system becomes infeasible, or `max_rounds` cuts have been added.
pub fn cutting_plane_solve<F>(base: &LinearSystem, mut separate: F, max_rounds: usize) -> Result<CutOutcome, LpError>
where
    F: FnMut(&[f64]) -> Option<Constraint>,
{
    let mut sys = base.clone();
    let mut cuts = Vec::new();
    let mut round = 0;
    loop {
        match solve(&sys)? {
            LpOutcome::Infeasible(certificate) => {
                return Ok(CutOutcome::Infeasible { certificate, cuts, rounds: round });
            }
            LpOutcome::Unbounded => return Ok(CutOutcome::Unbounded { cuts }),
            LpOutcome::Feasible { point, .. } => match separate(&point) {
                None => return Ok(CutOutcome::Accepted { point, cuts, rounds: round }),
                Some(cut) => {
                    if cut.coeffs.iter().any(|&(v, _)| v >= sys.num_vars()) {
                        return Err(LpError::Malformed("cut references undeclared variable".into()));
                    }
                    if cut.violation(&point) <= CONSTRAINT_TOL {
                        return Err(LpError::ContractViolation);
                    }
                    if round == max_rounds {
                        return Ok(CutOutcome::CutLimit { cuts });
                    }
                    sys.constraints.push(cut.clone());
                    cuts.push(cut);
                    round += 1;
                }
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn feasible(o: LpOutcome) -> (Vec<f64>, Option<f64>) {
        match o {
            LpOutcome::Feasible { point, objective } => (point, objective),
            other => panic!("expected feasible, got {other:?}"),
        }
    }

    #[test]
    fn maximize_single_bounded_variable() {
        let mut s = LinearSystem::new();
        let x = s.add_nonneg("x");
        s.add_constraint(vec![(x, 1.0)], Relation::Le, 1.0);
        s.set_objective(Sense::Maximize, vec![(x, 1.0)]);
        let (p, obj) = feasible(solve(&s).unwrap());
        assert!((p[0] - 1.0).abs() < 1e-9);
        assert!((obj.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn contradictory_bounds_give_unit_multipliers() {
        let mut s = LinearSystem::new();
        let x = s.add_nonneg("x");
        s.add_constraint(vec![(x, 1.0)], Relation::Ge, 2.0);
        s.add_constraint(vec![(x, 1.0)], Relation::Le, 1.0);
        match solve(&s).unwrap() {
            LpOutcome::Infeasible(cert) => {
                assert!(cert.verify(&s));
                assert!((cert.rows[0] - 1.0).abs() < 1e-9);
                assert!((cert.rows[1] - 1.0).abs() < 1e-9);
                assert!((cert.gap - 1.0).abs() < 1e-9);
            }
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn free_and_negative_bounds() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", None, None);
        let y = s.add_var("y", None, Some(-1.0));
        s.add_constraint(vec![(x, 1.0), (y, 1.0)], Relation::Eq, 3.0);
        s.set_objective(Sense::Minimize, vec![(x, 1.0)]);
        let (p, _) = feasible(solve(&s).unwrap());
        assert!((p[0] - 4.0).abs() < 1e-9);
        assert!((p[1] + 1.0).abs() < 1e-9);
    }

    #[test]
    fn unbounded_is_detected() {
        let mut s = LinearSystem::new();
        let x = s.add_nonneg("x");
        s.add_constraint(vec![(x, 1.0)], Relation::Ge, 1.0);
        s.set_objective(Sense::Maximize, vec![(x, 1.0)]);
        assert_eq!(solve(&s).unwrap(), LpOutcome::Unbounded);
    }

    #[test]
    fn textbook_optimum() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), 36
        let mut s = LinearSystem::new();
        let x = s.add_nonneg("x");
        let y = s.add_nonneg("y");
        s.add_constraint(vec![(x, 1.0)], Relation::Le, 4.0);
        s.add_constraint(vec![(y, 2.0)], Relation::Le, 12.0);
        s.add_constraint(vec![(x, 3.0), (y, 2.0)], Relation::Le, 18.0);
        s.set_objective(Sense::Maximize, vec![(x, 3.0), (y, 5.0)]);
        let (p, obj) = feasible(solve(&s).unwrap());
        assert!((p[0] - 2.0).abs() < 1e-9 && (p[1] - 6.0).abs() < 1e-9);
        assert!((obj.unwrap() - 36.0).abs() < 1e-9);
    }

    #[test]
    fn infeasible_with_upper_bound_in_certificate() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", Some(0.0), Some(1.0));
        let y = s.add_var("y", Some(0.0), Some(1.0));
        s.add_constraint(vec![(x, 1.0), (y, 1.0)], Relation::Ge, 3.0);
        match solve(&s).unwrap() {
            LpOutcome::Infeasible(cert) => assert!(cert.verify(&s)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cut_loop_adds_one_cut() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", Some(0.0), Some(1.0));
        s.set_objective(Sense::Minimize, vec![(x, 1.0)]);
        let out = cutting_plane_solve(
            &s,
            |p| (p[0] < 0.5).then(|| Constraint::new(vec![(x, 1.0)], Relation::Ge, 0.5)),
            10,
        )
        .unwrap();
        match out {
            CutOutcome::Accepted { point, cuts, rounds } => {
                assert!(point[0] >= 0.5 - 1e-9);
                assert_eq!(cuts.len(), 1);
                assert_eq!(rounds, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn infeasible_base_stops_at_round_zero() {
        let mut s = LinearSystem::new();
        let x = s.add_nonneg("x");
        s.add_constraint(vec![(x, 1.0)], Relation::Le, -1.0);
        match cutting_plane_solve(&s, |_| None, 10).unwrap() {
            CutOutcome::Infeasible { rounds, .. } => assert_eq!(rounds, 0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn satisfied_cut_is_a_contract_violation() {
        let mut s = LinearSystem::new();
        let x = s.add_var("x", Some(0.0), Some(1.0));
        let err = cutting_plane_solve(&s, |_| Some(Constraint::new(vec![(x, 1.0)], Relation::Le, 5.0)), 3);
        assert_eq!(err, Err(LpError::ContractViolation));
    }

    #[test]
    fn dump_lists_rows() {
        let mut s = LinearSystem::new();
        let x = s.add_nonneg("x");
        let y = s.add_nonneg("y");
        s.add_constraint(vec![(x, 2.0), (y, -1.0)], Relation::Le, 5.0);
        assert!(s.dump().contains("c0: 2 x - 1 y <= 5"));
    }
}
