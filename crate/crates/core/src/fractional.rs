//! The MCKC relaxation (L1)-(L6) at a radius guess: fractional points, the
//! constraint checker, and the builder that hands the LP to the simplex.

use crate::graph::ThresholdGraph;
use crate::lp::{LinearSystem, Relation};
use crate::model::MckcInstance;
use crate::num::{to_f64, Rational, Scalar};

/// `y[i][p]` opening of type `p` at location `i`; `x[i][j][p]` connection.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionalSolution<T = f64> {
    pub radius: Rational,
    pub y: Vec<Vec<T>>,
    pub x: Vec<Vec<Vec<T>>>,
}

impl<T: Scalar> FractionalSolution<T> {
    pub fn zeros(nf: usize, nc: usize, np: usize, radius: Rational) -> Self {
        FractionalSolution {
            radius,
            y: vec![vec![T::zero(); np]; nf],
            x: vec![vec![vec![T::zero(); np]; nc]; nf],
        }
    }

    pub fn to_f64(&self) -> FractionalSolution<f64> {
        FractionalSolution {
            radius: self.radius,
            y: self.y.iter().map(|r| r.iter().map(|v| v.to_f64()).collect()).collect(),
            x: self
                .x
                .iter()
                .map(|r| r.iter().map(|c| c.iter().map(|v| v.to_f64()).collect()).collect())
                .collect(),
        }
    }

    /// Total connection of client `j`.
    pub fn coverage(&self, j: usize) -> T {
        let mut s = T::zero();
        for row in &self.x {
            for v in &row[j] {
                s = s + v.clone();
            }
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LpViolation {
    #[error("shape of the fractional point does not match the instance")]
    Shape,
    #[error("(L1) client {0} is covered less than once")]
    Cover(usize),
    #[error("(L2) location {0} type {1} serves more than its opened capacity")]
    Load(usize, usize),
    #[error("(L3) type {0} opened more than k_p times")]
    Count(usize),
    #[error("(L4) x[{0}][{1}][{2}] exceeds y")]
    Connection(usize, usize, usize),
    #[error("(L5) location {0} holds more than one capacity")]
    Location(usize),
    #[error("(L6) negative or out-of-range variable at location {0}")]
    Range(usize),
    #[error("connection from location {0} to client {1} is longer than the radius")]
    Edge(usize, usize),
}

/// Checks (L1)-(L6) and the radius rule with the scalar's tolerance
/// (exact for rationals, 1e-7 for floats).
pub fn check_lp_point<T: Scalar>(inst: &MckcInstance, frac: &FractionalSolution<T>) -> Result<(), LpViolation> {
    let (nf, nc, np) = (inst.num_facilities(), inst.num_clients(), inst.num_types());
    if frac.y.len() != nf
        || frac.x.len() != nf
        || frac.y.iter().any(|r| r.len() != np)
        || frac.x.iter().any(|r| r.len() != nc || r.iter().any(|c| c.len() != np))
    {
        return Err(LpViolation::Shape);
    }
    let tol = T::tolerance();
    let zero = T::zero();
    let one = T::one();
    for i in 0..nf {
        for p in 0..np {
            let y = &frac.y[i][p];
            if *y < zero.clone() - tol.clone() {
                return Err(LpViolation::Range(i));
            }
            let mut load = T::zero();
            for j in 0..nc {
                let x = &frac.x[i][j][p];
                if *x < zero.clone() - tol.clone() || *x > one.clone() + tol.clone() {
                    return Err(LpViolation::Range(i));
                }
                if *x > tol && !inst.fc(i, j).within(&frac.radius) {
                    return Err(LpViolation::Edge(i, j));
                }
                if *x > y.clone() + tol.clone() {
                    return Err(LpViolation::Connection(i, j, p));
                }
                load = load + T::from_rational(&inst.weights[j]) * x.clone();
            }
            if load > T::from_rational(&inst.capacity(p)) * y.clone() + tol.clone() {
                return Err(LpViolation::Load(i, p));
            }
        }
        if !inst.soft {
            let mut s = T::zero();
            for v in &frac.y[i] {
                s = s + v.clone();
            }
            if s > one.clone() + tol.clone() {
                return Err(LpViolation::Location(i));
            }
        }
    }
    for p in 0..np {
        let mut s = T::zero();
        for row in &frac.y {
            s = s + row[p].clone();
        }
        if s > T::from_int(inst.profile[p].count as i128) + tol.clone() {
            return Err(LpViolation::Count(p));
        }
    }
    for j in 0..nc {
        if frac.coverage(j) < one.clone() - tol.clone() {
            return Err(LpViolation::Cover(j));
        }
    }
    Ok(())
}

/// LP (L1)-(L6) with connection variables only on edges of G.
#[derive(Debug, Clone)]
pub struct MckcLp {
    pub system: LinearSystem,
    pub y_var: Vec<Vec<usize>>,
    pub x_var: Vec<Vec<Vec<Option<usize>>>>,
    radius: Rational,
}

impl MckcLp {
    pub fn build(inst: &MckcInstance, g: &ThresholdGraph) -> Self {
        let (nf, nc, np) = (inst.num_facilities(), inst.num_clients(), inst.num_types());
        let mut sys = LinearSystem::new();
        let mut y_var = vec![vec![0; np]; nf];
        for (i, row) in y_var.iter_mut().enumerate() {
            for (p, slot) in row.iter_mut().enumerate() {
                // Hard mode bounds y through (L5) already.
                let upper = inst.soft.then_some(inst.profile[p].count as f64);
                *slot = sys.add_var(format!("y_{i}_{p}"), Some(0.0), upper);
            }
        }
        let mut x_var = vec![vec![vec![None; np]; nc]; nf];
        for i in 0..nf {
            for j in 0..nc {
                if g.has_edge(i, j) {
                    for p in 0..np {
                        let upper = inst.soft.then_some(1.0);
                        x_var[i][j][p] = Some(sys.add_var(format!("x_{i}_{j}_{p}"), Some(0.0), upper));
                    }
                }
            }
        }
        // (L1)
        for j in 0..nc {
            let mut coeffs = Vec::new();
            for cell in x_var.iter().map(|rows| &rows[j]) {
                coeffs.extend(cell.iter().flatten().map(|&v| (v, 1.0)));
            }
            sys.add_constraint(coeffs, Relation::Ge, 1.0);
        }
        // (L2)
        for i in 0..nf {
            for p in 0..np {
                let mut coeffs: Vec<(usize, f64)> = (0..nc)
                    .filter_map(|j| x_var[i][j][p].map(|v| (v, to_f64(&inst.weights[j]))))
                    .collect();
                if coeffs.is_empty() {
                    continue;
                }
                coeffs.push((y_var[i][p], -to_f64(&inst.capacity(p))));
                sys.add_constraint(coeffs, Relation::Le, 0.0);
            }
        }
        // (L3)
        for p in 0..np {
            let coeffs = (0..nf).map(|i| (y_var[i][p], 1.0)).collect();
            sys.add_constraint(coeffs, Relation::Le, inst.profile[p].count as f64);
        }
        // (L4)
        for i in 0..nf {
            for j in 0..nc {
                for p in 0..np {
                    if let Some(v) = x_var[i][j][p] {
                        sys.add_constraint(vec![(v, 1.0), (y_var[i][p], -1.0)], Relation::Le, 0.0);
                    }
                }
            }
        }
        // (L5)
        if !inst.soft {
            for row in &y_var {
                sys.add_constraint(row.iter().map(|&v| (v, 1.0)).collect(), Relation::Le, 1.0);
            }
        }
        MckcLp { system: sys, y_var, x_var, radius: g.radius }
    }

    /// Reads a point of the system back into x/y form, zeroing values below 1e-12.
    pub fn extract(&self, point: &[f64]) -> FractionalSolution<f64> {
        let clean = |v: f64| if v.abs() < 1e-12 { 0.0 } else { v };
        let nf = self.y_var.len();
        let np = self.y_var.first().map_or(0, Vec::len);
        let nc = self.x_var.first().map_or(0, Vec::len);
        let mut frac = FractionalSolution::zeros(nf, nc, np, self.radius);
        for i in 0..nf {
            for p in 0..np {
                frac.y[i][p] = clean(point[self.y_var[i][p]]);
            }
            for j in 0..nc {
                for p in 0..np {
                    if let Some(v) = self.x_var[i][j][p] {
                        frac.x[i][j][p] = clean(point[v]);
                    }
                }
            }
        }
        frac
    }

    /// Coordinates of a fractional point in the system's variable order.
    pub fn embed(&self, frac: &FractionalSolution<f64>) -> Vec<f64> {
        let mut point = vec![0.0; self.system.num_vars()];
        for (i, row) in self.y_var.iter().enumerate() {
            for (p, &v) in row.iter().enumerate() {
                point[v] = frac.y[i][p];
            }
        }
        for (i, rows) in self.x_var.iter().enumerate() {
            for (j, cell) in rows.iter().enumerate() {
                for (p, v) in cell.iter().enumerate() {
                    if let Some(v) = v {
                        point[*v] = frac.x[i][j][p];
                    }
                }
            }
        }
        point
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::{solve, LpOutcome};
    use crate::model::{CapacityClass, Distance};
    use crate::num::int;

    #[test]
    fn star_lp_is_feasible_and_checks() {
        let fc = vec![vec![Distance::Finite(int(1)); 3]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(3))], false);
        let g = ThresholdGraph::build(&inst, &int(1));
        let lp = MckcLp::build(&inst, &g);
        match solve(&lp.system).unwrap() {
            LpOutcome::Feasible { point, .. } => {
                let frac = lp.extract(&point);
                check_lp_point(&inst, &frac).unwrap();
                assert_eq!(lp.embed(&frac), point.iter().map(|v| if v.abs() < 1e-12 { 0.0 } else { *v }).collect::<Vec<_>>());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn undersupplied_star_is_infeasible() {
        let fc = vec![vec![Distance::Finite(int(1)); 3]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(2))], false);
        let g = ThresholdGraph::build(&inst, &int(1));
        let lp = MckcLp::build(&inst, &g);
        assert!(matches!(solve(&lp.system).unwrap(), LpOutcome::Infeasible(_)));
    }

    #[test]
    fn checker_flags_uncovered_client() {
        let fc = vec![vec![Distance::Finite(int(1)); 2]];
        let inst = MckcInstance::from_bipartite(&fc, vec![CapacityClass::new(1, int(2))], false);
        let mut frac = FractionalSolution::<Rational>::zeros(1, 2, 1, int(1));
        frac.y[0][0] = int(1);
        frac.x[0][0][0] = int(1);
        assert_eq!(check_lp_point(&inst, &frac), Err(LpViolation::Cover(1)));
        frac.x[0][1][0] = int(1);
        assert_eq!(check_lp_point(&inst, &frac), Ok(()));
    }
}
