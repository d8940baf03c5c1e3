//! Pieces shared by both decompositions: the charge map φ of deleted clients,
//! the complete-neighborhood check, and the extension of an assignment to
//! deleted clients.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::graph::ThresholdGraph;
use crate::num::{to_f64, Rational};

/// φ: deleted client → surviving clients with weights.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Charge {
    pub rows: BTreeMap<usize, Vec<(usize, Rational)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChargeError {
    #[error("charge row of client {0} does not sum to one")]
    RowSum(usize),
    #[error("client {0} is charged onto a deleted client")]
    DeletedTarget(usize),
}

impl Charge {
    /// Uniform rows from each of `deleted` onto `targets`.
    pub fn add_uniform(&mut self, deleted: &[usize], targets: &[usize]) {
        if targets.is_empty() {
            return;
        }
        let w = Rational::new(1, targets.len() as i128);
        for &j in deleted {
            self.rows.insert(j, targets.iter().map(|&t| (t, w)).collect());
        }
    }

    pub fn rows_sum_to_one(&self) -> bool {
        self.rows.values().all(|r| r.iter().map(|(_, w)| *w).sum::<Rational>().is_one())
    }

    pub fn column_sums(&self) -> BTreeMap<usize, Rational> {
        let mut cols: BTreeMap<usize, Rational> = BTreeMap::new();
        for row in self.rows.values() {
            for (t, w) in row {
                *cols.entry(*t).or_insert_with(Rational::zero) += w;
            }
        }
        cols
    }

    /// ρ: the largest column sum.
    pub fn max_column(&self) -> Rational {
        self.column_sums().into_values().max().unwrap_or_else(Rational::zero)
    }

    /// Largest hop distance in G between a deleted client and one of its targets.
    pub fn max_support_hops(&self, g: &ThresholdGraph) -> Option<usize> {
        let mut worst = 0;
        for (&j, row) in &self.rows {
            let dist = g.hop_distances(g.client_vertex(j));
            for (t, _) in row {
                worst = worst.max(dist[g.client_vertex(*t)]?);
            }
        }
        Some(worst)
    }
}

/// Γ_G(J) ⊆ T, facilities and clients given by index.
pub fn verify_complete_neighborhood(g: &ThresholdGraph, facilities: &[usize], clients: &[usize]) -> bool {
    clients.iter().all(|&j| g.neighbors(g.client_vertex(j)).iter().all(|i| facilities.contains(i)))
}

/// x[i][j][p] for deleted j becomes the φ-mixture of its targets' rows.
pub fn extend_deleted(x: &[Vec<Vec<f64>>], charge: &Charge) -> Result<Vec<Vec<Vec<f64>>>, ChargeError> {
    if !charge.rows_sum_to_one() {
        let bad = charge.rows.iter().find(|(_, r)| !r.iter().map(|(_, w)| *w).sum::<Rational>().is_one());
        return Err(ChargeError::RowSum(bad.map_or(0, |(j, _)| *j)));
    }
    let mut out = x.to_vec();
    for (&j, row) in &charge.rows {
        if let Some((t, _)) = row.iter().find(|(t, _)| charge.rows.contains_key(t)) {
            return Err(ChargeError::DeletedTarget(*t));
        }
        for i in 0..out.len() {
            for p in 0..out[i][j].len() {
                out[i][j][p] = row.iter().map(|(t, w)| to_f64(w) * x[i][*t][p]).sum();
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    #[test]
    fn single_target_copies_the_row() {
        let x = vec![vec![vec![0.0], vec![0.7]]];
        let mut c = Charge::default();
        c.add_uniform(&[0], &[1]);
        assert_eq!(extend_deleted(&x, &c).unwrap(), vec![vec![vec![0.7], vec![0.7]]]);
        assert_eq!(extend_deleted(&x, &Charge::default()).unwrap(), x);
    }

    #[test]
    fn two_deleted_clients_on_one_survivor() {
        let mut c = Charge::default();
        c.add_uniform(&[0, 1], &[2]);
        assert_eq!(c.max_column(), rat(2, 1));
        let x = vec![vec![vec![0.0], vec![0.0], vec![1.0]]];
        let e = extend_deleted(&x, &c).unwrap();
        let load: f64 = e[0].iter().map(|r| r[0]).sum();
        assert!(load <= 3.0 * 1.0 + 1e-12);
    }

    #[test]
    fn bad_rows_are_rejected() {
        let mut c = Charge::default();
        c.rows.insert(0, vec![(1, rat(1, 2))]);
        assert_eq!(extend_deleted(&[vec![vec![0.0], vec![1.0]]], &c), Err(ChargeError::RowSum(0)));
    }
}
