//! ε-perturbed simplex bases.
//!
//! The perturbed strategy polytope Δⁿ_{≥ε} has vertices
//! bⱼ = (ε, …, τ+ε, …, ε) with τ = 1 − nε. The basis matrix
//! B = τ·I + ε·𝟙𝟙ᵀ maps coordinate-simplex points into the polytope and
//! its transpose pulls action values back into coordinate space. Both
//! products reduce to a scale-plus-shift, so `B` is never materialized
//! in hot paths; `dense` exists for tests and cross-checks.

use crate::game::{Player, SequenceIndex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BasisError {
    #[error("epsilon {eps} too large for {n} actions (must be < 1/n)")]
    EpsilonTooLarge { n: usize, eps: f64 },
    #[error("epsilon {0} must be nonnegative and finite")]
    BadEpsilon(f64),
}

/// Basis of the ε-perturbed simplex over `n` actions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbedBasis {
    n: usize,
    eps: f64,
    tau: f64,
}

impl PerturbedBasis {
    /// Requires 0 ≤ ε < 1/n; at ε = 1/n the polytope collapses to its
    /// barycenter.
    pub fn new(n: usize, eps: f64) -> Result<PerturbedBasis, BasisError> {
        if !eps.is_finite() || eps < 0.0 {
            return Err(BasisError::BadEpsilon(eps));
        }
        if eps >= 1.0 / n as f64 {
            return Err(BasisError::EpsilonTooLarge { n, eps });
        }
        Ok(PerturbedBasis {
            n,
            eps,
            tau: 1.0 - n as f64 * eps,
        })
    }

    /// Identity basis (unperturbed simplex).
    pub fn identity(n: usize) -> PerturbedBasis {
        PerturbedBasis { n, eps: 0.0, tau: 1.0 }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    #[inline]
    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// Column `j` of B.
    pub fn column(&self, j: usize) -> Vec<f64> {
        let mut c = vec![self.eps; self.n];
        c[j] += self.tau;
        c
    }

    /// Dense B, row-major.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| if i == j { self.tau + self.eps } else { self.eps })
                    .collect()
            })
            .collect()
    }

    /// x = B·x̂ = τ·x̂ + ε·(Σx̂)·𝟙. For simplex x̂ every output entry is
    /// at least ε and the entries still sum to one.
    pub fn to_perturbed(&self, x_hat: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.to_perturbed_into(x_hat, &mut out);
        out
    }

    #[inline]
    pub fn to_perturbed_into(&self, x_hat: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x_hat.len(), self.n);
        let shift = self.eps * x_hat.iter().sum::<f64>();
        for (o, &x) in out.iter_mut().zip(x_hat) {
            *o = self.tau * x + shift;
        }
    }

    /// v̂ = Bᵀ·v = τ·v + ε·(Σv)·𝟙, preserving ⟨v̂, x̂⟩ = ⟨v, B x̂⟩.
    pub fn pull_back_value(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        self.pull_back_value_into(v, &mut out);
        out
    }

    #[inline]
    pub fn pull_back_value_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n);
        let shift = self.eps * v.iter().sum::<f64>();
        for (o, &x) in out.iter_mut().zip(v) {
            *o = self.tau * x + shift;
        }
    }

    /// Inverse map x̂ = (x − ε𝟙)/τ for points of the perturbed polytope.
    /// Undefined at τ = 0.
    pub fn from_perturbed(&self, x: &[f64]) -> Vec<f64> {
        debug_assert!(self.tau > 0.0);
        x.iter().map(|&v| (v - self.eps) / self.tau).collect()
    }
}

/// Sequence-form lower bounds l[Ia] = ε^{depth(Ia)} for one player,
/// with l[∅] = 1.
pub fn sequence_lower_bounds(idx: &SequenceIndex, player: Player, eps: f64) -> Vec<f64> {
    idx.player(player)
        .seq_depth
        .iter()
        .map(|&d| eps.powi(d as i32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn columns_match_definition() {
        let b = PerturbedBasis::new(3, 0.1).unwrap();
        assert!((b.tau() - 0.7).abs() < 1e-15);
        assert_close(&b.column(0), &[0.8, 0.1, 0.1], 1e-15);
        assert_close(&b.column(1), &[0.1, 0.8, 0.1], 1e-15);
        assert_close(&b.column(2), &[0.1, 0.1, 0.8], 1e-15);
        for j in 0..3 {
            let s: f64 = b.column(j).iter().sum();
            assert!((s - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_epsilon_is_identity() {
        let b = PerturbedBasis::new(2, 0.0).unwrap();
        assert_eq!(b.column(0), vec![1.0, 0.0]);
        assert_eq!(b.column(1), vec![0.0, 1.0]);
        let x = [0.3, 0.7];
        assert_eq!(b.to_perturbed(&x), vec![0.3, 0.7]);
        assert_eq!(b.pull_back_value(&[2.0, -1.0]), vec![2.0, -1.0]);
    }

    #[test]
    fn rejects_large_epsilon() {
        assert_eq!(
            PerturbedBasis::new(4, 0.25),
            Err(BasisError::EpsilonTooLarge { n: 4, eps: 0.25 })
        );
        assert!(PerturbedBasis::new(4, 0.2499).is_ok());
    }

    #[test]
    fn vertex_maps_to_column() {
        let b = PerturbedBasis::new(3, 0.1).unwrap();
        assert_close(&b.to_perturbed(&[1.0, 0.0, 0.0]), &[0.8, 0.1, 0.1], 1e-15);
        let bary = b.to_perturbed(&[1.0 / 3.0; 3]);
        for v in bary {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn closed_form_two_actions() {
        let b = PerturbedBasis::new(2, 0.01).unwrap();
        let x = b.to_perturbed(&[0.7, 0.3]);
        assert!((x[0] - 0.696).abs() < 1e-15);
        assert!((x[1] - 0.304).abs() < 1e-15);
    }

    #[test]
    fn pull_back_example() {
        let b = PerturbedBasis::new(2, 0.1).unwrap();
        let v = b.pull_back_value(&[1.0, 0.0]);
        assert!((v[0] - 0.9).abs() < 1e-15);
        assert!((v[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn inverse_round_trip() {
        let b = PerturbedBasis::new(3, 0.05).unwrap();
        let x_hat = [0.2, 0.5, 0.3];
        let x = b.to_perturbed(&x_hat);
        let back = b.from_perturbed(&x);
        for (a, c) in x_hat.iter().zip(back) {
            assert!((a - c).abs() < 1e-14);
        }
    }
}
