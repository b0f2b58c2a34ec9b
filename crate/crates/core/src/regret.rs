//! Local regret minimizers in perturbed coordinate space.
//!
//! The slice-level primitives here are shared by the normal-form stepper
//! and the full-game solver: reward transformation of action values,
//! instantaneous regret, cumulative-regret updates for RM / RM+ /
//! discounted RM, and the regret-matching strategy read-out.
//!
//! [`gda_closed_form_step`] advances the same dynamics through an
//! explicit gradient-descent-ascent form over unnormalized vectors θ,
//! using dense transformed matrices throughout. Because it shares no
//! arithmetic shortcuts with [`rtrm_nfg_step`], matching strategy
//! sequences from both routes is a meaningful cross-check (exact for RM
//! and RM+ with matched step size).

use crate::perturb::PerturbedBasis;

/// Cumulative-regret update rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RmVariant {
    /// Plain regret matching: unclamped accumulation.
    Rm,
    /// Regret matching plus: accumulation clamped at zero.
    RmPlus,
    /// Discounted regret matching with separate discounts for the
    /// positive and negative parts.
    Drm { alpha: f64, beta: f64 },
}

impl RmVariant {
    /// Conventional discounted-RM parameters.
    pub fn drm_default() -> RmVariant {
        RmVariant::Drm { alpha: 1.5, beta: 0.0 }
    }
}

/// Reward-transformation settings: weight μ and the reference strategy
/// (a valid simplex point in the same space as the current strategy).
#[derive(Debug, Clone)]
pub struct RtConfig {
    pub mu: f64,
    pub x_ref: Vec<f64>,
}

impl RtConfig {
    pub fn disabled(n: usize) -> RtConfig {
        RtConfig { mu: 0.0, x_ref: vec![1.0 / n as f64; n] }
    }
}

/// v + μ(x_ref − x_cur).
pub fn rt_transform(v: &[f64], mu: f64, x_ref: &[f64], x_cur: &[f64]) -> Vec<f64> {
    let mut out = v.to_vec();
    rt_transform_in_place(&mut out, mu, x_ref, x_cur);
    out
}

#[inline]
pub fn rt_transform_in_place(v: &mut [f64], mu: f64, x_ref: &[f64], x_cur: &[f64]) {
    for ((v, &r), &c) in v.iter_mut().zip(x_ref).zip(x_cur) {
        *v += mu * (r - c);
    }
}

/// r = v̂ − ⟨v̂, x̂⟩·𝟙; always orthogonal to x̂.
pub fn instantaneous_regret(v_hat: &[f64], x_hat: &[f64]) -> Vec<f64> {
    let u = dot(v_hat, x_hat);
    v_hat.iter().map(|&v| v - u).collect()
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Apply one cumulative-regret update in place. `t` is the 1-based
/// update count, used by the discounted variant.
#[inline]
pub fn accumulate_regret(variant: RmVariant, cumulative: &mut [f64], inst: &[f64], t: u64) {
    match variant {
        RmVariant::Rm => {
            for (c, &r) in cumulative.iter_mut().zip(inst) {
                *c += r;
            }
        }
        RmVariant::RmPlus => {
            for (c, &r) in cumulative.iter_mut().zip(inst) {
                *c = (*c + r).max(0.0);
            }
        }
        RmVariant::Drm { alpha, beta } => {
            let t = t as f64;
            let wp = t.powf(alpha) / (t.powf(alpha) + 1.0);
            let wn = t.powf(beta) / (t.powf(beta) + 1.0);
            for (c, &r) in cumulative.iter_mut().zip(inst) {
                let s = *c + r;
                *c = wp * s.max(0.0) + wn * s.min(0.0);
            }
        }
    }
}

/// Regret-matching read-out: positive part normalized, uniform when the
/// positive part vanishes.
#[inline]
pub fn regret_match_into(cumulative: &[f64], out: &mut [f64]) {
    let norm: f64 = cumulative.iter().map(|&r| r.max(0.0)).sum();
    if norm > 0.0 {
        for (o, &r) in out.iter_mut().zip(cumulative) {
            *o = r.max(0.0) / norm;
        }
    } else {
        let u = 1.0 / out.len() as f64;
        out.fill(u);
    }
}

/// Cumulative regret for one local decision.
#[derive(Debug, Clone)]
pub struct RegretState {
    pub regrets: Vec<f64>,
    pub variant: RmVariant,
    pub t: u64,
}

impl RegretState {
    pub fn new(n: usize, variant: RmVariant) -> RegretState {
        RegretState { regrets: vec![0.0; n], variant, t: 0 }
    }

    /// Accumulate one instantaneous regret vector.
    pub fn update(&mut self, inst: &[f64]) {
        self.t += 1;
        accumulate_regret(self.variant, &mut self.regrets, inst, self.t);
    }

    /// Coordinate-space strategy induced by the current regrets.
    pub fn next_strategy(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.regrets.len()];
        regret_match_into(&self.regrets, &mut out);
        out
    }
}

/// Two-player zero-sum normal-form game; `payoff` is player 1's utility
/// matrix, row-major with `n1` rows and `n2` columns.
#[derive(Debug, Clone)]
pub struct NfgGame {
    pub n1: usize,
    pub n2: usize,
    pub payoff: Vec<f64>,
}

impl NfgGame {
    pub fn new(n1: usize, n2: usize, payoff: Vec<f64>) -> NfgGame {
        assert_eq!(payoff.len(), n1 * n2);
        NfgGame { n1, n2, payoff }
    }

    pub fn matching_pennies() -> NfgGame {
        NfgGame::new(2, 2, vec![1.0, -1.0, -1.0, 1.0])
    }

    /// U_i · x_{−i} for the given player.
    pub fn action_values(&self, player: usize, x_opp: &[f64]) -> Vec<f64> {
        match player {
            0 => (0..self.n1)
                .map(|i| (0..self.n2).map(|j| self.payoff[i * self.n2 + j] * x_opp[j]).sum())
                .collect(),
            1 => (0..self.n2)
                .map(|j| (0..self.n1).map(|i| -self.payoff[i * self.n2 + j] * x_opp[i]).sum())
                .collect(),
            _ => panic!("player index out of range"),
        }
    }

    pub fn dims(&self) -> [usize; 2] {
        [self.n1, self.n2]
    }
}

/// One simultaneous step of reward-transformed regret matching on a
/// normal-form game in perturbed space. Both players' values are taken
/// at the incoming strategy profile; `x` holds real-space strategies and
/// is updated in place.
pub fn rtrm_nfg_step(
    game: &NfgGame,
    states: &mut [RegretState; 2],
    bases: &[PerturbedBasis; 2],
    rt: &[RtConfig; 2],
    x: &mut [Vec<f64>; 2],
) {
    let values: [Vec<f64>; 2] = [
        {
            let mut v = game.action_values(0, &x[1]);
            rt_transform_in_place(&mut v, rt[0].mu, &rt[0].x_ref, &x[0]);
            v
        },
        {
            let mut v = game.action_values(1, &x[0]);
            rt_transform_in_place(&mut v, rt[1].mu, &rt[1].x_ref, &x[1]);
            v
        },
    ];
    for p in 0..2 {
        let v_hat = bases[p].pull_back_value(&values[p]);
        // ⟨v̂, x̂⟩ = ⟨v, Bx̂⟩ = ⟨v, x⟩, so the expected value can be taken
        // in real space.
        let u = dot(&values[p], &x[p]);
        let inst: Vec<f64> = v_hat.iter().map(|&v| v - u).collect();
        states[p].update(&inst);
        let x_hat = states[p].next_strategy();
        bases[p].to_perturbed_into(&x_hat, &mut x[p]);
    }
}

/// Gradient-descent-ascent oracle over unnormalized vectors θ.
///
/// The strategy read-out applies the regret-matching rule to θ (positive
/// part normalized, uniform when degenerate), so with η = 1 and matched
/// initial state the θ trajectory reproduces the cumulative regrets of
/// [`rtrm_nfg_step`] exactly for RM and RM+.
#[derive(Debug, Clone)]
pub struct GdaOracle {
    pub theta: [Vec<f64>; 2],
    pub variant: RmVariant,
    pub eta: f64,
    pub t: u64,
}

impl GdaOracle {
    pub fn new(dims: [usize; 2], variant: RmVariant, eta: f64) -> GdaOracle {
        GdaOracle {
            theta: [vec![0.0; dims[0]], vec![0.0; dims[1]]],
            variant,
            eta,
            t: 0,
        }
    }

    /// Read-out strategy in coordinate space. A θ with no positive mass
    /// is degenerate; it falls back to uniform.
    pub fn strategy_hat(&self, p: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.theta[p].len()];
        regret_match_into(&self.theta[p], &mut out);
        out
    }

    /// Read-out mapped through the basis into the perturbed polytope.
    pub fn strategy(&self, p: usize, basis: &PerturbedBasis) -> Vec<f64> {
        basis.to_perturbed(&self.strategy_hat(p))
    }
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| dot(row, v)).collect()
}

fn mat_transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j]).collect())
        .collect()
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let bt = mat_transpose(b);
    a.iter()
        .map(|row| bt.iter().map(|col| dot(row, col)).collect())
        .collect()
}

/// Closed-form GDA step θᵗ⁺¹ = θᵗ + η·r(θᵗ) (clamped or discounted per
/// variant), with the loss assembled from dense transformed matrices:
/// ℓ̂ᵢ = −BᵢᵀUᵢB₋ᵢ·x̂₋ᵢ − μ·Bᵢᵀ(x_ref − Bᵢx̂ᵢ) and r = ⟨ℓ̂, x̂⟩𝟙 − ℓ̂.
pub fn gda_closed_form_step(
    oracle: &mut GdaOracle,
    game: &NfgGame,
    bases: &[PerturbedBasis; 2],
    rt: &[RtConfig; 2],
) {
    let dense: [Vec<Vec<f64>>; 2] = [bases[0].dense(), bases[1].dense()];
    // Player-1 rows of U, player-2 rows of −Uᵀ.
    let u1: Vec<Vec<f64>> = (0..game.n1)
        .map(|i| game.payoff[i * game.n2..(i + 1) * game.n2].to_vec())
        .collect();
    let u2: Vec<Vec<f64>> = (0..game.n2)
        .map(|j| (0..game.n1).map(|i| -game.payoff[i * game.n2 + j]).collect())
        .collect();
    let us = [u1, u2];

    let x_hat: [Vec<f64>; 2] = [oracle.strategy_hat(0), oracle.strategy_hat(1)];
    oracle.t += 1;
    for p in 0..2 {
        let o = 1 - p;
        let bt = mat_transpose(&dense[p]);
        let u_hat = mat_mul(&mat_mul(&bt, &us[p]), &dense[o]);
        let mut v_hat = mat_vec(&u_hat, &x_hat[o]);
        // RT term pulled back through Bᵀ with a real-space reference.
        let x_real = mat_vec(&dense[p], &x_hat[p]);
        let diff: Vec<f64> = rt[p]
            .x_ref
            .iter()
            .zip(&x_real)
            .map(|(&r, &c)| rt[p].mu * (r - c))
            .collect();
        let pulled = mat_vec(&bt, &diff);
        for (v, d) in v_hat.iter_mut().zip(pulled) {
            *v += d;
        }
        // r(θ) = v̂ − ⟨v̂, x̂⟩𝟙, scaled by η.
        let u = dot(&v_hat, &x_hat[p]);
        let step: Vec<f64> = v_hat.iter().map(|&v| oracle.eta * (v - u)).collect();
        accumulate_regret(oracle.variant, &mut oracle.theta[p], &step, oracle.t);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rt_transform_examples() {
        let v = [1.0, 2.0];
        assert_eq!(rt_transform(&v, 0.0, &[1.0, 0.0], &[0.0, 1.0]), vec![1.0, 2.0]);
        assert_eq!(rt_transform(&v, 7.0, &[0.3, 0.7], &[0.3, 0.7]), vec![1.0, 2.0]);
        assert_eq!(
            rt_transform(&v, 0.5, &[1.0, 0.0], &[0.0, 1.0]),
            vec![1.5, 1.5]
        );
    }

    #[test]
    fn regret_orthogonality() {
        let r = instantaneous_regret(&[1.0, 0.0], &[0.5, 0.5]);
        assert_eq!(r, vec![0.5, -0.5]);
        assert!(dot(&r, &[0.5, 0.5]).abs() < 1e-14);
        let r0 = instantaneous_regret(&[3.0, 3.0, 3.0], &[0.2, 0.3, 0.5]);
        for v in r0 {
            assert!(v.abs() < 1e-14);
        }
    }

    #[test]
    fn cumulative_variants() {
        let mut s = RegretState::new(2, RmVariant::RmPlus);
        s.regrets = vec![1.0, 0.0];
        s.update(&[-2.0, 1.0]);
        assert_eq!(s.regrets, vec![0.0, 1.0]);

        let mut s = RegretState::new(2, RmVariant::Rm);
        s.regrets = vec![1.0, 0.0];
        s.update(&[-2.0, 1.0]);
        assert_eq!(s.regrets, vec![-1.0, 1.0]);

        // At t = 1 both discount factors are 1/2 for alpha=1.5, beta=0.
        let mut s = RegretState::new(2, RmVariant::Drm { alpha: 1.5, beta: 0.0 });
        s.update(&[3.0, -4.0]);
        assert_eq!(s.t, 1);
        assert!((s.regrets[0] - 1.5).abs() < 1e-15);
        assert!((s.regrets[1] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn strategy_readout() {
        let s = RegretState { regrets: vec![0.0, 0.0], variant: RmVariant::Rm, t: 0 };
        assert_eq!(s.next_strategy(), vec![0.5, 0.5]);
        let s = RegretState { regrets: vec![3.0, 1.0], variant: RmVariant::Rm, t: 0 };
        assert_eq!(s.next_strategy(), vec![0.75, 0.25]);
        let s = RegretState { regrets: vec![-1.0, 2.0], variant: RmVariant::Rm, t: 0 };
        assert_eq!(s.next_strategy(), vec![0.0, 1.0]);
    }

    #[test]
    fn unperturbed_step_is_plain_rm() {
        // ε = 0 and μ = 0: one step must equal the textbook update.
        let game = NfgGame::new(2, 2, vec![2.0, -1.0, 0.5, 1.0]);
        let bases = [PerturbedBasis::identity(2), PerturbedBasis::identity(2)];
        let rt = [RtConfig::disabled(2), RtConfig::disabled(2)];
        let mut states = [
            RegretState::new(2, RmVariant::RmPlus),
            RegretState::new(2, RmVariant::RmPlus),
        ];
        let mut x = [vec![0.5, 0.5], vec![0.5, 0.5]];
        rtrm_nfg_step(&game, &mut states, &bases, &rt, &mut x);

        let v1 = game.action_values(0, &[0.5, 0.5]);
        let r1 = instantaneous_regret(&v1, &[0.5, 0.5]);
        let mut expect = RegretState::new(2, RmVariant::RmPlus);
        expect.update(&r1);
        assert_eq!(states[0].regrets, expect.regrets);
        assert_eq!(x[0], expect.next_strategy());
    }

    #[test]
    fn perturbed_membership() {
        let game = NfgGame::matching_pennies();
        let eps = 0.1;
        let bases = [
            PerturbedBasis::new(2, eps).unwrap(),
            PerturbedBasis::new(2, eps).unwrap(),
        ];
        let rt = [RtConfig::disabled(2), RtConfig::disabled(2)];
        let mut states = [
            RegretState::new(2, RmVariant::RmPlus),
            RegretState::new(2, RmVariant::RmPlus),
        ];
        let mut x = [vec![0.5, 0.5], vec![0.5, 0.5]];
        for _ in 0..200 {
            rtrm_nfg_step(&game, &mut states, &bases, &rt, &mut x);
            for p in 0..2 {
                let sum: f64 = x[p].iter().sum();
                assert!((sum - 1.0).abs() < 1e-12);
                for &v in &x[p] {
                    assert!(v >= eps - 1e-14);
                }
            }
        }
    }

    #[test]
    fn pennies_with_reference_at_equilibrium_converges() {
        // With the reference fixed at the interior equilibrium, the
        // regularized saddle point is the equilibrium itself and the
        // last iterate settles there.
        let game = NfgGame::matching_pennies();
        let bases = [
            PerturbedBasis::new(2, 0.1).unwrap(),
            PerturbedBasis::new(2, 0.1).unwrap(),
        ];
        let rt = [
            RtConfig { mu: 0.1, x_ref: vec![0.5, 0.5] },
            RtConfig { mu: 0.1, x_ref: vec![0.5, 0.5] },
        ];
        let mut states = [
            RegretState::new(2, RmVariant::RmPlus),
            RegretState::new(2, RmVariant::RmPlus),
        ];
        let mut x = [vec![0.5, 0.5], vec![0.5, 0.5]];
        for _ in 0..10_000 {
            rtrm_nfg_step(&game, &mut states, &bases, &rt, &mut x);
        }
        for p in 0..2 {
            assert!((x[p][0] - 0.5).abs() < 0.05, "player {p}: {:?}", x[p]);
            assert!((x[p][1] - 0.5).abs() < 0.05);
        }
    }

    #[test]
    fn fixed_point_at_interior_equilibrium() {
        let game = NfgGame::matching_pennies();
        let bases = [
            PerturbedBasis::new(2, 0.05).unwrap(),
            PerturbedBasis::new(2, 0.05).unwrap(),
        ];
        let rt = [
            RtConfig { mu: 0.3, x_ref: vec![0.5, 0.5] },
            RtConfig { mu: 0.3, x_ref: vec![0.5, 0.5] },
        ];
        let mut states = [
            RegretState::new(2, RmVariant::RmPlus),
            RegretState::new(2, RmVariant::RmPlus),
        ];
        let mut x = [vec![0.5, 0.5], vec![0.5, 0.5]];
        rtrm_nfg_step(&game, &mut states, &bases, &rt, &mut x);
        for p in 0..2 {
            assert!((x[p][0] - 0.5).abs() < 1e-12);
            assert!((x[p][1] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn gda_matches_rtrm_on_random_games() {
        // Deterministic xorshift so the games are reproducible.
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for variant in [RmVariant::Rm, RmVariant::RmPlus] {
            for n in [3usize, 4] {
                let payoff: Vec<f64> = (0..n * n).map(|_| next()).collect();
                let game = NfgGame::new(n, n, payoff);
                let eps = 0.02;
                let bases = [
                    PerturbedBasis::new(n, eps).unwrap(),
                    PerturbedBasis::new(n, eps).unwrap(),
                ];
                let x_ref: Vec<f64> = bases[0].to_perturbed(&vec![1.0 / n as f64; n]);
                let rt = [
                    RtConfig { mu: 0.05, x_ref: x_ref.clone() },
                    RtConfig { mu: 0.05, x_ref },
                ];
                let mut states = [
                    RegretState::new(n, variant),
                    RegretState::new(n, variant),
                ];
                let mut x = [
                    bases[0].to_perturbed(&vec![1.0 / n as f64; n]),
                    bases[1].to_perturbed(&vec![1.0 / n as f64; n]),
                ];
                let mut oracle = GdaOracle::new([n, n], variant, 1.0);
                for step in 0..50 {
                    rtrm_nfg_step(&game, &mut states, &bases, &rt, &mut x);
                    gda_closed_form_step(&mut oracle, &game, &bases, &rt);
                    for p in 0..2 {
                        let via_gda = oracle.strategy(p, &bases[p]);
                        for (a, b) in x[p].iter().zip(via_gda) {
                            assert!(
                                (a - b).abs() < 1e-10,
                                "divergence at step {step}, variant {variant:?}"
                            );
                        }
                    }
                }
            }
        }
    }
}
