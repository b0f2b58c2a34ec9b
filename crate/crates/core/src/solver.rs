//! Full-game solvers.
//!
//! Two algorithm families share one engine:
//!
//! * **CFR+** — alternating regret-matching-plus updates with quadratic
//!   averaging; metrics and the final output use the running average.
//! * **RTCFR** — reward-transformed CFR in a perturbed strategy space,
//!   evaluated on its last iterate. Training is split into blocks of
//!   `T` iterations; at each block boundary the reference strategy is
//!   reset to the carried-over strategy, and in adaptive mode the
//!   perturbation ε decays by γ whenever the incoming strategy's
//!   maximum information-set regret falls below the threshold δ
//!   (which decays alongside).
//!
//! Traversal accounting: one traversal is one full bottom-up pass
//! computing counterfactual values in a shared walk. A simultaneous
//! iteration costs 1 traversal; an alternating iteration costs 2 (one
//! walk per player); each adaptive threshold check costs 1.

use crate::game::{
    sequence_to_behavior, BehaviorStrategy, GameTree, Player, SeqId, SequenceIndex,
    SequenceStrategy, SparseUtilityMatrix,
};
use crate::metrics;
use crate::perturb::PerturbedBasis;
use crate::regret::{accumulate_regret, dot, regret_match_into, RmVariant};
use std::time::Instant;
use thiserror::Error;

/// Smallest adaptive perturbation; ε stops decaying below this.
pub const EPSILON_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Algorithm {
    CfrPlus,
    Rtcfr { variant: RmVariant },
}

impl Algorithm {
    pub fn is_cfr_plus(self) -> bool {
        matches!(self, Algorithm::CfrPlus)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    Fixed { eps: f64 },
    Adaptive { eps0: f64, delta0: f64, gamma: f64 },
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    /// Reward-transformation weight μ.
    pub mu: f64,
    /// Iterations per reference block (T).
    pub inner_iters: u64,
    /// Number of reference blocks (N); `None` lets the traversal budget
    /// decide.
    pub num_bspps: Option<u64>,
    pub perturbation: Perturbation,
    /// Update order; defaults to alternating for CFR+ and simultaneous
    /// for RTCFR.
    pub alternating: Option<bool>,
    /// Metric logging interval, in traversals.
    pub eval_every: u64,
    pub traversal_budget: u64,
    /// Also log a row at zero traversals.
    pub log_initial: bool,
    /// Stop once the logged r^max reaches this value.
    pub until_rmax: Option<f64>,
    /// Stop once the logged exploitability reaches this value.
    pub until_expl: Option<f64>,
}

impl SolverConfig {
    /// CFR+ with standard settings and the given budget.
    pub fn cfr_plus(traversal_budget: u64) -> SolverConfig {
        SolverConfig {
            algorithm: Algorithm::CfrPlus,
            mu: 0.0,
            inner_iters: 1,
            num_bspps: None,
            perturbation: Perturbation::Fixed { eps: 0.0 },
            alternating: None,
            eval_every: 10,
            traversal_budget,
            log_initial: false,
            until_rmax: None,
            until_expl: None,
        }
    }

    /// RTCFR with regret matching plus.
    pub fn rtcfr_plus(
        mu: f64,
        inner_iters: u64,
        perturbation: Perturbation,
        traversal_budget: u64,
    ) -> SolverConfig {
        SolverConfig {
            algorithm: Algorithm::Rtcfr { variant: RmVariant::RmPlus },
            mu,
            inner_iters,
            num_bspps: None,
            perturbation,
            alternating: None,
            eval_every: 10,
            traversal_budget,
            log_initial: false,
            until_rmax: None,
            until_expl: None,
        }
    }

    /// Both algorithm families default to alternating updates; the
    /// shared-walk simultaneous mode (1 traversal per iteration) is
    /// opt-in.
    pub fn alternating(&self) -> bool {
        self.alternating.unwrap_or(true)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |field: &str, msg: String| {
            Err(ConfigError::Invalid { field: field.to_string(), msg })
        };
        if !(self.mu.is_finite() && self.mu >= 0.0) {
            return fail("mu", format!("must be finite and >= 0, got {}", self.mu));
        }
        if self.algorithm.is_cfr_plus() && self.mu != 0.0 {
            return fail("mu", "must be 0 for algorithm=cfr+".into());
        }
        if self.inner_iters == 0 {
            return fail("T", "must be >= 1".into());
        }
        if self.eval_every == 0 {
            return fail("eval_every", "must be >= 1".into());
        }
        if self.traversal_budget < self.eval_every {
            return fail(
                "budget",
                format!(
                    "must be >= eval_every ({} < {})",
                    self.traversal_budget, self.eval_every
                ),
            );
        }
        match self.perturbation {
            Perturbation::Fixed { eps } => {
                if !(eps.is_finite() && (0.0..1.0).contains(&eps)) {
                    return fail("perturbation.eps", format!("must be in [0, 1), got {eps}"));
                }
            }
            Perturbation::Adaptive { eps0, delta0, gamma } => {
                if self.algorithm.is_cfr_plus() {
                    return fail(
                        "perturbation",
                        "adaptive perturbation requires an rtcfr algorithm".into(),
                    );
                }
                if !(eps0.is_finite() && (0.0..1.0).contains(&eps0)) {
                    return fail("perturbation.eps0", format!("must be in [0, 1), got {eps0}"));
                }
                if !(delta0.is_finite() && delta0 > 0.0) {
                    return fail("perturbation.delta", format!("must be > 0, got {delta0}"));
                }
                if !(gamma.is_finite() && gamma > 0.0 && gamma < 1.0) {
                    return fail(
                        "perturbation.gamma",
                        format!("must lie strictly in (0, 1), got {gamma}"),
                    );
                }
            }
        }
        if let Some(t) = self.until_rmax {
            if !(t.is_finite() && t >= 0.0) {
                return fail("until_rmax", format!("must be finite and >= 0, got {t}"));
            }
        }
        if let Some(t) = self.until_expl {
            if !(t.is_finite() && t >= 0.0) {
                return fail("until_expl", format!("must be finite and >= 0, got {t}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{field}: {msg}")]
    Invalid { field: String, msg: String },
}

/// How a solve ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The configured N×T iterations finished within budget.
    Completed,
    /// The traversal budget ran out first (informational; the report
    /// still carries the best-so-far state).
    BudgetExhausted,
    /// The requested tolerances were reached at a logged point.
    ToleranceReached,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryRow {
    pub traversals: u64,
    pub exploitability: f64,
    pub max_isregret: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub wall_ms: u64,
}

/// One logged point, handed to the caller's sink: the row plus the
/// behavior profile the metrics were computed on.
pub struct LogPoint<'a> {
    pub row: TrajectoryRow,
    pub profile: [&'a BehaviorStrategy; 2],
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    /// Final behavior profile: the last iterate for RTCFR, the
    /// quadratic average for CFR+.
    pub strategies: [BehaviorStrategy; 2],
    pub trajectory: Vec<TrajectoryRow>,
    pub status: SolveStatus,
    pub traversals: u64,
    pub iterations: u64,
    /// Reference blocks entered.
    pub bspps: u64,
    /// Reference resets performed (block boundaries after the first).
    pub reference_resets: u64,
    pub final_epsilon: f64,
    pub final_delta: f64,
}

/// Counterfactual values over one player's sequences: leaf values
/// weighted by opponent-plus-chance reach, accumulated bottom-up with
/// the player's own behavior. Slot 0 ends up holding the player's
/// expected utility for the profile.
pub fn counterfactual_values(
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
    player: Player,
    x_self: &BehaviorStrategy,
    q_opp: &SequenceStrategy,
) -> Vec<f64> {
    let pidx = idx.player(player);
    let mut v = vec![0.0; pidx.num_sequences];
    umat.scatter_for(player, q_opp.values(), &mut v);
    for &iid in &pidx.bottomup {
        let info = idx.infoset(iid);
        let range = info.seq_range();
        let s = dot(&x_self.values()[range.clone()], &v[range]);
        v[info.parent_seq.index()] += s;
    }
    v
}

/// Running quadratically-weighted strategy average: weight t² at
/// iteration t, held as a single accumulator.
#[derive(Debug, Clone)]
pub struct QuadraticAverager {
    player: Player,
    acc: Vec<f64>,
    weight_sum: f64,
    t: u64,
}

impl QuadraticAverager {
    pub fn new(idx: &SequenceIndex, player: Player) -> QuadraticAverager {
        QuadraticAverager {
            player,
            acc: vec![0.0; idx.player(player).num_sequences],
            weight_sum: 0.0,
            t: 0,
        }
    }

    pub fn push(&mut self, q: &SequenceStrategy) {
        debug_assert_eq!(q.player, self.player);
        self.t += 1;
        let w = (self.t as f64) * (self.t as f64);
        for (a, &v) in self.acc.iter_mut().zip(q.values()) {
            *a += w * v;
        }
        self.weight_sum += w;
    }

    pub fn len(&self) -> u64 {
        self.t
    }

    pub fn is_empty(&self) -> bool {
        self.t == 0
    }

    /// Normalized average; `None` before any push.
    pub fn current(&self) -> Option<SequenceStrategy> {
        if self.t == 0 {
            return None;
        }
        let inv = 1.0 / self.weight_sum;
        Some(SequenceStrategy::new(
            self.player,
            self.acc.iter().map(|&v| v * inv).collect(),
        ))
    }
}

/// Quadratically-weighted average of a stored history (mainly for
/// small-scale checks; solvers keep the running form).
pub fn quadratic_average(history: &[SequenceStrategy]) -> Option<SequenceStrategy> {
    let first = history.first()?;
    let mut acc = vec![0.0; first.values().len()];
    let mut wsum = 0.0;
    for (k, q) in history.iter().enumerate() {
        let t = (k + 1) as f64;
        let w = t * t;
        for (a, &v) in acc.iter_mut().zip(q.values()) {
            *a += w * v;
        }
        wsum += w;
    }
    let inv = 1.0 / wsum;
    acc.iter_mut().for_each(|v| *v *= inv);
    Some(SequenceStrategy::new(first.player, acc))
}

/// Largest per-infoset perturbation mass, as a fraction of 1/n. An
/// initial ε too large for a wide infoset (ε ≥ 1/n would collapse the
/// basis) is scaled down there; the scale is fixed at start-up so that
/// adaptive decay still shrinks every infoset's perturbation by exactly
/// γ per step, keeping the regret plateau and the threshold δ in
/// lockstep.
pub const PERTURBATION_CAP_FRAC: f64 = 0.25;

/// Per-infoset scale for the global ε, fixed from the initial value.
#[inline]
fn epsilon_scale(initial_eps: f64, num_actions: usize) -> f64 {
    if initial_eps <= 0.0 {
        return 1.0;
    }
    (PERTURBATION_CAP_FRAC / (num_actions as f64 * initial_eps)).min(1.0)
}

enum StopReason {
    Budget,
    Tolerance,
}

struct Engine<'a> {
    cfg: &'a SolverConfig,
    tree: &'a GameTree,
    idx: &'a SequenceIndex,
    umat: &'a SparseUtilityMatrix,
    variant: RmVariant,
    alternating: bool,

    x: [BehaviorStrategy; 2],
    x_ref: [BehaviorStrategy; 2],
    regrets: [Vec<f64>; 2],
    bases: Vec<PerturbedBasis>,
    eps_scale: Vec<f64>,
    eps: f64,
    delta: f64,
    gamma: f64,

    iterations: u64,
    traversals: u64,
    bspps: u64,
    resets: u64,
    started: Instant,

    q: [SequenceStrategy; 2],
    v: [Vec<f64>; 2],
    averagers: Option<[QuadraticAverager; 2]>,
    avg_x: [BehaviorStrategy; 2],

    trajectory: Vec<TrajectoryRow>,
    last_logged: Option<u64>,

    // Per-infoset scratch.
    buf_v: Vec<f64>,
    buf_vt: Vec<f64>,
    buf_r: Vec<f64>,
    buf_xhat: Vec<f64>,
}

impl<'a> Engine<'a> {
    fn new(
        cfg: &'a SolverConfig,
        tree: &'a GameTree,
        idx: &'a SequenceIndex,
        umat: &'a SparseUtilityMatrix,
    ) -> Engine<'a> {
        let variant = match cfg.algorithm {
            Algorithm::CfrPlus => RmVariant::RmPlus,
            Algorithm::Rtcfr { variant } => variant,
        };
        let (eps, delta, gamma) = match cfg.perturbation {
            Perturbation::Fixed { eps } => (eps, 0.0, 1.0),
            Perturbation::Adaptive { eps0, delta0, gamma } => (eps0, delta0, gamma),
        };
        let x = [
            BehaviorStrategy::uniform(idx, Player::One),
            BehaviorStrategy::uniform(idx, Player::Two),
        ];
        let regrets = [
            vec![0.0; idx.player(Player::One).num_sequences],
            vec![0.0; idx.player(Player::Two).num_sequences],
        ];
        let mut bases = Vec::with_capacity(idx.num_infosets());
        let mut eps_scale = Vec::with_capacity(idx.num_infosets());
        for i in 0..idx.num_infosets() {
            let n = idx.infoset(crate::game::InfoSetId(i as u32)).num_actions;
            let scale = epsilon_scale(eps, n);
            eps_scale.push(scale);
            bases.push(
                PerturbedBasis::new(n, scale * eps).expect("scaled epsilon is always valid"),
            );
        }
        let max_actions = tree.max_branching();
        let averagers = cfg.algorithm.is_cfr_plus().then(|| {
            [
                QuadraticAverager::new(idx, Player::One),
                QuadraticAverager::new(idx, Player::Two),
            ]
        });
        Engine {
            cfg,
            tree,
            idx,
            umat,
            variant,
            alternating: cfg.alternating(),
            x_ref: x.clone(),
            avg_x: x.clone(),
            x,
            regrets,
            bases,
            eps_scale,
            eps,
            delta,
            gamma,
            iterations: 0,
            traversals: 0,
            bspps: 0,
            resets: 0,
            started: Instant::now(),
            q: [
                SequenceStrategy::zeros(idx, Player::One),
                SequenceStrategy::zeros(idx, Player::Two),
            ],
            v: [
                vec![0.0; idx.player(Player::One).num_sequences],
                vec![0.0; idx.player(Player::Two).num_sequences],
            ],
            averagers,
            trajectory: Vec::new(),
            last_logged: None,
            buf_v: vec![0.0; max_actions],
            buf_vt: vec![0.0; max_actions],
            buf_r: vec![0.0; max_actions],
            buf_xhat: vec![0.0; max_actions],
        }
    }

    fn refresh_q(&mut self, p: usize) {
        let player = if p == 0 { Player::One } else { Player::Two };
        let q = self.q[p].values_mut();
        q[0] = 1.0;
        let x = self.x[p].values();
        for &iid in self.idx.infosets_of(player) {
            let info = self.idx.infoset(iid);
            let base = q[info.parent_seq.index()];
            for s in info.seq_range() {
                q[s] = base * x[s];
            }
        }
    }

    fn rebuild_bases(&mut self) {
        for (i, b) in self.bases.iter_mut().enumerate() {
            let n = self.idx.infoset(crate::game::InfoSetId(i as u32)).num_actions;
            *b = PerturbedBasis::new(n, self.eps_scale[i] * self.eps)
                .expect("scaled epsilon is always valid");
        }
    }

    /// Regret update and strategy refresh for one player, given that
    /// `self.v[p]` holds the player's counterfactual values.
    fn update_player(&mut self, p: usize) {
        let player = if p == 0 { Player::One } else { Player::Two };
        let mu = self.cfg.mu;
        let t = self.iterations + 1;
        // Bottom-up: children contribute to the parent's action slot
        // with the pre-update strategy before the slot's own update.
        for k in 0..self.idx.player(player).bottomup.len() {
            let iid = self.idx.player(player).bottomup[k];
            let info = self.idx.infoset(iid);
            let range = info.seq_range();
            let n = info.num_actions;
            let parent = info.parent_seq.index();

            self.buf_v[..n].copy_from_slice(&self.v[p][range.clone()]);
            let x_cur = &self.x[p].values()[range.clone()];
            let parent_add = dot(x_cur, &self.buf_v[..n]);

            // RT counterfactual value ṽ = v + μ(x_ref − x).
            let x_ref = &self.x_ref[p].values()[range.clone()];
            for j in 0..n {
                self.buf_vt[j] = self.buf_v[j] + mu * (x_ref[j] - x_cur[j]);
            }
            let u = dot(&self.buf_vt[..n], x_cur);
            // Coordinate regret r = Bᵀṽ − u·𝟙.
            let basis = self.bases[iid.index()];
            basis.pull_back_value_into(&self.buf_vt[..n], &mut self.buf_r[..n]);
            for r in &mut self.buf_r[..n] {
                *r -= u;
            }
            accumulate_regret(
                self.variant,
                &mut self.regrets[p][range.clone()],
                &self.buf_r[..n],
                t,
            );
            regret_match_into(&self.regrets[p][range.clone()], &mut self.buf_xhat[..n]);
            basis.to_perturbed_into(
                &self.buf_xhat[..n],
                &mut self.x[p].values_mut()[range],
            );

            self.v[p][parent] += parent_add;
        }
    }

    fn accumulate_average(&mut self) {
        if self.averagers.is_some() {
            self.refresh_q(0);
            self.refresh_q(1);
            let avg = self.averagers.as_mut().unwrap();
            avg[0].push(&self.q[0]);
            avg[1].push(&self.q[1]);
        }
    }

    /// One iteration; returns a stop reason if logging or budget says so.
    fn iterate(&mut self, sink: &mut dyn FnMut(LogPoint<'_>)) -> Option<StopReason> {
        if self.alternating {
            // Player 1's walk, then player 2 against the fresh strategy.
            self.refresh_q(1);
            self.v[0].fill(0.0);
            let (v0, q1) = (&mut self.v[0], &self.q[1]);
            self.umat.scatter_for(Player::One, q1.values(), v0);
            self.update_player(0);
            self.traversals += 1;
            if let Some(stop) = self.after_traversal(sink) {
                return Some(stop);
            }

            self.refresh_q(0);
            self.v[1].fill(0.0);
            let (v1, q0) = (&mut self.v[1], &self.q[0]);
            self.umat.scatter_for(Player::Two, q0.values(), v1);
            self.update_player(1);
            self.traversals += 1;
            self.iterations += 1;
            self.accumulate_average();
            self.after_traversal(sink)
        } else {
            // Shared walk: both players' values at the same profile.
            self.refresh_q(0);
            self.refresh_q(1);
            self.v[0].fill(0.0);
            self.v[1].fill(0.0);
            {
                let [v0, v1] = &mut self.v;
                self.umat
                    .scatter_both(self.q[0].values(), self.q[1].values(), v0, v1);
            }
            self.update_player(0);
            self.update_player(1);
            self.traversals += 1;
            self.iterations += 1;
            self.accumulate_average();
            self.after_traversal(sink)
        }
    }

    /// Evaluate the reporting profile (last iterate or running average)
    /// and append a trajectory row.
    fn log_point(&mut self, sink: &mut dyn FnMut(LogPoint<'_>)) -> (f64, f64) {
        let use_average = match &self.averagers {
            Some(avg) => !avg[0].is_empty(),
            None => false,
        };
        let (expl, rmax) = if use_average {
            let avg = self.averagers.as_ref().unwrap();
            let q1 = avg[0].current().unwrap();
            let q2 = avg[1].current().unwrap();
            self.avg_x = [
                sequence_to_behavior(&q1, self.idx),
                sequence_to_behavior(&q2, self.idx),
            ];
            let expl = metrics::exploitability(self.idx, self.umat, &q1, &q2);
            let rmax = metrics::max_info_set_regret(
                self.tree,
                self.idx,
                self.umat,
                [&self.avg_x[0], &self.avg_x[1]],
            )
            .max;
            (expl, rmax)
        } else {
            self.refresh_q(0);
            self.refresh_q(1);
            let expl = metrics::exploitability(self.idx, self.umat, &self.q[0], &self.q[1]);
            let rmax = metrics::max_info_set_regret(
                self.tree,
                self.idx,
                self.umat,
                [&self.x[0], &self.x[1]],
            )
            .max;
            (expl, rmax)
        };
        let row = TrajectoryRow {
            traversals: self.traversals,
            exploitability: expl,
            max_isregret: rmax,
            epsilon: self.eps,
            delta: self.delta,
            wall_ms: self.started.elapsed().as_millis() as u64,
        };
        self.trajectory.push(row);
        self.last_logged = Some(self.traversals);
        let profile = if use_average {
            [&self.avg_x[0], &self.avg_x[1]]
        } else {
            [&self.x[0], &self.x[1]]
        };
        sink(LogPoint { row, profile });
        (expl, rmax)
    }

    fn tolerances_met(&self, expl: f64, rmax: f64) -> bool {
        if self.cfg.until_rmax.is_none() && self.cfg.until_expl.is_none() {
            return false;
        }
        self.cfg.until_rmax.map_or(true, |t| rmax <= t)
            && self.cfg.until_expl.map_or(true, |t| expl <= t)
    }

    fn after_traversal(&mut self, sink: &mut dyn FnMut(LogPoint<'_>)) -> Option<StopReason> {
        let due = match self.last_logged {
            Some(last) => self.traversals - last >= self.cfg.eval_every,
            None => self.traversals >= self.cfg.eval_every,
        };
        if due {
            let (expl, rmax) = self.log_point(sink);
            if self.tolerances_met(expl, rmax) {
                return Some(StopReason::Tolerance);
            }
        }
        if self.traversals >= self.cfg.traversal_budget {
            return Some(StopReason::Budget);
        }
        None
    }

    /// Block boundary: carry the strategy and regrets, reset the
    /// reference, and in adaptive mode run the threshold check.
    fn begin_bspp(&mut self, sink: &mut dyn FnMut(LogPoint<'_>)) -> Option<StopReason> {
        self.bspps += 1;
        if !self.cfg.algorithm.is_cfr_plus() {
            if self.bspps > 1 {
                self.resets += 1;
            }
            self.x_ref = self.x.clone();
        }
        if let Perturbation::Adaptive { .. } = self.cfg.perturbation {
            let rmax = metrics::max_info_set_regret(
                self.tree,
                self.idx,
                self.umat,
                [&self.x[0], &self.x[1]],
            )
            .max;
            self.traversals += 1;
            if rmax < self.delta {
                // ε stops decaying at the floor; δ keeps decaying.
                if self.eps * self.gamma >= EPSILON_FLOOR {
                    self.eps *= self.gamma;
                    self.rebuild_bases();
                }
                self.delta *= self.gamma;
            }
            return self.after_traversal(sink);
        }
        None
    }

    fn run(&mut self, sink: &mut dyn FnMut(LogPoint<'_>)) -> SolveStatus {
        if self.cfg.log_initial {
            let (expl, rmax) = self.log_point(sink);
            if self.tolerances_met(expl, rmax) {
                return SolveStatus::ToleranceReached;
            }
        }
        let max_bspps = self.cfg.num_bspps.unwrap_or(u64::MAX);
        let mut stop: Option<StopReason> = None;
        'outer: while self.bspps < max_bspps {
            if let Some(s) = self.begin_bspp(sink) {
                stop = Some(s);
                break;
            }
            for _ in 0..self.cfg.inner_iters {
                if let Some(s) = self.iterate(sink) {
                    stop = Some(s);
                    break 'outer;
                }
            }
        }
        // Close the trajectory at the final state.
        if self.last_logged != Some(self.traversals) {
            let (expl, rmax) = self.log_point(sink);
            if self.tolerances_met(expl, rmax) {
                stop = Some(StopReason::Tolerance);
            }
        }
        match stop {
            Some(StopReason::Tolerance) => SolveStatus::ToleranceReached,
            Some(StopReason::Budget) => SolveStatus::BudgetExhausted,
            None => SolveStatus::Completed,
        }
    }

    fn into_report(mut self, status: SolveStatus) -> SolveReport {
        let strategies = match &self.averagers {
            Some(avg) if !avg[0].is_empty() => {
                let q1 = avg[0].current().unwrap();
                let q2 = avg[1].current().unwrap();
                [
                    sequence_to_behavior(&q1, self.idx),
                    sequence_to_behavior(&q2, self.idx),
                ]
            }
            _ => self.x.clone(),
        };
        SolveReport {
            strategies,
            trajectory: std::mem::take(&mut self.trajectory),
            status,
            traversals: self.traversals,
            iterations: self.iterations,
            bspps: self.bspps,
            reference_resets: self.resets,
            final_epsilon: self.eps,
            final_delta: self.delta,
        }
    }
}

/// Run a solver. The sink receives every trajectory row as it is
/// produced, along with the profile the metrics were computed on, so
/// callers own file output and extra checks.
pub fn solve(
    cfg: &SolverConfig,
    tree: &GameTree,
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
    sink: &mut dyn FnMut(LogPoint<'_>),
) -> Result<SolveReport, ConfigError> {
    cfg.validate()?;
    let mut engine = Engine::new(cfg, tree, idx, umat);
    let status = engine.run(sink);
    Ok(engine.into_report(status))
}

/// Convenience wrapper discarding log points.
pub fn solve_quiet(
    cfg: &SolverConfig,
    tree: &GameTree,
    idx: &SequenceIndex,
    umat: &SparseUtilityMatrix,
) -> Result<SolveReport, ConfigError> {
    solve(cfg, tree, idx, umat, &mut |_| {})
}

// Keep SeqId referenced for doc clarity in this module.
#[allow(unused)]
fn _seq_marker(_: SeqId) {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::behavior_to_sequence;
    use crate::games::{generate, Family, GameSpec};

    fn setup(spec: GameSpec) -> (GameTree, SequenceIndex, SparseUtilityMatrix) {
        let tree = generate(spec).unwrap();
        let idx = SequenceIndex::build(&tree).unwrap();
        let umat = SparseUtilityMatrix::build(&tree, &idx);
        (tree, idx, umat)
    }

    #[test]
    fn quadratic_average_weights() {
        let (_, idx, _) = setup(GameSpec::new(Family::Kuhn, 3));
        let q1 = behavior_to_sequence(&BehaviorStrategy::uniform(&idx, Player::One), &idx);
        // Single element: unchanged.
        let avg = quadratic_average(std::slice::from_ref(&q1)).unwrap();
        assert_eq!(avg.values(), q1.values());
        // Two elements: (1·q1 + 4·q2)/5.
        let mut x2 = BehaviorStrategy::uniform(&idx, Player::One);
        for v in x2.values_mut().iter_mut().skip(1) {
            *v = if *v > 0.4 { 0.8 } else { 0.2 };
        }
        let (_, idx3, _) = setup(GameSpec::new(Family::Kuhn, 3));
        let q2 = behavior_to_sequence(&x2, &idx3);
        let avg = quadratic_average(&[q1.clone(), q2.clone()]).unwrap();
        for ((a, &b), &c) in avg.values().iter().zip(q1.values()).zip(q2.values()) {
            assert!((a - (b + 4.0 * c) / 5.0).abs() < 1e-15);
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = SolverConfig::rtcfr_plus(
            0.01,
            5,
            Perturbation::Adaptive { eps0: 0.1, delta0: 1.0, gamma: 1.2 },
            1000,
        );
        assert!(matches!(
            cfg.validate(),
            Err(ConfigError::Invalid { ref field, .. }) if field == "perturbation.gamma"
        ));
        cfg.perturbation = Perturbation::Adaptive { eps0: 0.1, delta0: 1.0, gamma: 0.5 };
        assert!(cfg.validate().is_ok());

        let mut bad = SolverConfig::cfr_plus(100);
        bad.mu = 0.5;
        assert!(matches!(
            bad.validate(),
            Err(ConfigError::Invalid { ref field, .. }) if field == "mu"
        ));
        let mut bad = SolverConfig::cfr_plus(100);
        bad.perturbation = Perturbation::Adaptive { eps0: 0.1, delta0: 1.0, gamma: 0.5 };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn traversal_accounting() {
        let (tree, idx, umat) = setup(GameSpec::new(Family::Kuhn, 3));
        // Simultaneous RTCFR: 1 traversal per iteration.
        let mut cfg = SolverConfig::rtcfr_plus(0.0, 1, Perturbation::Fixed { eps: 0.0 }, 50);
        cfg.eval_every = 10;
        let report = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        assert_eq!(report.traversals, 50);
        assert_eq!(report.iterations, 50);
        // Alternating CFR+: 2 per iteration.
        let cfg = SolverConfig::cfr_plus(50);
        let report = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        assert_eq!(report.traversals, 50);
        assert_eq!(report.iterations, 25);
    }

    #[test]
    fn reference_reset_count() {
        let (tree, idx, umat) = setup(GameSpec::new(Family::Kuhn, 3));
        let mut cfg = SolverConfig::rtcfr_plus(0.01, 5, Perturbation::Fixed { eps: 0.01 }, 1000);
        cfg.num_bspps = Some(3);
        let report = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        assert_eq!(report.bspps, 3);
        assert_eq!(report.reference_resets, 2);
        assert_eq!(report.iterations, 15);
        assert_eq!(report.status, SolveStatus::Completed);
    }

    #[test]
    fn t_equal_one_nullifies_rt_weight() {
        // With T = 1 the reference equals the live strategy at every
        // update, so μ has no effect on the trajectory.
        let (tree, idx, umat) = setup(GameSpec::new(Family::Kuhn, 3));
        let mut a = SolverConfig::rtcfr_plus(0.0, 1, Perturbation::Fixed { eps: 0.01 }, 200);
        a.eval_every = 20;
        let mut b = a.clone();
        b.mu = 1000.0;
        let ra = solve_quiet(&a, &tree, &idx, &umat).unwrap();
        let rb = solve_quiet(&b, &tree, &idx, &umat).unwrap();
        assert_eq!(ra.trajectory.len(), rb.trajectory.len());
        for (x, y) in ra.trajectory.iter().zip(&rb.trajectory) {
            assert_eq!(x.exploitability, y.exploitability);
            assert_eq!(x.max_isregret, y.max_isregret);
        }
        for p in 0..2 {
            assert_eq!(ra.strategies[p].values(), rb.strategies[p].values());
        }
    }

    #[test]
    fn adaptive_epsilon_decays_by_gamma_exactly() {
        let (tree, idx, umat) = setup(GameSpec::new(Family::Kuhn, 3));
        let mut cfg = SolverConfig::rtcfr_plus(
            0.01,
            5,
            Perturbation::Adaptive { eps0: 0.1, delta0: 1.0, gamma: 0.5 },
            2000,
        );
        cfg.eval_every = 10;
        let report = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        let mut prev = f64::INFINITY;
        for row in &report.trajectory {
            assert!(row.epsilon <= prev || (prev - row.epsilon).abs() < 1e-300);
            prev = row.epsilon;
            // Every observed ε is ε₀ times a power of γ.
            let ratio = (row.epsilon.ln() - 0.1f64.ln()) / 0.5f64.ln();
            assert!((ratio - ratio.round()).abs() < 1e-9, "eps {}", row.epsilon);
            assert!(row.exploitability.is_finite() && row.max_isregret.is_finite());
        }
        let t: Vec<u64> = report.trajectory.iter().map(|r| r.traversals).collect();
        assert!(t.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn cfr_plus_average_improves_on_kuhn() {
        let (tree, idx, umat) = setup(GameSpec::new(Family::Kuhn, 3));
        let mut cfg = SolverConfig::cfr_plus(400);
        cfg.eval_every = 40;
        let report = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        let rows = &report.trajectory;
        assert!(rows.len() >= 5);
        // After the burn-in, the averaged exploitability keeps dropping.
        let mid = rows[rows.len() / 2].exploitability;
        let last = rows.last().unwrap().exploitability;
        assert!(last < mid, "exploitability {last} vs {mid}");
        assert!(last >= -1e-12);
    }

    #[test]
    fn polytope_safety_under_fixed_perturbation() {
        let (tree, idx, umat) = setup(GameSpec::new(Family::Kuhn, 3));
        let eps = 0.05;
        let mut cfg = SolverConfig::rtcfr_plus(0.01, 5, Perturbation::Fixed { eps }, 300);
        cfg.eval_every = 10;
        let mut ok = true;
        let report = solve(&cfg, &tree, &idx, &umat, &mut |pt| {
            for p in 0..2 {
                let player = if p == 0 { Player::One } else { Player::Two };
                for &iid in idx.infosets_of(player) {
                    let info = idx.infoset(iid);
                    for s in info.seq_range() {
                        if pt.profile[p].values()[s] < eps - 1e-13 {
                            ok = false;
                        }
                    }
                }
            }
        })
        .unwrap();
        assert!(ok);
        assert!(report.traversals >= 300);
    }

    #[test]
    fn determinism_across_runs() {
        let (tree, idx, umat) = setup(GameSpec::new(Family::Leduc, 3));
        let mut cfg = SolverConfig::rtcfr_plus(
            1e-4,
            20,
            Perturbation::Adaptive { eps0: 0.01, delta0: 0.02, gamma: 0.1 },
            500,
        );
        cfg.eval_every = 25;
        let a = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        let b = solve_quiet(&cfg, &tree, &idx, &umat).unwrap();
        assert_eq!(a.trajectory.len(), b.trajectory.len());
        for (x, y) in a.trajectory.iter().zip(&b.trajectory) {
            assert_eq!(x.traversals, y.traversals);
            assert_eq!(x.exploitability.to_bits(), y.exploitability.to_bits());
            assert_eq!(x.max_isregret.to_bits(), y.max_isregret.to_bits());
            assert_eq!(x.epsilon.to_bits(), y.epsilon.to_bits());
        }
        for p in 0..2 {
            for (x, y) in a.strategies[p].values().iter().zip(b.strategies[p].values()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }
}
