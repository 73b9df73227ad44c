//! The two-agent stake game.
//!
//! Each agent sees one binary predictor and guesses the binary target. It
//! plays the action maximising its posterior `p(s = a | x_i)` (ties go to
//! the lower action) and receives `c(x_k) v(s, a)`, where `v` is 1 on a
//! correct guess and `c(x) = 1 + x` is set by agent `k` from its own
//! observation. Expected rewards are computed by exact enumeration.

use pidkit_core::{AxisSet, Error, JointDistribution, Result};
use serde::Serialize;

#[derive(Debug, Clone)]
pub struct StakeGameSpec {
    pub distribution: JointDistribution,
}

/// Rewards with agent `setter` choosing the stakes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StakeRound {
    pub setter: usize,
    pub rewards: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StakeGameResult {
    /// `strategies[i][x]` is agent `i + 1`'s action after observing `x`.
    pub strategies: [[usize; 2]; 2],
    pub rounds: [StakeRound; 2],
}

impl StakeGameResult {
    /// Setter's reward minus the other agent's, for the given setter (1 or 2).
    pub fn advantage(&self, setter: usize) -> f64 {
        let r = &self.rounds[setter - 1].rewards;
        r[setter - 1] - r[2 - setter]
    }
}

fn stake(x: usize) -> f64 {
    1.0 + x as f64
}

fn best_action(d: &JointDistribution, axis: usize, t: usize, x: usize) -> Result<usize> {
    let joint = d.marginal_table(AxisSet::from_axes([axis, t]))?;
    let ordered = axis < t;
    let p = |s: usize| if ordered { joint[x * 2 + s] } else { joint[s * 2 + x] };
    // strict comparison keeps the lower action on ties
    Ok(if p(1) > p(0) { 1 } else { 0 })
}

pub fn run_stake_game(spec: &StakeGameSpec) -> Result<StakeGameResult> {
    let d = &spec.distribution;
    let t = d.target_axis()?;
    let preds = d.predictor_axes();
    if preds.len() != 2 {
        return Err(Error::InvalidOption(format!("stake game needs 2 predictors, got {}", preds.len())));
    }
    if d.cards().iter().any(|&c| c != 2) {
        return Err(Error::InvalidOption("stake game needs binary predictors and binary actions".into()));
    }
    let mut strategies = [[0; 2]; 2];
    for (i, &axis) in preds.iter().enumerate() {
        for x in 0..2 {
            strategies[i][x] = best_action(d, axis, t, x)?;
        }
    }
    let round = |setter: usize| {
        let mut rewards = [0.0; 2];
        for (outcome, p) in d.support() {
            let c = stake(outcome[preds[setter - 1]]);
            for (i, &axis) in preds.iter().enumerate() {
                if strategies[i][outcome[axis]] == outcome[t] {
                    rewards[i] += p * c;
                }
            }
        }
        StakeRound { setter, rewards }
    };
    Ok(StakeGameResult { strategies, rounds: [round(1), round(2)] })
}
