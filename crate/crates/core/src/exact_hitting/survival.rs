//! Exact survival functions `P[H >= t]` of hitting times.

use serde::Serialize;

use super::kernel::walk_step;
use crate::error::{Error, Result};
use crate::random_sets::TargetSet;
use crate::vertex::Vertex;

/// Maximum number of state updates (states times steps) in one survival computation.
pub const HORIZON_BUDGET: u128 = 100_000_000;

/// Largest dimension for which the dense `2^n` oracle is allowed.
pub const FULL_MAX_DIM: u32 = 20;

/// Projection of the walk onto its distance from a fixed vertex.
///
/// From distance `d` the distance goes up with probability `(n-d)/n` and
/// down with probability `d/n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LumpedChain {
    pub n: u32,
}

impl LumpedChain {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be positive"));
        }
        Ok(LumpedChain { n })
    }

    #[inline]
    pub fn up(&self, d: u32) -> f64 {
        (self.n - d) as f64 / self.n as f64
    }

    #[inline]
    pub fn down(&self, d: u32) -> f64 {
        d as f64 / self.n as f64
    }
}

/// Where a survival table starts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SurvivalStart {
    /// Distance `k` from the single target `0`.
    Lumped { n: u32, k: u32 },
    Vertex { n: u32, bits: u64 },
}

/// `survival[t] = P[H >= t]` for `t = 0..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurvivalTable {
    pub start: SurvivalStart,
    pub horizon: u64,
    pub survival: Vec<f64>,
}

impl SurvivalTable {
    /// `P[H >= t]`.
    pub fn at(&self, t: u64) -> f64 {
        self.survival[t as usize]
    }

    /// `P[H < t]`.
    pub fn hit_before(&self, t: u64) -> f64 {
        1.0 - self.at(t)
    }

    /// `P[H >= a m]`, i.e. the survival at `ceil(a m)`.
    pub fn at_scaled(&self, a: f64, m: f64) -> Option<f64> {
        let t = (a * m).ceil() as u64;
        self.survival.get(t as usize).copied()
    }

    /// Non-increasing, within `[0, 1]`, with total point mass at most one.
    pub fn is_consistent(&self, tol: f64) -> bool {
        let in_range = self.survival.iter().all(|&p| (-tol..=1.0 + tol).contains(&p));
        let monotone = self.survival.windows(2).all(|w| w[1] <= w[0] + tol);
        let mass: f64 = self
            .survival
            .windows(2)
            .map(|w| w[0] - w[1])
            .sum();
        in_range && monotone && mass <= 1.0 + tol
    }
}

fn check_budget(what: &str, states: u128, horizon: u64) -> Result<()> {
    let required = states * horizon as u128;
    if required > HORIZON_BUDGET {
        return Err(Error::resource(
            format!("{what}: {states} states x {horizon} steps"),
            required,
            HORIZON_BUDGET,
        ));
    }
    Ok(())
}

/// Exact `P_{z_k}[H(0) >= t]` for `t <= horizon`, from the lumped chain.
pub fn lumped_survival(n: u32, k: u32, horizon: u64) -> Result<SurvivalTable> {
    let chain = LumpedChain::new(n)?;
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    check_budget("lumped survival", n as u128 + 1, horizon)?;
    let start = SurvivalStart::Lumped { n, k };
    let mut survival = Vec::with_capacity(horizon as usize + 1);
    survival.push(1.0);
    if k == 0 {
        survival.resize(horizon as usize + 1, 0.0);
        return Ok(SurvivalTable {
            start,
            horizon,
            survival,
        });
    }
    // p[d] = P[Y(t) at distance d, target not yet visited]; p[0] stays zero.
    let size = n as usize + 1;
    let mut p = vec![0.0; size];
    let mut next = vec![0.0; size];
    p[k as usize] = 1.0;
    for _ in 1..=horizon {
        survival.push(p.iter().sum());
        next.fill(0.0);
        for d in 1..size {
            let mass = p[d];
            if mass == 0.0 {
                continue;
            }
            let du = d as u32;
            if d + 1 < size {
                next[d + 1] += mass * chain.up(du);
            }
            next[d - 1] += mass * chain.down(du);
        }
        next[0] = 0.0;
        std::mem::swap(&mut p, &mut next);
    }
    Ok(SurvivalTable {
        start,
        horizon,
        survival,
    })
}

/// `p_n(a, k) = P_{z_k}[H(0) < a m]`.
pub fn p_single(n: u32, k: u32, a: f64, m: f64) -> Result<f64> {
    if !(a >= 0.0) || !(m > 0.0) {
        return Err(Error::domain(format!("need a >= 0 and m > 0, got a={a}, m={m}")));
    }
    let t = (a * m).ceil();
    if t > u64::MAX as f64 {
        return Err(Error::resource("p_single horizon", u128::MAX, HORIZON_BUDGET));
    }
    let t = t as u64;
    if t == 0 {
        return Ok(0.0);
    }
    Ok(lumped_survival(n, k, t)?.hit_before(t))
}

fn dense_target(target: &TargetSet) -> Vec<bool> {
    let mut mask = vec![false; 1usize << target.dim()];
    for v in target.members() {
        mask[v.bits() as usize] = true;
    }
    mask
}

fn check_full_dim(n: u32) -> Result<()> {
    if n > FULL_MAX_DIM {
        return Err(Error::resource(
            format!("dense survival needs 2^{n} states"),
            1u128 << n,
            1u128 << FULL_MAX_DIM,
        ));
    }
    Ok(())
}

/// Exact `P_x[H(B \ {x}) >= t]` for `t <= horizon`, on the full `2^n` state space.
///
/// If `B \ {x}` is empty the hitting time is infinite and the survival is
/// identically one.
pub fn full_survival(target: &TargetSet, x: Vertex, horizon: u64) -> Result<SurvivalTable> {
    let n = target.dim();
    if x.dim() != n {
        return Err(Error::domain("start vertex dimension differs from the set"));
    }
    check_full_dim(n)?;
    check_budget("full survival", 1u128 << n, horizon)?;
    let start = SurvivalStart::Vertex { n, bits: x.bits() };
    if target.len_excluding(x) == 0 {
        return Ok(SurvivalTable {
            start,
            horizon,
            survival: vec![1.0; horizon as usize + 1],
        });
    }
    let mut hit = dense_target(target);
    hit[x.bits() as usize] = false;
    let mut p = vec![0.0; 1usize << n];
    let mut next = vec![0.0; 1usize << n];
    p[x.bits() as usize] = 1.0;
    let mut survival = Vec::with_capacity(horizon as usize + 1);
    survival.push(1.0);
    for t in 1..=horizon {
        survival.push(p.iter().sum());
        if t == horizon {
            break;
        }
        walk_step(&p, &mut next, n);
        for (q, &h) in next.iter_mut().zip(&hit) {
            if h {
                *q = 0.0;
            }
        }
        std::mem::swap(&mut p, &mut next);
    }
    Ok(SurvivalTable {
        start,
        horizon,
        survival,
    })
}

/// `P_x[H(B \ {x}) >= t]` for every start `x` and each requested `t`.
///
/// Starts outside `B` come from a single backward pass against `B`; each
/// start inside `B` needs its own forward pass against `B \ {x}`.
#[derive(Debug, Clone)]
pub struct AllStartsSurvival {
    pub n: u32,
    pub times: Vec<u64>,
    /// `values[i][x]` is the survival at `times[i]` from the start with bits `x`.
    pub values: Vec<Vec<f64>>,
}

pub fn survival_all_starts(target: &TargetSet, times: &[u64]) -> Result<AllStartsSurvival> {
    let n = target.dim();
    check_full_dim(n)?;
    let horizon = times.iter().copied().max().unwrap_or(0);
    check_budget("all-starts survival", (1u128 << n) * (target.len() as u128 + 1), horizon)?;
    let size = 1usize << n;
    let hit = dense_target(target);

    let mut values = vec![vec![0.0; size]; times.len()];
    // u_t(x) = P_x[H(B) >= t]: u_0 = 1, u_t = 1{x not in B} (P u_{t-1}).
    let mut u = vec![1.0; size];
    let mut next = vec![0.0; size];
    let record = |t: u64, u: &[f64], values: &mut Vec<Vec<f64>>| {
        for (i, &ti) in times.iter().enumerate() {
            if ti == t {
                values[i].copy_from_slice(u);
            }
        }
    };
    record(0, &u, &mut values);
    for t in 1..=horizon {
        if t == 1 {
            next.fill(1.0);
        } else {
            walk_step(&u, &mut next, n);
        }
        for (q, &h) in next.iter_mut().zip(&hit) {
            if h {
                *q = 0.0;
            }
        }
        std::mem::swap(&mut u, &mut next);
        record(t, &u, &mut values);
    }

    for v in target.members() {
        let table = full_survival(target, *v, horizon)?;
        for (i, &t) in times.iter().enumerate() {
            values[i][v.bits() as usize] = table.at(t);
        }
    }
    Ok(AllStartsSurvival {
        n,
        times: times.to_vec(),
        values,
    })
}

/// Largest `|P_x[H(B \ x) >= a m] - e^{-a}|` over all starts and the given `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialDeviation {
    pub max_deviation: f64,
    pub worst_start: u64,
    pub worst_a: f64,
}

pub fn max_exponential_deviation(target: &TargetSet, m: f64, a_grid: &[f64]) -> Result<ExponentialDeviation> {
    let times: Vec<u64> = a_grid.iter().map(|a| (a * m).ceil() as u64).collect();
    let all = survival_all_starts(target, &times)?;
    let mut worst = ExponentialDeviation {
        max_deviation: 0.0,
        worst_start: 0,
        worst_a: a_grid.first().copied().unwrap_or(0.0),
    };
    for (i, &a) in a_grid.iter().enumerate() {
        let reference = (-a).exp();
        for (x, &p) in all.values[i].iter().enumerate() {
            let dev = (p - reference).abs();
            if dev > worst.max_deviation {
                worst = ExponentialDeviation {
                    max_deviation: dev,
                    worst_start: x as u64,
                    worst_a: a,
                };
            }
        }
    }
    Ok(worst)
}
