use rand::Rng;
use serde::Serialize;

use super::target_set::TargetSet;
use crate::error::{Error, Result};
use crate::seeding::{derive, stream_rng, tag};
use crate::vertex::{low_mask, Vertex};

/// `v[k] = #{y in B : d(x, y) = k}` for `k = 0..=n`.
pub fn distance_profile(target: &TargetSet, x: Vertex) -> Vec<u64> {
    let mut v = vec![0u64; target.dim() as usize + 1];
    for y in target.members() {
        v[x.distance(*y) as usize] += 1;
    }
    v
}

/// How the maximum over centers is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatsMode {
    /// All `2^n` centers.
    Exact,
    /// All members of `B` plus `samples` seeded uniform centers.
    Sampled { samples: u64, seed: u64 },
}

/// Sphere and ball maxima `v_n(k)` and `V_n(k)` of a target set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolumeStats {
    /// `v[k] = max_x #{y in B : d(x,y) = k}`.
    pub v: Vec<u64>,
    /// `big_v[k] = max_x #{y in B : d(x,y) <= k}`.
    pub big_v: Vec<u64>,
    /// `punctured_v[k] = max_x #{y in B : 1 <= d(x,y) <= k}`, the ball count
    /// relevant for hitting `B \ {x}`.
    pub punctured_v: Vec<u64>,
    /// The maxima only range over a subset of centers.
    pub is_lower_bound: bool,
}

/// Work limit for exact enumeration, counted in popcounts or layer updates.
pub const EXACT_STATS_BUDGET: u128 = 1 << 34;

/// Largest dimension for exact statistics.
pub const EXACT_STATS_MAX_DIM: u32 = 24;

impl VolumeStats {
    fn empty(n: u32, is_lower_bound: bool) -> Self {
        VolumeStats {
            v: vec![0; n as usize + 1],
            big_v: vec![0; n as usize + 1],
            punctured_v: vec![0; n as usize + 1],
            is_lower_bound,
        }
    }

    fn absorb(&mut self, profile: &[u64]) {
        let mut cum = 0;
        for (k, &c) in profile.iter().enumerate() {
            cum += c;
            self.v[k] = self.v[k].max(c);
            self.big_v[k] = self.big_v[k].max(cum);
            self.punctured_v[k] = self.punctured_v[k].max(cum - profile[0]);
        }
    }
}

/// Computes `v_n` and `V_n` for all radii.
pub fn volume_stats(target: &TargetSet, mode: StatsMode) -> Result<VolumeStats> {
    let n = target.dim();
    match mode {
        StatsMode::Exact => exact_stats(target),
        StatsMode::Sampled { samples, seed } => {
            if n < 64 && samples >= 1u64 << n {
                let mut stats = exact_stats(target)?;
                stats.is_lower_bound = false;
                return Ok(stats);
            }
            let mut stats = VolumeStats::empty(n, true);
            for y in target.members() {
                stats.absorb(&distance_profile(target, *y));
            }
            let mut rng = stream_rng(derive(seed, tag::VN_SAMPLE), 0);
            let mask = low_mask(n);
            for _ in 0..samples {
                let x = Vertex::new(n, rng.random::<u64>() & mask)?;
                stats.absorb(&distance_profile(target, x));
            }
            Ok(stats)
        }
    }
}

/// `(v_n(k), is_lower_bound)`.
pub fn vn_max(target: &TargetSet, k: u32, mode: StatsMode) -> Result<(u64, bool)> {
    if k > target.dim() {
        return Err(Error::domain(format!("radius {k} exceeds n = {}", target.dim())));
    }
    let stats = volume_stats(target, mode)?;
    Ok((stats.v[k as usize], stats.is_lower_bound))
}

fn exact_stats(target: &TargetSet) -> Result<VolumeStats> {
    let n = target.dim();
    if n > EXACT_STATS_MAX_DIM {
        return Err(Error::resource(
            format!("exact volume statistics in dimension {n}"),
            1u128 << n,
            1u128 << EXACT_STATS_MAX_DIM,
        ));
    }
    let direct = (1u128 << n) * target.len() as u128;
    let layered = (1u128 << n) * (n as u128) * (n as u128);
    if direct.min(layered) > EXACT_STATS_BUDGET {
        return Err(Error::resource(
            "exact volume statistics",
            direct.min(layered),
            EXACT_STATS_BUDGET,
        ));
    }
    if direct <= layered {
        let mut stats = VolumeStats::empty(n, false);
        for x in 0..1u64 << n {
            stats.absorb(&distance_profile(target, Vertex::new(n, x)?));
        }
        Ok(stats)
    } else {
        Ok(layered_stats(target))
    }
}

/// Sphere counts for every center at once, one radius at a time.
///
/// With `f_k(x) = #{y in B : d(x,y) = k}`, summing `f_k` over the
/// neighbours of `x` counts each `y` at distance `k+1` exactly `k+1` times
/// and each `y` at distance `k-1` exactly `n-k+1` times, so
/// `f_{k+1} = (A f_k - (n-k+1) f_{k-1}) / (k+1)` with `A` the adjacency operator.
fn layered_stats(target: &TargetSet) -> VolumeStats {
    let n = target.dim();
    let size = 1usize << n;
    let mut prev = vec![0i64; size];
    let mut cur = vec![0i64; size];
    for y in target.members() {
        cur[y.bits() as usize] = 1;
    }
    let mut cum: Vec<i64> = cur.clone();
    let center = cur.clone();
    let mut stats = VolumeStats::empty(n, false);
    stats.v[0] = u64::from(!target.is_empty());
    stats.big_v[0] = stats.v[0];
    let mut next = vec![0i64; size];
    for k in 0..n {
        next.fill(0);
        for i in 0..n {
            let b = 1usize << i;
            for (d, s) in next.chunks_exact_mut(2 * b).zip(cur.chunks_exact(2 * b)) {
                let (d_lo, d_hi) = d.split_at_mut(b);
                let (s_lo, s_hi) = s.split_at(b);
                d_lo.iter_mut().zip(s_hi).for_each(|(x, y)| *x += y);
                d_hi.iter_mut().zip(s_lo).for_each(|(x, y)| *x += y);
            }
        }
        let back = (n - k + 1) as i64;
        let div = (k + 1) as i64;
        for ((x, p), c) in next.iter_mut().zip(&prev).zip(cum.iter_mut()) {
            *x = (*x - back * p) / div;
            *c += *x;
        }
        let kk = k as usize + 1;
        stats.v[kk] = next.iter().copied().max().unwrap_or(0) as u64;
        stats.big_v[kk] = cum.iter().copied().max().unwrap_or(0) as u64;
        stats.punctured_v[kk] = cum
            .iter()
            .zip(&center)
            .map(|(c, z)| c - z)
            .max()
            .unwrap_or(0) as u64;
        std::mem::swap(&mut prev, &mut cur);
        std::mem::swap(&mut cur, &mut next);
    }
    stats
}
